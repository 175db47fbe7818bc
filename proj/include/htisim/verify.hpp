#pragma once

#include <filesystem>
#include <vector>

#include "htisim/run_io.hpp"
#include "htisim/verdict.hpp"

namespace htisim {

/// Re-audits a run from its recorded artifacts alone, independent of the
/// in-run checks. Clauses:
///
///   record_consistency   sign is +/-1, qty >= 1, t_exec > t_delay, gap column = s*(p_exec - p_delay)
///   per_order_gap        s*(p_exec - p_delay) > tau + gamma
///   queue_cap            delayed orders pending at any tick never exceed queue_cap
///   phase_sequence       phases numbered 1..n with increasing end times
///   phase_identity       phase diff = sum of gap*qty over orders executed by the phase end;
///                        q_delayed and n_delayed match the records
///   phase_lower_bound    lower_bound = q_delayed*(tau+gamma) and diff >= lower_bound
///   phase_positive       diff > 0 when q_delayed >= 1
///   phase_monotonic      diffs non-decreasing, strictly increasing across delaying phases
///   tick_diff_column     diff = pnl_sstar - pnl_s on every tick row       (ticks.csv only)
///   tick_phase_diff      tick diff at each phase end = phase diff          (ticks.csv only)
///   tick_reconciliation  diff = executed gains - queued open terms + queued commissions (ticks.csv only)
std::vector<Verdict> verify_artifacts(const RunArtifacts& artifacts);

/// load_run + verify_artifacts. Unreadable directories yield a failed "artifacts_readable" verdict.
std::vector<Verdict> verify_run(const std::filesystem::path& dir);

std::vector<Verdict> verify_report(const RunReport& report);

}  // namespace htisim
