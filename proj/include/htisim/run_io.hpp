#pragma once

#include <filesystem>
#include <vector>

#include <nlohmann/json.hpp>

#include "htisim/sim_harness.hpp"

// Flat run directories:
//
//   ticks.csv           time,price_ticks,pnl_s_quanta,pnl_sstar_quanta,diff_quanta
//   phases.csv          phase,end_time,q_delayed,diff_quanta,lower_bound_quanta,n_delayed
//   delayed_orders.csv  order_id,sign,qty,t_delay,p_delay_ticks,t_exec,p_exec_ticks,gap_ticks
//   summary.json        config echo, seed, summary figures, in-run verdicts
//
// q_delayed is cumulative (all delayed quantity executed up to the phase end);
// n_delayed counts the delayed orders executed within that phase.

namespace htisim {

inline constexpr const char* kTicksHeader = "time,price_ticks,pnl_s_quanta,pnl_sstar_quanta,diff_quanta";
inline constexpr const char* kPhasesHeader = "phase,end_time,q_delayed,diff_quanta,lower_bound_quanta,n_delayed";
inline constexpr const char* kDelayedHeader =
    "order_id,sign,qty,t_delay,p_delay_ticks,t_exec,p_exec_ticks,gap_ticks";

/// ticks.csv row; diff is the recorded column, checked against the PnLs by verify.
struct TickCsvRow {
  TimeStep time = 0;
  Ticks price = 0;
  Money pnl_s;
  Money pnl_sstar;
  Money diff;
  friend bool operator==(const TickCsvRow&, const TickCsvRow&) = default;
};

struct PhaseRow {
  std::int64_t phase = 0;
  TimeStep end_time = 0;
  Quantity q_delayed = 0;
  Money diff;
  Money lower_bound;
  std::int64_t n_delayed = 0;
  friend bool operator==(const PhaseRow&, const PhaseRow&) = default;
};

struct DelayedRow {
  OrderId order_id = 0;
  int sign = 1;
  Quantity qty = 0;
  TimeStep t_delay = 0;
  Ticks p_delay = 0;
  TimeStep t_exec = 0;
  Ticks p_exec = 0;
  Ticks gap = 0;
  friend bool operator==(const DelayedRow&, const DelayedRow&) = default;
};

/// Everything an offline audit sees: only what a run directory records.
struct RunArtifacts {
  RunConfig config;
  nlohmann::json summary;
  bool has_ticks = false;
  std::vector<TickCsvRow> ticks;
  std::vector<PhaseRow> phases;
  std::vector<DelayedRow> delayed;
};

nlohmann::json summary_json(const RunReport& report);
RunArtifacts artifacts_from_report(const RunReport& report);

/// Writes the run directory (creating it). ticks.csv only when the report recorded ticks.
void write_run(const RunReport& report, const std::filesystem::path& dir);
void write_artifacts(const RunArtifacts& artifacts, const std::filesystem::path& dir);

/// Throws std::runtime_error on missing files or malformed rows.
RunArtifacts load_run(const std::filesystem::path& dir);

}  // namespace htisim
