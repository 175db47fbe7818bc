#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "htisim/dominance_engine.hpp"
#include "htisim/run_config.hpp"
#include "htisim/verdict.hpp"

namespace htisim {

/// One row of the per-tick series. PnLs are net of commissions paid.
struct TickRow {
  TimeStep time = 0;
  Ticks price = 0;
  Money pnl_baseline;
  Money pnl_dominant;

  Money diff() const noexcept { return pnl_dominant - pnl_baseline; }
  friend bool operator==(const TickRow&, const TickRow&) = default;
};

struct RunSummary {
  TimeStep ticks = 0;
  Ticks final_price = 0;
  std::int64_t phases = 0;
  Quantity delayed_quantity = 0;
  std::int64_t delayed_orders = 0;
  Money final_diff;
  Money max_drawdown_baseline;
  Money max_drawdown_dominant;
  Money commissions_baseline;
  Money commissions_dominant;
  std::int64_t baseline_fills = 0;
  std::int64_t max_queue_length = 0;
  std::int64_t queue_length_at_end = 0;
  /// Over executed delayed orders; 0 when there are none.
  double mean_gap_ticks = 0.0;
  Ticks min_gap_ticks = 0;
};

struct RunReport {
  RunConfig config;
  /// The seed this replication ran under (master_seed + replication).
  std::uint64_t seed = 0;
  std::vector<TickRow> ticks;
  std::vector<PhaseReport> phases;
  std::vector<DelayedOrderRecord> delayed_orders;
  /// Fills of the baseline strategy, in order.
  std::vector<Order> baseline_orders;
  RunSummary summary;
  std::vector<Verdict> verdicts;
  /// Set when the run stopped early (stranded delayed orders).
  std::optional<std::string> abort_reason;

  bool passed() const noexcept { return !abort_reason && all_passed(verdicts); }
};

struct RunOptions {
  /// Keep the per-tick series in the report (needed to write ticks.csv).
  bool record_ticks = true;
};

/// Runs S and S* side by side on one price path, seeded by config.run.master_seed.
/// Every proof obligation is checked in-run and reported in RunReport::verdicts.
/// Throws ConfigError for an invalid config; stranded orders end the run
/// with abort_reason set and a failed "stranded_orders" verdict.
RunReport run_simulation(const RunConfig& config, const RunOptions& options = {});

/// Replications r = 0..n-1 run with master_seed + r, in parallel; results
/// are returned in replication order.
std::vector<RunReport> run_replications(const RunConfig& config, const RunOptions& options = {},
                                         unsigned threads = 0);

/// Seed used by replication `index` of a config.
constexpr std::uint64_t replication_seed(std::uint64_t master_seed, std::int64_t index) noexcept {
  return master_seed + static_cast<std::uint64_t>(index);
}

}  // namespace htisim
