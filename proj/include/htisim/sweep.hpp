#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "htisim/run_config.hpp"

namespace htisim {

/// Values to sweep per parameter; an empty axis keeps the config's value.
struct SweepGrid {
  std::vector<Ticks> tau;
  std::vector<Ticks> gamma;
  std::vector<Rational> delay_probability;
  std::vector<std::int64_t> queue_cap;

  /// Cells in row-major order (tau slowest, queue_cap fastest).
  std::vector<DominanceParams> cells(const DominanceParams& base) const;
};

/// "tau=25,50;gamma=25;delay_probability=1/2,1;queue_cap=1,3". Throws ConfigError.
SweepGrid parse_grid(std::string_view text);

enum class CellStatus { ok, failed, aborted, skipped };
std::string_view to_string(CellStatus status) noexcept;

struct SweepRow {
  std::int64_t cell = 0;
  std::int64_t replication = 0;
  std::uint64_t seed = 0;
  DominanceParams params;
  CellStatus status = CellStatus::ok;
  Money final_diff;
  std::int64_t phases = 0;
  Quantity delayed_quantity = 0;
  std::int64_t delayed_orders = 0;
  double mean_gap_ticks = 0.0;
  Ticks min_gap_ticks = 0;
  /// Validation message, abort reason or first failed clause.
  std::string note;
};

/// Runs every cell for config.run.replications replications. Replication r
/// uses seed master_seed + r in every cell, so cells share price paths.
/// Cells failing parameter validation come back as skipped rows.
std::vector<SweepRow> sweep(const RunConfig& config, const SweepGrid& grid, unsigned threads = 0);

inline constexpr const char* kSweepHeader =
    "cell,replication,seed,tau,gamma,delay_probability,queue_cap,status,final_diff_quanta,phases,q_delayed,"
    "n_delayed_orders,mean_gap_ticks,min_gap_ticks,note";

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& path);

}  // namespace htisim
