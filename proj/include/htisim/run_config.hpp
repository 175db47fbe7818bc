#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "htisim/dominance_engine.hpp"
#include "htisim/market_model.hpp"
#include "htisim/price_process.hpp"
#include "htisim/strategy_kernel.hpp"

namespace htisim {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunSection {
  /// Exactly one of total_ticks / target_phases is set.
  std::optional<TimeStep> total_ticks;
  std::optional<std::int64_t> target_phases = 20;
  std::uint64_t master_seed = 1;
  /// Buys fill at P + half_spread, sells at P - half_spread.
  Ticks half_spread = 0;
  /// Charged per unit of filled quantity, in quanta.
  std::int64_t commission_per_unit = 0;
  std::string output_dir = "runs/default";
  std::int64_t replications = 1;
  bool write_ticks = true;
  /// Test hook: replaces the delay Bernoulli substream with one that never fires.
  bool never_delay = false;
  /// Recompute both PnLs from the full histories on every tick (O(n) per tick).
  bool audit_every_tick = false;
};

/// Sections: instrument, price, strategy, dominance, run.
///
/// The price process grid defaults to the instrument grid. price.seed is not
/// configurable; it is always the run's seed.
struct RunConfig {
  Instrument instrument;
  PriceProcessConfig price;
  BaselineConfig strategy;
  DominanceParams dominance;
  RunSection run;

  /// Throws ConfigError naming the offending key.
  void validate() const;
};

/// The desk-scale default profile (tick 0.01, grid 9000..11000, tau = gamma = 25, ...).
RunConfig default_config();

/// Layers a YAML document over default_config(). Unknown keys are rejected.
RunConfig parse_config(std::string_view yaml_text);
RunConfig load_config(const std::filesystem::path& path);

/// Full echo of the configuration; parse_config(config_to_json(c).dump()) == c.
nlohmann::json config_to_json(const RunConfig& config);

std::string_view to_string(ProcessKind kind) noexcept;
std::string_view to_string(BaselineKind kind) noexcept;

}  // namespace htisim
