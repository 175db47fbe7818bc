#pragma once

#include <cstdint>

#include "htisim/market_model.hpp"
#include "htisim/rational.hpp"
#include "htisim/rng.hpp"

namespace htisim {

enum class ProcessKind { reflecting_walk, mean_reverting_walk };

/// Finite tick-grid random walk. Each tick the price holds with
/// stay_probability, otherwise moves one tick. Moves past a grid edge are
/// reflected, so the chain is finite and irreducible, hence positively recurrent.
struct PriceProcessConfig {
  ProcessKind kind = ProcessKind::reflecting_walk;
  Ticks grid_min = 9000;
  Ticks grid_max = 11000;
  Ticks start_price = 10000;
  Rational stay_probability{1, 2};
  /// Mean-reverting only: up-probability is 1/2 + strength * (center - P) / range.
  Rational reversion_strength{0};
  std::uint64_t seed = 1;

  Rational center() const { return Rational(grid_min + grid_max, 2); }
  void validate() const;
};

struct PricePathState {
  Ticks current_price = 0;
  TimeStep time = 0;
  Rng rng;
};

/// State at time 0 drawing from the price substream of config.seed.
PricePathState initial_state(const PriceProcessConfig& config);

/// Precomputed integer thresholds for exact one-draw steps.
class PriceProcess {
 public:
  explicit PriceProcess(PriceProcessConfig config);

  const PriceProcessConfig& config() const noexcept { return config_; }

  /// Advances state by one tick and returns the new price.
  Ticks step(PricePathState& state) const;

 private:
  Ticks reflect(Ticks from, int direction) const noexcept;

  PriceProcessConfig config_;
  std::uint64_t total_ = 0;
  std::uint64_t stay_cut_ = 0;
  std::uint64_t move_weight_ = 0;  // (1 - stay) scaled to total_ / up-fraction denominator
  std::int64_t half_range_den_ = 0;  // 2 * kd * range (mean-reverting)
};

/// Free-function form of PriceProcess::step.
PricePathState next_price(PricePathState state, const PriceProcessConfig& config);

enum class Direction { above, below };

struct HittingTimeSummary {
  std::int64_t samples = 0;
  std::int64_t count_finite = 0;
  /// Mean over the finite hitting times; 0 when none hit.
  double mean = 0.0;
  std::int64_t max = 0;
};

/// First-passage times of P strictly beyond start +/- xi, one independent
/// replication per sample (hitting-time substream, index = sample number).
/// Samples that have not hit after `cap` steps count as non-finite.
/// Throws std::invalid_argument when the strict threshold is outside the grid.
HittingTimeSummary estimate_hitting_time(const PriceProcessConfig& config, Ticks start_price, Ticks xi,
                                         Direction direction, std::int64_t samples, std::int64_t cap,
                                         unsigned threads = 0);

}  // namespace htisim
