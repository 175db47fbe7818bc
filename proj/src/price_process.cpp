#include "htisim/price_process.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace htisim {

void PriceProcessConfig::validate() const {
  if (grid_min >= grid_max) throw std::invalid_argument("price grid_min must be < grid_max");
  if (start_price < grid_min || start_price > grid_max) {
    throw std::invalid_argument("price start_price " + std::to_string(start_price) + " outside grid");
  }
  if (stay_probability < Rational(0) || stay_probability >= Rational(1)) {
    throw std::invalid_argument("stay_probability must be in [0, 1)");
  }
  if (reversion_strength < Rational(0) || reversion_strength > Rational(1)) {
    // |center - P| / range <= 1/2, so strength <= 1 keeps the up-probability in [0, 1].
    throw std::invalid_argument("reversion_strength must be in [0, 1]");
  }
}

PricePathState initial_state(const PriceProcessConfig& config) {
  return PricePathState{config.start_price, 0, make_rng(config.seed, Substream::price)};
}

PriceProcess::PriceProcess(PriceProcessConfig config) : config_(std::move(config)) {
  config_.validate();
  const auto a = static_cast<std::uint64_t>(config_.stay_probability.numerator());
  const auto b = static_cast<std::uint64_t>(config_.stay_probability.denominator());
  if (config_.kind == ProcessKind::reflecting_walk) {
    // Draw in [0, 2b): [0, 2a) stay, then (b - a) up, (b - a) down.
    total_ = 2 * b;
    stay_cut_ = 2 * a;
    move_weight_ = b - a;
  } else {
    const auto kd = config_.reversion_strength.denominator();
    half_range_den_ = 2 * kd * (config_.grid_max - config_.grid_min);
    total_ = b * static_cast<std::uint64_t>(half_range_den_);
    stay_cut_ = a * static_cast<std::uint64_t>(half_range_den_);
    move_weight_ = b - a;
  }
}

Ticks PriceProcess::reflect(Ticks from, int direction) const noexcept {
  const Ticks to = from + direction;
  if (to > config_.grid_max) return from - 1;
  if (to < config_.grid_min) return from + 1;
  return to;
}

Ticks PriceProcess::step(PricePathState& state) const {
  const std::uint64_t draw = uniform_below(state.rng, total_);
  ++state.time;
  if (draw < stay_cut_) return state.current_price;
  const std::uint64_t rest = draw - stay_cut_;
  std::uint64_t up_weight = 0;
  if (config_.kind == ProcessKind::reflecting_walk) {
    up_weight = move_weight_;
  } else {
    // Up-fraction numerator over half_range_den_, clamped to [0, 1].
    const auto& k = config_.reversion_strength;
    const std::int64_t raw = half_range_den_ / 2 +
                             k.numerator() * (config_.grid_min + config_.grid_max - 2 * state.current_price);
    const std::int64_t clamped = std::clamp<std::int64_t>(raw, 0, half_range_den_);
    up_weight = move_weight_ * static_cast<std::uint64_t>(clamped);
  }
  state.current_price = reflect(state.current_price, rest < up_weight ? 1 : -1);
  return state.current_price;
}

PricePathState next_price(PricePathState state, const PriceProcessConfig& config) {
  PriceProcess(config).step(state);
  return state;
}

HittingTimeSummary estimate_hitting_time(const PriceProcessConfig& config, Ticks start_price, Ticks xi,
                                         Direction direction, std::int64_t samples, std::int64_t cap,
                                         unsigned threads) {
  if (xi <= 0) throw std::invalid_argument("hitting threshold xi must be positive");
  if (samples < 1) throw std::invalid_argument("samples must be >= 1");
  if (cap < 1) throw std::invalid_argument("cap must be >= 1");
  if (start_price < config.grid_min || start_price > config.grid_max) {
    throw std::invalid_argument("start price outside grid");
  }
  const Ticks level = direction == Direction::above ? start_price + xi : start_price - xi;
  // The target is strictly beyond `level`, so `level` itself must leave room inside the grid.
  if (direction == Direction::above && level >= config.grid_max) {
    throw std::invalid_argument("threshold " + std::to_string(level) + " leaves no grid price strictly above it");
  }
  if (direction == Direction::below && level <= config.grid_min) {
    throw std::invalid_argument("threshold " + std::to_string(level) + " leaves no grid price strictly below it");
  }

  PriceProcessConfig local = config;
  local.start_price = start_price;
  const PriceProcess process(local);

  // -1 marks a capped sample.
  std::vector<std::int64_t> times(static_cast<std::size_t>(samples), -1);
  auto run_range = [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t i = begin; i < end; ++i) {
      PricePathState state{start_price, 0, make_rng(config.seed, Substream::hitting_time, static_cast<std::uint64_t>(i))};
      for (std::int64_t u = 1; u <= cap; ++u) {
        const Ticks p = process.step(state);
        if (direction == Direction::above ? p > level : p < level) {
          times[static_cast<std::size_t>(i)] = u;
          break;
        }
      }
    }
  };

  unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  workers = static_cast<unsigned>(std::min<std::int64_t>(workers, samples));
  if (workers <= 1) {
    run_range(0, samples);
  } else {
    std::vector<std::jthread> pool;
    const std::int64_t chunk = (samples + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::int64_t begin = std::min<std::int64_t>(samples, w * chunk);
      const std::int64_t end = std::min<std::int64_t>(samples, begin + chunk);
      pool.emplace_back(run_range, begin, end);
    }
  }

  HittingTimeSummary out;
  out.samples = samples;
  long double sum = 0;
  for (const auto t : times) {
    if (t < 0) continue;
    ++out.count_finite;
    sum += static_cast<long double>(t);
    out.max = std::max(out.max, t);
  }
  if (out.count_finite > 0) out.mean = static_cast<double>(sum / static_cast<long double>(out.count_finite));
  return out;
}

}  // namespace htisim
