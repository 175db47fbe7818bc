#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "htisim/market_model.hpp"
#include "htisim/order_cloud.hpp"
#include "htisim/pnl_accounting.hpp"
#include "htisim/rational.hpp"
#include "htisim/rng.hpp"
#include "htisim/verdict.hpp"

// The delayed-execution strategy S*. It runs alongside a baseline S and, in
// each phase, first mirrors S for a fixed number of fills (stage 1), then
// (stage 2) may hold back an order of S while the price sits adversely far
// from S*'s own gravity center, releasing it once the price has moved past
// the gain threshold on the favourable side. A phase closes when the delay
// queue drains after at least one delay.
//
// Every released order gains strictly more than tau + gamma ticks over the
// fill S got, so PnL(S*) - PnL(S) at phase ends is at least Q_D * (tau + gamma).

namespace htisim {

struct DominanceParams {
  /// Tolerance amount (ticks): delay needs s * (C - P) > tau.
  Ticks tau = 25;
  /// Gain amount (ticks): release needs s * (P - minmax_s(C_now, C_delay)) > gamma.
  Ticks gamma = 25;
  Rational delay_probability{1, 2};
  std::int64_t queue_cap = 3;
  /// Optional enqueue spacing: every queued entry must satisfy
  /// Enqueue spacing: s * (queued base fill price - candidate base fill price) > min_distance.
  std::optional<Ticks> min_distance;
  /// Fills mirrored at the start of each phase.
  std::int64_t stage1_fill_count = 5;
  /// Phase-length backstop, queue empty or not; exceeding it aborts with StrandedOrderError.
  TimeStep max_phase_ticks = 100'000'000;

  /// Throws std::invalid_argument. Requires tau + gamma < (grid_max - grid_min) / 2.
  void validate(Ticks grid_min, Ticks grid_max) const;
};

enum class Stage { mirror = 1, delayed_execution = 2 };

enum class FillAction {
  /// S* fills exactly like S.
  mirror_fill,
  /// Held in the delay queue.
  enqueue,
  /// The delay event fired but a queue filter (spacing, unreachable gain
  /// level) refused the entry; S* fills exactly like S.
  forced_fill,
};

std::string_view to_string(FillAction action) noexcept;

struct DelayQueueEntry {
  OrderId order_id = 0;
  int sign = 1;
  Quantity quantity = 1;
  TimeStep delay_time = 0;
  /// Price S filled at.
  Ticks base_fill_price = 0;
  /// Quoted price at delay time; the delay/execution events are evaluated on quoted prices.
  Ticks reference_price = 0;
  RationalPrice gravity_at_delay;
};

struct DelayedOrderRecord {
  OrderId order_id = 0;
  int sign = 1;
  Quantity quantity = 1;
  TimeStep delay_time = 0;
  Ticks base_fill_price = 0;
  TimeStep execution_time = 0;
  Ticks execution_price = 0;
  /// s * (P(t_h) - T), T = C(t_h) - s * tau. Negative by the delay event.
  Rational delta_T_at_delay;
  /// s * (P(t*) - G), G = minmax_s(C(t*), C(t_h)) + s * gamma. Positive by the execution event.
  Rational delta_G_at_execution;
  RationalPrice gravity_at_delay;
  RationalPrice gravity_at_execution;
  std::int64_t phase_index = 0;

  /// s * (p* - p): ticks gained over the baseline fill.
  Ticks gap_ticks() const noexcept { return sign * (execution_price - base_fill_price); }
};

struct PhaseReport {
  std::int64_t phase_index = 0;
  TimeStep end_time = 0;
  /// Q_D: total quantity of delayed orders executed up to end_time (cumulative).
  Quantity delayed_quantity = 0;
  Money pnl_diff;
  /// Q_D * (tau + gamma), in quanta.
  Money lower_bound;
  /// Delayed orders executed during this phase.
  std::vector<DelayedOrderRecord> records;
};

class StrandedOrderError : public std::runtime_error {
 public:
  StrandedOrderError(const std::string& what, std::vector<DelayQueueEntry> entries)
      : std::runtime_error(what), entries_(std::move(entries)) {}
  const std::vector<DelayQueueEntry>& entries() const noexcept { return entries_; }

 private:
  std::vector<DelayQueueEntry> entries_;
};

/// (x + y) / 2 + sign * |x - y| / 2: max(x, y) for +1, min(x, y) for -1.
Rational minmax(int sign, const Rational& x, const Rational& y);

/// s * (C - P) > tau. False while the gravity center is undefined.
bool delay_eligible(Ticks price, const std::optional<RationalPrice>& gravity, int sign, Ticks tau);

/// s * (P - minmax_s(C_now, C_delay)) > gamma.
bool execution_ready(Ticks price, const RationalPrice& gravity_now, const RationalPrice& gravity_at_delay, int sign,
                     Ticks gamma);

/// One Bernoulli(delay_probability) draw per candidate order, from the delay substream.
class DelayDraw {
 public:
  DelayDraw(Rational probability, std::uint64_t master_seed);
  /// Stub that never fires; S* then behaves exactly like S.
  static DelayDraw never();

  bool draw();

 private:
  DelayDraw() = default;
  Rational probability_;
  Rng rng_;
  bool stub_never_ = false;
};

class DominanceEngine {
 public:
  struct FillOutcome {
    FillAction action = FillAction::mirror_fill;
    /// S*'s fill for this order, absent when enqueued.
    std::optional<Order> fill;
  };

  struct TickOutcome {
    std::vector<DelayedOrderRecord> executed;
    /// Set when this tick closed a phase; pnl_diff is left for the caller to fill.
    std::optional<PhaseReport> phase_end;
  };

  /// half_spread: delayed orders fill at P - s * half_spread, like base fills.
  DominanceEngine(DominanceParams params, Ticks grid_min, Ticks grid_max, Ticks half_spread, DelayDraw delay_draw);

  /// Handles one fill of S. `quoted_price` is P(t), the price before spread.
  FillOutcome on_base_fill(const Order& base, Ticks quoted_price);

  /// Scans the queue in enqueue order and executes every ready entry at this
  /// tick's price. Throws StrandedOrderError when the phase outgrows max_phase_ticks.
  TickOutcome on_tick(TimeStep time, Ticks quoted_price);

  const DominanceParams& params() const noexcept { return params_; }
  Stage stage() const noexcept { return stage_; }
  std::int64_t phase_index() const noexcept { return phase_index_; }
  std::int64_t completed_phases() const noexcept { return phase_index_ - 1; }
  const std::deque<DelayQueueEntry>& queue() const noexcept { return queue_; }
  const CloudStats& cloud() const noexcept { return cloud_; }
  const std::optional<RationalPrice>& gravity() const noexcept { return gravity_; }
  /// Every fill of S*, in execution order.
  const std::vector<Order>& fills() const noexcept { return fills_; }
  /// Every delayed order executed so far.
  const std::vector<DelayedOrderRecord>& delayed_records() const noexcept { return records_; }
  Quantity delayed_quantity() const noexcept { return delayed_quantity_; }

 private:
  void record_fill(const Order& fill, Ticks quoted_price);
  bool gain_level_reachable(const RationalPrice& gravity, int sign) const;
  bool spacing_ok(int sign, Ticks base_fill_price) const;

  DominanceParams params_;
  Ticks grid_min_;
  Ticks grid_max_;
  Ticks half_spread_;
  DelayDraw delay_draw_;

  Stage stage_ = Stage::mirror;
  std::int64_t phase_index_ = 1;
  TimeStep phase_start_ = 0;
  std::int64_t mirrored_in_stage1_ = 0;
  std::size_t phase_first_record_ = 0;

  std::deque<DelayQueueEntry> queue_;
  CloudStats cloud_;
  std::optional<RationalPrice> gravity_;
  std::vector<Order> fills_;
  std::vector<DelayedOrderRecord> records_;
  Quantity delayed_quantity_ = 0;
};

/// Phase-end proof obligations, recomputing both PnLs from the full fill
/// histories at `price`:
///  - phase_identity: PnL(S*) - PnL(S) equals the sum of s * (p* - p) * q over
///    all delayed orders so far, and equals report.pnl_diff;
///  - position_match: both open positions coincide;
///  - phase_lower_bound: diff >= Q_D * (tau + gamma);
///  - phase_positive: diff > 0 when Q_D >= 1;
///  - phase_monotonic: diff >= previous phase's diff (strictly, if this phase delayed).
std::vector<Verdict> phase_pnl_diff_check(const PhaseReport& report, std::span<const DelayedOrderRecord> all_records,
                                          std::span<const Order> baseline_orders,
                                          std::span<const Order> dominant_orders, Ticks price, Ticks tau,
                                          Ticks gamma, std::optional<Money> previous_diff);

/// Per-order obligations for one executed delayed order: delta_T < 0,
/// delta_G > 0, the exact telescoping decomposition of the gap, and
/// s * (p* - p) > tau + gamma.
std::vector<Verdict> delayed_order_check(const DelayedOrderRecord& record, Ticks tau, Ticks gamma);

}  // namespace htisim
