#include "htisim/dominance_engine.hpp"

#include <sstream>

namespace htisim {

namespace {

Verdict make_verdict(std::string clause, bool passed, std::string detail = {}) {
  return Verdict{std::move(clause), passed, passed ? std::string{} : std::move(detail)};
}

}  // namespace

void DominanceParams::validate(Ticks grid_min, Ticks grid_max) const {
  if (tau < 1) throw std::invalid_argument("dominance tau must be >= 1 tick");
  if (gamma < 1) throw std::invalid_argument("dominance gamma must be >= 1 tick");
  if (delay_probability <= Rational(0) || delay_probability > Rational(1)) {
    throw std::invalid_argument("delay_probability must be in (0, 1]");
  }
  if (queue_cap < 1) throw std::invalid_argument("queue_cap must be >= 1");
  if (min_distance && *min_distance < 0) throw std::invalid_argument("min_distance must be >= 0");
  if (stage1_fill_count < 1) throw std::invalid_argument("stage1_fill_count must be >= 1");
  if (max_phase_ticks < 1) throw std::invalid_argument("max_phase_ticks must be >= 1");
  // 2 * (tau + gamma) < width  <=>  tau + gamma < width / 2, exactly.
  if (2 * (tau + gamma) >= grid_max - grid_min) {
    throw std::invalid_argument("tau + gamma = " + std::to_string(tau + gamma) +
                                " must be strictly less than half the grid width " +
                                Rational(grid_max - grid_min, 2).to_string());
  }
}

std::string_view to_string(FillAction action) noexcept {
  switch (action) {
    case FillAction::mirror_fill: return "mirror_fill";
    case FillAction::enqueue: return "enqueue";
    case FillAction::forced_fill: return "forced_fill";
  }
  return "unknown";
}

Rational minmax(int sign, const Rational& x, const Rational& y) {
  const Rational half_gap = (x < y ? y - x : x - y) / Rational(2);
  return (x + y) / Rational(2) + Rational(sign) * half_gap;
}

bool delay_eligible(Ticks price, const std::optional<RationalPrice>& gravity, int sign, Ticks tau) {
  if (!gravity) return false;
  return signed_difference_exceeds(sign, *gravity, Rational(price), Rational(tau));
}

bool execution_ready(Ticks price, const RationalPrice& gravity_now, const RationalPrice& gravity_at_delay, int sign,
                     Ticks gamma) {
  // minmax_s picks the s-extreme of the two centers, so clearing it by gamma
  // is the same as clearing both.
  return signed_difference_exceeds(sign, Rational(price), gravity_now, Rational(gamma)) &&
         signed_difference_exceeds(sign, Rational(price), gravity_at_delay, Rational(gamma));
}

DelayDraw::DelayDraw(Rational probability, std::uint64_t master_seed)
    : probability_(probability), rng_(make_rng(master_seed, Substream::delay)) {}

DelayDraw DelayDraw::never() {
  DelayDraw d;
  d.stub_never_ = true;
  return d;
}

bool DelayDraw::draw() {
  if (stub_never_) return false;
  return bernoulli(rng_, probability_);
}

DominanceEngine::DominanceEngine(DominanceParams params, Ticks grid_min, Ticks grid_max, Ticks half_spread,
                                 DelayDraw delay_draw)
    : params_(std::move(params)),
      grid_min_(grid_min),
      grid_max_(grid_max),
      half_spread_(half_spread),
      delay_draw_(std::move(delay_draw)) {
  params_.validate(grid_min_, grid_max_);
  if (half_spread_ < 0) throw std::invalid_argument("half_spread must be >= 0");
}

void DominanceEngine::record_fill(const Order& fill, Ticks quoted_price) {
  fills_.push_back(fill);
  Order reference = fill;
  reference.price = quoted_price;
  cloud_ = cloud_update(cloud_, reference);
  gravity_ = gravity_center(cloud_);
}

bool DominanceEngine::gain_level_reachable(const RationalPrice& gravity, int sign) const {
  // Some grid price must lie strictly beyond C + s * gamma.
  const Rational level = gravity + Rational(sign * params_.gamma);
  return sign > 0 ? level < Rational(grid_max_) : level > Rational(grid_min_);
}

bool DominanceEngine::spacing_ok(int sign, Ticks base_fill_price) const {
  if (!params_.min_distance) return true;
  for (const auto& entry : queue_) {
    if (sign * (entry.base_fill_price - base_fill_price) <= *params_.min_distance) return false;
  }
  return true;
}

DominanceEngine::FillOutcome DominanceEngine::on_base_fill(const Order& base, Ticks quoted_price) {
  if (stage_ == Stage::mirror) {
    record_fill(base, quoted_price);
    if (++mirrored_in_stage1_ >= params_.stage1_fill_count) stage_ = Stage::delayed_execution;
    return {FillAction::mirror_fill, base};
  }

  const bool bernoulli_fired = delay_draw_.draw();
  const auto& gravity = gravity_;
  if (!bernoulli_fired || !delay_eligible(quoted_price, gravity, base.sign(), params_.tau) ||
      static_cast<std::int64_t>(queue_.size()) >= params_.queue_cap) {
    record_fill(base, quoted_price);
    return {FillAction::mirror_fill, base};
  }
  if (!spacing_ok(base.sign(), base.price) || !gain_level_reachable(*gravity, base.sign())) {
    record_fill(base, quoted_price);
    return {FillAction::forced_fill, base};
  }
  queue_.push_back(DelayQueueEntry{base.id, base.sign(), base.quantity, base.time, base.price, quoted_price, *gravity});
  return {FillAction::enqueue, std::nullopt};
}

DominanceEngine::TickOutcome DominanceEngine::on_tick(TimeStep time, Ticks quoted_price) {
  TickOutcome out;
  if (time - phase_start_ > params_.max_phase_ticks) {
    std::ostringstream msg;
    msg << "phase " << phase_index_ << " exceeded max_phase_ticks=" << params_.max_phase_ticks;
    if (queue_.empty()) {
      msg << " without any delay (no delayed order to end it)";
    } else {
      msg << " with stranded delayed orders:";
    }
    for (const auto& e : queue_) {
      msg << " [order " << e.order_id << " sign " << e.sign << " qty " << e.quantity << " delayed at t=" << e.delay_time
          << " P=" << e.reference_price << " C=" << e.gravity_at_delay << "]";
    }
    throw StrandedOrderError(msg.str(), {queue_.begin(), queue_.end()});
  }

  for (auto it = queue_.begin(); it != queue_.end();) {
    const RationalPrice now = *gravity_;
    if (!execution_ready(quoted_price, now, it->gravity_at_delay, it->sign, params_.gamma)) {
      ++it;
      continue;
    }
    DelayedOrderRecord rec;
    rec.order_id = it->order_id;
    rec.sign = it->sign;
    rec.quantity = it->quantity;
    rec.delay_time = it->delay_time;
    rec.base_fill_price = it->base_fill_price;
    rec.execution_time = time;
    rec.execution_price = quoted_price - it->sign * half_spread_;
    rec.gravity_at_delay = it->gravity_at_delay;
    rec.gravity_at_execution = now;
    const Rational s(it->sign);
    rec.delta_T_at_delay = s * (Rational(it->reference_price) - it->gravity_at_delay) + Rational(params_.tau);
    rec.delta_G_at_execution =
        s * (Rational(quoted_price) - minmax(it->sign, now, it->gravity_at_delay)) - Rational(params_.gamma);
    rec.phase_index = phase_index_;

    record_fill(Order{it->order_id, time, side_from_sign(it->sign), rec.execution_price, it->quantity}, quoted_price);
    delayed_quantity_ += rec.quantity;
    records_.push_back(rec);
    out.executed.push_back(std::move(rec));
    it = queue_.erase(it);
  }

  const bool delayed_this_phase = records_.size() > phase_first_record_;
  if (stage_ == Stage::delayed_execution && delayed_this_phase && queue_.empty()) {
    PhaseReport report;
    report.phase_index = phase_index_;
    report.end_time = time;
    report.delayed_quantity = delayed_quantity_;
    report.lower_bound = Money{delayed_quantity_ * (params_.tau + params_.gamma)};
    report.records.assign(records_.begin() + static_cast<std::ptrdiff_t>(phase_first_record_), records_.end());
    out.phase_end = std::move(report);

    ++phase_index_;
    phase_start_ = time;
    phase_first_record_ = records_.size();
    mirrored_in_stage1_ = 0;
    stage_ = Stage::mirror;
  }
  return out;
}

std::vector<Verdict> delayed_order_check(const DelayedOrderRecord& r, Ticks tau, Ticks gamma) {
  std::vector<Verdict> out;
  const std::string who = "order " + std::to_string(r.order_id) + " (phase " + std::to_string(r.phase_index) + ")";
  out.push_back(make_verdict("delta_T_negative", r.delta_T_at_delay < Rational(0),
                             who + ": delta_T = " + r.delta_T_at_delay.to_string() + " is not < 0"));
  out.push_back(make_verdict("delta_G_positive", r.delta_G_at_execution > Rational(0),
                             who + ": delta_G = " + r.delta_G_at_execution.to_string() + " is not > 0"));
  // s(p* - p) = dG - dT + gamma + tau + s(minmax_s(C*, C_h) - C_h), with the last term >= 0.
  const Rational drift =
      Rational(r.sign) * (minmax(r.sign, r.gravity_at_execution, r.gravity_at_delay) - r.gravity_at_delay);
  const Rational rebuilt =
      r.delta_G_at_execution - r.delta_T_at_delay + Rational(gamma) + Rational(tau) + drift;
  out.push_back(make_verdict("per_order_decomposition", rebuilt == Rational(r.gap_ticks()) && drift >= Rational(0),
                             who + ": gap " + std::to_string(r.gap_ticks()) + " != decomposition " +
                                 rebuilt.to_string()));
  out.push_back(make_verdict("per_order_gap", r.gap_ticks() > tau + gamma,
                             who + ": s*(p*-p) = " + std::to_string(r.gap_ticks()) +
                                 " is not > tau+gamma = " + std::to_string(tau + gamma)));
  return out;
}

std::vector<Verdict> phase_pnl_diff_check(const PhaseReport& report, std::span<const DelayedOrderRecord> all_records,
                                          std::span<const Order> baseline_orders,
                                          std::span<const Order> dominant_orders, Ticks price, Ticks tau,
                                          Ticks gamma, std::optional<Money> previous_diff) {
  std::vector<Verdict> out;
  const std::string where = "phase " + std::to_string(report.phase_index);

  const Money recomputed = pnl_direct(dominant_orders, price) - pnl_direct(baseline_orders, price);
  Money delayed_sum;
  Quantity q_delayed = 0;
  for (const auto& r : all_records) {
    delayed_sum += Money{r.gap_ticks() * r.quantity};
    q_delayed += r.quantity;
  }
  out.push_back(make_verdict(
      "phase_identity", recomputed == delayed_sum && recomputed == report.pnl_diff && q_delayed == report.delayed_quantity,
      where + ": recomputed diff " + std::to_string(recomputed.quanta) + ", delayed-order sum " +
          std::to_string(delayed_sum.quanta) + ", reported " + std::to_string(report.pnl_diff.quanta)));

  out.push_back(make_verdict("position_match",
                             signed_open_position(dominant_orders) == signed_open_position(baseline_orders),
                             where + ": open positions differ at phase end"));

  const Money bound{report.delayed_quantity * (tau + gamma)};
  out.push_back(make_verdict("phase_lower_bound", report.pnl_diff >= bound && report.lower_bound == bound,
                             where + ": diff " + std::to_string(report.pnl_diff.quanta) + " < bound " +
                                 std::to_string(bound.quanta)));

  out.push_back(make_verdict("phase_positive", report.delayed_quantity < 1 || report.pnl_diff > Money{0},
                             where + ": diff " + std::to_string(report.pnl_diff.quanta) + " not > 0"));

  if (previous_diff) {
    const bool ok = report.records.empty() ? report.pnl_diff >= *previous_diff : report.pnl_diff > *previous_diff;
    out.push_back(make_verdict("phase_monotonic", ok,
                               where + ": diff " + std::to_string(report.pnl_diff.quanta) +
                                   " does not increase on previous " + std::to_string(previous_diff->quanta)));
  }
  return out;
}

}  // namespace htisim
