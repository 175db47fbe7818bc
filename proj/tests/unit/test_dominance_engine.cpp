#include <gtest/gtest.h>

#include <random>

#include "htisim/dominance_engine.hpp"

namespace htisim {
namespace {

// Literal max/min oracle for minmax.
Rational max_or_min(int s, const Rational& x, const Rational& y) { return s > 0 ? std::max(x, y) : std::min(x, y); }

TEST(Minmax, Examples) {
  EXPECT_EQ(minmax(1, Rational(2), Rational(7)), Rational(7));
  EXPECT_EQ(minmax(-1, Rational(2), Rational(7)), Rational(2));
  EXPECT_EQ(minmax(1, Rational(7), Rational(2)), Rational(7));
  EXPECT_EQ(minmax(-1, Rational(7), Rational(2)), Rational(2));
  for (int s : {1, -1}) EXPECT_EQ(minmax(s, Rational(5, 3), Rational(5, 3)), Rational(5, 3));
}

TEST(Minmax, MatchesMaxMinOnRandomRationals) {
  std::mt19937_64 gen(8);
  std::uniform_int_distribution<std::int64_t> n(-100000, 100000), d(1, 97);
  for (int i = 0; i < 20000; ++i) {
    const Rational x(n(gen), d(gen)), y(n(gen), d(gen));
    for (int s : {1, -1}) EXPECT_EQ(minmax(s, x, y), max_or_min(s, x, y));
  }
}

TEST(DelayEligible, Examples) {
  EXPECT_FALSE(delay_eligible(9925, std::nullopt, 1, 50));
  EXPECT_TRUE(delay_eligible(9925, Rational(10000), 1, 50));
  EXPECT_FALSE(delay_eligible(10025, Rational(10000), -1, 50));
  // Strict: s(C - P) = tau exactly is not eligible.
  EXPECT_FALSE(delay_eligible(9950, Rational(10000), 1, 50));
  EXPECT_TRUE(delay_eligible(10051, Rational(10000), -1, 50));
}

TEST(ExecutionReady, Examples) {
  EXPECT_TRUE(execution_ready(10050, Rational(9960), Rational(10000), 1, 40));
  EXPECT_FALSE(execution_ready(10040, Rational(9960), Rational(10000), 1, 40));
  EXPECT_TRUE(execution_ready(9950, Rational(10000), Rational(10000), -1, 40));
}

TEST(ExecutionReady, AgreesWithMinmaxFormula) {
  std::mt19937_64 gen(9);
  std::uniform_int_distribution<std::int64_t> price(9800, 10200), cn(9800 * 7, 10200 * 7), gamma(1, 60);
  for (int i = 0; i < 50000; ++i) {
    const Rational now(cn(gen), 7), then(cn(gen), 7);
    const Ticks p = price(gen);
    const Ticks g = gamma(gen);
    for (int s : {1, -1}) {
      const bool oracle = Rational(s) * (Rational(p) - max_or_min(s, now, then)) > Rational(g);
      ASSERT_EQ(execution_ready(p, now, then, s, g), oracle);
    }
  }
}

TEST(DominanceParams, Validation) {
  DominanceParams p;
  EXPECT_NO_THROW(p.validate(9000, 11000));
  p.tau = 500;
  p.gamma = 500;
  EXPECT_THROW(p.validate(9000, 11000), std::invalid_argument);
  p.gamma = 499;
  EXPECT_NO_THROW(p.validate(9000, 11000));
  p = DominanceParams{};
  p.delay_probability = Rational(0);
  EXPECT_THROW(p.validate(9000, 11000), std::invalid_argument);
  p = DominanceParams{};
  p.queue_cap = 0;
  EXPECT_THROW(p.validate(9000, 11000), std::invalid_argument);
  p = DominanceParams{};
  p.tau = 0;
  EXPECT_THROW(p.validate(9000, 11000), std::invalid_argument);
}

Order base(OrderId id, TimeStep t, Side side, Ticks price, Quantity q = 1) { return Order{id, t, side, price, q}; }

DominanceParams scenario_params() {
  DominanceParams p;
  p.tau = 50;
  p.gamma = 40;
  p.delay_probability = Rational(1);
  p.queue_cap = 1;
  p.stage1_fill_count = 1;
  return p;
}

TEST(DominanceEngine, Stage1MirrorsEverything) {
  auto p = scenario_params();
  p.stage1_fill_count = 3;
  DominanceEngine e(p, 9000, 11000, 0, DelayDraw(Rational(1), 1));
  for (OrderId i = 1; i <= 3; ++i) {
    EXPECT_EQ(e.stage(), Stage::mirror);
    const auto out = e.on_base_fill(base(i, 0, i % 2 ? Side::buy : Side::sell, 10000 + 100 * i), 10000 + 100 * i);
    EXPECT_EQ(out.action, FillAction::mirror_fill);
    const auto tick = e.on_tick(0, 10000);
    EXPECT_TRUE(tick.executed.empty());
    EXPECT_FALSE(tick.phase_end.has_value());
  }
  EXPECT_EQ(e.stage(), Stage::delayed_execution);
}

TEST(DominanceEngine, EnqueueExecuteAndPhaseEnd) {
  DominanceEngine e(scenario_params(), 9000, 11000, 0, DelayDraw(Rational(1), 1));
  e.on_base_fill(base(1, 0, Side::buy, 10000), 10000);
  ASSERT_EQ(*e.gravity(), Rational(10000));

  const auto out = e.on_base_fill(base(2, 1, Side::sell, 9925, 2), 9925);
  EXPECT_EQ(out.action, FillAction::enqueue);
  EXPECT_FALSE(out.fill.has_value());
  ASSERT_EQ(e.queue().size(), 1u);

  EXPECT_TRUE(e.on_tick(2, 10040).executed.empty());
  const auto tick = e.on_tick(3, 10050);
  ASSERT_EQ(tick.executed.size(), 1u);
  const auto& r = tick.executed[0];
  EXPECT_EQ(r.gap_ticks(), 10050 - 9925);
  EXPECT_GT(r.gap_ticks(), 50 + 40);
  EXPECT_EQ(r.delta_T_at_delay, Rational(9925 - 10000 + 50));
  EXPECT_EQ(r.delta_G_at_execution, Rational(10050 - 10000 - 40));
  for (const auto& v : delayed_order_check(r, 50, 40)) EXPECT_TRUE(v.passed) << v.clause << " " << v.detail;

  ASSERT_TRUE(tick.phase_end.has_value());
  EXPECT_EQ(tick.phase_end->phase_index, 1);
  EXPECT_EQ(tick.phase_end->delayed_quantity, 2);
  EXPECT_EQ(tick.phase_end->lower_bound, Money{2 * 90});
  EXPECT_EQ(e.phase_index(), 2);
  EXPECT_EQ(e.stage(), Stage::mirror);
}

TEST(DominanceEngine, QueueAtCapMirrors) {
  DominanceEngine e(scenario_params(), 9000, 11000, 0, DelayDraw(Rational(1), 1));
  e.on_base_fill(base(1, 0, Side::buy, 10000), 10000);
  EXPECT_EQ(e.on_base_fill(base(2, 1, Side::sell, 9925), 9925).action, FillAction::enqueue);
  const auto out = e.on_base_fill(base(3, 2, Side::sell, 9900), 9900);
  EXPECT_EQ(out.action, FillAction::mirror_fill);
  EXPECT_EQ(out.fill->price, 9900);
}

TEST(DominanceEngine, NotEligibleMirrors) {
  DominanceEngine e(scenario_params(), 9000, 11000, 0, DelayDraw(Rational(1), 1));
  e.on_base_fill(base(1, 0, Side::buy, 10000), 10000);
  EXPECT_EQ(e.on_base_fill(base(2, 1, Side::sell, 9960), 9960).action, FillAction::mirror_fill);
}

TEST(DominanceEngine, NeverDrawMirrors) {
  DominanceEngine e(scenario_params(), 9000, 11000, 0, DelayDraw::never());
  e.on_base_fill(base(1, 0, Side::buy, 10000), 10000);
  EXPECT_EQ(e.on_base_fill(base(2, 1, Side::sell, 9000), 9000).action, FillAction::mirror_fill);
}

TEST(DominanceEngine, SpacingFilterForcesFill) {
  auto p = scenario_params();
  p.queue_cap = 3;
  p.min_distance = 10;
  DominanceEngine e(p, 9000, 11000, 0, DelayDraw(Rational(1), 1));
  e.on_base_fill(base(1, 0, Side::buy, 10000), 10000);
  EXPECT_EQ(e.on_base_fill(base(2, 1, Side::sell, 9925), 9925).action, FillAction::enqueue);
  // s * (9925 - 9920) = 5 <= 10.
  EXPECT_EQ(e.on_base_fill(base(3, 2, Side::sell, 9920), 9920).action, FillAction::forced_fill);
  // s * (9925 - 9880) = 45 > 10; the forced fill moved C to 9960, still eligible.
  EXPECT_EQ(e.on_base_fill(base(4, 3, Side::sell, 9880), 9880).action, FillAction::enqueue);
}

TEST(DominanceEngine, UnreachableGainLevelForcesFill) {
  DominanceEngine e(scenario_params(), 9000, 11000, 0, DelayDraw(Rational(1), 1));
  e.on_base_fill(base(1, 0, Side::sell, 10980), 10980);
  // C + gamma = 11020 > grid_max: no price can clear it.
  EXPECT_EQ(e.on_base_fill(base(2, 1, Side::sell, 10900), 10900).action, FillAction::forced_fill);
}

TEST(DominanceEngine, HalfSpreadShiftsFillsNotDecisions) {
  DominanceEngine e(scenario_params(), 9000, 11000, 2, DelayDraw(Rational(1), 1));
  e.on_base_fill(base(1, 0, Side::buy, 10002), 10000);
  ASSERT_EQ(*e.gravity(), Rational(10000));
  EXPECT_EQ(e.on_base_fill(base(2, 1, Side::sell, 9923), 9925).action, FillAction::enqueue);
  const auto tick = e.on_tick(2, 10050);
  ASSERT_EQ(tick.executed.size(), 1u);
  EXPECT_EQ(tick.executed[0].execution_price, 10048);
  EXPECT_EQ(tick.executed[0].gap_ticks(), 125);
}

TEST(DominanceEngine, StrandedOrdersAbort) {
  auto p = scenario_params();
  p.max_phase_ticks = 10;
  DominanceEngine e(p, 9000, 11000, 0, DelayDraw(Rational(1), 1));
  e.on_base_fill(base(1, 0, Side::buy, 10000), 10000);
  e.on_base_fill(base(2, 1, Side::sell, 9925), 9925);
  for (TimeStep t = 1; t <= 10; ++t) EXPECT_NO_THROW(e.on_tick(t, 9925));
  try {
    e.on_tick(11, 9925);
    FAIL() << "expected StrandedOrderError";
  } catch (const StrandedOrderError& err) {
    ASSERT_EQ(err.entries().size(), 1u);
    EXPECT_EQ(err.entries()[0].order_id, 2u);
    EXPECT_NE(std::string(err.what()).find("order 2"), std::string::npos);
  }
}

TEST(DominanceEngine, PhaseWithoutDelaysAlsoHitsBackstop) {
  auto p = scenario_params();
  p.max_phase_ticks = 10;
  DominanceEngine e(p, 9000, 11000, 0, DelayDraw::never());
  for (TimeStep t = 0; t <= 10; ++t) {
    e.on_base_fill(base(static_cast<OrderId>(t + 1), t, t % 2 ? Side::sell : Side::buy, 9925), 9925);
    EXPECT_NO_THROW(e.on_tick(t, 9925));
  }
  try {
    e.on_tick(11, 9925);
    FAIL() << "expected StrandedOrderError";
  } catch (const StrandedOrderError& err) {
    EXPECT_TRUE(err.entries().empty());
    EXPECT_NE(std::string(err.what()).find("without any delay"), std::string::npos);
  }
}

TEST(PhaseCheck, SingleDelayedSellExample) {
  // S: buy 1@10000 then sell 2@9925. S*: buy 1@10000, sell 2@10050.
  const std::vector<Order> s_orders{base(1, 0, Side::buy, 10000), base(2, 1, Side::sell, 9925, 2)};
  const std::vector<Order> star{base(1, 0, Side::buy, 10000), base(2, 3, Side::sell, 10050, 2)};
  DelayedOrderRecord r;
  r.order_id = 2;
  r.sign = 1;
  r.quantity = 2;
  r.base_fill_price = 9925;
  r.execution_price = 10050;
  PhaseReport report;
  report.phase_index = 1;
  report.delayed_quantity = 2;
  report.lower_bound = Money{2 * 90};
  report.pnl_diff = Money{250};
  report.records = {r};
  const std::vector<DelayedOrderRecord> all{r};
  const auto verdicts = phase_pnl_diff_check(report, all, s_orders, star, 10050, 50, 40, Money{0});
  for (const auto& v : verdicts) EXPECT_TRUE(v.passed) << v.clause << ": " << v.detail;
  EXPECT_EQ(pnl_direct(star, 10050) - pnl_direct(s_orders, 10050), Money{250});
  EXPECT_GE(Money{250}, Money{180});
}

TEST(PhaseCheck, FlagsBrokenClauses) {
  PhaseReport report;
  report.phase_index = 2;
  report.delayed_quantity = 1;
  report.lower_bound = Money{90};
  report.pnl_diff = Money{80};
  const auto verdicts = phase_pnl_diff_check(report, {}, {}, {}, 10000, 50, 40, Money{100});
  auto passed = [&](const char* clause) {
    for (const auto& v : verdicts) {
      if (v.clause == clause) return v.passed;
    }
    return true;
  };
  EXPECT_FALSE(passed("phase_identity"));
  EXPECT_FALSE(passed("phase_lower_bound"));
  EXPECT_FALSE(passed("phase_monotonic"));
}

TEST(PhaseCheck, EmptyPhaseKeepsDiff) {
  PhaseReport report;
  report.phase_index = 3;
  report.pnl_diff = Money{0};
  const auto verdicts = phase_pnl_diff_check(report, {}, {}, {}, 10000, 50, 40, Money{0});
  for (const auto& v : verdicts) EXPECT_TRUE(v.passed) << v.clause;
}

}  // namespace
}  // namespace htisim
