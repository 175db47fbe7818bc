#include "htisim/sim_harness.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "htisim/pnl_accounting.hpp"
#include "htisim/price_process.hpp"
#include "htisim/strategy_kernel.hpp"

namespace htisim {

namespace {

struct DrawdownTracker {
  Money peak;
  Money max_drawdown;
  void update(Money value) noexcept {
    peak = std::max(peak, value);
    max_drawdown = std::max(max_drawdown, peak - value);
  }
};

std::string at_time(TimeStep t) { return "t=" + std::to_string(t); }

}  // namespace

RunReport run_simulation(const RunConfig& config, const RunOptions& options) {
  config.validate();

  RunReport report;
  report.config = config;
  report.seed = config.run.master_seed;

  PriceProcessConfig price_cfg = config.price;
  price_cfg.seed = report.seed;
  const PriceProcess process(price_cfg);
  PricePathState path = initial_state(price_cfg);

  auto baseline = make_baseline(config.strategy, report.seed);
  DelayDraw delay_draw =
      config.run.never_delay ? DelayDraw::never() : DelayDraw(config.dominance.delay_probability, report.seed);
  DominanceEngine engine(config.dominance, price_cfg.grid_min, price_cfg.grid_max, config.run.half_spread,
                         std::move(delay_draw));

  const Ticks tau = config.dominance.tau;
  const Ticks gamma = config.dominance.gamma;
  const Ticks spread = config.run.half_spread;
  const std::int64_t commission = config.run.commission_per_unit;

  PnlLedger ledger_s;
  PnlLedger ledger_star;
  Money commissions_s;
  Money commissions_star;
  DrawdownTracker dd_s;
  DrawdownTracker dd_star;
  VerdictLog log;
  // Running sum of s * (p* - p) * q over executed delayed orders.
  Money delayed_gain;
  std::optional<Money> previous_phase_diff;
  std::optional<OrderIntent> pending;
  OrderId next_id = 1;
  auto& s_orders = report.baseline_orders;

  const auto fill_for_star = [&](const Order& fill) {
    ledger_star.add(fill);
    commissions_star += Money{commission * fill.quantity};
  };

  TimeStep t = 0;
  Ticks price = price_cfg.start_price;
  try {
    for (;; ++t) {
      if (t > 0) price = process.step(path);

      if (pending) {
        const Order base{next_id++, t, pending->side, price - side_sign(pending->side) * spread, pending->quantity};
        validate_order(base, config.instrument);
        s_orders.push_back(base);
        ledger_s.add(base);
        commissions_s += Money{commission * base.quantity};
        const auto outcome = engine.on_base_fill(base, price);
        if (outcome.fill) fill_for_star(*outcome.fill);
        pending.reset();
      }

      auto tick = engine.on_tick(t, price);
      for (const auto& rec : tick.executed) {
        const Order fill{rec.order_id, rec.execution_time, side_from_sign(rec.sign), rec.execution_price, rec.quantity};
        validate_order(fill, config.instrument);
        fill_for_star(fill);
        delayed_gain += Money{rec.gap_ticks() * rec.quantity};
        log.record_all(delayed_order_check(rec, tau, gamma));
        report.delayed_orders.push_back(rec);
      }

      pending = baseline->on_tick(price, t);

      const Money pnl_s = ledger_s.pnl(price) - commissions_s;
      const Money pnl_star = ledger_star.pnl(price) - commissions_star;
      const Money diff = pnl_star - pnl_s;
      dd_s.update(pnl_s);
      dd_star.update(pnl_star);

      // Mid-phase reconciliation: S has already filled (and paid for) every
      // queued order, S* has not.
      Money expected = delayed_gain;
      for (const auto& e : engine.queue()) {
        expected -= Money{e.sign * (e.base_fill_price - price) * e.quantity};
        expected += Money{commission * e.quantity};
      }
      log.check("tick_reconciliation", expected == diff, [&] {
        return at_time(t) + ": diff " + std::to_string(diff.quanta) + " != delayed sum + queued terms " +
               std::to_string(expected.quanta);
      });
      if (config.run.audit_every_tick) {
        const Money recomputed =
            (pnl_direct(engine.fills(), price) - commissions_star) - (pnl_direct(s_orders, price) - commissions_s);
        log.check("tick_recompute", recomputed == diff, [&] {
          return at_time(t) + ": from-scratch diff " + std::to_string(recomputed.quanta) + " != running diff " +
                 std::to_string(diff.quanta);
        });
      }

      const auto queue_len = static_cast<std::int64_t>(engine.queue().size());
      report.summary.max_queue_length = std::max(report.summary.max_queue_length, queue_len);
      log.check("queue_cap", queue_len <= config.dominance.queue_cap,
                [&] { return at_time(t) + ": queue length " + std::to_string(queue_len) + " exceeds cap"; });
      log.check("stage1_queue_empty", engine.stage() != Stage::mirror || queue_len == 0,
                [&] { return at_time(t) + ": queue not empty during stage 1"; });

      if (options.record_ticks) report.ticks.push_back(TickRow{t, price, pnl_s, pnl_star});

      if (tick.phase_end) {
        PhaseReport phase = std::move(*tick.phase_end);
        phase.pnl_diff = diff;
        log.record_all(phase_pnl_diff_check(phase, engine.delayed_records(), s_orders, engine.fills(), price, tau,
                                            gamma, previous_phase_diff));
        // Expenses cancel: both strategies have filled the same quantity.
        log.record("expense_cancellation", commissions_s == commissions_star,
                   "phase " + std::to_string(phase.phase_index) + ": commissions differ at phase end");
        previous_phase_diff = phase.pnl_diff;
        report.phases.push_back(std::move(phase));
        if (config.run.target_phases && static_cast<std::int64_t>(report.phases.size()) >= *config.run.target_phases) {
          break;
        }
      }
      if (config.run.total_ticks && t + 1 >= *config.run.total_ticks) break;
    }
    log.record("stranded_orders", true);
  } catch (const StrandedOrderError& e) {
    report.abort_reason = e.what();
    log.record("stranded_orders", false, e.what());
  }

  auto& s = report.summary;
  s.ticks = t + 1;
  s.final_price = price;
  s.phases = static_cast<std::int64_t>(report.phases.size());
  s.delayed_quantity = engine.delayed_quantity();
  s.delayed_orders = static_cast<std::int64_t>(report.delayed_orders.size());
  s.final_diff = (ledger_star.pnl(price) - commissions_star) - (ledger_s.pnl(price) - commissions_s);
  s.max_drawdown_baseline = dd_s.max_drawdown;
  s.max_drawdown_dominant = dd_star.max_drawdown;
  s.commissions_baseline = commissions_s;
  s.commissions_dominant = commissions_star;
  s.baseline_fills = static_cast<std::int64_t>(s_orders.size());
  s.queue_length_at_end = static_cast<std::int64_t>(engine.queue().size());
  if (!report.delayed_orders.empty()) {
    long double total = 0;
    s.min_gap_ticks = report.delayed_orders.front().gap_ticks();
    for (const auto& r : report.delayed_orders) {
      total += static_cast<long double>(r.gap_ticks());
      s.min_gap_ticks = std::min(s.min_gap_ticks, r.gap_ticks());
    }
    s.mean_gap_ticks = static_cast<double>(total / static_cast<long double>(report.delayed_orders.size()));
  }
  if (config.run.target_phases && !report.abort_reason) {
    log.record("target_phases_reached", s.phases >= *config.run.target_phases,
               "completed " + std::to_string(s.phases) + " of " + std::to_string(*config.run.target_phases));
  }
  report.verdicts = log.verdicts();
  return report;
}

std::vector<RunReport> run_replications(const RunConfig& config, const RunOptions& options, unsigned threads) {
  config.validate();
  const auto n = static_cast<std::size_t>(config.run.replications);
  std::vector<RunReport> reports(n);
  std::vector<std::exception_ptr> errors(n);
  auto run_one = [&](std::size_t r) {
    try {
      RunConfig c = config;
      c.run.master_seed = replication_seed(config.run.master_seed, static_cast<std::int64_t>(r));
      c.price.seed = c.run.master_seed;
      reports[r] = run_simulation(c, options);
    } catch (...) {
      errors[r] = std::current_exception();
    }
  };

  unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  if (workers <= 1) {
    for (std::size_t r = 0; r < n; ++r) run_one(r);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t r = next++; r < n; r = next++) run_one(r);
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return reports;
}

}  // namespace htisim
