#include "htisim/verify.hpp"

#include <algorithm>
#include <limits>
#include <map>

namespace htisim {

namespace {

namespace fs = std::filesystem;

std::string str(std::int64_t v) { return std::to_string(v); }

void check_records(const RunArtifacts& a, VerdictLog& log) {
  const Ticks tau = a.config.dominance.tau;
  const Ticks gamma = a.config.dominance.gamma;
  TimeStep last_exec = 0;
  for (const auto& d : a.delayed) {
    const std::string who = "order " + std::to_string(d.order_id);
    const Ticks gap = d.sign * (d.p_exec - d.p_delay);
    const bool consistent = (d.sign == 1 || d.sign == -1) && d.qty >= 1 && d.t_exec > d.t_delay && d.gap == gap &&
                            d.t_exec >= last_exec;
    log.check("record_consistency", consistent, [&] {
      return who + ": sign " + str(d.sign) + ", qty " + str(d.qty) + ", t_delay " + str(d.t_delay) + ", t_exec " +
             str(d.t_exec) + ", gap column " + str(d.gap) + " vs recomputed " + str(gap);
    });
    last_exec = std::max(last_exec, d.t_exec);
    log.check("per_order_gap", gap > tau + gamma, [&] {
      return who + ": s*(p_exec - p_delay) = " + str(gap) + " is not > tau+gamma = " + str(tau + gamma);
    });
  }
}

// Delayed orders pending at tick t are those with t_delay <= t <= t_exec: an
// order released at t still occupied its slot when that tick's base fill arrived.
void check_queue_cap(const RunArtifacts& a, VerdictLog& log) {
  std::map<TimeStep, std::int64_t> delta;
  for (const auto& d : a.delayed) {
    ++delta[d.t_delay];
    --delta[d.t_exec + 1];
  }
  std::int64_t occupancy = 0;
  bool ok = true;
  for (const auto& [t, change] : delta) {
    occupancy += change;
    if (occupancy > a.config.dominance.queue_cap) {
      log.record("queue_cap", false,
                 "t=" + str(t) + ": " + str(occupancy) + " delayed orders pending, cap " +
                     str(a.config.dominance.queue_cap));
      ok = false;
    }
  }
  if (ok) log.record("queue_cap", true);
}

void check_phases(const RunArtifacts& a, VerdictLog& log) {
  const Ticks tau = a.config.dominance.tau;
  const Ticks gamma = a.config.dominance.gamma;
  std::optional<PhaseRow> previous;
  for (std::size_t i = 0; i < a.phases.size(); ++i) {
    const auto& p = a.phases[i];
    const std::string where = "phase " + str(p.phase);
    const TimeStep prev_end = previous ? previous->end_time : std::numeric_limits<TimeStep>::min();

    log.check("phase_sequence",
              p.phase == static_cast<std::int64_t>(i) + 1 && (!previous || p.end_time > previous->end_time),
              [&] { return where + " at row " + str(static_cast<std::int64_t>(i) + 1) + ", end_time " + str(p.end_time); });

    Money gain;
    Quantity q = 0;
    std::int64_t n_in_phase = 0;
    for (const auto& d : a.delayed) {
      if (d.t_exec > p.end_time) continue;
      gain += Money{d.sign * (d.p_exec - d.p_delay) * d.qty};
      q += d.qty;
      if (d.t_exec > prev_end) ++n_in_phase;
    }
    log.check("phase_identity", gain == p.diff && q == p.q_delayed && n_in_phase == p.n_delayed, [&] {
      return where + ": diff " + str(p.diff.quanta) + " vs delayed-order sum " + str(gain.quanta) + ", q_delayed " +
             str(p.q_delayed) + " vs " + str(q) + ", n_delayed " + str(p.n_delayed) + " vs " + str(n_in_phase);
    });

    const Money bound{p.q_delayed * (tau + gamma)};
    log.check("phase_lower_bound", p.lower_bound == bound && p.diff >= bound, [&] {
      return where + ": diff " + str(p.diff.quanta) + ", recorded bound " + str(p.lower_bound.quanta) +
             ", q_delayed*(tau+gamma) = " + str(bound.quanta);
    });
    log.check("phase_positive", p.q_delayed < 1 || p.diff > Money{0},
              [&] { return where + ": diff " + str(p.diff.quanta) + " is not > 0"; });
    if (previous) {
      const bool ok = p.n_delayed >= 1 ? p.diff > previous->diff : p.diff >= previous->diff;
      log.check("phase_monotonic", ok, [&] {
        return where + ": diff " + str(p.diff.quanta) + " does not increase on phase " + str(previous->phase) +
               " diff " + str(previous->diff.quanta);
      });
    }
    previous = p;
  }
}

void check_ticks(const RunArtifacts& a, VerdictLog& log) {
  for (const auto& t : a.ticks) {
    log.check("tick_diff_column", t.diff == t.pnl_sstar - t.pnl_s, [&] {
      return "t=" + str(t.time) + ": diff column " + str(t.diff.quanta) + " != pnl_sstar - pnl_s " +
             str((t.pnl_sstar - t.pnl_s).quanta);
    });
  }

  std::map<TimeStep, const TickCsvRow*> by_time;
  for (const auto& t : a.ticks) by_time.emplace(t.time, &t);
  for (const auto& p : a.phases) {
    const auto it = by_time.find(p.end_time);
    log.check("tick_phase_diff", it != by_time.end() && it->second->diff == p.diff, [&] {
      return "phase " + str(p.phase) + ": tick row at t=" + str(p.end_time) +
             (it == by_time.end() ? " is missing" : " has diff " + str(it->second->diff.quanta)) + ", phase diff " +
             str(p.diff.quanta);
    });
  }

  // Orders still queued when the run stopped never reach delayed_orders.csv,
  // so past the last phase end the reconciliation is only complete if the
  // queue was empty at the end.
  TimeStep horizon = a.phases.empty() ? -1 : a.phases.back().end_time;
  const auto& summary = a.summary.contains("summary") ? a.summary["summary"] : nlohmann::json::object();
  if (summary.value("queue_length_at_end", std::int64_t{-1}) == 0) horizon = std::numeric_limits<TimeStep>::max();

  const std::int64_t commission = a.config.run.commission_per_unit;
  std::vector<const DelayedRow*> by_delay;
  for (const auto& d : a.delayed) by_delay.push_back(&d);
  std::ranges::stable_sort(by_delay, {}, [](const DelayedRow* d) { return d->t_delay; });
  std::size_t next = 0;
  std::vector<const DelayedRow*> pending;
  Money realized;
  for (const auto& t : a.ticks) {
    if (t.time > horizon) break;
    while (next < by_delay.size() && by_delay[next]->t_delay <= t.time) pending.push_back(by_delay[next++]);
    std::erase_if(pending, [&](const DelayedRow* d) {
      if (d->t_exec > t.time) return false;
      realized += Money{d->sign * (d->p_exec - d->p_delay) * d->qty};
      return true;
    });
    Money expected = realized;
    for (const auto* d : pending) {
      expected -= Money{d->sign * (d->p_delay - t.price) * d->qty};
      expected += Money{commission * d->qty};
    }
    log.check("tick_reconciliation", expected == t.diff, [&] {
      return "t=" + str(t.time) + ": diff " + str(t.diff.quanta) + " != executed gains - queued terms " +
             str(expected.quanta);
    });
  }
}

}  // namespace

std::vector<Verdict> verify_artifacts(const RunArtifacts& artifacts) {
  VerdictLog log;
  check_records(artifacts, log);
  check_queue_cap(artifacts, log);
  check_phases(artifacts, log);
  if (artifacts.has_ticks) check_ticks(artifacts, log);
  return log.verdicts();
}

std::vector<Verdict> verify_run(const fs::path& dir) {
  std::vector<fs::path> runs;
  if (fs::exists(dir / "summary.json")) {
    runs.push_back(dir);
  } else if (fs::is_directory(dir)) {
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.is_directory() && entry.path().filename().string().starts_with("rep_")) runs.push_back(entry.path());
    }
    std::ranges::sort(runs);
  }
  if (runs.empty()) return {Verdict{"artifacts_readable", false, "no run found under " + dir.string()}};

  VerdictLog log;
  for (const auto& run : runs) {
    const std::string prefix = runs.size() > 1 ? run.filename().string() + ": " : std::string{};
    try {
      const auto artifacts = load_run(run);
      log.record("artifacts_readable", true);
      for (const auto& v : verify_artifacts(artifacts)) log.record(v.clause, v.passed, prefix + v.detail);
    } catch (const std::exception& e) {
      log.record("artifacts_readable", false, prefix + e.what());
    }
  }
  return log.verdicts();
}

std::vector<Verdict> verify_report(const RunReport& report) { return verify_artifacts(artifacts_from_report(report)); }

}  // namespace htisim
