#include "htisim/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <thread>

#include "htisim/sim_harness.hpp"

namespace htisim {

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::int64_t parse_int(std::string_view key, std::string_view v) {
  std::int64_t out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc{} || res.ptr != v.data() + v.size()) {
    throw ConfigError("grid: bad integer '" + std::string(v) + "' for " + std::string(key));
  }
  return out;
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

std::string first_failure(const RunReport& report) {
  for (const auto& v : report.verdicts) {
    if (!v.passed) return v.clause + ": " + v.detail;
  }
  return {};
}

}  // namespace

std::vector<DominanceParams> SweepGrid::cells(const DominanceParams& base) const {
  const auto axis = [](const auto& values, const auto& fallback) {
    using T = std::decay_t<decltype(fallback)>;
    return values.empty() ? std::vector<T>{fallback} : std::vector<T>(values.begin(), values.end());
  };
  std::vector<DominanceParams> out;
  for (const auto t : axis(tau, base.tau)) {
    for (const auto g : axis(gamma, base.gamma)) {
      for (const auto& p : axis(delay_probability, base.delay_probability)) {
        for (const auto c : axis(queue_cap, base.queue_cap)) {
          DominanceParams cell = base;
          cell.tau = t;
          cell.gamma = g;
          cell.delay_probability = p;
          cell.queue_cap = c;
          out.push_back(cell);
        }
      }
    }
  }
  return out;
}

SweepGrid parse_grid(std::string_view text) {
  SweepGrid grid;
  for (const auto part : split(text, ';')) {
    const auto item = trim(part);
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) throw ConfigError("grid: expected key=values, got '" + std::string(item) + "'");
    const auto key = trim(item.substr(0, eq));
    std::vector<std::string_view> values;
    for (const auto v : split(item.substr(eq + 1), ',')) {
      const auto tv = trim(v);
      if (tv.empty()) throw ConfigError("grid: empty value for " + std::string(key));
      values.push_back(tv);
    }
    if (key == "tau") {
      for (const auto v : values) grid.tau.push_back(parse_int(key, v));
    } else if (key == "gamma") {
      for (const auto v : values) grid.gamma.push_back(parse_int(key, v));
    } else if (key == "queue_cap") {
      for (const auto v : values) grid.queue_cap.push_back(parse_int(key, v));
    } else if (key == "delay_probability") {
      for (const auto v : values) {
        try {
          grid.delay_probability.push_back(Rational::parse(v));
        } catch (const std::exception& e) {
          throw ConfigError("grid: bad delay_probability '" + std::string(v) + "': " + e.what());
        }
      }
    } else {
      throw ConfigError("grid: unknown parameter '" + std::string(key) +
                        "' (expected tau, gamma, delay_probability, queue_cap)");
    }
  }
  return grid;
}

std::string_view to_string(CellStatus status) noexcept {
  switch (status) {
    case CellStatus::ok: return "ok";
    case CellStatus::failed: return "failed";
    case CellStatus::aborted: return "aborted";
    case CellStatus::skipped: return "skipped";
  }
  return "unknown";
}

std::vector<SweepRow> sweep(const RunConfig& config, const SweepGrid& grid, unsigned threads) {
  const auto cells = grid.cells(config.dominance);
  const auto reps = static_cast<std::size_t>(std::max<std::int64_t>(1, config.run.replications));
  const std::size_t jobs = cells.size() * reps;
  std::vector<SweepRow> rows(jobs);

  const auto run_job = [&](std::size_t j) {
    const std::size_t cell = j / reps;
    const std::size_t rep = j % reps;
    SweepRow& row = rows[j];
    row.cell = static_cast<std::int64_t>(cell);
    row.replication = static_cast<std::int64_t>(rep);
    row.seed = replication_seed(config.run.master_seed, row.replication);
    row.params = cells[cell];

    RunConfig c = config;
    c.dominance = cells[cell];
    c.run.master_seed = row.seed;
    c.price.seed = row.seed;
    c.run.replications = 1;
    try {
      c.validate();
    } catch (const ConfigError& e) {
      row.status = CellStatus::skipped;
      row.note = e.what();
      return;
    }
    const RunReport report = run_simulation(c, RunOptions{.record_ticks = false});
    const auto& s = report.summary;
    row.final_diff = s.final_diff;
    row.phases = s.phases;
    row.delayed_quantity = s.delayed_quantity;
    row.delayed_orders = s.delayed_orders;
    row.mean_gap_ticks = s.mean_gap_ticks;
    row.min_gap_ticks = s.min_gap_ticks;
    if (report.abort_reason) {
      row.status = CellStatus::aborted;
      row.note = *report.abort_reason;
    } else if (!report.passed()) {
      row.status = CellStatus::failed;
      row.note = first_failure(report);
    }
  };

  unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, jobs));
  std::vector<std::exception_ptr> errors(jobs);
  const auto guarded = [&](std::size_t j) {
    try {
      run_job(j);
    } catch (...) {
      errors[j] = std::current_exception();
    }
  };
  if (workers <= 1) {
    for (std::size_t j = 0; j < jobs; ++j) guarded(j);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t j = next++; j < jobs; j = next++) guarded(j);
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return rows;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << kSweepHeader << '\n';
  for (const auto& r : rows) {
    char gap[32];
    std::snprintf(gap, sizeof gap, "%.6f", r.mean_gap_ticks);
    out << r.cell << ',' << r.replication << ',' << r.seed << ',' << r.params.tau << ',' << r.params.gamma << ','
        << r.params.delay_probability.to_string() << ',' << r.params.queue_cap << ',' << to_string(r.status) << ','
        << r.final_diff.quanta << ',' << r.phases << ',' << r.delayed_quantity << ',' << r.delayed_orders << ','
        << gap << ',' << r.min_gap_ticks << ',' << csv_quote(r.note) << '\n';
  }
}

}  // namespace htisim
