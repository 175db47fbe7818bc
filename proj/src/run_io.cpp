#include "htisim/run_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace htisim {

namespace {

namespace fs = std::filesystem;

class CsvWriter {
 public:
  explicit CsvWriter(const fs::path& path, const char* header) : out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot write " + path.string());
    buffer_.reserve(1 << 16);
    buffer_ += header;
    buffer_ += '\n';
  }
  ~CsvWriter() { flush(); }

  CsvWriter& field(std::int64_t v) {
    if (!first_) buffer_ += ',';
    first_ = false;
    char tmp[24];
    const auto res = std::to_chars(tmp, tmp + sizeof tmp, v);
    buffer_.append(tmp, res.ptr);
    return *this;
  }
  void end_row() {
    buffer_ += '\n';
    first_ = true;
    if (buffer_.size() > (1 << 16)) flush();
  }

 private:
  void flush() {
    out_.write(buffer_.data(), static_cast<std::streamsize>(buffer_.size()));
    buffer_.clear();
  }
  std::ofstream out_;
  std::string buffer_;
  bool first_ = true;
};

std::vector<std::int64_t> parse_row(const std::string& line, std::size_t expected, const fs::path& path,
                                    std::size_t line_no) {
  std::vector<std::int64_t> fields;
  fields.reserve(expected);
  const char* p = line.data();
  const char* end = line.data() + line.size();
  while (p <= end) {
    const char* comma = std::find(p, end, ',');
    std::int64_t v = 0;
    const auto res = std::from_chars(p, comma, v);
    if (res.ec != std::errc{} || res.ptr != comma) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": malformed field");
    }
    fields.push_back(v);
    p = comma + 1;
  }
  if (fields.size() != expected) {
    throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": expected " + std::to_string(expected) +
                             " fields");
  }
  return fields;
}

template <typename Fn>
void read_csv(const fs::path& path, const char* header, std::size_t columns, Fn on_row) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != header) {
    throw std::runtime_error(path.string() + ": unexpected header");
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    on_row(parse_row(line, columns, path, line_no));
  }
}

nlohmann::json money_json(Money m, const Instrument& instrument) {
  return {{"quanta", m.quanta}, {"currency", money_to_currency(m, instrument).to_string()}};
}

}  // namespace

nlohmann::json summary_json(const RunReport& report) {
  const auto& s = report.summary;
  const auto& instrument = report.config.instrument;
  nlohmann::json j;
  j["config"] = config_to_json(report.config);
  j["seed"] = report.seed;
  j["summary"] = {
      {"ticks", s.ticks},
      {"final_price", {{"ticks", s.final_price}, {"currency", (instrument.tick_size * s.final_price).to_string()}}},
      {"phases", s.phases},
      {"delayed_quantity", s.delayed_quantity},
      {"delayed_orders", s.delayed_orders},
      {"final_diff", money_json(s.final_diff, instrument)},
      {"max_drawdown_s", money_json(s.max_drawdown_baseline, instrument)},
      {"max_drawdown_sstar", money_json(s.max_drawdown_dominant, instrument)},
      {"commissions_s", money_json(s.commissions_baseline, instrument)},
      {"commissions_sstar", money_json(s.commissions_dominant, instrument)},
      {"baseline_fills", s.baseline_fills},
      {"max_queue_length", s.max_queue_length},
      {"queue_length_at_end", s.queue_length_at_end},
      {"mean_gap_ticks", s.mean_gap_ticks},
      {"min_gap_ticks", s.min_gap_ticks},
  };
  nlohmann::json verdicts = nlohmann::json::array();
  for (const auto& v : report.verdicts) {
    verdicts.push_back({{"clause", v.clause}, {"passed", v.passed}, {"detail", v.detail}});
  }
  j["verdicts"] = std::move(verdicts);
  j["passed"] = report.passed();
  j["abort_reason"] = report.abort_reason ? nlohmann::json(*report.abort_reason) : nlohmann::json(nullptr);
  return j;
}

RunArtifacts artifacts_from_report(const RunReport& report) {
  RunArtifacts a;
  a.config = report.config;
  a.summary = summary_json(report);
  a.has_ticks = !report.ticks.empty();
  a.ticks.reserve(report.ticks.size());
  for (const auto& t : report.ticks) {
    a.ticks.push_back(TickCsvRow{t.time, t.price, t.pnl_baseline, t.pnl_dominant, t.diff()});
  }
  for (const auto& p : report.phases) {
    a.phases.push_back(PhaseRow{p.phase_index, p.end_time, p.delayed_quantity, p.pnl_diff, p.lower_bound,
                                static_cast<std::int64_t>(p.records.size())});
  }
  for (const auto& r : report.delayed_orders) {
    a.delayed.push_back(DelayedRow{r.order_id, r.sign, r.quantity, r.delay_time, r.base_fill_price, r.execution_time,
                                   r.execution_price, r.gap_ticks()});
  }
  return a;
}

void write_artifacts(const RunArtifacts& a, const fs::path& dir) {
  fs::create_directories(dir);
  if (a.has_ticks) {
    CsvWriter w(dir / "ticks.csv", kTicksHeader);
    for (const auto& t : a.ticks) {
      w.field(t.time).field(t.price).field(t.pnl_s.quanta).field(t.pnl_sstar.quanta).field(t.diff.quanta);
      w.end_row();
    }
  } else {
    fs::remove(dir / "ticks.csv");
  }
  {
    CsvWriter w(dir / "phases.csv", kPhasesHeader);
    for (const auto& p : a.phases) {
      w.field(p.phase).field(p.end_time).field(p.q_delayed).field(p.diff.quanta).field(p.lower_bound.quanta);
      w.field(p.n_delayed);
      w.end_row();
    }
  }
  {
    CsvWriter w(dir / "delayed_orders.csv", kDelayedHeader);
    for (const auto& d : a.delayed) {
      w.field(static_cast<std::int64_t>(d.order_id)).field(d.sign).field(d.qty).field(d.t_delay).field(d.p_delay);
      w.field(d.t_exec).field(d.p_exec).field(d.gap);
      w.end_row();
    }
  }
  std::ofstream out(dir / "summary.json", std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + (dir / "summary.json").string());
  out << a.summary.dump(2) << '\n';
}

void write_run(const RunReport& report, const fs::path& dir) { write_artifacts(artifacts_from_report(report), dir); }

RunArtifacts load_run(const fs::path& dir) {
  RunArtifacts a;
  {
    std::ifstream in(dir / "summary.json");
    if (!in) throw std::runtime_error("cannot read " + (dir / "summary.json").string());
    try {
      a.summary = nlohmann::json::parse(in);
      a.config = parse_config(a.summary.at("config").dump());
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error("malformed summary.json: " + std::string(e.what()));
    }
  }
  if (fs::exists(dir / "ticks.csv")) {
    a.has_ticks = true;
    read_csv(dir / "ticks.csv", kTicksHeader, 5, [&](const std::vector<std::int64_t>& f) {
      a.ticks.push_back(TickCsvRow{f[0], f[1], Money{f[2]}, Money{f[3]}, Money{f[4]}});
    });
  }
  read_csv(dir / "phases.csv", kPhasesHeader, 6, [&](const std::vector<std::int64_t>& f) {
    a.phases.push_back(PhaseRow{f[0], f[1], f[2], Money{f[3]}, Money{f[4]}, f[5]});
  });
  read_csv(dir / "delayed_orders.csv", kDelayedHeader, 8, [&](const std::vector<std::int64_t>& f) {
    a.delayed.push_back(DelayedRow{static_cast<OrderId>(f[0]), static_cast<int>(f[1]), f[2], f[3], f[4], f[5], f[6],
                                   f[7]});
  });
  return a;
}

}  // namespace htisim
