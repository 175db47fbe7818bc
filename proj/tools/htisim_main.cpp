#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "htisim/price_process.hpp"
#include "htisim/run_config.hpp"
#include "htisim/run_io.hpp"
#include "htisim/sim_harness.hpp"
#include "htisim/sweep.hpp"
#include "htisim/verify.hpp"

namespace fs = std::filesystem;
using namespace htisim;

namespace {

constexpr int kExitFailed = 1;
constexpr int kExitConfig = 2;

bool print_verdicts(const std::vector<Verdict>& verdicts, const std::string& prefix = {}) {
  for (const auto& v : verdicts) {
    std::cout << prefix << (v.passed ? "PASS " : "FAIL ") << v.clause;
    if (!v.passed && !v.detail.empty()) std::cout << ": " << v.detail;
    std::cout << '\n';
  }
  return all_passed(verdicts);
}

RunConfig load_with_overrides(const std::string& path, std::optional<std::uint64_t> seed) {
  RunConfig config = load_config(path);
  if (seed) {
    config.run.master_seed = *seed;
    config.price.seed = *seed;
  }
  config.validate();
  return config;
}

std::string rep_dir_name(std::int64_t r) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "rep_%03lld", static_cast<long long>(r));
  return buf;
}

int cmd_simulate(const std::string& config_path, std::optional<std::uint64_t> seed, std::optional<std::string> out,
                 bool no_ticks) {
  RunConfig config = load_with_overrides(config_path, seed);
  if (out) config.run.output_dir = *out;
  if (no_ticks) config.run.write_ticks = false;
  const RunOptions options{.record_ticks = config.run.write_ticks};
  const fs::path dir = config.run.output_dir;

  const auto reports = run_replications(config, options);
  bool ok = true;
  for (std::size_t r = 0; r < reports.size(); ++r) {
    const auto& report = reports[r];
    const fs::path run_dir = reports.size() > 1 ? dir / rep_dir_name(static_cast<std::int64_t>(r)) : dir;
    write_run(report, run_dir);
    const auto& s = report.summary;
    std::cout << "run " << run_dir.string() << " seed=" << report.seed << " ticks=" << s.ticks
              << " phases=" << s.phases << " q_delayed=" << s.delayed_quantity
              << " final_diff=" << money_to_currency(s.final_diff, config.instrument).to_string() << '\n';
    if (report.abort_reason) std::cout << "ABORTED " << *report.abort_reason << '\n';
    ok = print_verdicts(report.verdicts, "  ") && !report.abort_reason && ok;
  }
  return ok ? 0 : kExitFailed;
}

int cmd_verify(const std::string& dir) {
  const auto verdicts = verify_run(dir);
  return print_verdicts(verdicts) ? 0 : kExitFailed;
}

int cmd_sweep(const std::string& config_path, const std::string& grid_text, std::optional<std::uint64_t> seed,
              std::optional<std::string> out) {
  const RunConfig config = load_with_overrides(config_path, seed);
  const SweepGrid grid = parse_grid(grid_text);
  const auto rows = sweep(config, grid);
  const fs::path path = out ? fs::path(*out) : fs::path(config.run.output_dir) / "sweep.csv";
  write_sweep_csv(rows, path);
  bool ok = true;
  for (const auto& r : rows) {
    std::cout << "cell " << r.cell << " rep " << r.replication << " tau=" << r.params.tau
              << " gamma=" << r.params.gamma << " p=" << r.params.delay_probability
              << " cap=" << r.params.queue_cap << ": " << to_string(r.status);
    if (r.status != CellStatus::skipped) {
      std::cout << " phases=" << r.phases << " q_delayed=" << r.delayed_quantity
                << " final_diff_quanta=" << r.final_diff.quanta << " mean_gap=" << r.mean_gap_ticks;
    }
    if (!r.note.empty()) std::cout << " (" << r.note << ')';
    std::cout << '\n';
    ok = ok && (r.status == CellStatus::ok || r.status == CellStatus::skipped);
  }
  std::cout << "wrote " << path.string() << '\n';
  return ok ? 0 : kExitFailed;
}

int cmd_recurrence(const std::string& config_path, Ticks xi, std::int64_t samples, std::int64_t cap,
                   const std::string& direction, std::optional<Ticks> start, std::optional<std::uint64_t> seed,
                   unsigned threads) {
  const RunConfig config = load_with_overrides(config_path, seed);
  const Ticks from = start.value_or((config.price.grid_min + config.price.grid_max) / 2);
  nlohmann::json out;
  out["start_price"] = from;
  out["xi"] = xi;
  out["samples"] = samples;
  out["cap"] = cap;
  bool ok = true;
  for (const auto dir : {Direction::above, Direction::below}) {
    const char* name = dir == Direction::above ? "above" : "below";
    if (direction != "both" && direction != name) continue;
    const auto t0 = std::chrono::steady_clock::now();
    const auto h = estimate_hitting_time(config.price, from, xi, dir, samples, cap, threads);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out[name] = {{"count_finite", h.count_finite},
                 {"fraction_finite", static_cast<double>(h.count_finite) / static_cast<double>(h.samples)},
                 {"mean_steps", h.mean},
                 {"max_steps", h.max},
                 {"seconds", secs}};
    ok = ok && h.count_finite == h.samples;
  }
  out["all_finite"] = ok;
  std::cout << out.dump(2) << '\n';
  return ok ? 0 : kExitFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Side-by-side simulation of a baseline strategy and its delayed-execution counterpart"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;

  auto* simulate = app.add_subcommand("simulate", "Run a config and write its run directory");
  bool no_ticks = false;
  simulate->add_option("config", config_path, "YAML config")->required()->check(CLI::ExistingFile);
  simulate->add_option("--seed", seed, "Override run.master_seed");
  simulate->add_option("--out", out, "Override run.output_dir");
  simulate->add_flag("--no-ticks", no_ticks, "Skip ticks.csv");

  auto* verify = app.add_subcommand("verify", "Re-audit a run directory from its files");
  std::string run_dir;
  verify->add_option("run-dir", run_dir, "Run directory (or parent of rep_* directories)")->required();

  auto* sweep_cmd = app.add_subcommand("sweep", "Parameter sweep over tau, gamma, delay_probability, queue_cap");
  std::string grid_text;
  sweep_cmd->add_option("config", config_path, "YAML config")->required()->check(CLI::ExistingFile);
  sweep_cmd->add_option("--grid", grid_text, "e.g. tau=25,50;gamma=25;delay_probability=1/2,1;queue_cap=1,3")
      ->required();
  sweep_cmd->add_option("--seed", seed, "Override run.master_seed");
  sweep_cmd->add_option("--out", out, "CSV path (default <output_dir>/sweep.csv)");

  auto* recurrence = app.add_subcommand("recurrence", "Empirical hitting times of the price process");
  Ticks xi = 0;
  std::int64_t samples = 0;
  std::int64_t cap = 10'000'000;
  std::string direction = "both";
  std::optional<Ticks> start;
  unsigned threads = 0;
  recurrence->add_option("config", config_path, "YAML config")->required()->check(CLI::ExistingFile);
  recurrence->add_option("--xi", xi, "Threshold distance in ticks")->required()->check(CLI::PositiveNumber);
  recurrence->add_option("--samples", samples, "Number of samples")->required()->check(CLI::PositiveNumber);
  recurrence->add_option("--cap", cap, "Step cap per sample")->check(CLI::PositiveNumber);
  recurrence->add_option("--direction", direction, "above, below or both")
      ->check(CLI::IsMember({"above", "below", "both"}));
  recurrence->add_option("--start", start, "Start price in ticks (default grid center)");
  recurrence->add_option("--seed", seed, "Override run.master_seed");
  recurrence->add_option("--threads", threads, "Worker threads (0 = all cores)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*simulate) return cmd_simulate(config_path, seed, out, no_ticks);
    if (*verify) return cmd_verify(run_dir);
    if (*sweep_cmd) return cmd_sweep(config_path, grid_text, seed, out);
    if (*recurrence) return cmd_recurrence(config_path, xi, samples, cap, direction, start, seed, threads);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailed;
  }
  return kExitFailed;
}
