#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "htisim/run_io.hpp"
#include "htisim/sim_harness.hpp"

namespace htisim {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path temp_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("htisim_io_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  return dir;
}

RunReport small_report(std::uint64_t seed) {
  RunConfig c = default_config();
  c.run.target_phases = 3;
  c.run.master_seed = seed;
  c.price.seed = seed;
  return run_simulation(c);
}

TEST(RunIo, HeadersAreFixed) {
  const auto dir = temp_dir("headers");
  write_run(small_report(1), dir);
  EXPECT_EQ(slurp(dir / "ticks.csv").substr(0, slurp(dir / "ticks.csv").find('\n')),
            "time,price_ticks,pnl_s_quanta,pnl_sstar_quanta,diff_quanta");
  EXPECT_EQ(slurp(dir / "phases.csv").substr(0, slurp(dir / "phases.csv").find('\n')),
            "phase,end_time,q_delayed,diff_quanta,lower_bound_quanta,n_delayed");
  EXPECT_EQ(slurp(dir / "delayed_orders.csv").substr(0, slurp(dir / "delayed_orders.csv").find('\n')),
            "order_id,sign,qty,t_delay,p_delay_ticks,t_exec,p_exec_ticks,gap_ticks");
  fs::remove_all(dir);
}

TEST(RunIo, RoundTrip) {
  const auto report = small_report(2);
  const auto dir = temp_dir("roundtrip");
  write_run(report, dir);
  const auto loaded = load_run(dir);
  const auto original = artifacts_from_report(report);
  EXPECT_EQ(loaded.ticks, original.ticks);
  EXPECT_EQ(loaded.phases, original.phases);
  EXPECT_EQ(loaded.delayed, original.delayed);
  EXPECT_EQ(loaded.summary, original.summary);
  EXPECT_EQ(config_to_json(loaded.config), config_to_json(report.config));
  fs::remove_all(dir);
}

TEST(RunIo, SameSeedGivesByteIdenticalFiles) {
  const auto a = temp_dir("bytes_a");
  const auto b = temp_dir("bytes_b");
  write_run(small_report(3), a);
  write_run(small_report(3), b);
  for (const char* f : {"ticks.csv", "phases.csv", "delayed_orders.csv", "summary.json"}) {
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
  }
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(RunIo, SummaryRendersCurrency) {
  const auto report = small_report(4);
  const auto j = summary_json(report);
  const auto& diff = j["summary"]["final_diff"];
  EXPECT_EQ(diff["currency"].get<std::string>(),
            money_to_currency(Money{diff["quanta"].get<std::int64_t>()}, report.config.instrument).to_string());
  EXPECT_TRUE(j["passed"].get<bool>());
  EXPECT_TRUE(j["abort_reason"].is_null());
}

TEST(RunIo, MalformedFilesRejected) {
  const auto dir = temp_dir("malformed");
  write_run(small_report(5), dir);
  {
    std::ofstream out(dir / "phases.csv");
    out << "phase,end_time\n1,2\n";
  }
  EXPECT_THROW(load_run(dir), std::runtime_error);
  write_run(small_report(5), dir);
  {
    std::ofstream out(dir / "delayed_orders.csv", std::ios::app);
    out << "1,2,x,4,5,6,7,8\n";
  }
  EXPECT_THROW(load_run(dir), std::runtime_error);
  fs::remove_all(dir);
}

TEST(RunIo, NoTicksOmitsFile) {
  RunConfig c = default_config();
  c.run.target_phases = 1;
  const auto report = run_simulation(c, RunOptions{.record_ticks = false});
  const auto dir = temp_dir("noticks");
  write_run(report, dir);
  EXPECT_FALSE(fs::exists(dir / "ticks.csv"));
  EXPECT_FALSE(load_run(dir).has_ticks);
  fs::remove_all(dir);
}

}  // namespace
}  // namespace htisim
