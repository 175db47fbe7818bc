#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "htisim/sim_harness.hpp"
#include "htisim/sweep.hpp"

namespace htisim {
namespace {

TEST(ParseGrid, Axes) {
  const auto g = parse_grid("tau=25,50; gamma=25 ;delay_probability=1/2,1;queue_cap=1,3");
  EXPECT_EQ(g.tau, (std::vector<Ticks>{25, 50}));
  EXPECT_EQ(g.gamma, (std::vector<Ticks>{25}));
  EXPECT_EQ(g.delay_probability, (std::vector<Rational>{Rational(1, 2), Rational(1)}));
  EXPECT_EQ(g.queue_cap, (std::vector<std::int64_t>{1, 3}));
  EXPECT_EQ(g.cells(DominanceParams{}).size(), 8u);
}

TEST(ParseGrid, Errors) {
  EXPECT_THROW(parse_grid("tau"), ConfigError);
  EXPECT_THROW(parse_grid("tau=a"), ConfigError);
  EXPECT_THROW(parse_grid("tau=1,"), ConfigError);
  EXPECT_THROW(parse_grid("sigma=1"), ConfigError);
  EXPECT_THROW(parse_grid("delay_probability=1/0"), ConfigError);
}

TEST(ParseGrid, EmptyAxesKeepBase) {
  DominanceParams base;
  base.tau = 7;
  const auto cells = parse_grid("").cells(base);
  ASSERT_EQ(cells.size(), 1u);
  EXPECT_EQ(cells[0].tau, 7);
}

RunConfig sweep_base() {
  RunConfig c = default_config();
  c.run.target_phases = 3;
  c.run.master_seed = 8;
  c.price.seed = 8;
  return c;
}

TEST(Sweep, SingleCellMatchesRunSimulation) {
  const auto c = sweep_base();
  const auto rows = sweep(c, parse_grid("tau=25;gamma=25"), 1);
  ASSERT_EQ(rows.size(), 1u);
  const auto r = run_simulation(c, RunOptions{.record_ticks = false});
  EXPECT_EQ(rows[0].status, CellStatus::ok);
  EXPECT_EQ(rows[0].final_diff, r.summary.final_diff);
  EXPECT_EQ(rows[0].phases, r.summary.phases);
  EXPECT_EQ(rows[0].delayed_quantity, r.summary.delayed_quantity);
  EXPECT_EQ(rows[0].mean_gap_ticks, r.summary.mean_gap_ticks);
}

TEST(Sweep, GapBoundScalesWithTauPlusGamma) {
  const auto rows = sweep(sweep_base(), parse_grid("tau=25,50;gamma=25,50"), 2);
  ASSERT_EQ(rows.size(), 4u);
  for (const auto& r : rows) {
    ASSERT_EQ(r.status, CellStatus::ok) << r.note;
    const Ticks bound = r.params.tau + r.params.gamma;
    EXPECT_GT(r.min_gap_ticks, bound);
    EXPECT_GT(r.mean_gap_ticks, static_cast<double>(bound));
  }
  // (50, 50) doubles the (25, 25) bound.
  EXPECT_EQ(rows[3].params.tau + rows[3].params.gamma, 2 * (rows[0].params.tau + rows[0].params.gamma));
  EXPECT_GT(rows[3].min_gap_ticks, 2 * (rows[0].params.tau + rows[0].params.gamma));
}

TEST(Sweep, InvalidCellSkipped) {
  const auto rows = sweep(sweep_base(), parse_grid("tau=400,600;gamma=600"), 2);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].status, CellStatus::skipped);
  EXPECT_EQ(rows[1].status, CellStatus::skipped);
  EXPECT_NE(rows[0].note.find("half the grid width"), std::string::npos);
  const auto ok = sweep(sweep_base(), parse_grid("tau=25,1000;gamma=25"), 2);
  EXPECT_EQ(ok[0].status, CellStatus::ok);
  EXPECT_EQ(ok[1].status, CellStatus::skipped);
}

TEST(Sweep, ReplicationsShareSeedsAcrossCellsAndCsvIsWritten) {
  auto c = sweep_base();
  c.run.replications = 2;
  const auto rows = sweep(c, parse_grid("queue_cap=1,3"), 2);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0].seed, rows[2].seed);
  EXPECT_EQ(rows[1].seed, rows[3].seed);
  EXPECT_NE(rows[0].seed, rows[1].seed);
  const auto path = std::filesystem::temp_directory_path() / "htisim_sweep_test.csv";
  write_sweep_csv(rows, path);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, kSweepHeader);
  int lines = 0;
  for (std::string l; std::getline(in, l);) ++lines;
  EXPECT_EQ(lines, 4);
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace htisim
