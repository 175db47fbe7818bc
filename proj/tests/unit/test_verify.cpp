#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "../mutations.hpp"
#include "htisim/run_io.hpp"
#include "htisim/sim_harness.hpp"
#include "htisim/verify.hpp"

namespace htisim {
namespace {

namespace fs = std::filesystem;

bool clause_passed(const std::vector<Verdict>& vs, const std::string& clause) {
  for (const auto& v : vs) {
    if (v.clause == clause) return v.passed;
  }
  ADD_FAILURE() << "clause " << clause << " not reported";
  return true;
}

class VerifyTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    RunConfig c = default_config();
    c.run.target_phases = 6;
    c.run.master_seed = 4;
    c.price.seed = 4;
    report_ = new RunReport(run_simulation(c));
  }
  static void TearDownTestSuite() { delete report_; }

  fs::path temp_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("htisim_verify_" + name + "_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    return dir;
  }

  static RunReport* report_;
};

RunReport* VerifyTest::report_ = nullptr;

TEST_F(VerifyTest, UntamperedRunPasses) {
  ASSERT_TRUE(report_->passed());
  const auto verdicts = verify_report(*report_);
  for (const auto& v : verdicts) EXPECT_TRUE(v.passed) << v.clause << ": " << v.detail;
  EXPECT_GE(verdicts.size(), 11u);
}

TEST_F(VerifyTest, PerturbedExecutionPriceFailsPerOrderGap) {
  auto a = artifacts_from_report(*report_);
  testing::perturb_execution_price(a);
  const auto v = verify_artifacts(a);
  EXPECT_FALSE(clause_passed(v, "per_order_gap"));
  EXPECT_TRUE(clause_passed(v, "record_consistency"));
}

TEST_F(VerifyTest, DecreasingPhaseDiffsFailMonotonicity) {
  auto a = artifacts_from_report(*report_);
  testing::reorder_phase_diffs_decreasing(a);
  EXPECT_FALSE(clause_passed(verify_artifacts(a), "phase_monotonic"));
}

TEST_F(VerifyTest, OverlappingRecordsFailQueueCap) {
  auto a = artifacts_from_report(*report_);
  testing::breach_queue_cap(a);
  EXPECT_FALSE(clause_passed(verify_artifacts(a), "queue_cap"));
}

TEST_F(VerifyTest, TamperedTickDiffFailsReconciliation) {
  auto a = artifacts_from_report(*report_);
  a.ticks[a.ticks.size() / 2].pnl_sstar += Money{1};
  a.ticks[a.ticks.size() / 2].diff += Money{1};
  const auto v = verify_artifacts(a);
  EXPECT_FALSE(clause_passed(v, "tick_reconciliation"));
  EXPECT_TRUE(clause_passed(v, "tick_diff_column"));
}

TEST_F(VerifyTest, WrongLowerBoundColumnFails) {
  auto a = artifacts_from_report(*report_);
  a.phases[0].lower_bound += Money{1};
  EXPECT_FALSE(clause_passed(verify_artifacts(a), "phase_lower_bound"));
}

TEST_F(VerifyTest, DetailNamesPhaseAndOrder) {
  auto a = artifacts_from_report(*report_);
  testing::perturb_execution_price(a);
  testing::reorder_phase_diffs_decreasing(a);
  for (const auto& v : verify_artifacts(a)) {
    if (v.clause == "per_order_gap") EXPECT_NE(v.detail.find("order "), std::string::npos);
    if (v.clause == "phase_monotonic") EXPECT_NE(v.detail.find("phase "), std::string::npos);
  }
}

TEST_F(VerifyTest, DiskRoundTripAndMutationsOnFiles) {
  const auto dir = temp_dir("disk");
  write_run(*report_, dir);
  for (const auto& v : verify_run(dir)) EXPECT_TRUE(v.passed) << v.clause << ": " << v.detail;

  auto a = load_run(dir);
  testing::breach_queue_cap(a);
  write_artifacts(a, dir);
  EXPECT_FALSE(clause_passed(verify_run(dir), "queue_cap"));
  fs::remove_all(dir);
}

TEST_F(VerifyTest, MissingDirectoryReported) {
  const auto v = verify_run(temp_dir("missing"));
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].clause, "artifacts_readable");
  EXPECT_FALSE(v[0].passed);
}

TEST_F(VerifyTest, ReplicationDirectoriesAreEachAudited) {
  const auto dir = temp_dir("reps");
  write_run(*report_, dir / "rep_000");
  auto a = artifacts_from_report(*report_);
  testing::reorder_phase_diffs_decreasing(a);
  write_artifacts(a, dir / "rep_001");
  const auto v = verify_run(dir);
  for (const auto& x : v) {
    if (x.clause == "phase_monotonic") {
      EXPECT_FALSE(x.passed);
      EXPECT_NE(x.detail.find("rep_001"), std::string::npos);
    }
  }
  fs::remove_all(dir);
}

}  // namespace
}  // namespace htisim
