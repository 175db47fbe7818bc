#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace htisim {

/// Outcome of one named proof-obligation clause.
struct Verdict {
  std::string clause;
  bool passed = true;
  std::string detail;
};

/// Folds many per-item checks into one verdict per clause, keeping the
/// first failure's detail and a failure count. Clause order is first-seen order.
class VerdictLog {
 public:
  void record(std::string_view clause, bool passed, std::string_view detail = {});
  /// As record(), but `detail()` is only evaluated on failure.
  template <typename DetailFn>
  void check(std::string_view clause, bool passed, DetailFn&& detail) {
    if (passed) {
      record(clause, true);
    } else {
      record(clause, false, detail());
    }
  }
  void record(const Verdict& verdict) { record(verdict.clause, verdict.passed, verdict.detail); }
  void record_all(const std::vector<Verdict>& verdicts) {
    for (const auto& v : verdicts) record(v);
  }

  /// One verdict per clause; a failed clause's detail is "<first detail> (n failures)".
  std::vector<Verdict> verdicts() const;
  bool all_passed() const noexcept;

 private:
  struct Entry {
    std::string clause;
    std::int64_t checks = 0;
    std::int64_t failures = 0;
    std::string first_failure;
  };
  std::vector<Entry> entries_;
};

bool all_passed(const std::vector<Verdict>& verdicts) noexcept;

}  // namespace htisim
