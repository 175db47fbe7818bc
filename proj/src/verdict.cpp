#include "htisim/verdict.hpp"

#include <algorithm>

namespace htisim {

void VerdictLog::record(std::string_view clause, bool passed, std::string_view detail) {
  auto it = std::find_if(entries_.begin(), entries_.end(), [&](const Entry& e) { return e.clause == clause; });
  if (it == entries_.end()) {
    entries_.push_back(Entry{std::string(clause), 0, 0, {}});
    it = std::prev(entries_.end());
  }
  ++it->checks;
  if (!passed) {
    if (it->failures == 0) it->first_failure = std::string(detail);
    ++it->failures;
  }
}

std::vector<Verdict> VerdictLog::verdicts() const {
  std::vector<Verdict> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) {
    Verdict v{e.clause, e.failures == 0, {}};
    if (e.failures > 0) {
      v.detail = e.first_failure + " (" + std::to_string(e.failures) + " of " + std::to_string(e.checks) +
                 " checks failed)";
    }
    out.push_back(std::move(v));
  }
  return out;
}

bool VerdictLog::all_passed() const noexcept {
  return std::all_of(entries_.begin(), entries_.end(), [](const Entry& e) { return e.failures == 0; });
}

bool all_passed(const std::vector<Verdict>& verdicts) noexcept {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.passed; });
}

}  // namespace htisim
