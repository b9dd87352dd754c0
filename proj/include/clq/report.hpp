#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace clq {

/// Outcome of one family of exact checks. Witnesses are capped; the total
/// number of violations is kept separately.
struct CheckReport {
  static constexpr std::size_t kMaxWitnesses = 16;

  std::string name;
  std::uint64_t domain_size = 0;
  std::uint64_t checked = 0;
  std::uint64_t failure_count = 0;
  std::vector<std::string> failures;
  std::string scope = "exhaustive";
  std::uint64_t elapsed_ms = 0;
  nlohmann::json details = nlohmann::json::object();

  CheckReport() = default;
  explicit CheckReport(std::string check_name, std::uint64_t domain = 0)
      : name(std::move(check_name)), domain_size(domain) {}

  bool pass() const { return failure_count == 0; }

  void fail(std::string witness) {
    ++failure_count;
    if (failures.size() < kMaxWitnesses) failures.push_back(std::move(witness));
  }

  /// Records the outcome of one case.
  void expect(bool ok, const auto& make_witness) {
    ++checked;
    if (!ok) fail(make_witness());
  }

  void merge(const CheckReport& other) {
    checked += other.checked;
    failure_count += other.failure_count;
    for (const auto& w : other.failures) {
      if (failures.size() >= kMaxWitnesses) break;
      failures.push_back(w);
    }
  }
};

inline nlohmann::json to_json(const CheckReport& r) {
  return nlohmann::json{{"name", r.name},
                        {"domain_size", r.domain_size},
                        {"checked", r.checked},
                        {"scope", r.scope},
                        {"pass", r.pass()},
                        {"failure_count", r.failure_count},
                        {"failures", r.failures},
                        {"details", r.details}};
}

/// Verdict object as emitted by the CLI. `with_timing` is off for artifact
/// files so that identical inputs produce identical bytes.
inline nlohmann::json to_verdict(const CheckReport& r, std::uint32_t q, bool with_timing) {
  nlohmann::json j{{"check", r.name},
                   {"q", q},
                   {"scope", r.scope},
                   {"pass", r.pass()},
                   {"checked", r.checked},
                   {"counterexamples", r.failures}};
  if (with_timing) j["elapsed_ms"] = r.elapsed_ms;
  return j;
}

inline bool all_pass(const std::vector<CheckReport>& reports) {
  for (const auto& r : reports)
    if (!r.pass()) return false;
  return true;
}

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  std::uint64_t elapsed_ms() const {
    return static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::milliseconds>(
                                          std::chrono::steady_clock::now() - start_)
                                          .count());
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace clq
