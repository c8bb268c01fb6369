#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace difftaylor {

// Size bounds for one randomized instance. Shrinking lowers them one at a time.
struct Bounds {
  std::size_t m = 2;
  unsigned trunc = 6;
  unsigned degree = 2;

  friend bool operator==(const Bounds&, const Bounds&) = default;
};

struct CheckConfig {
  std::uint64_t seed = 1;
  std::vector<std::string> checks;  // empty: every registered check
  std::size_t instances = 200;
  Bounds bounds;
  std::vector<std::string> fields{"Q", "F2", "F3", "F5"};
  std::string inject_fault;  // "" or "binomial"
  unsigned threads = 0;      // 0: hardware concurrency
  std::size_t max_failures = 3;
};

struct CheckFailure {
  std::uint64_t seed = 0;
  std::string field;
  Bounds bounds;
  nlohmann::ordered_json inputs;
  nlohmann::ordered_json expected;
  nlohmann::ordered_json actual;
  int order = -1;  // comparison order; -1 when the comparison is exact equality of non-series values
};

struct CheckReport {
  std::string check_name;
  std::size_t instances = 0;
  std::vector<CheckFailure> failures;

  bool passed() const noexcept { return failures.empty(); }
  nlohmann::ordered_json to_json() const;
};

struct CheckInfo {
  std::string name;
  std::string description;
};

// Registration order is report order.
const std::vector<CheckInfo>& registered_checks();

// Reads a CheckConfig document; every key is optional. Throws
// ValidationError on malformed input and on unknown check names.
CheckConfig parse_check_config(const nlohmann::json& doc);

// Runs the configured checks, one check per worker thread. Each check draws
// and runs its instances in sequence, so reports depend only on the config
// and never on the thread count. Throws std::invalid_argument on an unknown
// check name or field.
std::vector<CheckReport> run_suite(const CheckConfig& config);

// Re-runs a single instance, e.g. one taken from a failure record.
CheckFailure replay(const std::string& check, std::uint64_t seed, const std::string& field,
                    const Bounds& bounds, bool* failed);

// One JSON object per line, in report order.
std::string reports_to_jsonl(const std::vector<CheckReport>& reports);

}  // namespace difftaylor
