#pragma once

// Identity registry (data/registry.json) and the verification harness.
//
// A record pairs two recipes. A recipe is {"op": name, "args": {...}}; numeric
// ops evaluate to a Real, series ops to an exact QSeries. Methods:
//   numeric-compare  digits of agreement between lhs and rhs >= target
//   exact-series     coefficients equal for every exponent <= target
//   multiplicative   lhs coefficients multiplicative up to target
//   rational-ratio   lhs / rhs / pi^pi_power recovers the rational "expected"
//   monotone-limit   |lhs(v) - rhs| strictly decreasing along "sequence"

#include "elv/precision.hpp"
#include "elv/qseries.hpp"

#include "json.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace elv {

using json = nlohmann::ordered_json;

struct IdentityRecord {
  std::string id;
  std::string description;
  std::string method;
  std::string anchor;  ///< the identity this record stands for; shared by related records
  int target = 40;
  json lhs;
  json rhs;
  json extra;  ///< method-specific fields (expected, pi_power, sequence, note)
};

class Registry {
 public:
  static Registry load(const std::string& path);
  static Registry from_json(const json& doc);
  const std::vector<IdentityRecord>& records() const { return records_; }
  const IdentityRecord& find(std::string_view id) const;
  std::vector<const IdentityRecord*> matching(std::string_view pattern) const;

 private:
  std::vector<IdentityRecord> records_;
};

/// $ELV_REGISTRY if set, else the registry shipped in the data directory.
std::string default_registry_path();
const Registry& default_registry();

/// Shell-style match with '*' and '?'.
bool glob_match(std::string_view pattern, std::string_view text);

struct RunOptions {
  std::optional<int> digits;  ///< overrides every record's target
  int guard = 20;
  unsigned threads = 1;
};

struct VerificationReport {
  std::string id;
  std::string status;  ///< pass | fail | shortfall
  std::optional<int> digits_achieved;
  std::optional<std::string> first_mismatch;
  std::string lhs_value;  ///< verified digits plus a 10-digit unverified tail
  std::string rhs_value;
  int target = 0;
  std::string detail;
  double wall_time = 0.0;

  friend bool operator==(const VerificationReport&, const VerificationReport&) = default;
};

json to_json(const VerificationReport& r);
VerificationReport report_from_json(const json& j);

/// Runs one record; computation errors become status fail with the message in
/// detail. A shortfall is retried once with doubled guard digits.
VerificationReport verify(const IdentityRecord& record, const RunOptions& options);

struct RunSummary {
  std::vector<VerificationReport> reports;  ///< ordered by id
  int passed = 0;
  int failed = 0;
  int shortfall = 0;
};

/// Runs every record whose id matches pattern, `threads` records at a time.
RunSummary run_all(const Registry& registry, std::string_view pattern, const RunOptions& options);

/// Recipe evaluation, exposed for the CLI and tests.
Real evaluate_recipe(const json& recipe, const PrecisionContext& ctx);
QSeries expand_recipe(const json& recipe, long N);

}  // namespace elv
