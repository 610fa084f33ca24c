#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "symrank/ffield.hpp"

namespace symrank {

enum class CheckStatus { Pass, Fail, Skipped };

std::string status_name(CheckStatus status);

/// One comparison between two routes to the same value.
struct CheckResult {
  std::string check_id;
  std::vector<std::pair<std::string, long long>> params;
  CheckStatus status = CheckStatus::Pass;
  std::string expected;
  std::string actual;
  std::string reason; // set for Skipped

  /// Pass iff the rendered values agree.
  static CheckResult compare(std::string id, std::vector<std::pair<std::string, long long>> params,
                             std::string expected, std::string actual);
  static CheckResult skipped(std::string id, std::vector<std::pair<std::string, long long>> params,
                             std::string reason);

  nlohmann::json to_json() const;
};

struct CheckSummary {
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::size_t skipped = 0;
};

struct VerificationReport {
  std::vector<CheckResult> results;
  nlohmann::json config = nlohmann::json::object();

  /// Tallies of `results`.
  CheckSummary summary() const;
  bool ok() const { return summary().failed == 0; }

  /// Appends other's results; configs are merged key by key.
  void extend(const VerificationReport& other);

  nlohmann::json to_json() const;
  /// Per-check-id table followed by any failures.
  std::string summary_table() const;
};

struct VerifyLimits {
  int max_n = 12;
  std::vector<int> primes{3, 5, 7};
  std::uint64_t budget = kDefaultBudget;
  unsigned threads = 1;
};

/// closed form == recursion for 0 <= k <= n <= max_n, the filtration identity
/// for 0 < k < n, full-rank products, and the affine partition identity.
VerificationReport verify_formula_vs_recursion(int max_n);

/// Exhaustive rank histograms against the classes evaluated at p.
VerificationReport verify_point_counts(int max_n, const std::vector<int>& primes,
                                       std::uint64_t budget = kDefaultBudget, unsigned threads = 1);

/// Fiber census buckets, per-minor completion counts, and marginals.
VerificationReport verify_fibers(int max_n, const std::vector<int>& primes,
                                 std::uint64_t budget = kDefaultBudget, unsigned threads = 1);

/// Divisibility of [Sym^{n,n}] by (L - 1) and projective point counts.
VerificationReport verify_projective(int max_n, const std::vector<int>& primes,
                                     std::uint64_t budget = kDefaultBudget, unsigned threads = 1);

/// Tate summand reconstruction and Euler characteristics for all classes.
VerificationReport verify_specializations(int max_n);

/// Every suite above under one set of limits.
VerificationReport verify_all(const VerifyLimits& limits);

} // namespace symrank
