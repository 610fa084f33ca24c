#include "symrank/verify.hpp"

#include <algorithm>
#include <iomanip>
#include <map>
#include <sstream>

#include "symrank/errors.hpp"
#include "symrank/motivic.hpp"

namespace symrank {

namespace {

using Params = std::vector<std::pair<std::string, long long>>;
using Poly = LaurentPolynomial;

std::string skip_reason(const mpz_class& required, std::uint64_t budget) {
  return "BudgetExceeded: requires " + required.get_str() + " matrix visits, budget " +
         std::to_string(budget);
}

bool in_budget(const mpz_class& required, std::uint64_t budget) {
  try {
    require_budget(required, budget);
    return true;
  } catch (const BudgetExceeded&) {
    return false;
  }
}

std::vector<PrimeField> fields_for(const std::vector<int>& primes) {
  std::vector<PrimeField> out;
  out.reserve(primes.size());
  for (int p : primes) {
    out.emplace_back(p);
  }
  return out;
}

mpz_class big(std::uint64_t x) { return mpz_class(static_cast<unsigned long>(x)); }

mpz_class zpow(long long base, long long exp) {
  mpz_class out;
  mpz_ui_pow_ui(out.get_mpz_t(), static_cast<unsigned long>(base), static_cast<unsigned long>(exp));
  return out;
}

// Completion ranks of one minor of rank r: s = r, r + 1, r + 2.
std::map<int, mpz_class> expected_completions(int n, int p, int r) {
  std::map<int, mpz_class> out;
  const mpz_class pr = zpow(p, r);
  out[r] = pr;
  out[r + 1] = pr * (p - 1);
  out[r + 2] = zpow(p, n) - zpow(p, r + 1);
  std::erase_if(out, [n](const auto& kv) { return kv.first > n || kv.second == 0; });
  return out;
}

nlohmann::json limits_json(int max_n, const std::vector<int>& primes, std::uint64_t budget) {
  return {{"max_n", max_n}, {"primes", primes}, {"budget", budget}};
}

} // namespace

std::string status_name(CheckStatus status) {
  switch (status) {
  case CheckStatus::Pass:
    return "pass";
  case CheckStatus::Fail:
    return "fail";
  case CheckStatus::Skipped:
    return "skipped";
  }
  return "?";
}

CheckResult CheckResult::compare(std::string id, Params params, std::string expected,
                                 std::string actual) {
  CheckResult r;
  r.check_id = std::move(id);
  r.params = std::move(params);
  r.status = expected == actual ? CheckStatus::Pass : CheckStatus::Fail;
  r.expected = std::move(expected);
  r.actual = std::move(actual);
  return r;
}

CheckResult CheckResult::skipped(std::string id, Params params, std::string reason) {
  CheckResult r;
  r.check_id = std::move(id);
  r.params = std::move(params);
  r.status = CheckStatus::Skipped;
  r.reason = std::move(reason);
  return r;
}

nlohmann::json CheckResult::to_json() const {
  nlohmann::json p = nlohmann::json::object();
  for (const auto& [name, value] : params) {
    p[name] = value;
  }
  nlohmann::json j = {{"check_id", check_id}, {"params", p}, {"status", status_name(status)}};
  if (status == CheckStatus::Skipped) {
    j["reason"] = reason;
  } else {
    j["expected"] = expected;
    j["actual"] = actual;
  }
  return j;
}

CheckSummary VerificationReport::summary() const {
  CheckSummary s;
  for (const auto& r : results) {
    switch (r.status) {
    case CheckStatus::Pass:
      ++s.passed;
      break;
    case CheckStatus::Fail:
      ++s.failed;
      break;
    case CheckStatus::Skipped:
      ++s.skipped;
      break;
    }
  }
  return s;
}

void VerificationReport::extend(const VerificationReport& other) {
  results.insert(results.end(), other.results.begin(), other.results.end());
  for (const auto& [key, value] : other.config.items()) {
    config[key] = value;
  }
}

nlohmann::json VerificationReport::to_json() const {
  const CheckSummary s = summary();
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : results) {
    rows.push_back(r.to_json());
  }
  return {{"config", config},
          {"summary", {{"pass", s.passed}, {"fail", s.failed}, {"skipped", s.skipped}}},
          {"results", rows}};
}

std::string VerificationReport::summary_table() const {
  // Ids in order of first appearance.
  std::vector<std::string> order;
  std::map<std::string, CheckSummary> by_id;
  for (const auto& r : results) {
    auto [it, inserted] = by_id.try_emplace(r.check_id);
    if (inserted) {
      order.push_back(r.check_id);
    }
    switch (r.status) {
    case CheckStatus::Pass:
      ++it->second.passed;
      break;
    case CheckStatus::Fail:
      ++it->second.failed;
      break;
    case CheckStatus::Skipped:
      ++it->second.skipped;
      break;
    }
  }
  std::size_t width = 5;
  for (const auto& id : order) {
    width = std::max(width, id.size());
  }
  std::ostringstream out;
  auto row = [&](const std::string& id, auto pass, auto fail, auto skip) {
    out << std::left << std::setw(static_cast<int>(width)) << id << std::right << std::setw(8)
        << pass << std::setw(8) << fail << std::setw(9) << skip << '\n';
  };
  row("check", "pass", "fail", "skipped");
  for (const auto& id : order) {
    const auto& s = by_id[id];
    row(id, s.passed, s.failed, s.skipped);
  }
  const CheckSummary total = summary();
  row("TOTAL", total.passed, total.failed, total.skipped);
  for (const auto& r : results) {
    if (r.status != CheckStatus::Fail) {
      continue;
    }
    out << "FAIL " << r.check_id;
    for (const auto& [name, value] : r.params) {
      out << ' ' << name << '=' << value;
    }
    out << ": expected " << r.expected << ", got " << r.actual << '\n';
  }
  return out.str();
}

VerificationReport verify_formula_vs_recursion(int max_n) {
  if (max_n < 0) {
    throw InvalidArgument("max_n must be >= 0");
  }
  VerificationReport report;
  report.config = {{"symbolic_max_n", max_n}};
  auto& out = report.results;
  for (int n = 0; n <= max_n; ++n) {
    for (int k = 0; k <= n; ++k) {
      out.push_back(CheckResult::compare("closed_form_vs_recursion", {{"n", n}, {"k", k}},
                                         class_exact(n, k).value.to_string(),
                                         closed_form(n, k).value.to_string()));
    }
    for (int k = 1; k < n; ++k) {
      const Params params{{"n", n}, {"k", k}};
      try {
        out.push_back(CheckResult::compare("filtration_identity", params,
                                           class_range(n, 0, k).value.to_string(),
                                           class_at_most(n, k).value.to_string()));
      } catch (const IdentityViolation& e) {
        CheckResult r = CheckResult::compare("filtration_identity", params, "identity holds",
                                             e.what());
        out.push_back(std::move(r));
      }
    }
    if (n >= 1) {
      out.push_back(CheckResult::compare("full_rank_product", {{"n", n}},
                                         class_exact(n, n).value.to_string(),
                                         full_rank_product(n).value.to_string()));
    }
    Poly total;
    for (int k = 0; k <= n; ++k) {
      total = total + class_exact(n, k).value;
    }
    out.push_back(CheckResult::compare("affine_partition", {{"n", n}},
                                       Poly::monomial(1, n * (n + 1) / 2).to_string(),
                                       total.to_string()));
  }
  return report;
}

VerificationReport verify_point_counts(int max_n, const std::vector<int>& primes,
                                       std::uint64_t budget, unsigned threads) {
  const auto fields = fields_for(primes);
  VerificationReport report;
  report.config = {{"point_counts", limits_json(max_n, primes, budget)}};
  for (const auto& field : fields) {
    const int p = field.modulus();
    for (int n = 0; n <= max_n; ++n) {
      const mpz_class size = space_size(n, p);
      if (!in_budget(size, budget)) {
        for (int k = 0; k <= n; ++k) {
          report.results.push_back(CheckResult::skipped(
              "point_count", {{"n", n}, {"p", p}, {"k", k}}, skip_reason(size, budget)));
        }
        continue;
      }
      const RankHistogram h = parallel_rank_counts(n, field, threads, budget);
      for (int k = 0; k <= n; ++k) {
        report.results.push_back(CheckResult::compare(
            "point_count", {{"n", n}, {"p", p}, {"k", k}},
            point_count(class_exact(n, k), p).get_str(),
            std::to_string(h.counts[static_cast<std::size_t>(k)])));
      }
    }
  }
  return report;
}

VerificationReport verify_fibers(int max_n, const std::vector<int>& primes, std::uint64_t budget,
                                 unsigned threads) {
  const auto fields = fields_for(primes);
  VerificationReport report;
  report.config = {{"fibers", limits_json(max_n, primes, budget)}};
  auto& out = report.results;
  for (const auto& field : fields) {
    const int p = field.modulus();
    for (int n = 1; n <= max_n; ++n) {
      const mpz_class size = space_size(n, p);
      std::vector<std::pair<int, int>> buckets;
      for (int r = 0; r < n; ++r) {
        for (int s = r; s <= std::min(r + 2, n); ++s) {
          buckets.emplace_back(r, s);
        }
      }
      if (!in_budget(size, budget)) {
        const std::string why = skip_reason(size, budget);
        for (const auto& [r, s] : buckets) {
          out.push_back(CheckResult::skipped("fiber_bucket",
                                             {{"n", n}, {"p", p}, {"r", r}, {"s", s}}, why));
        }
        for (const char* id : {"fiber_support", "completion_buckets", "fiber_full_marginal",
                               "fiber_minor_marginal"}) {
          out.push_back(CheckResult::skipped(id, {{"n", n}, {"p", p}}, why));
        }
        continue;
      }

      const FiberCensus census = fiber_census(n, field, budget, threads);
      const RankHistogram minors = enumerate_rank_counts(n - 1, field, budget);
      for (const auto& [r, s] : buckets) {
        const mpz_class per_minor = expected_completions(n, p, r)[s];
        const mpz_class expected =
            per_minor * big(minors.counts[static_cast<std::size_t>(r)]);
        out.push_back(CheckResult::compare("fiber_bucket", {{"n", n}, {"p", p}, {"r", r}, {"s", s}},
                                           expected.get_str(), std::to_string(census.at(r, s))));
      }

      std::size_t stray = 0;
      for (const auto& [key, count] : census.table) {
        if (key.second < key.first || key.second > key.first + 2) {
          stray += 1;
        }
      }
      out.push_back(CheckResult::compare("fiber_support", {{"n", n}, {"p", p}},
                                         "0 buckets outside s in {r, r+1, r+2}",
                                         std::to_string(stray) +
                                             " buckets outside s in {r, r+1, r+2}"));

      // Every single minor, not just the aggregate, has the predicted split.
      std::uint64_t deviating = 0;
      for_each_matrix(n - 1, field, budget, [&](const SymMatrix& y) {
        const auto want = expected_completions(n, p, rank(y, field));
        const auto got = completions_census(y, field, budget);
        bool same = want.size() == got.size();
        for (const auto& [s, c] : got) {
          auto it = want.find(s);
          same = same && it != want.end() && it->second == big(c);
        }
        deviating += same ? 0 : 1;
      });
      out.push_back(CheckResult::compare("completion_buckets", {{"n", n}, {"p", p}},
                                         "0 deviating minors",
                                         std::to_string(deviating) + " deviating minors"));

      const RankHistogram full = parallel_rank_counts(n, field, threads, budget);
      nlohmann::json want_full = full.counts;
      nlohmann::json got_full = census.full_rank_marginal();
      out.push_back(CheckResult::compare("fiber_full_marginal", {{"n", n}, {"p", p}},
                                         want_full.dump(), got_full.dump()));

      std::vector<std::string> want_minor;
      std::vector<std::string> got_minor;
      const auto marginal = census.minor_rank_marginal();
      const mpz_class fiber = zpow(p, n);
      for (std::size_t r = 0; r < minors.counts.size(); ++r) {
        want_minor.push_back(
            mpz_class(fiber * big(minors.counts[r])).get_str());
        got_minor.push_back(std::to_string(r < marginal.size() ? marginal[r] : 0));
      }
      out.push_back(CheckResult::compare("fiber_minor_marginal", {{"n", n}, {"p", p}},
                                         nlohmann::json(want_minor).dump(),
                                         nlohmann::json(got_minor).dump()));
    }
  }
  return report;
}

VerificationReport verify_projective(int max_n, const std::vector<int>& primes,
                                     std::uint64_t budget, unsigned threads) {
  const auto fields = fields_for(primes);
  VerificationReport report;
  report.config = {{"projective", limits_json(max_n, primes, budget)}};
  auto& out = report.results;
  const Poly units = Poly::lefschetz() - Poly::one();
  for (int n = 1; n <= max_n; ++n) {
    const Poly full = class_exact(n, n).value;
    std::string actual;
    try {
      actual = (div_exact(full, units) * units).to_string();
    } catch (const NonzeroRemainder& e) {
      actual = e.what();
    }
    out.push_back(CheckResult::compare("projective_divisibility", {{"n", n}}, full.to_string(),
                                       actual));
  }
  for (const auto& field : fields) {
    const int p = field.modulus();
    for (int n = 1; n <= max_n; ++n) {
      const mpz_class size = space_size(n, p);
      const Params params{{"n", n}, {"p", p}};
      if (!in_budget(size, budget)) {
        out.push_back(CheckResult::skipped("projective_count", params, skip_reason(size, budget)));
        continue;
      }
      out.push_back(CheckResult::compare("projective_count", params,
                                         point_count(projective_full_rank(n), p).get_str(),
                                         std::to_string(projective_count(n, field, budget,
                                                                         threads))));
    }
  }
  return report;
}

VerificationReport verify_specializations(int max_n) {
  VerificationReport report;
  report.config = {{"symbolic_max_n", max_n}};
  for (int n = 0; n <= max_n; ++n) {
    for (int k = 0; k <= n; ++k) {
      const MotivicClass c = class_exact(n, k);
      const Params params{{"n", n}, {"k", k}};
      const auto summands = tate_decomposition(c);
      const bool proper = std::all_of(summands.begin(), summands.end(),
                                      [](const TateSummand& s) { return s.is_proper(); });
      report.results.push_back(CheckResult::compare(
          "tate_reconstruction", params, c.value.to_string() + " (all proper)",
          signed_sum(summands).to_string() + (proper ? " (all proper)" : " (improper summand)")));
      report.results.push_back(CheckResult::compare("euler_characteristic", params,
                                                    k == 0 ? "1" : "0",
                                                    euler_characteristic(c).get_str()));
    }
  }
  return report;
}

VerificationReport verify_all(const VerifyLimits& limits) {
  VerificationReport report = verify_formula_vs_recursion(limits.max_n);
  report.extend(verify_specializations(limits.max_n));
  report.extend(verify_point_counts(limits.max_n, limits.primes, limits.budget, limits.threads));
  report.extend(verify_fibers(limits.max_n, limits.primes, limits.budget, limits.threads));
  report.extend(verify_projective(limits.max_n, limits.primes, limits.budget, limits.threads));
  return report;
}

} // namespace symrank
