#include "symrank/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "symrank/errors.hpp"
#include "symrank/ffield.hpp"
#include "symrank/motivic.hpp"
#include "symrank/verify.hpp"

namespace symrank::cli {

namespace {

class UsageError : public Error {
public:
  using Error::Error;
};

// Rank-condition flags shared by `class` and `count`.
struct RankFlags {
  std::optional<int> k;
  std::optional<int> at_most;
  std::vector<int> range;
  bool projective = false;

  void attach(CLI::App& cmd) {
    auto* exact = cmd.add_option("--k", k, "exact rank");
    auto* le = cmd.add_option("--at-most", at_most, "rank at most K");
    auto* rg = cmd.add_option("--range", range, "rank between K and L")->expected(2);
    auto* pr = cmd.add_flag("--projective", projective, "projective full-rank locus");
    exact->excludes(le)->excludes(rg)->excludes(pr);
    le->excludes(rg)->excludes(pr);
    rg->excludes(pr);
  }

  VarietyDescriptor descriptor(int n) const {
    if (k) {
      return {n, RankCondition::exact(*k)};
    }
    if (at_most) {
      return {n, RankCondition::at_most(*at_most)};
    }
    if (!range.empty()) {
      return {n, RankCondition::range(range[0], range[1])};
    }
    if (projective) {
      return {n, RankCondition::projective_full_rank()};
    }
    throw UsageError("one of --k, --at-most, --range, --projective is required");
  }
};

void require_format(const std::string& format, std::initializer_list<const char*> allowed,
                    const std::string& command) {
  for (const char* a : allowed) {
    if (format == a) {
      return;
    }
  }
  throw UsageError("format '" + format + "' is not available for '" + command + "'");
}

std::uint64_t default_budget() {
  if (const char* env = std::getenv(kBudgetEnv)) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw UsageError(std::string(kBudgetEnv) + " must be a positive integer");
    }
  }
  return kDefaultBudget;
}

std::string latex_table(int max_n) {
  std::ostringstream out;
  out << "\\begin{tabular}{rrl}\n"
      << "$n$ & $k$ & $[\\mathrm{Sym}^{n,k}]$ \\\\\n"
      << "\\hline\n";
  for (int n = 0; n <= max_n; ++n) {
    for (int k = 0; k <= n; ++k) {
      out << n << " & " << k << " & $" << class_exact(n, k).value.to_latex() << "$ \\\\\n";
    }
  }
  out << "\\end{tabular}\n";
  return out.str();
}

int cmd_class(int n, const RankFlags& flags, const std::string& route, const std::string& format,
              std::ostream& out) {
  require_format(format, {"text", "json", "latex"}, "class");
  const Derivation source = route == "closed-form" ? Derivation::ClosedForm : Derivation::Recursion;
  const MotivicClass c = class_of(flags.descriptor(n), source);
  if (format == "json") {
    out << c.to_json().dump(2) << '\n';
  } else if (format == "latex") {
    out << c.value.to_latex() << '\n';
  } else {
    out << c.value.to_string() << '\n';
  }
  return kSuccess;
}

int cmd_table(int max_n, const std::string& format, std::ostream& out) {
  if (max_n < 0) {
    throw UsageError("--max-n must be >= 0");
  }
  if (format == "latex") {
    out << latex_table(max_n);
    return kSuccess;
  }
  nlohmann::json rows = nlohmann::json::array();
  if (format == "csv") {
    out << "n,k,polynomial\n";
  }
  for (int n = 0; n <= max_n; ++n) {
    for (int k = 0; k <= n; ++k) {
      const MotivicClass c = class_exact(n, k);
      if (format == "json") {
        rows.push_back(c.to_json());
      } else if (format == "csv") {
        out << n << ',' << k << ',' << c.value.to_string() << '\n';
      } else {
        out << '(' << n << ',' << k << "): " << c.value.to_string() << '\n';
      }
    }
  }
  if (format == "json") {
    out << rows.dump(2) << '\n';
  }
  return kSuccess;
}

std::uint64_t brute_force_count(const VarietyDescriptor& d, const PrimeField& field,
                                std::uint64_t budget, unsigned threads) {
  if (d.rank.kind == RankCondition::Kind::ProjectiveFullRank) {
    return projective_count(d.n, field, budget, threads);
  }
  const RankHistogram h = parallel_rank_counts(d.n, field, threads, budget);
  int lo = d.rank.k;
  int hi = d.rank.kind == RankCondition::Kind::Range ? d.rank.l : d.rank.k;
  if (d.rank.kind == RankCondition::Kind::AtMost) {
    lo = 0;
  }
  std::uint64_t total = 0;
  for (int m = std::max(lo, 0); m <= std::min(hi, d.n); ++m) {
    total += h.counts[static_cast<std::size_t>(m)];
  }
  return total;
}

int cmd_count(int n, const RankFlags& flags, long long q, bool brute, const std::string& format,
              std::uint64_t budget, unsigned threads, std::ostream& out) {
  require_format(format, {"text", "json"}, "count");
  if (q < 2) {
    throw UsageError("--q must be >= 2");
  }
  const VarietyDescriptor d = flags.descriptor(n);
  const MotivicClass c = class_of(d);
  const std::string formula = point_count(c, mpz_class(static_cast<long>(q))).get_str();
  if (!brute) {
    if (format == "json") {
      nlohmann::json j = c.to_json();
      j["q"] = q;
      j["formula"] = formula;
      out << j.dump(2) << '\n';
    } else {
      out << formula << '\n';
    }
    return kSuccess;
  }
  if (!PrimeField::is_supported_modulus(q)) {
    throw OddPrimeRequired(q);
  }
  const std::string counted =
      std::to_string(brute_force_count(d, PrimeField(static_cast<int>(q)), budget, threads));
  const bool match = counted == formula;
  if (format == "json") {
    nlohmann::json j = c.to_json();
    j["q"] = q;
    j["formula"] = formula;
    j["brute_force"] = counted;
    j["match"] = match;
    out << j.dump(2) << '\n';
  } else {
    out << "formula: " << formula << '\n'
        << "brute force: " << counted << '\n'
        << (match ? "MATCH" : "MISMATCH") << '\n';
  }
  return match ? kSuccess : kVerificationFailed;
}

struct FiberRow {
  int r;
  int s;
  std::uint64_t count;
  mpz_class expected;
  bool match() const { return expected == mpz_class(static_cast<unsigned long>(count)); }
};

int cmd_fibers(int n, int p, const std::string& format, std::uint64_t budget, unsigned threads,
               std::ostream& out) {
  require_format(format, {"text", "json", "csv"}, "fibers");
  if (n < 1) {
    throw UsageError("--n must be >= 1");
  }
  const PrimeField field(p);
  const FiberCensus census = fiber_census(n, field, budget, threads);
  const RankHistogram minors = enumerate_rank_counts(n - 1, field, budget);

  std::map<std::pair<int, int>, FiberRow> rows;
  mpz_class fiber;
  mpz_ui_pow_ui(fiber.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(n));
  for (int r = 0; r < n; ++r) {
    const mpz_class weight(static_cast<unsigned long>(minors.counts[static_cast<std::size_t>(r)]));
    mpz_class pr;
    mpz_ui_pow_ui(pr.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(r));
    const mpz_class per_minor[3] = {pr, pr * (p - 1), fiber - pr * p};
    for (int s = r; s <= std::min(r + 2, n); ++s) {
      rows[{r, s}] = {r, s, census.at(r, s), per_minor[s - r] * weight};
    }
  }
  for (const auto& [key, count] : census.table) {
    if (!rows.contains(key)) {
      rows[key] = {key.first, key.second, count, 0};
    }
  }

  bool all_match = true;
  nlohmann::json json_rows = nlohmann::json::array();
  if (format == "csv") {
    out << "n,p,minor_rank,full_rank,count,expected,verdict\n";
  } else if (format == "text") {
    out << "minor_rank full_rank count expected verdict\n";
  }
  for (const auto& [key, row] : rows) {
    const char* verdict = row.match() ? "MATCH" : "MISMATCH";
    all_match = all_match && row.match();
    if (format == "csv") {
      out << n << ',' << p << ',' << row.r << ',' << row.s << ',' << row.count << ','
          << row.expected.get_str() << ',' << verdict << '\n';
    } else if (format == "text") {
      out << row.r << ' ' << row.s << ' ' << row.count << ' ' << row.expected.get_str() << ' '
          << verdict << '\n';
    } else {
      json_rows.push_back({{"minor_rank", row.r},
                           {"full_rank", row.s},
                           {"count", row.count},
                           {"expected", row.expected.get_str()},
                           {"verdict", verdict}});
    }
  }
  if (format == "json") {
    out << nlohmann::json{{"n", n}, {"p", p}, {"rows", json_rows}, {"all_match", all_match}}.dump(2)
        << '\n';
  }
  return all_match ? kSuccess : kVerificationFailed;
}

int cmd_decompose(int n, int k, const std::string& format, std::ostream& out) {
  require_format(format, {"text", "json"}, "decompose");
  if (n < 0 || k < 0 || k > n) {
    throw UsageError("decompose needs 0 <= k <= n");
  }
  const auto summands = tate_decomposition(class_exact(n, k));
  const bool candidate = n > 1 && k > 0;
  if (format == "json") {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& s : summands) {
      list.push_back(
          {{"twist", s.twist}, {"shift", s.shift}, {"multiplicity", s.multiplicity.get_str()}});
    }
    out << nlohmann::json{{"n", n}, {"k", k}, {"candidate", candidate}, {"summands", list}}.dump(2)
        << '\n';
    return kSuccess;
  }
  if (candidate) {
    out << "# candidate decomposition (minimal-shift convention)\n";
  }
  for (const auto& s : summands) {
    out << s.to_string() << '\n';
  }
  return kSuccess;
}

int cmd_verify(int max_n, const std::vector<int>& primes, const std::string& report_path,
               const std::string& format, std::uint64_t budget, unsigned threads,
               std::ostream& out) {
  require_format(format, {"text", "json"}, "verify");
  if (max_n < 0) {
    throw UsageError("--max-n must be >= 0");
  }
  for (int p : primes) {
    if (!PrimeField::is_supported_modulus(p)) {
      throw OddPrimeRequired(p);
    }
  }
  VerifyLimits limits;
  limits.max_n = max_n;
  limits.primes = primes;
  limits.budget = budget;
  limits.threads = threads;
  const VerificationReport report = verify_all(limits);
  const std::string json = report.to_json().dump(2);
  if (!report_path.empty()) {
    std::ofstream file(report_path);
    if (!file) {
      throw UsageError("cannot write report to " + report_path);
    }
    file << json << '\n';
  }
  if (format == "json") {
    out << json << '\n';
  } else {
    out << report.summary_table();
  }
  return report.ok() ? kSuccess : kVerificationFailed;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Classes of rank loci of symmetric matrices in the Grothendieck ring, with "
               "finite-field cross-checks",
               "symrank"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string format = "text";
  std::uint64_t budget = 0;
  unsigned threads = std::max(1U, std::thread::hardware_concurrency());
  app.add_option("--format", format, "text, json, csv or latex")
      ->check(CLI::IsMember({"text", "json", "csv", "latex"}));
  auto* budget_opt = app.add_option("--budget", budget, "maximum matrix visits per enumeration")
                         ->check(CLI::PositiveNumber);
  app.add_option("--threads", threads, "enumeration worker threads")->check(CLI::PositiveNumber);

  int n = 0;
  RankFlags class_flags;
  std::string route = "recursion";
  auto* class_cmd = app.add_subcommand("class", "print the class of a rank locus");
  class_cmd->add_option("--n", n, "matrix size")->required();
  class_flags.attach(*class_cmd);
  class_cmd->add_option("--route", route, "derivation of the exact-rank pieces")
      ->check(CLI::IsMember({"recursion", "closed-form"}));

  int max_n = 0;
  auto* table_cmd = app.add_subcommand("table", "classes of all exact-rank loci up to a size");
  table_cmd->add_option("--max-n", max_n, "largest matrix size")->required();

  RankFlags count_flags;
  long long q = 0;
  bool brute = false;
  auto* count_cmd = app.add_subcommand("count", "number of F_q points of a rank locus");
  count_cmd->add_option("--n", n, "matrix size")->required();
  count_flags.attach(*count_cmd);
  count_cmd->add_option("--q", q, "field size")->required();
  count_cmd->add_flag("--brute-force", brute, "also enumerate over F_q (odd prime q)");

  int p = 0;
  auto* fibers_cmd = app.add_subcommand("fibers", "census of (minor rank, rank) pairs");
  fibers_cmd->add_option("--n", n, "matrix size")->required();
  fibers_cmd->add_option("--p", p, "odd prime")->required();

  int k = 0;
  auto* decompose_cmd = app.add_subcommand("decompose", "candidate Tate summands of a class");
  decompose_cmd->add_option("--n", n, "matrix size")->required();
  decompose_cmd->add_option("--k", k, "rank")->required();

  int verify_max_n = 12;
  std::vector<int> primes{3, 5, 7};
  std::string report_path;
  auto* verify_cmd = app.add_subcommand("verify", "run every cross-check");
  verify_cmd->add_option("--max-n", verify_max_n, "largest matrix size")->capture_default_str();
  verify_cmd->add_option("--primes", primes, "odd primes for enumeration")->delimiter(',');
  verify_cmd->add_option("--report", report_path, "also write the JSON report here");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }

  try {
    if (budget_opt->count() == 0) {
      budget = default_budget();
    }
    if (class_cmd->parsed()) {
      return cmd_class(n, class_flags, route, format, out);
    }
    if (table_cmd->parsed()) {
      return cmd_table(max_n, format, out);
    }
    if (count_cmd->parsed()) {
      return cmd_count(n, count_flags, q, brute, format, budget, threads, out);
    }
    if (fibers_cmd->parsed()) {
      return cmd_fibers(n, p, format, budget, threads, out);
    }
    if (decompose_cmd->parsed()) {
      return cmd_decompose(n, k, format, out);
    }
    if (verify_cmd->parsed()) {
      return cmd_verify(verify_max_n, primes, report_path, format, budget, threads, out);
    }
  } catch (const BudgetExceeded& e) {
    err << "error: " << e.what() << '\n';
    return kBudgetRefused;
  } catch (const OddPrimeRequired& e) {
    err << "error: OddPrimeRequired: " << e.what()
        << " (formula evaluation accepts any q >= 2; enumeration is limited to prime fields)\n";
    return kUsageError;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const InvalidRange& e) {
    err << "error: InvalidRange: " << e.what() << '\n';
    return kUsageError;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const Error& e) {
    err << "internal error: " << e.what() << '\n';
    return kVerificationFailed;
  }
  return kUsageError;
}

} // namespace symrank::cli
