#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

namespace symrank {

/// Default cap on matrix visits for one enumeration.
inline constexpr std::uint64_t kDefaultBudget = 200'000'000;
/// Cap on the p^n completions of a single minor.
inline constexpr std::uint64_t kCompletionBudget = 10'000'000;

/// F_p for an odd prime 3 <= p <= 97, with a lookup table of inverses.
class PrimeField {
public:
  /// Throws OddPrimeRequired for anything else.
  explicit PrimeField(int p);

  static bool is_supported_modulus(long long q);

  int modulus() const noexcept { return p_; }
  std::uint32_t inverse(std::uint32_t x) const { return inverse_[x]; }

private:
  int p_;
  std::vector<std::uint32_t> inverse_;
};

/// n x n symmetric matrix over F_p stored as its packed upper triangle,
/// row-major: x_11, x_12, ..., x_1n, x_22, ..., x_nn.
class SymMatrix {
public:
  using Entry = std::uint8_t;

  /// The zero matrix.
  explicit SymMatrix(int n);
  /// Throws InvalidArgument if the size is wrong or an entry is >= p.
  SymMatrix(int n, std::vector<Entry> packed, const PrimeField& field);

  static SymMatrix identity(int n);
  /// From full rows; throws InvalidArgument if not square and symmetric.
  static SymMatrix from_rows(const std::vector<std::vector<int>>& rows, const PrimeField& field);

  static std::size_t packed_size(int n) {
    return static_cast<std::size_t>(n) * static_cast<std::size_t>(n + 1) / 2;
  }

  int size() const noexcept { return n_; }
  Entry at(int i, int j) const;
  std::span<const Entry> packed() const noexcept { return entries_; }

  /// The (1,1) minor: delete the first row and column.
  SymMatrix minor() const;

private:
  std::size_t index(int i, int j) const;

  int n_;
  std::vector<Entry> entries_;
};

/// Calls `visit` on every symmetric n x n matrix in packed lexicographic
/// order. Throws BudgetExceeded before visiting anything if p^{n(n+1)/2}
/// exceeds the budget.
void for_each_matrix(int n, const PrimeField& field, std::uint64_t budget,
                     const std::function<void(const SymMatrix&)>& visit);

/// Rank by Gaussian elimination with first-nonzero pivot search.
int rank(const SymMatrix& m, const PrimeField& field);

/// counts[k] = number of symmetric n x n matrices over F_p of rank k.
struct RankHistogram {
  int n = 0;
  int p = 0;
  std::vector<std::uint64_t> counts;

  std::uint64_t total() const;
  std::string to_csv(bool header = true) const;
  nlohmann::json to_json() const;
  friend bool operator==(const RankHistogram&, const RankHistogram&) = default;
};

/// Joint count of (rank of the (1,1) minor, rank of the matrix).
struct FiberCensus {
  int n = 0;
  int p = 0;
  std::map<std::pair<int, int>, std::uint64_t> table;

  std::uint64_t total() const;
  std::uint64_t at(int minor_rank, int full_rank) const;
  /// Sum over minor rank, indexed by full rank (length n + 1).
  std::vector<std::uint64_t> full_rank_marginal() const;
  /// Sum over full rank, indexed by minor rank (length max(n, 1)).
  std::vector<std::uint64_t> minor_rank_marginal() const;
  std::string to_csv(bool header = true) const;
  nlohmann::json to_json() const;
};

/// p^{n(n+1)/2}.
mpz_class space_size(int n, int p);

/// Throws BudgetExceeded when required > budget.
void require_budget(const mpz_class& required, std::uint64_t budget);

/// Exhaustive histogram, visiting matrices in lexicographic order of the
/// packed entries with the last entry varying fastest.
RankHistogram enumerate_rank_counts(int n, const PrimeField& field,
                                    std::uint64_t budget = kDefaultBudget);

/// Splits the space into `parts` runs of whole prefix blocks: the prefix
/// length j is the least with p^j >= parts, and part i takes prefixes
/// [i * p^j / parts, (i + 1) * p^j / parts). When parts = p^j each part
/// fixes exactly one prefix. Parts are computed on up to `threads` threads;
/// the result is independent of scheduling.
std::vector<RankHistogram> partitioned_enumeration(int n, const PrimeField& field, int parts,
                                                   std::uint64_t budget = kDefaultBudget,
                                                   unsigned threads = 1);

/// Elementwise sum; all inputs must share n and p.
RankHistogram merge(std::span<const RankHistogram> parts);

/// enumerate_rank_counts spread over `threads` workers.
RankHistogram parallel_rank_counts(int n, const PrimeField& field, unsigned threads,
                                   std::uint64_t budget = kDefaultBudget);

/// Ranks of all p^n symmetric completions of the (n-1) x (n-1) minor Y,
/// i.e. every choice of x_11 and (x_12, ..., x_1n).
std::map<int, std::uint64_t> completions_census(const SymMatrix& minor, const PrimeField& field,
                                                std::uint64_t budget = kCompletionBudget);

/// Full (minor rank, rank) distribution for n >= 1; the 0 x 0 minor of a
/// 1 x 1 matrix has rank 0.
FiberCensus fiber_census(int n, const PrimeField& field, std::uint64_t budget = kDefaultBudget,
                         unsigned threads = 1);

/// Number of full-rank matrices up to nonzero scalars: #Sym^{n,n}(F_p) / (p - 1).
std::uint64_t projective_count(int n, const PrimeField& field,
                               std::uint64_t budget = kDefaultBudget, unsigned threads = 1);

} // namespace symrank
