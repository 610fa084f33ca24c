#pragma once

#include <map>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

#include "symrank/laurent.hpp"

namespace symrank {

/// Which rank locus of n x n symmetric matrices a class describes.
struct RankCondition {
  enum class Kind { Exact, AtMost, Range, ProjectiveFullRank };

  Kind kind = Kind::Exact;
  int k = 0;
  int l = 0; // upper end, Range only

  static RankCondition exact(int k) { return {Kind::Exact, k, k}; }
  static RankCondition at_most(int k) { return {Kind::AtMost, k, k}; }
  static RankCondition range(int k, int l);
  static RankCondition projective_full_rank() { return {Kind::ProjectiveFullRank, 0, 0}; }

  friend bool operator==(const RankCondition&, const RankCondition&) = default;
};

struct VarietyDescriptor {
  int n = 0;
  RankCondition rank;

  /// Throws InvalidArgument for n < 0 or projective with n < 1, InvalidRange
  /// for an inverted range.
  VarietyDescriptor(int n, RankCondition rank);

  std::string to_string() const;
  friend bool operator==(const VarietyDescriptor&, const VarietyDescriptor&) = default;
};

/// How a class value was obtained.
enum class Route { Recursion, ClosedForm, Quotient, Sum };

std::string route_name(Route route);

struct MotivicClass {
  VarietyDescriptor descriptor;
  LaurentPolynomial value;
  Route route;

  nlohmann::json to_json() const;
};

/// F(twist)[shift]^{multiplicity}; contributes (-1)^shift * m * L^twist in K_0.
struct TateSummand {
  int twist = 0;
  int shift = 0;
  mpz_class multiplicity = 1;

  bool is_proper() const { return shift >= 2 * twist; }
  std::string to_string() const;
  friend bool operator==(const TateSummand&, const TateSummand&) = default;
};

/// Memo table for the exact-rank recursion
///
///   [Sym^{n,k}] = (L^n - L^{k-1}) [Sym^{n-1,k-2}]
///               + (L^k - L^{k-1}) [Sym^{n-1,k-1}]
///               + L^k [Sym^{n-1,k}],
///
/// seeded with [Sym^{n,0}] = 1 and [Sym^{1,1}] = L - 1. Lookups and fills are
/// guarded by a mutex; concurrent fills of one key store equal values.
class RankClassTable {
public:
  RankClassTable() = default;
  RankClassTable(const RankClassTable&) = delete;
  RankClassTable& operator=(const RankClassTable&) = delete;

  LaurentPolynomial exact(int n, int k);
  std::size_t cached_entries() const;

  /// Process-wide table used by the free functions below.
  static RankClassTable& shared();

private:
  std::map<std::pair<int, int>, LaurentPolynomial> cache_;
  mutable std::mutex mutex_;
};

MotivicClass class_exact(int n, int k);
MotivicClass class_exact(int n, int k, RankClassTable& table);

/// Sum of the exact classes of rank <= k. For 0 < k < n it also checks the
/// filtration identity
///   [Sym^{n,<=k}] = L^n [Sym^{n-1,<=k-2}] + L^k [Sym^{n-1,k-1}] + L^k [Sym^{n-1,k}]
/// and throws IdentityViolation on mismatch.
MotivicClass class_at_most(int n, int k);

/// Sum of exact classes with k <= rank <= l; InvalidRange if k > l.
MotivicClass class_range(int n, int k, int l);

/// Product formula: all numerator factors L^{2i} and (L^{n-i} - 1) are
/// multiplied first, then one exact division by prod (L^{2i} - 1).
MotivicClass closed_form(int n, int k);

/// Class of invertible n x n symmetric matrices as a product of binomials
/// (L^{n+1} - L^{2i}) for even n, (L^n - L^{2i}) for odd n.
MotivicClass full_rank_product(int n);

/// [PSym^{n,n}] = [Sym^{n,n}] / (L - 1).
MotivicClass projective_full_rank(int n);

/// Source of the exact-rank pieces when building a class for a descriptor.
enum class Derivation { Recursion, ClosedForm };

/// Class of any descriptor, with exact pieces taken from `source`.
MotivicClass class_of(const VarietyDescriptor& d, Derivation source = Derivation::Recursion);

/// Candidate Tate decomposition under the minimal-shift convention: a
/// positive coefficient c at L^a gives F(a)[2a]^c, a negative one gives
/// F(a)[2a+1]^{-c}. Summands are listed by descending twist. Only the n = 1
/// case is backed by a known motivic splitting; other outputs are
/// candidates. Throws NegativeExponent for classes outside Z[L].
std::vector<TateSummand> tate_decomposition(const MotivicClass& c);

/// sum (-1)^shift * m * L^twist.
LaurentPolynomial signed_sum(const std::vector<TateSummand>& summands);

/// Specialization L -> 1.
mpz_class euler_characteristic(const MotivicClass& c);

/// Specialization L -> q; equals #X(F_q) for odd prime powers q.
mpz_class point_count(const MotivicClass& c, const mpz_class& q);

} // namespace symrank
