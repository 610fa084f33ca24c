#include "symrank/motivic.hpp"

#include <algorithm>

#include "symrank/errors.hpp"

namespace symrank {

namespace {

using Poly = LaurentPolynomial;

Poly lpow(int e) { return Poly::monomial(1, e); }

// L^e - 1
Poly lpow_minus_one(int e) { return lpow(e) - Poly::one(); }

Poly sum_exact(int n, int lo, int hi, Derivation source) {
  Poly total;
  for (int m = std::max(lo, 0); m <= std::min(hi, n); ++m) {
    total = total + (source == Derivation::Recursion ? class_exact(n, m).value
                                                     : closed_form(n, m).value);
  }
  return total;
}

const char* kind_name(RankCondition::Kind kind) {
  switch (kind) {
  case RankCondition::Kind::Exact:
    return "exact";
  case RankCondition::Kind::AtMost:
    return "at_most";
  case RankCondition::Kind::Range:
    return "range";
  case RankCondition::Kind::ProjectiveFullRank:
    return "projective_full";
  }
  return "?";
}

} // namespace

RankCondition RankCondition::range(int k, int l) {
  if (k > l) {
    throw InvalidRange(k, l);
  }
  return {Kind::Range, k, l};
}

VarietyDescriptor::VarietyDescriptor(int n_, RankCondition rank_) : n(n_), rank(rank_) {
  if (n < 0) {
    throw InvalidArgument("matrix size must be >= 0, got " + std::to_string(n));
  }
  if (rank.kind == RankCondition::Kind::Range && rank.k > rank.l) {
    throw InvalidRange(rank.k, rank.l);
  }
  if (rank.kind == RankCondition::Kind::ProjectiveFullRank) {
    if (n < 1) {
      throw InvalidArgument("projective full-rank locus needs n >= 1");
    }
    rank.k = rank.l = n;
  }
}

std::string VarietyDescriptor::to_string() const {
  const std::string size = std::to_string(n);
  switch (rank.kind) {
  case RankCondition::Kind::Exact:
    return "Sym^{" + size + "," + std::to_string(rank.k) + "}";
  case RankCondition::Kind::AtMost:
    return "Sym^{" + size + ",<=" + std::to_string(rank.k) + "}";
  case RankCondition::Kind::Range:
    return "Sym^{" + size + ",[" + std::to_string(rank.k) + "," + std::to_string(rank.l) + "]}";
  case RankCondition::Kind::ProjectiveFullRank:
    return "PSym^{" + size + "," + size + "}";
  }
  return {};
}

std::string route_name(Route route) {
  switch (route) {
  case Route::Recursion:
    return "recursion";
  case Route::ClosedForm:
    return "closed-form";
  case Route::Quotient:
    return "quotient";
  case Route::Sum:
    return "sum";
  }
  return "?";
}

nlohmann::json MotivicClass::to_json() const {
  nlohmann::json rank = {{"kind", kind_name(descriptor.rank.kind)}, {"k", descriptor.rank.k}};
  if (descriptor.rank.kind == RankCondition::Kind::Range) {
    rank["l"] = descriptor.rank.l;
  }
  return {{"n", descriptor.n},
          {"rank", rank},
          {"polynomial", value.to_json()},
          {"route", route_name(route)}};
}

std::string TateSummand::to_string() const {
  std::string s = "F(" + std::to_string(twist) + ")[" + std::to_string(shift) + "]";
  if (multiplicity != 1) {
    s += "^" + multiplicity.get_str();
  }
  return s;
}

RankClassTable& RankClassTable::shared() {
  static RankClassTable table;
  return table;
}

std::size_t RankClassTable::cached_entries() const {
  std::lock_guard lock(mutex_);
  return cache_.size();
}

LaurentPolynomial RankClassTable::exact(int n, int k) {
  if (n < 0) {
    throw InvalidArgument("matrix size must be >= 0, got " + std::to_string(n));
  }
  if (k < 0 || k > n) {
    return {};
  }
  if (k == 0) {
    return Poly::one();
  }
  if (n == 1) {
    return lpow_minus_one(1);
  }
  {
    std::lock_guard lock(mutex_);
    if (auto it = cache_.find({n, k}); it != cache_.end()) {
      return it->second;
    }
  }
  // The lock is not held across the recursive calls.
  Poly value = (lpow(n) - lpow(k - 1)) * exact(n - 1, k - 2) +
               (lpow(k) - lpow(k - 1)) * exact(n - 1, k - 1) + lpow(k) * exact(n - 1, k);
  std::lock_guard lock(mutex_);
  return cache_.try_emplace({n, k}, std::move(value)).first->second;
}

MotivicClass class_exact(int n, int k) { return class_exact(n, k, RankClassTable::shared()); }

MotivicClass class_exact(int n, int k, RankClassTable& table) {
  VarietyDescriptor d(n, RankCondition::exact(k));
  return {d, table.exact(n, k), Route::Recursion};
}

MotivicClass class_at_most(int n, int k) {
  VarietyDescriptor d(n, RankCondition::at_most(k));
  Poly total = sum_exact(n, 0, k, Derivation::Recursion);
  if (0 < k && k < n) {
    const Poly lk = lpow(k);
    Poly filtered = lpow(n) * sum_exact(n - 1, 0, k - 2, Derivation::Recursion) +
                    lk * class_exact(n - 1, k - 1).value + lk * class_exact(n - 1, k).value;
    if (!(filtered == total)) {
      throw IdentityViolation("filtration identity fails for " + d.to_string() + ": " +
                              filtered.to_string() + " != " + total.to_string());
    }
  }
  return {d, std::move(total), Route::Sum};
}

MotivicClass class_range(int n, int k, int l) {
  VarietyDescriptor d(n, RankCondition::range(k, l));
  return {d, sum_exact(n, k, l, Derivation::Recursion), Route::Sum};
}

MotivicClass closed_form(int n, int k) {
  VarietyDescriptor d(n, RankCondition::exact(k));
  if (k < 0 || k > n) {
    return {d, Poly{}, Route::ClosedForm};
  }
  if (k == 0) {
    return {d, Poly::one(), Route::ClosedForm};
  }
  Poly numerator = Poly::one();
  Poly denominator = Poly::one();
  for (int i = 1; i <= k / 2; ++i) {
    numerator = numerator * lpow(2 * i);
    denominator = denominator * lpow_minus_one(2 * i);
  }
  for (int i = 0; i < k; ++i) {
    numerator = numerator * lpow_minus_one(n - i);
  }
  Poly value = div_exact(numerator, denominator);
  if (value.has_negative_exponents()) {
    throw NegativeExponent(value.terms().begin()->first);
  }
  return {d, std::move(value), Route::ClosedForm};
}

MotivicClass full_rank_product(int n) {
  if (n < 1) {
    throw InvalidArgument("full_rank_product needs n >= 1, got " + std::to_string(n));
  }
  VarietyDescriptor d(n, RankCondition::exact(n));
  Poly value = Poly::one();
  if (n % 2 == 0) {
    for (int i = 1; i <= n / 2; ++i) {
      value = value * (lpow(n + 1) - lpow(2 * i));
    }
  } else {
    for (int i = 0; i <= (n - 1) / 2; ++i) {
      value = value * (lpow(n) - lpow(2 * i));
    }
  }
  return {d, std::move(value), Route::ClosedForm};
}

MotivicClass projective_full_rank(int n) {
  VarietyDescriptor d(n, RankCondition::projective_full_rank());
  return {d, div_exact(class_exact(n, n).value, lpow_minus_one(1)), Route::Quotient};
}

MotivicClass class_of(const VarietyDescriptor& d, Derivation source) {
  const int n = d.n;
  switch (d.rank.kind) {
  case RankCondition::Kind::Exact:
    return source == Derivation::Recursion ? class_exact(n, d.rank.k) : closed_form(n, d.rank.k);
  case RankCondition::Kind::AtMost:
    if (source == Derivation::Recursion) {
      return class_at_most(n, d.rank.k);
    }
    return {d, sum_exact(n, 0, d.rank.k, source), Route::Sum};
  case RankCondition::Kind::Range:
    return {d, sum_exact(n, d.rank.k, d.rank.l, source), Route::Sum};
  case RankCondition::Kind::ProjectiveFullRank: {
    Poly full = source == Derivation::Recursion ? class_exact(n, n).value : closed_form(n, n).value;
    return {d, div_exact(full, lpow_minus_one(1)), Route::Quotient};
  }
  }
  throw InvalidArgument("unknown rank condition");
}

LaurentPolynomial signed_sum(const std::vector<TateSummand>& summands) {
  Poly total;
  for (const auto& s : summands) {
    mpz_class signed_mult = (s.shift % 2 == 0) ? s.multiplicity : mpz_class(-s.multiplicity);
    total = total + Poly::monomial(signed_mult, s.twist);
  }
  return total;
}

std::vector<TateSummand> tate_decomposition(const MotivicClass& c) {
  if (c.value.has_negative_exponents()) {
    throw NegativeExponent(c.value.terms().begin()->first);
  }
  std::vector<TateSummand> out;
  const auto& terms = c.value.terms();
  for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
    const int a = static_cast<int>(it->first);
    if (it->second > 0) {
      out.push_back({a, 2 * a, it->second});
    } else {
      out.push_back({a, 2 * a + 1, -it->second});
    }
  }
  if (!(signed_sum(out) == c.value)) {
    throw IdentityViolation("Tate summands do not reconstruct " + c.value.to_string());
  }
  return out;
}

mpz_class euler_characteristic(const MotivicClass& c) {
  if (c.value.has_negative_exponents()) {
    throw NegativeExponent(c.value.terms().begin()->first);
  }
  return c.value.eval_integer(1);
}

mpz_class point_count(const MotivicClass& c, const mpz_class& q) {
  if (c.value.has_negative_exponents()) {
    throw NegativeExponent(c.value.terms().begin()->first);
  }
  if (q < 2) {
    throw InvalidArgument("point count needs q >= 2, got " + q.get_str());
  }
  return c.value.eval_integer(q);
}

} // namespace symrank
