#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>

#include <gmpxx.h>
#include <json.hpp>

namespace symrank {

/// Sparse univariate Laurent polynomial in the Lefschetz class L with
/// arbitrary-precision integer coefficients.
///
/// Values are immutable once built; every operation returns a fresh
/// polynomial in canonical form, i.e. the term map never stores a zero
/// coefficient, so structural equality coincides with ring equality.
class LaurentPolynomial {
public:
  using Exponent = std::int64_t;
  using Coefficient = mpz_class;
  using TermMap = std::map<Exponent, Coefficient>;

  LaurentPolynomial() = default;

  static LaurentPolynomial monomial(const Coefficient& coeff, Exponent exp);
  static LaurentPolynomial constant(const Coefficient& c) { return monomial(c, 0); }
  static LaurentPolynomial one() { return constant(1); }
  /// The Lefschetz class L = [A^1].
  static LaurentPolynomial lefschetz() { return monomial(1, 1); }
  /// Builds from arbitrary terms, dropping zero coefficients.
  static LaurentPolynomial from_terms(TermMap terms);

  const TermMap& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  Coefficient coefficient(Exponent exp) const;

  /// (min_exp, max_exp) over nonzero terms; nullopt for the zero polynomial.
  std::optional<std::pair<Exponent, Exponent>> degree_range() const;
  bool has_negative_exponents() const;

  LaurentPolynomial operator-() const;
  friend LaurentPolynomial operator+(const LaurentPolynomial& p, const LaurentPolynomial& q);
  friend LaurentPolynomial operator-(const LaurentPolynomial& p, const LaurentPolynomial& q);
  friend LaurentPolynomial operator*(const LaurentPolynomial& p, const LaurentPolynomial& q);
  friend bool operator==(const LaurentPolynomial& p, const LaurentPolynomial& q) {
    return p.terms_ == q.terms_;
  }

  LaurentPolynomial pow(unsigned exp) const;

  /// Exact evaluation at L = x. Throws ZeroBase when x = 0 and a negative
  /// exponent is present.
  mpq_class eval(const mpz_class& x) const;
  /// Evaluation that must land in Z; throws NonintegralQuotient otherwise.
  mpz_class eval_integer(const mpz_class& x) const;

  /// Descending-exponent text form, e.g. "L^5 - L^2", "5*L^-2 + L", "0".
  std::string to_string() const;
  /// Descending-exponent LaTeX form using \mathbb{L}.
  std::string to_latex() const;
  /// Object mapping decimal exponent strings to decimal coefficient strings.
  nlohmann::json to_json() const;
  static LaurentPolynomial from_json(const nlohmann::json& j);

private:
  explicit LaurentPolynomial(TermMap terms) : terms_(std::move(terms)) {}

  TermMap terms_;
};

LaurentPolynomial add(const LaurentPolynomial& p, const LaurentPolynomial& q);
LaurentPolynomial mul(const LaurentPolynomial& p, const LaurentPolynomial& q);

/// Returns r with r * q == p. Throws DivisionByZero for q = 0 and
/// NonzeroRemainder when q does not divide p in Z[L, L^-1].
LaurentPolynomial div_exact(const LaurentPolynomial& p, const LaurentPolynomial& q);

} // namespace symrank
