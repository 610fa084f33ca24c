#include <doctest.h>

#include <map>
#include <random>
#include <vector>

#include "symrank/errors.hpp"
#include "symrank/laurent.hpp"

using symrank::LaurentPolynomial;
using Poly = LaurentPolynomial;

namespace {

Poly L(int e = 1) { return Poly::monomial(1, e); }
Poly c(long c) { return Poly::constant(c); }

// Independent oracle: dense schoolbook product over machine integers.
std::map<long, long> schoolbook(const std::map<long, long>& a, const std::map<long, long>& b) {
  long lo = a.begin()->first + b.begin()->first;
  long hi = a.rbegin()->first + b.rbegin()->first;
  std::vector<long> dense(static_cast<std::size_t>(hi - lo + 1), 0);
  for (const auto& [ea, ca] : a) {
    for (const auto& [eb, cb] : b) {
      dense[static_cast<std::size_t>(ea + eb - lo)] += ca * cb;
    }
  }
  std::map<long, long> out;
  for (std::size_t i = 0; i < dense.size(); ++i) {
    if (dense[i] != 0) {
      out[static_cast<long>(i) + lo] = dense[i];
    }
  }
  return out;
}

Poly from(const std::map<long, long>& terms) {
  Poly::TermMap t;
  for (const auto& [e, v] : terms) {
    t[e] = v;
  }
  return Poly::from_terms(std::move(t));
}

std::map<long, long> random_terms(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(1, 5);
  std::uniform_int_distribution<long> exp(-4, 6);
  std::uniform_int_distribution<long> coeff(-9, 9);
  std::map<long, long> t;
  for (int i = count(rng); i > 0; --i) {
    t[exp(rng)] = coeff(rng);
  }
  std::erase_if(t, [](const auto& kv) { return kv.second == 0; });
  if (t.empty()) {
    t[0] = 1;
  }
  return t;
}

bool canonical(const Poly& p) {
  for (const auto& [e, v] : p.terms()) {
    if (v == 0) {
      return false;
    }
  }
  return true;
}

} // namespace

TEST_CASE("monomial") {
  CHECK(Poly::monomial(1, 0) == Poly::one());
  CHECK(Poly::monomial(0, 5).is_zero());
  CHECK(Poly::monomial(0, 5).terms().empty());
  CHECK(Poly::monomial(1, 1) == Poly::lefschetz());
  CHECK(Poly::lefschetz().to_string() == "L");
}

TEST_CASE("add") {
  CHECK((L() - c(1)) + c(1) == L());
  CHECK((L(2) + (-L(2))).is_zero());
  const Poly sum = (L(3) - L(2)) + (L(2) - c(1));
  CHECK(sum == L(3) - c(1));
  CHECK(sum.terms().size() == 2);
}

TEST_CASE("mul") {
  CHECK(L() * L(-1) == Poly::one());
  CHECK((L() - c(1)) * (L() + c(1)) == L(2) - c(1));
  const auto expected = schoolbook({{1, 1}, {0, -1}}, {{2, 1}, {0, -1}});
  CHECK(expected == std::map<long, long>{{3, 1}, {2, -1}, {1, -1}, {0, 1}});
  CHECK((L() - c(1)) * (L(2) - c(1)) == from(expected));
  CHECK(((L() - c(1)) * (L(2) - c(1))).to_string() == "L^3 - L^2 - L + 1");
}

TEST_CASE("div_exact") {
  CHECK(div_exact(L(3) - L(2), L() - c(1)) == L(2));
  CHECK(div_exact(L(2) - c(1), L() - c(1)) == L() + c(1));
  CHECK_THROWS_AS(div_exact(L(2) + c(1), L() - c(1)), symrank::NonzeroRemainder);
  CHECK_THROWS_AS(div_exact(L(2), Poly{}), symrank::DivisionByZero);

  SUBCASE("negative exponents") {
    CHECK(div_exact(L(3), L(5)) == L(-2));
    CHECK(div_exact(L(-1) - L(-3), L() - L(-1)) == L(-2));
  }
  SUBCASE("non-monic divisor") {
    const Poly q = c(2) * L() + c(1);
    const Poly r = c(3) * L(2) - c(1);
    CHECK(div_exact(q * r, q) == r);
    // 2 is not a unit in Z[L, L^-1].
    CHECK_THROWS_AS(div_exact(L(2) + c(1), c(2) * L()), symrank::NonzeroRemainder);
    CHECK_THROWS_AS(div_exact(L(3), c(2)), symrank::NonzeroRemainder);
  }
  SUBCASE("zero dividend") { CHECK(div_exact(Poly{}, L() - c(1)).is_zero()); }
  SUBCASE("divisor of higher degree") {
    CHECK_THROWS_AS(div_exact(L() + c(1), L(3) + c(1)), symrank::NonzeroRemainder);
  }
}

TEST_CASE("eval") {
  CHECK(L().eval(3) - 1 == 2);
  // Invertible symmetric 2x2 over F_3, counted directly from a*c - b^2.
  long invertible = 0;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      for (int cc = 0; cc < 3; ++cc) {
        invertible += ((a * cc - b * b) % 3 + 3) % 3 != 0 ? 1 : 0;
      }
    }
  }
  CHECK(invertible == 18);
  CHECK((L(3) - L(2)).eval_integer(3) == invertible);
  CHECK(Poly::one().eval_integer(97) == 1);
  CHECK(L(-2).eval(2) == mpq_class(1, 4));
  CHECK_THROWS_AS(L(-1).eval(0), symrank::ZeroBase);
  CHECK((L(2) + c(7)).eval(0) == 7);
  CHECK_THROWS_AS(L(-1).eval_integer(3), symrank::NonintegralQuotient);
}

TEST_CASE("degree_range") {
  CHECK((L(3) - L(2)).degree_range() == std::make_pair<std::int64_t, std::int64_t>(2, 3));
  CHECK_FALSE(Poly{}.degree_range().has_value());
  CHECK((c(5) * L(-2) + L()).degree_range() == std::make_pair<std::int64_t, std::int64_t>(-2, 1));
}

TEST_CASE("text, latex and json forms") {
  CHECK((L(5) - L(2)).to_string() == "L^5 - L^2");
  CHECK((c(5) * L(-2) + L()).to_string() == "L + 5*L^-2");
  CHECK((c(1) - L(2)).to_string() == "-L^2 + 1");
  CHECK(Poly{}.to_string() == "0");
  CHECK((c(-3)).to_string() == "-3");
  CHECK((L(3) - c(2) * L(2)).to_latex() == "\\mathbb{L}^{3} - 2 \\mathbb{L}^{2}");

  const Poly p = c(5) * L(-2) + L() - c(12);
  CHECK(p.to_json().dump() == R"({"-2":"5","0":"-12","1":"1"})");
  CHECK(Poly::from_json(p.to_json()) == p);
  CHECK_THROWS_AS(Poly::from_json(nlohmann::json::array()), symrank::InvalidArgument);
  CHECK_THROWS_AS(Poly::from_json(nlohmann::json{{"x", "1"}}), symrank::InvalidArgument);
}

TEST_CASE("arbitrary precision coefficients") {
  const Poly p = (L() + c(1)).pow(200);
  mpz_class central;
  mpz_bin_uiui(central.get_mpz_t(), 200, 100);
  CHECK(p.coefficient(100) == central);
  CHECK(p.eval_integer(1) == mpz_class(1) << 200);
  CHECK(div_exact(p, (L() + c(1)).pow(199)) == L() + c(1));
}

TEST_CASE("ring properties on random polynomials") {
  std::mt19937_64 rng(20261016);
  for (int trial = 0; trial < 300; ++trial) {
    const auto ta = random_terms(rng);
    const auto tb = random_terms(rng);
    const auto tc = random_terms(rng);
    const Poly a = from(ta);
    const Poly b = from(tb);
    const Poly d = from(tc);

    CHECK(a + b == b + a);
    CHECK((a + b) + d == a + (b + d));
    CHECK(a * b == b * a);
    CHECK((a * b) * d == a * (b * d));
    CHECK(a * (b + d) == a * b + a * d);
    CHECK(a * b == from(schoolbook(ta, tb)));
    CHECK(div_exact(a * b, b) == a);
    CHECK(canonical(a + b));
    CHECK(canonical(a * b));
    CHECK(canonical(a - a));
    CHECK((a - a).is_zero());

    for (long x : {-3L, 2L, 3L, 5L, 7L}) {
      CHECK((a * b).eval(x) == a.eval(x) * b.eval(x));
      CHECK((a + b).eval(x) == a.eval(x) + b.eval(x));
    }
  }
}
