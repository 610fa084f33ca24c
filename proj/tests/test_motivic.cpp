#include <doctest.h>

#include <thread>
#include <vector>

#include "oracles.hpp"
#include "symrank/errors.hpp"
#include "symrank/motivic.hpp"

using namespace symrank;
using Poly = LaurentPolynomial;

namespace {

Poly L(int e = 1) { return Poly::monomial(1, e); }
Poly c(long v) { return Poly::constant(v); }

// Frozen from oracle::rank_counts (all-minors rank, exhaustive).
const std::vector<std::uint64_t> kCounts2x2F3{1, 8, 18};
const std::vector<std::uint64_t> kCounts2x2F5{1, 24, 100};
const std::vector<std::uint64_t> kCounts3x3F3{1, 26, 234, 468};

} // namespace

TEST_CASE("frozen oracle values are reproducible") {
  CHECK(oracle::rank_counts(2, 3) == kCounts2x2F3);
  CHECK(oracle::rank_counts(2, 5) == kCounts2x2F5);
  CHECK(oracle::rank_counts(3, 3) == kCounts3x3F3);
}

TEST_CASE("class_exact") {
  CHECK(class_exact(1, 1).value == L() - c(1));
  CHECK(class_exact(5, 7).value.is_zero());
  CHECK(class_exact(5, -1).value.is_zero());
  CHECK(class_exact(4, 0).value == c(1));

  // Hand unroll: (L^2 - 1)*0 + (L - 1)*[Sym^{1,0}] + L*[Sym^{1,1}].
  const Poly unrolled = (L() - c(1)) * c(1) + L() * (L() - c(1));
  CHECK(class_exact(2, 1).value == unrolled);
  CHECK(class_exact(2, 1).value == L(2) - c(1));
  CHECK(point_count(class_exact(2, 1), 3) == kCounts2x2F3[1]);

  CHECK(class_exact(2, 2).value == L(3) - L(2));
  CHECK(point_count(class_exact(2, 2), 3) == kCounts2x2F3[2]);
  CHECK(point_count(class_exact(2, 2), 5) == kCounts2x2F5[2]);

  CHECK(class_exact(2, 2).route == Route::Recursion);
  CHECK(class_exact(2, 2).descriptor == VarietyDescriptor(2, RankCondition::exact(2)));
  CHECK_THROWS_AS(class_exact(-1, 0), InvalidArgument);
}

TEST_CASE("class_at_most") {
  for (int n = 0; n <= 8; ++n) {
    CHECK(class_at_most(n, n).value == L(n * (n + 1) / 2));
  }
  CHECK(class_at_most(3, 0).value == c(1));
  CHECK(class_at_most(2, 1).value == L(2));
  CHECK(point_count(class_at_most(2, 1), 3) == kCounts2x2F3[0] + kCounts2x2F3[1]);
  CHECK(class_at_most(3, -1).value.is_zero());
  CHECK(class_at_most(3, 9).value == L(6));
  CHECK(class_at_most(2, 1).route == Route::Sum);
}

TEST_CASE("class_range") {
  CHECK(class_range(2, 1, 2).value == L(3) - c(1));
  CHECK(point_count(class_range(2, 1, 2), 3) == kCounts2x2F3[1] + kCounts2x2F3[2]);
  CHECK(class_range(3, 0, 3).value == L(6));
  CHECK_THROWS_AS(class_range(4, 2, 1), InvalidRange);
  CHECK(class_range(3, 2, 2).value == class_exact(3, 2).value);
}

TEST_CASE("closed_form") {
  CHECK(closed_form(2, 2).value == L(3) - L(2));
  CHECK(closed_form(3, 1).value == L(3) - c(1));
  CHECK(point_count(closed_form(3, 1), 3) == kCounts3x3F3[1]);
  CHECK(point_count(closed_form(3, 2), 3) == kCounts3x3F3[2]);
  for (int n = 0; n <= 6; ++n) {
    CHECK(closed_form(n, 0).value == c(1));
  }
  CHECK(closed_form(2, 3).value.is_zero());
  CHECK(closed_form(2, -2).value.is_zero());
  CHECK(closed_form(2, 2).route == Route::ClosedForm);
  // Beyond the acceptance range the two routes still agree.
  for (int k = 0; k <= 16; ++k) {
    CHECK(closed_form(16, k).value == class_exact(16, k).value);
  }
}

TEST_CASE("full_rank_product") {
  CHECK(full_rank_product(1).value == L() - c(1));
  CHECK(full_rank_product(2).value == L(3) - L(2));
  CHECK(full_rank_product(3).value == (L(3) - c(1)) * (L(3) - L(2)));
  CHECK(point_count(full_rank_product(3), 3) == kCounts3x3F3[3]);
  CHECK_THROWS_AS(full_rank_product(0), InvalidArgument);
}

TEST_CASE("projective_full_rank") {
  CHECK(projective_full_rank(1).value == c(1));
  CHECK(projective_full_rank(2).value == L(2));
  CHECK(point_count(projective_full_rank(2), 3) == kCounts2x2F3[2] / 2);
  // (L^3 - 1)(L^3 - L^2) / (L - 1) = L^5 - L^2.
  CHECK(projective_full_rank(3).value == L(5) - L(2));
  CHECK(point_count(projective_full_rank(3), 3) == kCounts3x3F3[3] / 2);
  CHECK(projective_full_rank(3).route == Route::Quotient);
  CHECK_THROWS_AS(projective_full_rank(0), InvalidArgument);
}

TEST_CASE("tate_decomposition") {
  using S = TateSummand;
  CHECK(tate_decomposition(class_exact(1, 1)) == std::vector<S>{{1, 2, 1}, {0, 1, 1}});
  CHECK(tate_decomposition(class_exact(3, 0)) == std::vector<S>{{0, 0, 1}});
  CHECK(tate_decomposition(class_exact(2, 2)) == std::vector<S>{{3, 6, 1}, {2, 5, 1}});
  CHECK(S{1, 2, 1}.to_string() == "F(1)[2]");
  CHECK(S{2, 5, 3}.to_string() == "F(2)[5]^3");

  const MotivicClass bad{VarietyDescriptor(1, RankCondition::exact(1)), L(-1), Route::Sum};
  CHECK_THROWS_AS(tate_decomposition(bad), NegativeExponent);

  for (int n = 0; n <= 12; ++n) {
    for (int k = 0; k <= n; ++k) {
      const auto summands = tate_decomposition(class_exact(n, k));
      CHECK(signed_sum(summands) == class_exact(n, k).value);
      for (const auto& s : summands) {
        CHECK(s.is_proper());
        CHECK(s.multiplicity >= 1);
      }
    }
  }
}

TEST_CASE("euler_characteristic and point_count") {
  CHECK(euler_characteristic(class_exact(5, 0)) == 1);
  CHECK(euler_characteristic(class_exact(3, 2)) == 0);
  CHECK(euler_characteristic(class_at_most(3, 3)) == 1);
  CHECK(point_count(class_exact(2, 2), 3) == 18);
  CHECK(point_count(class_exact(1, 1), 5) == 4);
  CHECK(point_count(class_at_most(2, 2), 3) == 27);
  CHECK(point_count(class_exact(2, 2), 9) == 648);
  CHECK_THROWS_AS(point_count(class_exact(2, 2), 1), InvalidArgument);
}

TEST_CASE("structural identities up to n = 12") {
  for (int n = 0; n <= 12; ++n) {
    Poly total;
    for (int k = 0; k <= n; ++k) {
      CHECK(closed_form(n, k).value == class_exact(n, k).value);
      total = total + class_exact(n, k).value;
      if (k >= 1) {
        CHECK_NOTHROW(div_exact(class_exact(n, k).value, L() - c(1)));
      }
      if (0 < k && k < n) {
        CHECK_NOTHROW(class_at_most(n, k));
      }
    }
    CHECK(total == L(n * (n + 1) / 2));
    if (n >= 1) {
      CHECK(full_rank_product(n).value == class_exact(n, n).value);
    }
  }
}

TEST_CASE("memoization is invisible") {
  RankClassTable cold;
  CHECK(cold.cached_entries() == 0);
  for (int n = 0; n <= 12; ++n) {
    for (int k = -1; k <= n + 1; ++k) {
      CHECK(class_exact(n, k, cold).value == class_exact(n, k).value);
    }
  }
  CHECK(cold.cached_entries() > 0);

  RankClassTable shared;
  std::vector<std::vector<Poly>> seen(4);
  {
    std::vector<std::jthread> workers;
    for (std::size_t t = 0; t < seen.size(); ++t) {
      workers.emplace_back([&, t] {
        for (int k = 0; k <= 12; ++k) {
          seen[t].push_back(shared.exact(12, k));
        }
      });
    }
  }
  for (const auto& s : seen) {
    CHECK(s == seen.front());
  }
}

TEST_CASE("descriptors and JSON") {
  CHECK_THROWS_AS(VarietyDescriptor(-1, RankCondition::exact(0)), InvalidArgument);
  CHECK_THROWS_AS(VarietyDescriptor(0, RankCondition::projective_full_rank()), InvalidArgument);
  CHECK_THROWS_AS(RankCondition::range(3, 2), InvalidRange);

  const auto j = class_at_most(3, 3).to_json();
  CHECK(j["n"] == 3);
  CHECK(j["rank"]["kind"] == "at_most");
  CHECK(j["rank"]["k"] == 3);
  CHECK_FALSE(j["rank"].contains("l"));
  CHECK(j["polynomial"] == nlohmann::json{{"6", "1"}});
  CHECK(j["route"] == "sum");

  const auto r = class_range(4, 1, 2).to_json();
  CHECK(r["rank"]["kind"] == "range");
  CHECK(r["rank"]["l"] == 2);
  CHECK(projective_full_rank(2).to_json()["rank"]["kind"] == "projective_full");
  CHECK(closed_form(2, 2).to_json()["route"] == "closed-form");
  CHECK(VarietyDescriptor(4, RankCondition::range(1, 2)).to_string() == "Sym^{4,[1,2]}");
}

TEST_CASE("class_of agrees across derivations") {
  const std::vector<VarietyDescriptor> ds{
      {5, RankCondition::exact(3)},      {5, RankCondition::at_most(2)},
      {6, RankCondition::range(2, 4)},   {4, RankCondition::projective_full_rank()},
      {3, RankCondition::at_most(7)},
  };
  for (const auto& d : ds) {
    CHECK(class_of(d, Derivation::Recursion).value == class_of(d, Derivation::ClosedForm).value);
  }
  CHECK(class_of({4, RankCondition::range(1, 2)}).value ==
        class_exact(4, 1).value + class_exact(4, 2).value);
}
