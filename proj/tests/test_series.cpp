#include "tropper/series.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace tropper;

namespace {

ExactSeries one(std::size_t rank, int order) { return ExactSeries::constant(rank, order, Rational(1)); }
ExactSeries mono(std::size_t rank, int order, IntVector m, int e, Rational c = 1) {
  return ExactSeries::monomial(rank, order, m, e, c);
}

}  // namespace

TEST_CASE("series arithmetic truncates above the order") {
  const auto z = mono(1, 2, IntVector{1}, 1);  // t·z
  const auto f = one(1, 2) + z;
  const auto sq = f * f;
  CHECK(sq.coefficient(IntVector{1}, 1) == 2);
  CHECK(sq.coefficient(IntVector{2}, 2) == 1);
  CHECK((f * f * f).coefficient(IntVector{3}, 3) == 0);
  CHECK((f * f * f).terms().size() == 3);
  CHECK(f.truncated(0) == one(1, 0));
  CHECK_THROWS_AS(ExactSeries(1, -1), SeriesError);
  CHECK_THROWS_AS(f * one(2, 2), SeriesError);
}

TEST_CASE("inverse and powers of series congruent to 1") {
  const auto f = one(2, 4) + mono(2, 4, IntVector{1, 0}, 1) + mono(2, 4, IntVector{0, 1}, 2, Rational(1, 3));
  CHECK(f * f.inverse() == one(2, 4));
  CHECK(f.pow(3) * f.pow(-3) == one(2, 4));
  CHECK(f.pow(2) == f * f);
  CHECK_THROWS_AS((one(2, 4) + mono(2, 4, IntVector{1, 0}, 0)).inverse(), SeriesError);
}

TEST_CASE("wall transform") {
  const int k = 4;
  const auto f = one(1, k) + mono(1, k, IntVector{1}, 1);  // 1 + t·z
  const IntVector m{5};
  CHECK(wall_transform(f, IntCovector{0}, m) == mono(1, k, m, 0));
  CHECK(wall_transform(f, IntCovector{1}, IntVector{1}) == mono(1, k, IntVector{1}, 0) + mono(1, k, IntVector{2}, 1));
  // (1 + tz)^{-2} = Σ (−1)^j (j+1) t^j z^j.
  const auto w = wall_transform(f, IntCovector{1}, IntVector{-2});
  for (int j = 0; j <= k; ++j) CHECK(w.coefficient(IntVector{j - 2}, j) == Rational((j % 2 ? -1 : 1) * (j + 1)));
  CHECK(w.terms().size() == static_cast<std::size_t>(k + 1));
}

TEST_CASE("normalization examples") {
  const int k = 5;
  const auto z = mono(2, k, IntVector{1, 0}, 0);
  for (int order = 1; order <= k; ++order) CHECK(check_normalized(one(2, k) + z, order));

  const auto f_t = one(1, 3) + mono(1, 3, IntVector{0}, 1);
  const auto r = normalization(f_t, 1);
  CHECK_FALSE(r.normalized);
  CHECK(r.offending.at(1) == 1);

  // (1 + z)(1 + t z') with z, z' lattice monomials.
  const auto zp = mono(2, k, IntVector{0, 1}, 1);
  CHECK(check_normalized((one(2, k) + z) * (one(2, k) + zp), k));

  // 1 + t z + t carries the pure term.
  const auto g = one(2, k) + mono(2, k, IntVector{1, 0}, 1) + mono(2, k, IntVector{0, 0}, 1);
  const auto rg = normalization(g, 1);
  CHECK_FALSE(rg.normalized);
  REQUIRE(rg.offending.count(1));
  CHECK(rg.offending.at(1) == 1);
}

TEST_CASE("normalization ignores the constant and needs a half-space") {
  const int k = 3;
  auto f = Rational(7) * (one(1, k) + mono(1, k, IntVector{1}, 0));
  CHECK(check_normalized(f, k));
  // z and z^{-1} at t-order zero: log(1 + z + 1/z) does not terminate.
  const auto bad = one(1, k) + mono(1, k, IntVector{1}, 0) + mono(1, k, IntVector{-1}, 0);
  CHECK_THROWS_AS(normalization(bad, k), SeriesError);
  CHECK_THROWS_AS(normalization(mono(1, k, IntVector{1}, 0), k), SeriesError);
  CHECK_THROWS_AS(normalization(f, k + 1), SeriesError);
}

TEST_CASE("hand expansion of a second-order pure term") {
  // log(1 + z + t z^{-1}) at t¹ has the pure term from −½·2·z·t z^{-1} = −t.
  const int k = 2;
  const auto f = one(1, k) + mono(1, k, IntVector{1}, 0) + mono(1, k, IntVector{-1}, 1);
  const auto r = normalization(f, k);
  CHECK_FALSE(r.normalized);
  CHECK(r.offending.at(1) == -1);
  const auto fixed = normalize(f, k);
  CHECK(check_normalized(fixed, k));
  CHECK(fixed.coefficient(IntVector{0}, 1) == 1);
}

TEST_CASE("normalize produces normalized series on random inputs") {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> c(-3, 3), e(0, 3), x(-2, 2);
  for (int trial = 0; trial < 40; ++trial) {
    const int k = 3;
    auto f = one(2, k);
    f.add(IntVector{1, 0}, 0, Rational(c(rng) == 0 ? 1 : c(rng), 2));
    for (int i = 0; i < 4; ++i) f.add(IntVector{x(rng), x(rng)}, 1 + e(rng) % k, Rational(c(rng)));
    ExactSeries g = normalize(f, k);
    CHECK(check_normalized(g, k));
    // Only pure t-coefficients move.
    const ExactSeries moved = g - f;
    for (const auto& [m, v] : moved.terms()) CHECK(m.m.is_zero());
    CHECK(check_normalized(to_float(g), k, 1e-12L));
  }
}

TEST_CASE("float and exact normalization agree") {
  const int k = 3;
  const auto g = one(2, k) + mono(2, k, IntVector{1, 0}, 1) + mono(2, k, IntVector{0, 0}, 2, Rational(1, 4));
  const auto exact = normalization(g, k);
  const auto flt = normalization(to_float(g), k, 1e-12L);
  CHECK(exact.normalized == flt.normalized);
  REQUIRE(exact.offending.size() == flt.offending.size());
  for (const auto& [e, v] : exact.offending)
    CHECK(std::abs(flt.offending.at(e) - Complex(static_cast<long double>(v), 0)) < 1e-15L);
}

TEST_CASE("compatibility of slab functions") {
  const int k = 3;
  const auto f = one(2, k) + mono(2, k, IntVector{1, 0}, 1);
  CHECK(compatibility_check(f, f, IntVector{0, 0}, 1, 1));
  const IntVector m{1, 0};
  // f' = z^{-m} f with equal kinks.
  const auto fp = f.shifted(-m, 0, k);
  CHECK(compatibility_check(f, fp, m, 2, 2));
  CHECK_FALSE(compatibility_check(f, f, m, 2, 2));
  // Focus-focus shift: t·(1 + t z₁) = z₁·t·(z₁^{-1} + t).
  const auto g = one(2, 2) + mono(2, 2, IntVector{1, 0}, 1);
  const auto gp = mono(2, 2, IntVector{-1, 0}, 0) + one(2, 2).shifted(IntVector{0, 0}, 1, 2);
  CHECK(compatibility_check(g, gp, m, 1, 1));
  CHECK(compatibility_check(to_float(g), to_float(gp), m, 1, 1, 1e-12L));
  CHECK_THROWS_AS(compatibility_check(g, one(2, 3), m, 1, 1), SeriesError);
}

TEST_CASE("evaluation of float series") {
  FloatSeries f(2, 2);
  f.add(IntVector{0, 0}, 0, 1);
  f.add(IntVector{1, -1}, 1, Complex(0, 2));
  const std::vector<Complex> z{Complex(2, 0), Complex(0, 1)};
  const Complex t(0.5L, 0);
  // 1 + 2i·t·z₁/z₂ = 1 + 2i·0.5·2/i = 3.
  CHECK(std::abs(evaluate(f, t, z) - Complex(3, 0)) < 1e-15L);
}
