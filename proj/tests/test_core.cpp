#include <doctest.h>

#include <cmath>
#include <random>

#include "hlpoly/constructions.hpp"
#include "hlpoly/core.hpp"
#include "hlpoly/error.hpp"
#include "test_support.hpp"

using namespace hlpoly;

namespace {

// x_1^2 y_1 on R^2 x R^1.
Multipolynomial x2y() {
  return PolynomialBuilder(BlockDegrees({2, 1}), {2, 1})
      .add(MultiIndex::from_dense({{2, 0}, {1}}), 1.0)
      .build();
}

}  // namespace

TEST_CASE("validate accepts well-formed terms") {
  const auto p = x2y();
  CHECK(validate(p).ok());
}

TEST_CASE("validate reports block degree violations") {
  Multipolynomial p(BlockDegrees({2, 1}), {2, 1},
                    {{MultiIndex::from_dense({{1, 0}, {1}}), 1.0}});
  const auto report = validate(p);
  REQUIRE_FALSE(report.ok());
  CHECK(report.violations.size() == 1);
  CHECK(report.violations[0].term_index == 0);
  CHECK(report.to_string().find("|alpha^(1)| = 1 != 2") != std::string::npos);
  CHECK_THROWS_AS(evaluate(p, Point{{{1, 1}, {1}}}), Error);
}

TEST_CASE("validate on the zero polynomial") {
  Multipolynomial p(BlockDegrees({3, 2}), {4, 5}, {});
  CHECK(validate(p).ok());
  CHECK(evaluate(p, Point::zeros(p.dims())) == 0.0);
}

TEST_CASE("validate reports zeros, duplicates and out-of-range positions") {
  Multipolynomial p(BlockDegrees({1}), {2},
                    {{MultiIndex::from_dense({{1, 0}}), 0.0},
                     {MultiIndex::from_dense({{0, 1}}), 2.0},
                     {MultiIndex::from_dense({{0, 1}}), 3.0},
                     {MultiIndex::from_factors({{0, 5, 1}}), 1.0}});
  const auto report = validate(p);
  CHECK(report.violations.size() == 3);
}

TEST_CASE("validate reports a dims/degrees block mismatch") {
  Multipolynomial p(BlockDegrees({1, 1}), {2}, {});
  CHECK_FALSE(validate(p).ok());
}

TEST_CASE("builder merges duplicates and drops cancelled terms") {
  const auto p = PolynomialBuilder(BlockDegrees({1}), {2})
                     .add(MultiIndex::from_dense({{1, 0}}), 2.0)
                     .add(MultiIndex::from_dense({{1, 0}}), -2.0)
                     .add(MultiIndex::from_dense({{0, 1}}), 1.0)
                     .add(MultiIndex::from_dense({{0, 1}}), 0.5)
                     .build();
  REQUIRE(p.size() == 1);
  CHECK(p.terms()[0].coeff == 1.5);
}

TEST_CASE("builder enforces the term limit") {
  PolynomialBuilder b(BlockDegrees({1}), {3}, 2);
  b.add(MultiIndex::from_dense({{1, 0, 0}}), 1.0)
      .add(MultiIndex::from_dense({{0, 1, 0}}), 1.0)
      .add(MultiIndex::from_dense({{0, 0, 1}}), 1.0);
  try {
    b.build();
    FAIL("expected budget error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kBudgetExceeded);
  }
}

TEST_CASE("multi-index order matches dense lexicographic order") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> e(0, 2);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<std::vector<std::uint32_t>> a{{0, 0, 0}, {0, 0}}, b = a;
    for (auto* v : {&a, &b}) {
      for (auto& blk : *v) {
        for (auto& x : blk) x = static_cast<std::uint32_t>(e(rng));
      }
    }
    const auto ia = MultiIndex::from_dense(a);
    const auto ib = MultiIndex::from_dense(b);
    std::vector<std::uint32_t> fa, fb;
    for (auto& blk : a) fa.insert(fa.end(), blk.begin(), blk.end());
    for (auto& blk : b) fb.insert(fb.end(), blk.begin(), blk.end());
    CHECK(((ia <=> ib) == std::strong_ordering::less) == (fa < fb));
    CHECK((ia == ib) == (fa == fb));
    CHECK(ia.to_dense(std::vector<std::uint32_t>{3, 2}) == a);
  }
}

TEST_CASE("evaluate") {
  SUBCASE("x1^2 y1 at ((2,0),(3))") { CHECK(evaluate(x2y(), Point{{{2, 0}, {3}}}) == 12.0); }
  SUBCASE("zero point") {
    const auto p = test::random_poly(BlockDegrees({2, 1}), {3, 2}, 20, 1);
    CHECK(evaluate(p, Point::zeros(p.dims())) == 0.0);
  }
  SUBCASE("diagonal bilinear form at ((1,1),(1,-1))") {
    const auto t = diagonal_form(2, 2).to_multilinear();
    CHECK(evaluate(t, Point{{{1, 1}, {1, -1}}}) == 0.0);
  }
  SUBCASE("dimension mismatch") {
    CHECK_THROWS_AS(evaluate(x2y(), Point{{{1, 0, 0}, {1}}}), Error);
    CHECK_THROWS_AS(evaluate(x2y(), Point{{{1, 0}}}), Error);
  }
  SUBCASE("agrees with dense expansion") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto p = test::random_poly(BlockDegrees({2, 1}), {3, 2}, 15, seed);
      const auto x = test::random_point(p.dims(), seed + 100);
      CHECK(evaluate(p, x) == doctest::Approx(test::dense_evaluate(p, x)).epsilon(1e-12));
    }
  }
}

TEST_CASE("scale_homogeneity_check") {
  const auto p = x2y();
  CHECK(scale_homogeneity_check(p, Point{{{1, 0}, {1}}}, 0, 3.0));
  CHECK(evaluate(p, Point{{{3, 0}, {1}}}) == 9.0);
  CHECK(scale_homogeneity_check(p, Point{{{1, 0}, {1}}}, 0, 0.0));

  // Diagonal 3-linear form, block 2 scaled by -2 at the all-ones point.
  const auto t3 = diagonal_form(2, 3).to_multilinear();
  const Point ones{{{1, 1}, {1, 1}, {1, 1}}};
  CHECK(scale_homogeneity_check(t3, ones, 1, -2.0));
  CHECK(evaluate(t3, Point{{{1, 1}, {-2, -2}, {1, 1}}}) == -2.0 * evaluate(t3, ones));

  CHECK_THROWS_AS(scale_homogeneity_check(p, Point{{{1}, {1}}}, 0, 2.0), Error);
}

TEST_CASE("multi-homogeneity holds on random instances") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> t(-3.0, 3.0);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto p = test::random_poly(BlockDegrees({2, 1, 3}), {3, 2, 2}, 30, seed);
    const auto x = test::random_point(p.dims(), seed + 1000);
    for (std::size_t b = 0; b < 3; ++b) CHECK(scale_homogeneity_check(p, x, b, t(rng)));
  }
}

TEST_CASE("coeff_ls_value") {
  SUBCASE("diagonal form, s = 2") {
    for (std::uint64_t n : {1, 4, 9, 25}) {
      CHECK(coeff_ls_value(diagonal_form(n, 2).to_multilinear(), 2.0) ==
            doctest::Approx(std::sqrt(static_cast<double>(n))).epsilon(1e-14));
    }
  }
  SUBCASE("single monomial with coefficient -3") {
    const auto p = PolynomialBuilder(BlockDegrees({1}), {1})
                       .add(MultiIndex::from_dense({{1}}), -3.0)
                       .build();
    for (double s : {0.3, 1.0, 2.0, 7.5}) {
      CHECK(coeff_ls_value(p, s) == doctest::Approx(3.0).epsilon(1e-15));
    }
  }
  SUBCASE("KSZ witness") {
    const auto w = ksz_witness(3, BlockDegrees({1, 1}), 5);
    for (double s : {0.5, 1.0, 4.0 / 3.0, 2.0}) {
      CHECK(coeff_ls_value(w, s) == doctest::Approx(std::pow(9.0, 1.0 / s)).epsilon(1e-14));
    }
  }
  SUBCASE("s <= 0 rejected") {
    CHECK_THROWS_AS(coeff_ls_value(x2y(), 0.0), Error);
    CHECK_THROWS_AS(coeff_ls_value(x2y(), -1.0), Error);
  }
}

TEST_CASE("coeff_ls_value is nonincreasing in s") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto p = test::random_poly(BlockDegrees({2, 1}), {3, 3}, 25, seed);
    double previous = INFINITY;
    for (double s = 0.25; s <= 8.0; s *= 1.3) {
      const double v = coeff_ls_value(p, s);
      CHECK(v <= previous * (1 + 1e-14));
      previous = v;
    }
  }
}

TEST_CASE("multi-affine evaluation at basis tuples returns the coefficient") {
  const auto t = ksz_sample(3, 3, 17);
  const auto p = t.to_multilinear();
  for (std::uint32_t i = 0; i < 3; ++i) {
    for (std::uint32_t j = 0; j < 3; ++j) {
      for (std::uint32_t k = 0; k < 3; ++k) {
        Point e = Point::zeros(p.dims());
        e.blocks[0][i] = e.blocks[1][j] = e.blocks[2][k] = 1.0;
        const std::uint32_t idx[] = {i, j, k};
        CHECK(evaluate(p, e) == static_cast<double>(t.at(idx)));
      }
    }
  }
}

TEST_CASE("gradient matches central finite differences") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const auto p = test::random_poly(BlockDegrees({2, 1}), {3, 2}, 12, seed);
    const auto x = test::random_point(p.dims(), seed + 7);
    const auto g = gradient(p, x).flatten();
    const auto fd = test::finite_difference_gradient(p, x, 1e-6);
    for (std::size_t i = 0; i < g.size(); ++i) {
      CHECK(test::rel_err(g[i], fd[i]) <= 1e-4);
    }
  }
}

TEST_CASE("BlockDegrees") {
  CHECK(BlockDegrees::parse("2,1").values() == std::vector<std::uint32_t>{2, 1});
  CHECK(BlockDegrees({2, 1, 3}).total() == 6);
  CHECK(BlockDegrees({2, 1}).to_string() == "2,1");
  CHECK_THROWS_AS(BlockDegrees({}), Error);
  CHECK_THROWS_AS(BlockDegrees({1, 0}), Error);
  CHECK_THROWS_AS(BlockDegrees::parse("2,x"), Error);
}
