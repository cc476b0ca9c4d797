#include <doctest.h>

#include <cmath>

#include "hlpoly/constructions.hpp"
#include "hlpoly/error.hpp"
#include "hlpoly/norms.hpp"
#include "test_support.hpp"

using namespace hlpoly;

namespace {

Multipolynomial bilinear(const std::vector<std::vector<int>>& a) {
  std::vector<std::pair<std::vector<std::uint32_t>, int>> entries;
  for (std::uint32_t i = 0; i < a.size(); ++i) {
    for (std::uint32_t j = 0; j < a[i].size(); ++j) entries.push_back({{i, j}, a[i][j]});
  }
  return SignTensor::from_entries(2, static_cast<std::uint32_t>(a.size()), entries)
      .to_multilinear();
}

OptimizerConfig quick(std::uint64_t seed = 1) {
  OptimizerConfig cfg;
  cfg.seed = seed;
  cfg.workers = 2;
  return cfg;
}

}  // namespace

TEST_CASE("lp_sphere_project") {
  const std::vector<double> v1{3, 4}, v2{1, 1}, v3{2, -4};
  const auto a = lp_sphere_project(v1, 2.0);
  CHECK(a[0] == doctest::Approx(0.6));
  CHECK(a[1] == doctest::Approx(0.8));
  const auto b = lp_sphere_project(v2, 1.0);
  CHECK(b[0] == 0.5);
  CHECK(b[1] == 0.5);
  const auto c = lp_sphere_project(v3, kInf);
  CHECK(c[0] == 0.5);
  CHECK(c[1] == -1.0);
  const std::vector<double> zero{0, 0};
  CHECK_THROWS_AS(lp_sphere_project(zero, 2.0), Error);
  CHECK_THROWS_AS(lp_sphere_project(v1, 0.5), Error);
}

TEST_CASE("lp_dual_maximizer attains the dual norm") {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> normal;
  for (double p : {1.0, 1.5, 2.0, 3.0, 7.0, kInf}) {
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> g(5);
      for (auto& v : g) v = normal(rng);
      const auto x = lp_dual_maximizer(g, p);
      double inner = 0.0;
      for (std::size_t j = 0; j < g.size(); ++j) inner += g[j] * x[j];
      CHECK(lp_norm(x, p) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(inner == doctest::Approx(lp_norm(g, conjugate_exponent(p))).epsilon(1e-12));
    }
  }
}

TEST_CASE("sup_norm_estimate examples") {
  SUBCASE("diagonal bilinear form, p = 4, n = 4") {
    const auto t = diagonal_form(4, 2).to_multilinear();
    const auto est = sup_norm_estimate(t, 4.0, quick());
    CHECK(est.method == NormMethod::kAlternatingDual);
    CHECK(est.value == doctest::Approx(2.0).epsilon(0.01));
    CHECK(est.value <= 2.0 * (1 + 1e-12));
    CHECK(estimate_consistent(t, est));
  }
  SUBCASE("single monomial x1 y1, p = 2") {
    const auto p = bilinear({{1, 0}, {0, 0}});
    CHECK(sup_norm_estimate(p, 2.0, quick()).value == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("[[1,1],[-1,1]] at p = inf") {
    const auto p = bilinear({{1, 1}, {-1, 1}});
    CHECK(test::brute_force_cube_norm(p) == 2.0);
    CHECK(sup_norm_estimate(p, kInf, quick()).value == doctest::Approx(2.0).epsilon(1e-12));
  }
  SUBCASE("invalid p") {
    CHECK_THROWS_AS(sup_norm_estimate(bilinear({{1}}), 0.5, quick()), Error);
  }
}

TEST_CASE("sup_norm_estimate matches exact norms at p = 2") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto p = ksz_sample(5, 2, seed).to_multilinear();
    const auto est = sup_norm_estimate(p, 2.0, quick(seed));
    CHECK(est.value <= test::spectral_norm(p) * (1 + 1e-12));
    CHECK(est.value == doctest::Approx(test::spectral_norm(p)).epsilon(1e-6));
  }
}

TEST_CASE("gradient blocks reach the known maximum") {
  // z_1 z_2 on the l_2 sphere of R^2 peaks at 1/2.
  const auto p = PolynomialBuilder(BlockDegrees({2}), {2})
                     .add(MultiIndex::from_dense({{1, 1}}), 1.0)
                     .build();
  const auto est = sup_norm_estimate(p, 2.0, quick());
  CHECK(est.method == NormMethod::kGradientAscent);
  CHECK(est.value == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(estimate_consistent(p, est));

  // x_1^2 y_1 - x_2^2 y_1 on l_inf: value 1.
  const auto q = PolynomialBuilder(BlockDegrees({2, 1}), {2, 1})
                     .add(MultiIndex::from_dense({{2, 0}, {1}}), 1.0)
                     .add(MultiIndex::from_dense({{0, 2}, {1}}), -1.0)
                     .build();
  CHECK(sup_norm_estimate(q, kInf, quick()).value == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("estimates are feasible lower bounds") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto p = test::random_poly(BlockDegrees({2, 1}), {3, 2}, 10, seed);
    for (double pp : {1.0, 1.7, 2.0, 4.0, kInf}) {
      auto cfg = quick(seed);
      cfg.starts = 8;
      const auto est = sup_norm_estimate(p, pp, cfg);
      CHECK(estimate_consistent(p, est));
    }
  }
}

TEST_CASE("estimate reaches 99% of the vertex oracle on random 4-dim instances") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const auto p = ksz_sample(4, 2, 1000 + seed).to_multilinear();
    const double exact = sup_norm_exact_vertex(p).value;
    CHECK(exact == test::brute_force_cube_norm(p));
    CHECK(sup_norm_estimate(p, kInf, quick(seed)).value >= 0.99 * exact);
  }
}

TEST_CASE("norms scale with the coefficients") {
  const auto p = test::random_poly(BlockDegrees({1, 1, 1}), {3, 3, 2}, 12, 8);
  for (double t : {-2.5, 0.5, 3.0}) {
    PolynomialBuilder b(p.degrees(), p.dims());
    for (const auto& term : p.terms()) b.add(term.alpha, t * term.coeff);
    const auto scaled = b.build();
    CHECK(sup_norm_exact_vertex(scaled).value ==
          doctest::Approx(std::abs(t) * sup_norm_exact_vertex(p).value).epsilon(1e-14));
    CHECK(sup_norm_estimate(scaled, 3.0, quick(5)).value ==
          doctest::Approx(std::abs(t) * sup_norm_estimate(p, 3.0, quick(5)).value)
              .epsilon(1e-12));
  }
}

TEST_CASE("estimates are monotone in p") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const auto p = test::random_poly(BlockDegrees({1, 2}), {3, 3}, 10, 50 + seed);
    double previous = 0.0;
    for (double pp : {1.0, 1.5, 2.0, 3.0, 6.0, kInf}) {
      const double v = sup_norm_estimate(p, pp, quick(seed)).value;
      CHECK(previous <= v + 1e-6);
      previous = v;
    }
  }
}

TEST_CASE("estimates do not depend on the worker count") {
  const auto p = test::random_poly(BlockDegrees({2, 1}), {3, 3}, 15, 77);
  auto cfg = quick(9);
  cfg.workers = 1;
  const auto a = sup_norm_estimate(p, 3.0, cfg);
  cfg.workers = 5;
  const auto b = sup_norm_estimate(p, 3.0, cfg);
  CHECK(a.value == b.value);
  CHECK(a.best_point.blocks == b.best_point.blocks);
  CHECK(a.converged_starts == b.converged_starts);
}

TEST_CASE("sup_norm_exact_vertex") {
  SUBCASE("[[1,1],[-1,1]]") {
    CHECK(sup_norm_exact_vertex(bilinear({{1, 1}, {-1, 1}})).value == 2.0);
  }
  SUBCASE("diagonal forms give n") {
    for (std::uint64_t n : {1, 2, 5, 9}) {
      for (std::uint32_t m : {1, 2, 3}) {
        const auto est = sup_norm_exact_vertex(diagonal_form(n, m).to_multilinear());
        CHECK(est.value == static_cast<double>(n));
        CHECK(est.method == NormMethod::kVertexExact);
      }
    }
  }
  SUBCASE("zero polynomial") {
    Multipolynomial zero(BlockDegrees({1, 1}), {3, 3}, {});
    CHECK(sup_norm_exact_vertex(zero).value == 0.0);
  }
  SUBCASE("agrees with full enumeration on folded and random instances") {
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
      const auto t = ksz_sample(2, 3, seed);
      const auto one_block = fold_multilinear_to_polynomial(
          t, PartitionScheme::multilinear_to_poly(3, 2));
      CHECK(sup_norm_exact_vertex(one_block).value ==
            doctest::Approx(test::brute_force_cube_norm(one_block)).epsilon(1e-14));
      auto r = test::random_poly(BlockDegrees({1, 1, 1}), {3, 2, 3}, 10, seed);
      CHECK(sup_norm_exact_vertex(r).value ==
            doctest::Approx(test::brute_force_cube_norm(r)).epsilon(1e-12));
      CHECK(estimate_consistent(r, sup_norm_exact_vertex(r)));
    }
  }
  SUBCASE("preconditions") {
    const auto sq = PolynomialBuilder(BlockDegrees({2}), {2})
                        .add(MultiIndex::from_dense({{2, 0}}), 1.0)
                        .build();
    CHECK_THROWS_AS(sup_norm_exact_vertex(sq), Error);
    CHECK_FALSE(vertex_oracle_applicable(sq, kInf));
    const auto big = ksz_sample(30, 2, 1).to_multilinear();
    CHECK_THROWS_AS(sup_norm_exact_vertex(big, 1 << 20), Error);
    CHECK_FALSE(vertex_oracle_applicable(big, 2.0));
  }
}

TEST_CASE("holder_diagonal_bound") {
  CHECK(holder_diagonal_bound(4, 2, 4.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(holder_diagonal_bound(1, 3, 5.0) == 1.0);
  CHECK(holder_diagonal_bound(8, 2, 3.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK_THROWS_AS(holder_diagonal_bound(8, 3, 3.0), Error);
}

TEST_CASE("interpolated_norm_bound") {
  CHECK(interpolated_norm_bound(5.0, 3.0, 1.0) == 3.0);
  CHECK(interpolated_norm_bound(5.0, 3.0, 2.0) == 5.0);
  for (double n : {4.0, 16.0, 100.0}) {
    for (double q : {1.2, 1.5, 1.8}) {
      CHECK(interpolated_norm_bound(std::sqrt(n), 1.0, q) ==
            doctest::Approx(std::pow(n, 1.0 - 1.0 / q)).epsilon(1e-14));
    }
  }
  CHECK_THROWS_AS(interpolated_norm_bound(1.0, 1.0, 2.5), Error);
  CHECK_THROWS_AS(interpolated_norm_bound(1.0, 1.0, 0.9), Error);
}

TEST_CASE("l_q estimates respect the interpolated bound") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto p = ksz_sample(5, 2, 300 + seed).to_multilinear();
    const double frobenius = std::sqrt(static_cast<double>(p.size()));
    const double l1 = test::l1_bilinear_norm(p);
    for (double q : {1.25, 1.5, 1.75}) {
      const double est = sup_norm_estimate(p, q, quick(seed)).value;
      CHECK(est <= interpolated_norm_bound(frobenius, l1, q));
    }
  }
}
