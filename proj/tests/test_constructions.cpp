#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "hlpoly/constructions.hpp"
#include "hlpoly/error.hpp"
#include "hlpoly/norms.hpp"
#include "test_support.hpp"

using namespace hlpoly;

namespace {

Point random_target(const std::vector<std::uint32_t>& dims, std::uint64_t seed) {
  return test::random_point(dims, seed);
}

// Source point for a multipoly->poly fold: the leading coordinates of each part.
Point truncate_parts(const std::vector<std::vector<double>>& parts,
                     const std::vector<std::uint32_t>& dims) {
  Point x;
  for (std::size_t b = 0; b < dims.size(); ++b) {
    x.blocks.emplace_back(parts[b].begin(), parts[b].begin() + dims[b]);
  }
  return x;
}

std::vector<std::pair<std::vector<std::uint32_t>, int>> listed(const SignTensor& t) {
  std::vector<std::pair<std::vector<std::uint32_t>, int>> out;
  t.for_each_nonzero([&](std::span<const std::uint32_t> idx, int v) {
    out.push_back({{idx.begin(), idx.end()}, v});
  });
  return out;
}

}  // namespace

TEST_CASE("ksz_sample") {
  SUBCASE("n = 1, M = 1") {
    const auto t = ksz_sample(1, 1, 3);
    CHECK(t.nonzeros() == 1);
    const std::uint32_t idx[] = {0};
    CHECK(std::abs(t.at(idx)) == 1);
  }
  SUBCASE("every entry is a sign") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto t = ksz_sample(4, 2, seed);
      CHECK(t.nonzeros() == 16);
      const auto e = listed(t);
      CHECK(e.size() == 16);
      for (const auto& [idx, v] : e) CHECK((v == 1 || v == -1));
    }
    CHECK(ksz_sample(3, 4, 11).nonzeros() == 81);
  }
  SUBCASE("deterministic in the seed") {
    CHECK(listed(ksz_sample(5, 3, 42)) == listed(ksz_sample(5, 3, 42)));
    CHECK(listed(ksz_sample(5, 3, 42)) != listed(ksz_sample(5, 3, 43)));
  }
  SUBCASE("a fixed cell is unbiased") {
    const std::uint32_t cell[] = {2, 1};
    long sum = 0;
    for (std::uint64_t seed = 0; seed < 10000; ++seed) sum += ksz_sample(3, 2, seed).at(cell);
    CHECK(std::abs(static_cast<double>(sum) / 10000.0) <= 0.05);
  }
  SUBCASE("budget") {
    try {
      ksz_sample(4096, 4, 1);
      FAIL("expected budget error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kBudgetExceeded);
    }
    CHECK(checked_power(1ULL << 32, 3) == UINT64_MAX);
    CHECK(checked_power(7, 3) == 343);
  }
}

TEST_CASE("SignTensor round trips and apply") {
  const auto t = ksz_sample(3, 3, 8);
  const auto back = SignTensor::from_multilinear(t.to_multilinear());
  CHECK(listed(back) == listed(t));

  const auto sparse = SignTensor::from_entries(3, 3, listed(t), 1);
  CHECK_FALSE(sparse.dense());
  CHECK(listed(sparse) == listed(t));

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<std::vector<double>> args(3, std::vector<double>(3));
  for (auto& a : args) {
    for (auto& v : a) v = u(rng);
  }
  double expected = 0.0;
  for (const auto& [idx, v] : listed(t)) expected += v * args[0][idx[0]] * args[1][idx[1]] * args[2][idx[2]];
  CHECK(t.apply(args) == doctest::Approx(expected).epsilon(1e-14));
  CHECK(sparse.apply(args) == doctest::Approx(expected).epsilon(1e-14));

  CHECK_THROWS_AS(SignTensor::from_entries(2, 2, {{{0, 0}, 2}}), Error);
  CHECK_THROWS_AS(SignTensor::from_entries(2, 2, {{{0, 2}, 1}}), Error);
}

TEST_CASE("diagonal_form") {
  SUBCASE("n = 1 is a single monomial") {
    CHECK(diagonal_form(1, 4).to_multilinear().size() == 1);
  }
  SUBCASE("n = 3, M = 2 is the identity matrix") {
    const auto a = test::bilinear_matrix(diagonal_form(3, 2).to_multilinear());
    CHECK(a.isApprox(Eigen::MatrixXd::Identity(3, 3)));
  }
  SUBCASE("coefficient l_s value is n^(1/s)") {
    for (std::uint64_t n : {2, 5, 10}) {
      const auto w = diagonal_witness(n, BlockDegrees({2, 1}));
      for (double s : {0.5, 1.0, 3.0}) {
        CHECK(coeff_ls_value(w, s) ==
              doctest::Approx(std::pow(static_cast<double>(n), 1.0 / s)).epsilon(1e-14));
      }
    }
  }
  SUBCASE("sparse beyond the dense budget") {
    const auto t = diagonal_form(1000, 3);
    CHECK_FALSE(t.dense());
    CHECK(t.nonzeros() == 1000);
  }
}

TEST_CASE("fold_multilinear_to_polynomial") {
  SUBCASE("x1 y1 becomes z1 z2") {
    const auto p = fold_multilinear_to_polynomial(diagonal_form(1, 2),
                                                  PartitionScheme::multilinear_to_poly(2, 1));
    REQUIRE(p.size() == 1);
    CHECK(p.dims() == std::vector<std::uint32_t>{2});
    CHECK(p.terms()[0].alpha == MultiIndex::from_dense({{1, 1}}));
  }
  SUBCASE("term count and pointwise identity") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto t = ksz_sample(3, 3, seed);
      const auto scheme = PartitionScheme::multilinear_to_poly(3, 3);
      const auto p = fold_multilinear_to_polynomial(t, scheme);
      CHECK(p.size() == t.nonzeros());
      for (std::uint64_t k = 0; k < 100; ++k) {
        const auto z = random_target(p.dims(), seed * 1000 + k);
        CHECK(test::rel_err(evaluate(p, z), t.apply(scheme.split(z))) <= 1e-12);
      }
    }
  }
  SUBCASE("scheme mismatch") {
    CHECK_THROWS_AS(fold_multilinear_to_polynomial(
                        diagonal_form(2, 2), PartitionScheme::multilinear_to_poly(3, 2)),
                    Error);
    CHECK_THROWS_AS(fold_multilinear_to_polynomial(
                        diagonal_form(2, 2), PartitionScheme::multipoly_to_poly(2, 2)),
                    Error);
  }
}

TEST_CASE("fold_multilinear_to_multipolynomial") {
  SUBCASE("degrees (1,1) only relabels") {
    const auto t = ksz_sample(4, 2, 5);
    const auto q = fold_multilinear_to_multipolynomial(
        t, BlockDegrees({1, 1}), PartitionScheme::multilinear_to_multipoly(BlockDegrees({1, 1}), 4));
    const auto p = t.to_multilinear();
    REQUIRE(q.size() == p.size());
    for (std::size_t k = 0; k < q.size(); ++k) {
      CHECK(q.terms()[k].alpha == p.terms()[k].alpha);
      CHECK(q.terms()[k].coeff == p.terms()[k].coeff);
    }
  }
  SUBCASE("diagonal 3-form on n = 2 into degrees (2,1)") {
    const BlockDegrees deg({2, 1});
    const auto q = fold_multilinear_to_multipolynomial(
        diagonal_form(2, 3), deg, PartitionScheme::multilinear_to_multipoly(deg, 2));
    REQUIRE(q.size() == 2);
    CHECK(q.dims() == std::vector<std::uint32_t>{4, 2});
    CHECK(q.terms()[0].alpha == MultiIndex::from_dense({{0, 1, 0, 1}, {0, 1}}));
    CHECK(q.terms()[1].alpha == MultiIndex::from_dense({{1, 0, 1, 0}, {1, 0}}));
  }
  SUBCASE("pointwise identity and norm nonincrease") {
    const BlockDegrees deg({2, 1});
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto t = ksz_sample(2, 3, 70 + seed);
      const auto scheme = PartitionScheme::multilinear_to_multipoly(deg, 2);
      const auto q = fold_multilinear_to_multipolynomial(t, deg, scheme);
      for (std::uint64_t k = 0; k < 100; ++k) {
        const auto z = random_target(q.dims(), seed * 1000 + k);
        CHECK(test::rel_err(evaluate(q, z), t.apply(scheme.split(z))) <= 1e-12);
      }
      const double source = test::brute_force_cube_norm(t.to_multilinear());
      OptimizerConfig cfg;
      cfg.seed = seed;
      CHECK(sup_norm_estimate(q, kInf, cfg).value <= source * (1 + 1e-12));
      CHECK(test::brute_force_cube_norm(fold_multilinear_to_polynomial(
                t, PartitionScheme::multilinear_to_poly(3, 2))) <= source);
    }
  }
  SUBCASE("degree total must match the order") {
    CHECK_THROWS_AS(fold_multilinear_to_multipolynomial(
                        diagonal_form(2, 2), BlockDegrees({2, 1}),
                        PartitionScheme::multilinear_to_multipoly(BlockDegrees({2, 1}), 2)),
                    Error);
  }
}

TEST_CASE("fold_multipolynomial_to_homogeneous") {
  SUBCASE("x1^2 y1 with d = 3") {
    Multipolynomial p(BlockDegrees({2, 1}), {2, 1},
                      {{MultiIndex::from_dense({{2, 0}, {1}}), 1.0}});
    const auto q = fold_multipolynomial_to_homogeneous(p, PartitionScheme::multipoly_to_poly(2, 3));
    REQUIRE(q.size() == 1);
    CHECK(q.degrees().values() == std::vector<std::uint32_t>{3});
    CHECK(q.dims() == std::vector<std::uint32_t>{6});
    CHECK(q.terms()[0].alpha == MultiIndex::from_dense({{2, 0, 0, 1, 0, 0}}));
    CHECK(q.terms()[0].coeff == 1.0);
  }
  SUBCASE("coefficient multiset and pointwise identity on random inputs") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto p = test::random_poly(BlockDegrees({2, 1}), {3, 2}, 50, seed);
      const auto scheme = PartitionScheme::multipoly_to_poly(2, 3);
      const auto q = fold_multipolynomial_to_homogeneous(p, scheme);
      CHECK(sorted_abs_coefficients(q) == sorted_abs_coefficients(p));
      for (double s : {0.5, 1.0, 2.0}) CHECK(coeff_ls_value(q, s) == coeff_ls_value(p, s));
      for (std::uint64_t k = 0; k < 50; ++k) {
        const auto z = random_target(q.dims(), seed * 100 + k);
        const auto x = truncate_parts(scheme.split(z), p.dims());
        CHECK(test::rel_err(evaluate(q, z), evaluate(p, x)) <= 1e-12);
      }
    }
  }
  SUBCASE("norm does not increase on matched seeds") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto p = test::random_poly(BlockDegrees({2, 1}), {2, 2}, 6, 300 + seed);
      const auto q = fold_multipolynomial_to_homogeneous(p, PartitionScheme::multipoly_to_poly(2, 2));
      OptimizerConfig cfg;
      cfg.seed = seed;
      for (double pp : {2.0, 4.0, kInf}) {
        CHECK(sup_norm_estimate(q, pp, cfg).value <=
              sup_norm_estimate(p, pp, cfg).value * (1 + 1e-6) + 1e-9);
      }
    }
  }
  SUBCASE("part dimension too small") {
    const auto p = test::random_poly(BlockDegrees({2, 1}), {3, 2}, 5, 1);
    CHECK_THROWS_AS(fold_multipolynomial_to_homogeneous(p, PartitionScheme::multipoly_to_poly(2, 2)),
                    Error);
  }
}

TEST_CASE("ksz_witness") {
  SUBCASE("degrees (1,1), n = 2") {
    const auto w = ksz_witness(2, BlockDegrees({1, 1}), 3);
    CHECK(w.size() == 4);
    for (const auto& t : w.terms()) CHECK(std::abs(t.coeff) == 1.0);
  }
  SUBCASE("term count and coefficient value") {
    const auto w = ksz_witness(3, BlockDegrees({2, 1}), 9);
    CHECK(w.size() == 27);
    CHECK(w.dims() == std::vector<std::uint32_t>{6, 3});
    for (double s : {0.7, 1.0, 2.0}) {
      CHECK(coeff_ls_value(w, s) == doctest::Approx(std::pow(27.0, 1.0 / s)).epsilon(1e-14));
    }
  }
  SUBCASE("term limit") {
    CHECK_THROWS_AS(ksz_witness(100, BlockDegrees({2, 2}), 1, 1000), Error);
  }
}

TEST_CASE("ksz_bound") {
  CHECK(ksz_bound(4, 2, kInf) == doctest::Approx(8.0).epsilon(1e-15));
  CHECK(ksz_bound(9, 2, 2.0) == doctest::Approx(3.0).epsilon(1e-15));
  for (std::uint32_t m : {1, 2, 5}) {
    for (std::uint64_t n : {1, 7, 100}) CHECK(ksz_bound(n, m, 1.0) == 1.0);
  }
}

TEST_CASE("diagonal_form exact cube norm is n") {
  for (std::uint64_t n : {1, 3, 6}) {
    CHECK(sup_norm_exact_vertex(diagonal_form(n, 2).to_multilinear()).value ==
          static_cast<double>(n));
    CHECK(test::brute_force_cube_norm(diagonal_form(n, 2).to_multilinear()) ==
          static_cast<double>(n));
  }
}
