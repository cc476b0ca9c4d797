#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "hlpoly/core.hpp"

namespace hlpoly {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Exponent p of the ball B_{l_p}; p == kInf is the cube.
void require_valid_p(double p);

// l_p norm of v; p == kInf gives max |v_j|.
double lp_norm(std::span<const double> v, double p);

// Hoelder conjugate of p (1 <-> inf).
double conjugate_exponent(double p);

// v / ||v||_p. Throws kInvalidArgument for a zero vector.
std::vector<double> lp_sphere_project(std::span<const double> v, double p);

// Unit-norm maximizer of <g, x> over the l_p ball, so <g, x> = ||g||_{p'}.
// A zero functional yields the zero vector.
std::vector<double> lp_dual_maximizer(std::span<const double> g, double p);

enum class NormMethod { kGradientAscent, kAlternatingDual, kVertexExact };

std::string to_string(NormMethod m);
NormMethod parse_norm_method(const std::string& s);

// A lower bound on sup |P| over the product of l_p unit balls, witnessed by
// best_point. For kVertexExact the value is the exact norm.
struct NormEstimate {
  double value = 0.0;
  NormMethod method = NormMethod::kGradientAscent;
  std::size_t starts = 0;
  std::size_t converged_starts = 0;
  double p = kInf;
  Point best_point;
};

struct OptimizerConfig {
  std::size_t starts = 64;
  std::size_t max_iters = 2000;
  double step_init = 0.1;
  double rel_tol = 1e-9;
  std::uint64_t seed = 0;
  // 0 selects default_workers(). Results do not depend on this value.
  std::size_t workers = 0;

  void validate() const;
};

// Multi-start block-coordinate ascent on |P|. Degree-1 blocks are set to the
// exact l_p dual maximizer of the linear functional they induce; other blocks
// take backtracking gradient steps followed by projection onto the l_p sphere
// (clamping to the cube for p = inf).
NormEstimate sup_norm_estimate(const Multipolynomial& poly, double p,
                               const OptimizerConfig& cfg = {});

inline constexpr std::uint64_t kDefaultVertexBudget = std::uint64_t{1} << 24;

// Exact sup-norm of a multi-affine polynomial over the cube (p = inf). Signs of
// all coordinates outside a maximal set of pairwise non-co-occurring
// coordinates are enumerated in Gray-code order; the remaining coordinates are
// resolved in closed form as an l_1 norm.
NormEstimate sup_norm_exact_vertex(const Multipolynomial& poly,
                                   std::uint64_t budget = kDefaultVertexBudget);

// True when sup_norm_exact_vertex would accept (poly, p, budget).
bool vertex_oracle_applicable(const Multipolynomial& poly, double p,
                              std::uint64_t budget = kDefaultVertexBudget);

// n^{(p-M)/p}: the Hoelder bound for the diagonal M-linear form on l_p^n.
double holder_diagonal_bound(std::uint64_t n, std::uint32_t degree_total, double p);

// norm2^theta * norm1^{1-theta} with theta = (2q - 2)/q.
double interpolated_norm_bound(double norm2, double norm1, double q);

// Re-checks the NormEstimate invariants against poly: feasibility of
// best_point and value == |P(best_point)|.
bool estimate_consistent(const Multipolynomial& poly, const NormEstimate& est);

}  // namespace hlpoly
