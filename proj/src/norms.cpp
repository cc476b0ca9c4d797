#include "hlpoly/norms.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>

#include "hlpoly/error.hpp"
#include "hlpoly/parallel.hpp"
#include "hlpoly/rng.hpp"

namespace hlpoly {

void require_valid_p(double p) {
  require(p >= 1.0 && !std::isnan(p), ErrorKind::kInvalidArgument,
          "p must lie in [1, inf], got " + std::to_string(p));
}

double lp_norm(std::span<const double> v, double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  }
  if (p == 1.0) {
    double s = 0.0;
    for (double x : v) s += std::abs(x);
    return s;
  }
  // Scale by the max entry to keep |x|^p in range.
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (double x : v) s += std::pow(std::abs(x) / m, p);
  return m * std::pow(s, 1.0 / p);
}

double conjugate_exponent(double p) {
  require_valid_p(p);
  if (p == 1.0) return kInf;
  if (std::isinf(p)) return 1.0;
  return p / (p - 1.0);
}

std::vector<double> lp_sphere_project(std::span<const double> v, double p) {
  require_valid_p(p);
  const double norm = lp_norm(v, p);
  require(norm > 0.0, ErrorKind::kInvalidArgument,
          "cannot project the zero vector onto the unit sphere");
  std::vector<double> out(v.begin(), v.end());
  for (auto& x : out) x /= norm;
  return out;
}

std::vector<double> lp_dual_maximizer(std::span<const double> g, double p) {
  require_valid_p(p);
  std::vector<double> x(g.size(), 0.0);
  if (lp_norm(g, kInf) == 0.0) return x;
  if (std::isinf(p)) {
    for (std::size_t j = 0; j < g.size(); ++j) x[j] = g[j] < 0.0 ? -1.0 : 1.0;
    return x;
  }
  if (p == 1.0) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < g.size(); ++j) {
      if (std::abs(g[j]) > std::abs(g[best])) best = j;
    }
    x[best] = g[best] < 0.0 ? -1.0 : 1.0;
    return x;
  }
  const double m = lp_norm(g, kInf);
  const double power = 1.0 / (p - 1.0);
  for (std::size_t j = 0; j < g.size(); ++j) {
    x[j] = std::copysign(std::pow(std::abs(g[j]) / m, power), g[j]);
  }
  return lp_sphere_project(x, p);
}

std::string to_string(NormMethod m) {
  switch (m) {
    case NormMethod::kGradientAscent: return "gradient_ascent";
    case NormMethod::kAlternatingDual: return "alternating_dual";
    case NormMethod::kVertexExact: return "vertex_exact";
  }
  return "unknown";
}

NormMethod parse_norm_method(const std::string& s) {
  if (s == "gradient_ascent") return NormMethod::kGradientAscent;
  if (s == "alternating_dual") return NormMethod::kAlternatingDual;
  if (s == "vertex_exact") return NormMethod::kVertexExact;
  fail(ErrorKind::kParse, "unknown norm method '" + s + "'");
}

void OptimizerConfig::validate() const {
  require(starts >= 1, ErrorKind::kInvalidArgument, "starts must be >= 1");
  require(max_iters >= 1, ErrorKind::kInvalidArgument, "max_iters must be >= 1");
  require(step_init > 0.0 && std::isfinite(step_init), ErrorKind::kInvalidArgument,
          "step_init must be positive");
  require(rel_tol > 0.0 && rel_tol < 1.0, ErrorKind::kInvalidArgument,
          "rel_tol must lie in (0, 1)");
}

// ------------------------------------------------------------ ascent estimator

namespace {

constexpr double kMinStep = 1e-14;

struct StartResult {
  double value = 0.0;
  std::vector<double> x;
  bool converged = false;
};

// Moves a block back onto the unit sphere of l_p. Returns false when the
// block collapsed to zero.
bool project_block(std::span<double> block, double p) {
  if (std::isinf(p)) {
    for (auto& v : block) v = std::clamp(v, -1.0, 1.0);
  }
  const double norm = lp_norm(block, p);
  if (norm == 0.0) return false;
  for (auto& v : block) v /= norm;
  return true;
}

class AscentRun {
 public:
  AscentRun(const Multipolynomial& poly, double p, const OptimizerConfig& cfg)
      : poly_(poly), p_(p), cfg_(cfg), grad_(poly.total_dim()) {}

  StartResult run(std::size_t start_index) {
    StartResult r;
    r.x = initial_point(start_index);
    double value = poly_.evaluate_flat(r.x);
    std::vector<double> steps(poly_.blocks(), cfg_.step_init);

    for (std::size_t iter = 0; iter < cfg_.max_iters; ++iter) {
      const double previous = std::abs(value);
      for (std::size_t b = 0; b < poly_.blocks(); ++b) {
        if (poly_.degrees()[b] == 1) {
          dual_update(r.x, b, value);
        } else {
          dual_direction_update(r.x, b, value);
          gradient_update(r.x, b, value, steps[b]);
        }
      }
      if (std::abs(value) - previous <= cfg_.rel_tol * std::abs(value)) {
        r.converged = true;
        break;
      }
    }
    r.value = std::abs(poly_.evaluate_flat(r.x));
    return r;
  }

 private:
  std::span<double> block_of(std::vector<double>& x, std::size_t b) const {
    return {x.data() + poly_.block_offset(b), poly_.dims()[b]};
  }

  std::vector<double> initial_point(std::size_t start_index) const {
    Engine engine = make_engine(cfg_.seed, start_index);
    std::vector<double> x(poly_.total_dim());
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);
    for (std::size_t b = 0; b < poly_.blocks(); ++b) {
      auto block = block_of(x, b);
      do {
        for (auto& v : block) v = std::isinf(p_) ? uniform(engine) : normal(engine);
      } while (!project_block(block, p_));
    }
    return x;
  }

  // P is linear in a degree-1 block, so P = <g, x_b> and the exact maximizer
  // is the dual vector of g.
  void dual_update(std::vector<double>& x, std::size_t b, double& value) {
    poly_.gradient_flat(x, grad_);
    const std::span<const double> g(grad_.data() + poly_.block_offset(b),
                                    poly_.dims()[b]);
    auto next = lp_dual_maximizer(g, p_);
    if (lp_norm(next, kInf) == 0.0) return;
    if (value < 0.0) {
      for (auto& v : next) v = -v;
    }
    auto block = block_of(x, b);
    std::vector<double> saved(block.begin(), block.end());
    std::copy(next.begin(), next.end(), block.begin());
    const double candidate = poly_.evaluate_flat(x);
    if (std::abs(candidate) >= std::abs(value)) {
      value = candidate;
    } else {
      std::copy(saved.begin(), saved.end(), block.begin());
    }
  }

  // Moves toward the maximizer of the linearization, u = dual(grad), along
  // (1 - t) x_b + t u with halving t; the sphere rescale can only raise |P|.
  void dual_direction_update(std::vector<double>& x, std::size_t b, double& value) {
    poly_.gradient_flat(x, grad_);
    const std::span<const double> g(grad_.data() + poly_.block_offset(b),
                                    poly_.dims()[b]);
    auto target = lp_dual_maximizer(g, p_);
    if (lp_norm(target, kInf) == 0.0) return;
    if (value < 0.0) {
      for (auto& v : target) v = -v;
    }
    auto block = block_of(x, b);
    std::vector<double> saved(block.begin(), block.end());
    for (double t = 1.0; t >= 1e-6; t *= 0.5) {
      for (std::size_t j = 0; j < block.size(); ++j) {
        block[j] = (1.0 - t) * saved[j] + t * target[j];
      }
      if (project_block(block, p_)) {
        const double candidate = poly_.evaluate_flat(x);
        if (std::abs(candidate) > std::abs(value)) {
          value = candidate;
          return;
        }
      }
    }
    std::copy(saved.begin(), saved.end(), block.begin());
  }

  void gradient_update(std::vector<double>& x, std::size_t b, double& value,
                       double& step) {
    poly_.gradient_flat(x, grad_);
    auto block = block_of(x, b);
    std::vector<double> dir(grad_.begin() + poly_.block_offset(b),
                            grad_.begin() + poly_.block_offset(b) + block.size());
    const double norm = lp_norm(dir, 2.0);
    if (norm == 0.0) return;
    const double scale = (value < 0.0 ? -1.0 : 1.0) / norm;
    for (auto& v : dir) v *= scale;

    std::vector<double> saved(block.begin(), block.end());
    for (double h = step; h >= kMinStep; h *= 0.5) {
      for (std::size_t j = 0; j < block.size(); ++j) block[j] = saved[j] + h * dir[j];
      if (project_block(block, p_)) {
        const double candidate = poly_.evaluate_flat(x);
        if (std::abs(candidate) > std::abs(value)) {
          value = candidate;
          step = std::min(2.0 * h, 1.0);
          return;
        }
      }
    }
    std::copy(saved.begin(), saved.end(), block.begin());
    step = cfg_.step_init;
  }

  const Multipolynomial& poly_;
  double p_;
  const OptimizerConfig& cfg_;
  std::vector<double> grad_;
};

}  // namespace

NormEstimate sup_norm_estimate(const Multipolynomial& poly, double p,
                               const OptimizerConfig& cfg) {
  require_valid_p(p);
  cfg.validate();
  poly.require_valid();

  const bool all_linear = std::all_of(
      poly.degrees().values().begin(), poly.degrees().values().end(),
      [](std::uint32_t d) { return d == 1; });

  std::vector<StartResult> results(cfg.starts);
  const std::size_t workers = cfg.workers == 0 ? default_workers() : cfg.workers;
  parallel_for(cfg.starts, workers, [&](std::size_t i) {
    AscentRun run(poly, p, cfg);
    results[i] = run.run(i);
  });

  NormEstimate est;
  est.method = all_linear ? NormMethod::kAlternatingDual : NormMethod::kGradientAscent;
  est.starts = cfg.starts;
  est.p = p;
  std::size_t best = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (results[i].converged) ++est.converged_starts;
    if (results[i].value > results[best].value) best = i;
  }
  est.value = results[best].value;
  est.best_point = Point::unflatten(results[best].x, poly.dims());
  return est;
}

// --------------------------------------------------------------- vertex oracle

namespace {

struct VertexPlan {
  std::vector<std::uint32_t> enumerated;  // flat coordinates
  std::vector<bool> is_free;              // per flat coordinate
};

// Greedy maximal set of coordinates no two of which share a monomial,
// scanned from the last coordinate down.
VertexPlan plan_vertex_enumeration(const Multipolynomial& poly) {
  const std::size_t n = poly.total_dim();
  std::vector<std::vector<std::size_t>> terms_of(n);
  for (std::size_t t = 0; t < poly.size(); ++t) {
    for (const auto& f : poly.terms()[t].alpha.factors()) {
      terms_of[poly.block_offset(f.block) + f.coord].push_back(t);
    }
  }
  VertexPlan plan;
  plan.is_free.assign(n, false);
  std::vector<bool> term_has_free(poly.size(), false);
  for (std::size_t c = n; c-- > 0;) {
    const bool ok = std::none_of(terms_of[c].begin(), terms_of[c].end(),
                                 [&](std::size_t t) { return term_has_free[t]; });
    if (ok) {
      plan.is_free[c] = true;
      for (auto t : terms_of[c]) term_has_free[t] = true;
    }
  }
  for (std::size_t c = 0; c < n; ++c) {
    if (!plan.is_free[c]) plan.enumerated.push_back(static_cast<std::uint32_t>(c));
  }
  return plan;
}

bool within_budget(std::size_t enumerated, std::uint64_t budget) {
  return enumerated < 63 && (std::uint64_t{1} << enumerated) <= budget;
}

}  // namespace

bool vertex_oracle_applicable(const Multipolynomial& poly, double p,
                              std::uint64_t budget) {
  if (!std::isinf(p) || !poly.valid() || !poly.multi_affine()) return false;
  return within_budget(plan_vertex_enumeration(poly).enumerated.size(), budget);
}

NormEstimate sup_norm_exact_vertex(const Multipolynomial& poly,
                                   std::uint64_t budget) {
  poly.require_valid();
  require(poly.multi_affine(), ErrorKind::kPrecondition,
          "vertex oracle needs every exponent <= 1");
  const VertexPlan plan = plan_vertex_enumeration(poly);
  const std::size_t e = plan.enumerated.size();
  require(within_budget(e, budget), ErrorKind::kBudgetExceeded,
          "vertex enumeration over 2^" + std::to_string(e) +
              " sign patterns exceeds budget " + std::to_string(budget));

  const std::size_t n = poly.total_dim();
  std::vector<std::size_t> position(n, SIZE_MAX);  // index into enumerated
  for (std::size_t k = 0; k < e; ++k) position[plan.enumerated[k]] = k;

  // Per term: current signed contribution (all enumerated signs +1 at start)
  // and the free coordinate it is linear in, if any.
  const std::size_t terms = poly.size();
  std::vector<double> contrib(terms);
  std::vector<std::size_t> free_coord(terms, SIZE_MAX);
  std::vector<std::vector<std::size_t>> terms_of(e);
  for (std::size_t t = 0; t < terms; ++t) {
    contrib[t] = poly.terms()[t].coeff;
    for (const auto& f : poly.terms()[t].alpha.factors()) {
      const std::size_t c = poly.block_offset(f.block) + f.coord;
      if (plan.is_free[c]) {
        free_coord[t] = c;
      } else {
        terms_of[position[c]].push_back(t);
      }
    }
  }

  std::vector<double> linear(n, 0.0);
  double constant = 0.0;
  for (std::size_t t = 0; t < terms; ++t) {
    (free_coord[t] == SIZE_MAX ? constant : linear[free_coord[t]]) += contrib[t];
  }
  auto current_value = [&] {
    double v = std::abs(constant);
    for (std::size_t c = 0; c < n; ++c) {
      if (plan.is_free[c]) v += std::abs(linear[c]);
    }
    return v;
  };

  double best_value = current_value();
  std::uint64_t best_code = 0;
  const std::uint64_t patterns = std::uint64_t{1} << e;
  for (std::uint64_t k = 1; k < patterns; ++k) {
    const auto bit = static_cast<std::size_t>(std::countr_zero(k));
    for (auto t : terms_of[bit]) {
      contrib[t] = -contrib[t];
      (free_coord[t] == SIZE_MAX ? constant : linear[free_coord[t]]) += 2.0 * contrib[t];
    }
    const double v = current_value();
    if (v > best_value) {
      best_value = v;
      best_code = k ^ (k >> 1);
    }
  }

  // Rebuild the maximizing vertex and re-evaluate from scratch.
  std::vector<double> x(n, 1.0);
  for (std::size_t k = 0; k < e; ++k) {
    if ((best_code >> k) & 1U) x[plan.enumerated[k]] = -1.0;
  }
  std::fill(linear.begin(), linear.end(), 0.0);
  constant = 0.0;
  for (std::size_t t = 0; t < terms; ++t) {
    double v = poly.terms()[t].coeff;
    for (const auto& f : poly.terms()[t].alpha.factors()) {
      const std::size_t c = poly.block_offset(f.block) + f.coord;
      if (!plan.is_free[c]) v *= x[c];
    }
    (free_coord[t] == SIZE_MAX ? constant : linear[free_coord[t]]) += v;
  }
  const double orient = constant < 0.0 ? -1.0 : 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    if (plan.is_free[c]) x[c] = orient * (linear[c] < 0.0 ? -1.0 : 1.0);
  }

  NormEstimate est;
  est.method = NormMethod::kVertexExact;
  est.starts = 1;
  est.converged_starts = 1;
  est.p = kInf;
  est.value = std::abs(poly.evaluate_flat(x));
  est.best_point = Point::unflatten(x, poly.dims());
  return est;
}

// ------------------------------------------------------------- closed forms

double holder_diagonal_bound(std::uint64_t n, std::uint32_t degree_total, double p) {
  require(n >= 1 && degree_total >= 1, ErrorKind::kInvalidArgument,
          "n and M must be >= 1");
  require(p > degree_total, ErrorKind::kPrecondition,
          "Hoelder diagonal bound needs p > M");
  if (std::isinf(p)) return static_cast<double>(n);
  return std::pow(static_cast<double>(n), (p - degree_total) / p);
}

double interpolated_norm_bound(double norm2, double norm1, double q) {
  require(q >= 1.0 && q <= 2.0, ErrorKind::kInvalidArgument,
          "interpolation exponent q must lie in [1, 2]");
  require(norm2 >= 0.0 && norm1 >= 0.0, ErrorKind::kInvalidArgument,
          "norms must be nonnegative");
  const double theta = (2.0 * q - 2.0) / q;
  return std::pow(norm2, theta) * std::pow(norm1, 1.0 - theta);
}

bool estimate_consistent(const Multipolynomial& poly, const NormEstimate& est) {
  if (est.best_point.blocks.size() != poly.blocks()) return false;
  for (std::size_t b = 0; b < poly.blocks(); ++b) {
    if (est.best_point.blocks[b].size() != poly.dims()[b]) return false;
    if (lp_norm(est.best_point.blocks[b], est.p) > 1.0 + 1e-12) return false;
  }
  return nearly_equal(est.value, std::abs(evaluate(poly, est.best_point)));
}

}  // namespace hlpoly
