#include "hlpoly/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "hlpoly/constructions.hpp"
#include "hlpoly/error.hpp"
#include "hlpoly/parallel.hpp"
#include "hlpoly/rng.hpp"

namespace hlpoly {

std::string to_string(RecordNorm m) {
  switch (m) {
    case RecordNorm::kGradientAscent: return "gradient_ascent";
    case RecordNorm::kAlternatingDual: return "alternating_dual";
    case RecordNorm::kVertexExact: return "vertex_exact";
    case RecordNorm::kClosedForm: return "closed_form";
  }
  return "unknown";
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::kConsistent: return "consistent";
    case Verdict::kDivergentBelowCritical: return "divergent_below_critical";
    case Verdict::kInconsistent: return "inconsistent";
  }
  return "inconsistent";
}

double diagonal_witness_norm(std::uint64_t n, const BlockDegrees& degrees, double p) {
  require(n >= 1, ErrorKind::kInvalidArgument, "n must be >= 1");
  const double total = degrees.total();
  require(p > total, ErrorKind::kPrecondition,
          "closed-form diagonal norm needs p > M");
  if (std::isinf(p)) return static_cast<double>(n);
  double value = std::pow(static_cast<double>(n), (p - total) / p);
  for (auto d : degrees.values()) value *= std::pow(static_cast<double>(d), -(d / p));
  return value;
}

Point diagonal_witness_maximizer(std::uint64_t n, const BlockDegrees& degrees, double p) {
  require_valid_p(p);
  Point x;
  for (auto d : degrees.values()) {
    const double v = std::isinf(p) ? 1.0 : std::pow(static_cast<double>(d * n), -1.0 / p);
    x.blocks.emplace_back(static_cast<std::size_t>(d * n), v);
  }
  return x;
}

ExperimentRecord hl_ratio(const Multipolynomial& poly, double p, double s,
                          const RatioOptions& options) {
  require_valid_p(p);
  ExperimentRecord r;
  r.degrees = poly.degrees().values();
  r.degree_total = poly.degrees().total();
  r.p = p;
  r.s = s;
  r.coeff_value = coeff_ls_value(poly, s);

  if (options.known_norm) {
    r.norm_value = *options.known_norm;
    r.norm_method = RecordNorm::kClosedForm;
  } else if (vertex_oracle_applicable(poly, p, options.vertex_budget)) {
    r.norm_value = sup_norm_exact_vertex(poly, options.vertex_budget).value;
    r.norm_method = RecordNorm::kVertexExact;
  } else {
    const auto est = sup_norm_estimate(poly, p, options.optimizer);
    r.norm_value = est.value;
    r.norm_method = est.method == NormMethod::kAlternatingDual
                        ? RecordNorm::kAlternatingDual
                        : RecordNorm::kGradientAscent;
  }
  require(r.norm_value > 0.0, ErrorKind::kInvalidArgument,
          "norm is zero; the ratio is undefined");
  r.ratio = r.coeff_value / r.norm_value;
  return r;
}

SweepResult ratio_sweep(const SweepConfig& config) {
  const BlockDegrees degrees(config.degrees);
  require(config.n_grid.size() >= 3, ErrorKind::kInvalidArgument,
          "n_grid needs at least 3 values");
  for (std::size_t i = 1; i < config.n_grid.size(); ++i) {
    require(config.n_grid[i] > config.n_grid[i - 1], ErrorKind::kInvalidArgument,
            "n_grid must be strictly increasing");
  }
  require(config.n_grid.front() >= 1, ErrorKind::kInvalidArgument, "n must be >= 1");
  require_valid_p(config.p);
  require(config.s > 0.0, ErrorKind::kInvalidArgument, "s must be positive");
  config.optimizer.validate();

  const bool ksz = config.family == WitnessFamily::kKsz;
  require(!ksz || !config.seeds.empty(), ErrorKind::kInvalidArgument,
          "KSZ sweeps need at least one seed");
  const std::size_t per_n = ksz ? config.seeds.size() : 1;
  const std::uint64_t diagonal_seed = config.seeds.empty() ? 0 : config.seeds.front();
  const bool closed_form = !ksz && config.p > degrees.total();

  SweepResult result;
  result.samples.resize(config.n_grid.size() * per_n);
  const std::size_t workers = config.workers == 0 ? default_workers() : config.workers;

  parallel_for(result.samples.size(), workers, [&](std::size_t job) {
    const auto start = std::chrono::steady_clock::now();
    const std::uint64_t n = config.n_grid[job / per_n];
    const std::uint64_t seed = ksz ? config.seeds[job % per_n] : diagonal_seed;

    RatioOptions options;
    options.optimizer = config.optimizer;
    options.optimizer.workers = 1;
    options.optimizer.seed = derive_seed(config.optimizer.seed ^ seed, n);
    options.vertex_budget = config.vertex_budget;
    if (closed_form) options.known_norm = diagonal_witness_norm(n, degrees, config.p);

    const auto poly = ksz ? ksz_witness(n, degrees, seed) : diagonal_witness(n, degrees);
    ExperimentRecord r = hl_ratio(poly, config.p, config.s, options);
    r.family = to_string(config.family);
    r.n = n;
    r.seed = seed;
    if (config.record_timing) {
      r.wall_time_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - start)
                           .count();
    }
    result.samples[job] = std::move(r);
  });

  for (std::size_t i = 0; i < config.n_grid.size(); ++i) {
    std::vector<std::size_t> order(per_n);
    std::iota(order.begin(), order.end(), i * per_n);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return result.samples[a].ratio < result.samples[b].ratio;
    });
    result.records.push_back(result.samples[order[(per_n - 1) / 2]]);
  }
  return result;
}

SlopeFit loglog_fit(const std::vector<std::uint64_t>& n,
                    const std::vector<double>& values) {
  require(n.size() == values.size(), ErrorKind::kInvalidArgument,
          "fit inputs differ in length");
  require(n.size() >= 3, ErrorKind::kInvalidArgument, "slope fit needs >= 3 points");
  std::vector<std::size_t> order(n.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return n[a] < n[b]; });

  SlopeFit fit;
  std::vector<double> xs, ys;
  for (auto i : order) {
    require(n[i] >= 1 && values[i] > 0.0, ErrorKind::kInvalidArgument,
            "slope fit needs n >= 1 and positive values");
    require(fit.n_grid.empty() || n[i] > fit.n_grid.back(),
            ErrorKind::kInvalidArgument, "slope fit needs distinct n");
    fit.n_grid.push_back(n[i]);
    xs.push_back(std::log(static_cast<double>(n[i])));
    ys.push_back(std::log(values[i]));
  }
  const double k = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / k;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / k;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (fit.intercept + fit.slope * xs[i]);
    sse += e * e;
  }
  // A constant series is fitted perfectly by a zero slope.
  fit.r2 = syy > 0.0 ? std::clamp(1.0 - sse / syy, 0.0, 1.0) : 1.0;
  return fit;
}

SlopeFit slope_fit(const std::vector<ExperimentRecord>& records) {
  std::vector<std::uint64_t> n;
  std::vector<double> ratios;
  for (const auto& r : records) {
    n.push_back(r.n);
    ratios.push_back(r.ratio);
  }
  return loglog_fit(n, ratios);
}

Verdict sharpness_verdict(const SlopeFit& fit, double theory, double tol) {
  if (std::abs(fit.slope - theory) <= tol) return Verdict::kConsistent;
  if (theory > 0.0 && fit.slope > tol) return Verdict::kDivergentBelowCritical;
  return Verdict::kInconsistent;
}

double constant_estimate(const std::vector<ExperimentRecord>& records) {
  require(!records.empty(), ErrorKind::kInvalidArgument,
          "constant estimate needs at least one record");
  const auto& first = records.front();
  double best = 0.0;
  for (const auto& r : records) {
    require(r.degrees == first.degrees && r.p == first.p && r.s == first.s,
            ErrorKind::kInvalidArgument,
            "records must share degrees, p and s");
    best = std::max(best, r.ratio);
  }
  return best;
}

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_header() {
  return "family,degrees,M,p,s,n,seed,coeff_value,norm_value,norm_method,ratio,"
         "wall_time_ms";
}

std::string to_csv_row(const ExperimentRecord& r) {
  std::string degrees;
  for (std::size_t i = 0; i < r.degrees.size(); ++i) {
    if (i) degrees += ',';
    degrees += std::to_string(r.degrees[i]);
  }
  std::string row;
  row += r.family + ",\"" + degrees + "\"," + std::to_string(r.degree_total) + ",";
  row += format_double(r.p) + "," + format_double(r.s) + ",";
  row += std::to_string(r.n) + "," + std::to_string(r.seed) + ",";
  row += format_double(r.coeff_value) + "," + format_double(r.norm_value) + ",";
  row += to_string(r.norm_method) + "," + format_double(r.ratio) + ",";
  row += std::to_string(r.wall_time_ms);
  return row;
}

}  // namespace hlpoly
