#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hlpoly/core.hpp"
#include "hlpoly/exponents.hpp"
#include "hlpoly/norms.hpp"

namespace hlpoly {

// How a record's norm was obtained. kClosedForm is used for the diagonal
// family, whose norm is known exactly for p > M.
enum class RecordNorm { kGradientAscent, kAlternatingDual, kVertexExact, kClosedForm };

std::string to_string(RecordNorm m);

struct ExperimentRecord {
  std::string family;
  std::vector<std::uint32_t> degrees;
  std::uint32_t degree_total = 0;
  double p = kInf;
  double s = 1.0;
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
  double coeff_value = 0.0;
  double norm_value = 0.0;
  RecordNorm norm_method = RecordNorm::kGradientAscent;
  double ratio = 0.0;
  std::int64_t wall_time_ms = 0;
};

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::vector<std::uint64_t> n_grid;
};

enum class Verdict { kConsistent, kDivergentBelowCritical, kInconsistent };

std::string to_string(Verdict v);

// Exact sup-norm over the product of l_p balls of the diagonal form folded
// into `degrees`, valid for p > M:
//   n^{(p-M)/p} * prod_i n_i^{-n_i/p},
// which reduces to n^{(p-M)/p} for the M-linear form.
double diagonal_witness_norm(std::uint64_t n, const BlockDegrees& degrees, double p);

// The point attaining diagonal_witness_norm: every coordinate of block i
// equal to (n_i n)^{-1/p}.
Point diagonal_witness_maximizer(std::uint64_t n, const BlockDegrees& degrees, double p);

struct RatioOptions {
  OptimizerConfig optimizer;
  std::uint64_t vertex_budget = kDefaultVertexBudget;
  // Overrides the norm computation when the exact value is known.
  std::optional<double> known_norm;
};

// coefficient l_s value over sup-norm. The norm comes from known_norm, the
// vertex oracle when it applies, or the ascent estimator otherwise; since the
// latter is a lower bound, the ratio is then an upper estimate.
ExperimentRecord hl_ratio(const Multipolynomial& poly, double p, double s,
                          const RatioOptions& options = {});

struct SweepConfig {
  WitnessFamily family = WitnessFamily::kDiagonal;
  std::vector<std::uint32_t> degrees{1, 1};
  double p = kInf;
  double s = 1.0;
  std::vector<std::uint64_t> n_grid{4, 8, 16, 32};
  std::vector<std::uint64_t> seeds{0};
  OptimizerConfig optimizer;
  std::uint64_t vertex_budget = kDefaultVertexBudget;
  bool record_timing = false;
  // 0 selects default_workers(). Results do not depend on this value.
  std::size_t workers = 0;
};

struct SweepResult {
  // One record per n: the lower-median-ratio sample across seeds.
  std::vector<ExperimentRecord> records;
  // Every (n, seed) sample, ordered by (n, seed position).
  std::vector<ExperimentRecord> samples;
};

SweepResult ratio_sweep(const SweepConfig& config);

// Ordinary least squares of log(ratio) on log(n).
SlopeFit slope_fit(const std::vector<ExperimentRecord>& records);

// Same fit for arbitrary (n, value) pairs.
SlopeFit loglog_fit(const std::vector<std::uint64_t>& n,
                    const std::vector<double>& values);

Verdict sharpness_verdict(const SlopeFit& fit, double theory, double tol);

// Largest observed ratio: an empirical lower bound on the best constant.
double constant_estimate(const std::vector<ExperimentRecord>& records);

// CSV with the fixed column order, floats at 17 significant digits.
std::string csv_header();
std::string to_csv_row(const ExperimentRecord& r);
std::string format_double(double v);

}  // namespace hlpoly
