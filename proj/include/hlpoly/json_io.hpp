#pragma once

#include <cstdint>
#include <string>

#include "hlpoly/core.hpp"
#include "hlpoly/experiments.hpp"
#include "hlpoly/norms.hpp"

namespace hlpoly {

// Polynomial file format:
//   {"degrees":[n1,...,nm],"dims":[d1,...,dm],
//    "terms":[{"alpha":[[...],...,[...]],"coeff":c},...]}
// Terms are written in multi-index order; doubles round-trip exactly. Unknown
// top-level keys are ignored on input.
std::string polynomial_to_json(const Multipolynomial& poly);

// Parses the file format. Structural problems (missing keys, exponent vectors
// whose lengths disagree with dims) throw kParse; semantic invariants are left
// to validate().
Multipolynomial polynomial_from_json(const std::string& text,
                                     std::size_t max_terms = kDefaultMaxTerms);

std::string norm_estimate_to_json(const NormEstimate& est);

// p as JSON: a number, or the string "inf".
std::string p_to_string(double p);
double parse_p(const std::string& text);

// A sweep plus the tolerance used for its verdict, resolved so that it fully
// determines the output. Input keys:
//   family, degrees, p, s, n_grid, seed, seeds | num_seeds,
//   optimizer{starts,max_iters,step_init,rel_tol,seed}, vertex_budget,
//   record_timing, tol
// Missing witness seeds are derive_seed(seed, 1 + k); a missing optimizer seed
// is derive_seed(seed, 0).
struct SweepRun {
  SweepConfig config;
  std::uint64_t seed = 0;
  double tol = 0.02;
};

SweepRun parse_sweep_run(const std::string& json_text);
std::string sweep_run_to_json(const SweepRun& run);

// Runs the sweep and renders the CSV: a "# config=" line holding the resolved
// run, the header, one row per n, and a "# slope=... r2=... theory=...
// verdict=..." summary line.
std::string run_sweep_csv(const SweepRun& run);

}  // namespace hlpoly
