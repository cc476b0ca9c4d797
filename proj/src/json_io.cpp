#include "hlpoly/json_io.hpp"

#include <cmath>
#include <json.hpp>

#include "hlpoly/error.hpp"
#include "hlpoly/rng.hpp"

namespace hlpoly {

using json = nlohmann::json;

namespace {

template <typename T>
T get_field(const json& j, const char* key) {
  require(j.is_object() && j.contains(key), ErrorKind::kParse,
          std::string("missing key '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    fail(ErrorKind::kParse, std::string("bad value for '") + key + "': " + e.what());
  }
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::kParse, std::string("malformed JSON: ") + e.what());
  }
}

json p_to_json(double p) {
  if (std::isinf(p)) return "inf";
  return p;
}

double p_from_json(const json& j) {
  if (j.is_string()) return parse_p(j.get<std::string>());
  require(j.is_number(), ErrorKind::kParse, "p must be a number or \"inf\"");
  return j.get<double>();
}

}  // namespace

std::string p_to_string(double p) {
  if (std::isinf(p)) return "inf";
  return json(p).dump();
}

double parse_p(const std::string& text) {
  if (text == "inf" || text == "infinity" || text == "Inf") {
    return std::numeric_limits<double>::infinity();
  }
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    require(used == text.size(), ErrorKind::kParse, "bad number '" + text + "'");
    return v;
  } catch (const std::logic_error&) {
    fail(ErrorKind::kParse, "bad number '" + text + "'");
  }
}

// ------------------------------------------------------------------ polynomial

std::string polynomial_to_json(const Multipolynomial& poly) {
  json terms = json::array();
  for (const auto& t : poly.terms()) {
    terms.push_back({{"alpha", t.alpha.to_dense(poly.dims())}, {"coeff", t.coeff}});
  }
  json j;
  j["degrees"] = poly.degrees().values();
  j["dims"] = poly.dims();
  j["terms"] = std::move(terms);
  return j.dump();
}

Multipolynomial polynomial_from_json(const std::string& text, std::size_t max_terms) {
  const json j = parse_json(text);
  const auto degrees = get_field<std::vector<std::uint32_t>>(j, "degrees");
  const auto dims = get_field<std::vector<std::uint32_t>>(j, "dims");
  const json& terms = j.contains("terms") ? j.at("terms") : json::array();
  require(terms.is_array(), ErrorKind::kParse, "'terms' must be an array");
  require(terms.size() <= max_terms, ErrorKind::kBudgetExceeded,
          "file has " + std::to_string(terms.size()) + " terms, limit is " +
              std::to_string(max_terms));

  BlockDegrees block_degrees = [&] {
    try {
      return BlockDegrees(degrees);
    } catch (const Error& e) {
      fail(ErrorKind::kParse, e.what());
    }
  }();

  std::vector<Term> out;
  out.reserve(terms.size());
  for (std::size_t t = 0; t < terms.size(); ++t) {
    const auto alpha = get_field<std::vector<std::vector<std::uint32_t>>>(terms[t], "alpha");
    const auto coeff = get_field<double>(terms[t], "coeff");
    require(alpha.size() == dims.size(), ErrorKind::kParse,
            "term " + std::to_string(t) + " has " + std::to_string(alpha.size()) +
                " exponent blocks, expected " + std::to_string(dims.size()));
    for (std::size_t b = 0; b < alpha.size(); ++b) {
      require(alpha[b].size() == dims[b], ErrorKind::kParse,
              "term " + std::to_string(t) + " block " + std::to_string(b) +
                  " has length " + std::to_string(alpha[b].size()) + ", expected " +
                  std::to_string(dims[b]));
    }
    out.push_back({MultiIndex::from_dense(alpha), coeff});
  }
  return Multipolynomial(std::move(block_degrees), dims, std::move(out));
}

std::string norm_estimate_to_json(const NormEstimate& est) {
  json j;
  j["value"] = est.value;
  j["method"] = to_string(est.method);
  j["p"] = p_to_json(est.p);
  j["starts"] = est.starts;
  j["converged_starts"] = est.converged_starts;
  j["best_point"] = est.best_point.blocks;
  return j.dump();
}

// ----------------------------------------------------------------------- sweep

SweepRun parse_sweep_run(const std::string& json_text) {
  const json j = parse_json(json_text);
  require(j.is_object(), ErrorKind::kParse, "sweep config must be a JSON object");
  SweepRun run;
  auto& c = run.config;
  c.family = parse_witness_family(get_field<std::string>(j, "family"));
  c.degrees = get_field<std::vector<std::uint32_t>>(j, "degrees");
  c.p = p_from_json(j.at("p"));
  c.s = get_field<double>(j, "s");
  if (j.contains("n_grid")) c.n_grid = get_field<std::vector<std::uint64_t>>(j, "n_grid");
  if (j.contains("seed")) run.seed = get_field<std::uint64_t>(j, "seed");
  if (j.contains("tol")) run.tol = get_field<double>(j, "tol");
  if (j.contains("vertex_budget")) {
    c.vertex_budget = get_field<std::uint64_t>(j, "vertex_budget");
  }
  if (j.contains("record_timing")) c.record_timing = get_field<bool>(j, "record_timing");

  if (j.contains("seeds")) {
    c.seeds = get_field<std::vector<std::uint64_t>>(j, "seeds");
  } else {
    const auto count = j.contains("num_seeds") ? get_field<std::size_t>(j, "num_seeds")
                                               : std::size_t{1};
    c.seeds.clear();
    for (std::size_t k = 0; k < count; ++k) c.seeds.push_back(derive_seed(run.seed, 1 + k));
  }

  c.optimizer.seed = derive_seed(run.seed, 0);
  if (j.contains("optimizer")) {
    const json& o = j.at("optimizer");
    if (o.contains("starts")) c.optimizer.starts = get_field<std::size_t>(o, "starts");
    if (o.contains("max_iters")) c.optimizer.max_iters = get_field<std::size_t>(o, "max_iters");
    if (o.contains("step_init")) c.optimizer.step_init = get_field<double>(o, "step_init");
    if (o.contains("rel_tol")) c.optimizer.rel_tol = get_field<double>(o, "rel_tol");
    if (o.contains("seed")) c.optimizer.seed = get_field<std::uint64_t>(o, "seed");
  }
  BlockDegrees check(c.degrees);
  (void)check;
  return run;
}

std::string sweep_run_to_json(const SweepRun& run) {
  const auto& c = run.config;
  json j;
  j["family"] = to_string(c.family);
  j["degrees"] = c.degrees;
  j["p"] = p_to_json(c.p);
  j["s"] = c.s;
  j["n_grid"] = c.n_grid;
  j["seed"] = run.seed;
  j["seeds"] = c.seeds;
  j["tol"] = run.tol;
  j["vertex_budget"] = c.vertex_budget;
  j["record_timing"] = c.record_timing;
  j["optimizer"] = {{"starts", c.optimizer.starts},
                    {"max_iters", c.optimizer.max_iters},
                    {"step_init", c.optimizer.step_init},
                    {"rel_tol", c.optimizer.rel_tol},
                    {"seed", c.optimizer.seed}};
  return j.dump();
}

std::string run_sweep_csv(const SweepRun& run) {
  const auto result = ratio_sweep(run.config);
  std::string out = "# config=" + sweep_run_to_json(run) + "\n";
  out += csv_header() + "\n";
  for (const auto& r : result.records) out += to_csv_row(r) + "\n";

  const auto fit = slope_fit(result.records);
  const std::uint32_t total = BlockDegrees(run.config.degrees).total();
  std::string theory = "nan";
  std::string verdict = "unavailable";
  try {
    const double t = theoretical_ratio_slope(total, run.config.p, run.config.s,
                                             run.config.family);
    theory = format_double(t);
    verdict = to_string(sharpness_verdict(fit, t, run.tol));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kPrecondition) throw;
  }
  out += "# slope=" + format_double(fit.slope) + " r2=" + format_double(fit.r2) +
         " theory=" + theory + " verdict=" + verdict + "\n";
  return out;
}

}  // namespace hlpoly
