// hlpoly command-line front end. Talks to the library only through hlpoly.h.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hlpoly/hlpoly.h"

namespace {

using json = nlohmann::json;

// Library failure: message already reported, exit code 1.
struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(hlpoly_status status, const std::string& context) {
  if (status == HLPOLY_OK) return;
  throw Failure(context + ": " + hlpoly_status_name(status) + ": " +
                hlpoly_last_error());
}

struct PolyHandle {
  hlpoly_poly* ptr = nullptr;
  PolyHandle() = default;
  PolyHandle(const PolyHandle&) = delete;
  PolyHandle& operator=(const PolyHandle&) = delete;
  ~PolyHandle() { hlpoly_poly_free(ptr); }
};

struct OwnedString {
  char* ptr = nullptr;
  OwnedString() = default;
  OwnedString(const OwnedString&) = delete;
  OwnedString& operator=(const OwnedString&) = delete;
  ~OwnedString() { hlpoly_string_free(ptr); }
  std::string str() const { return ptr ? ptr : ""; }
};

double parse_p(const std::string& text) {
  if (text == "inf" || text == "infinity") return INFINITY;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty()) throw Failure("bad value for p: '" + text + "'");
  return v;
}

json p_json(double p) { return std::isinf(p) ? json("inf") : json(p); }

std::vector<std::uint32_t> parse_degrees(const std::string& text) {
  std::vector<std::uint32_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const long v = std::stol(item, &used);
      if (used != item.size() || v < 1) throw std::invalid_argument(item);
      out.push_back(static_cast<std::uint32_t>(v));
    } catch (const std::exception&) {
      throw Failure("bad block degree '" + item + "'");
    }
  }
  if (out.empty()) throw Failure("degrees must be non-empty");
  return out;
}

// "1,0;3" -> blocks separated by ';', coordinates by ','; returned flattened.
std::vector<double> parse_point(const std::string& text) {
  std::vector<double> out;
  std::string normalized = text;
  for (auto& c : normalized) {
    if (c == ';') c = ',';
  }
  std::stringstream ss(normalized);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Failure("bad coordinate '" + item + "'");
    }
  }
  return out;
}

std::string fmt17(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Failure("cannot write '" + path + "'");
  f << text;
  if (!f) throw Failure("write failed for '" + path + "'");
}

std::string read_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void load(const std::string& path, PolyHandle& out) {
  check(hlpoly_poly_load(path.c_str(), &out.ptr), "loading " + path);
  int ok = 0;
  OwnedString report;
  check(hlpoly_poly_validate(out.ptr, &ok, &report.ptr), "validating " + path);
  if (!ok) throw Failure(path + " is not a valid polynomial:\n" + report.str());
}

void emit_poly(const PolyHandle& poly, const std::string& out_path, const json& config) {
  const std::string cfg = config.dump();
  if (out_path.empty() || out_path == "-") {
    OwnedString text;
    check(hlpoly_poly_to_json(poly.ptr, &text.ptr), "serializing");
    auto j = json::parse(text.str());
    j["run_config"] = config;
    std::cout << j.dump() << '\n';
    return;
  }
  check(hlpoly_poly_save(poly.ptr, out_path.c_str(), cfg.c_str()), "writing " + out_path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multipolynomials on l_p: witnesses, folds, sup-norms and "
               "Hardy-Littlewood scaling sweeps"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Construct a witness polynomial");
  std::string gen_kind;
  std::uint64_t gen_n = 0;
  std::uint32_t gen_m = 0;
  std::string gen_degrees;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  gen->add_option("kind", gen_kind, "diagonal | ksz")
      ->required()
      ->check(CLI::IsMember({"diagonal", "ksz"}));
  gen->add_option("--n", gen_n, "Dimension of each slot")->required();
  gen->add_option("--M", gen_m, "Total degree (degrees 1,...,1)");
  gen->add_option("--degrees", gen_degrees, "Block degrees, e.g. 2,1");
  gen->add_option("--seed", gen_seed, "Seed for random signs");
  gen->add_option("--out", gen_out, "Output file (stdout if omitted)");

  // eval
  auto* eval = app.add_subcommand("eval", "Evaluate a polynomial at a point");
  std::string eval_file, eval_x;
  eval->add_option("file", eval_file, "Polynomial file")->required();
  eval->add_option("--x", eval_x, "Point: blocks split by ';', coordinates by ','")
      ->required();

  // norm
  auto* norm = app.add_subcommand("norm", "Estimate the sup-norm over l_p balls");
  std::string norm_file, norm_p = "inf";
  bool norm_exact = false;
  hlpoly_optimizer_config opt;
  hlpoly_optimizer_config_default(&opt);
  std::uint64_t norm_budget = 0;
  norm->add_option("file", norm_file, "Polynomial file")->required();
  norm->add_option("--p", norm_p, "Exponent p >= 1 or 'inf'");
  norm->add_flag("--exact", norm_exact, "Use the exact vertex oracle or fail");
  norm->add_option("--starts", opt.starts, "Number of random starts");
  norm->add_option("--max-iters", opt.max_iters, "Iteration cap per start");
  norm->add_option("--step-init", opt.step_init, "Initial gradient step");
  norm->add_option("--rel-tol", opt.rel_tol, "Relative stopping tolerance");
  norm->add_option("--seed", opt.seed, "Seed for the random starts");
  norm->add_option("--budget", norm_budget, "Vertex enumeration budget");

  // fold
  auto* fold = app.add_subcommand("fold", "Apply a folding map");
  std::string fold_file, fold_kind, fold_degrees, fold_out;
  fold->add_option("file", fold_file, "Polynomial file")->required();
  fold->add_option("--kind", fold_kind, "Folding map")
      ->required()
      ->check(CLI::IsMember(
          {"multilinear-to-poly", "multilinear-to-multipoly", "multipoly-to-poly"}));
  fold->add_option("--degrees", fold_degrees, "Target block degrees");
  fold->add_option("--out", fold_out, "Output file (stdout if omitted)");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Run a ratio sweep from a JSON config");
  std::string sweep_config, sweep_out;
  sweep->add_option("--config", sweep_config, "Sweep config file")->required();
  sweep->add_option("--out", sweep_out, "CSV output file (stdout if omitted)");

  // exponents
  auto* exps = app.add_subcommand("exponents", "Print critical exponents and regime");
  std::uint32_t exp_m = 0;
  std::string exp_p;
  exps->add_option("--M", exp_m, "Total degree")->required();
  exps->add_option("--p", exp_p, "Exponent p >= 1 or 'inf'")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      std::vector<std::uint32_t> degrees;
      if (!gen_degrees.empty()) {
        degrees = parse_degrees(gen_degrees);
      } else if (gen_m >= 1) {
        degrees.assign(gen_m, 1);
      } else {
        throw Failure("gen needs --M or --degrees");
      }
      PolyHandle poly;
      json cfg = {{"command", "gen"}, {"kind", gen_kind}, {"n", gen_n}, {"degrees", degrees}};
      if (gen_kind == "ksz") {
        cfg["seed"] = gen_seed;
        check(hlpoly_make_ksz(gen_n, degrees.data(), degrees.size(), gen_seed, &poly.ptr),
              "gen ksz");
      } else {
        check(hlpoly_make_diagonal(gen_n, degrees.data(), degrees.size(), &poly.ptr),
              "gen diagonal");
      }
      emit_poly(poly, gen_out, cfg);
    } else if (*eval) {
      PolyHandle poly;
      load(eval_file, poly);
      const auto x = parse_point(eval_x);
      double value = 0.0;
      check(hlpoly_poly_evaluate(poly.ptr, x.data(), x.size(), &value), "eval");
      std::cout << fmt17(value) << '\n';
    } else if (*norm) {
      PolyHandle poly;
      load(norm_file, poly);
      const double p = parse_p(norm_p);
      OwnedString out;
      if (norm_exact) {
        if (!std::isinf(p)) throw Failure("--exact requires --p inf");
        check(hlpoly_norm_exact_vertex(poly.ptr, norm_budget, nullptr, &out.ptr),
              "exact norm");
      } else {
        check(hlpoly_norm_estimate(poly.ptr, p, &opt, nullptr, &out.ptr), "norm estimate");
      }
      std::cout << out.str() << '\n';
    } else if (*fold) {
      PolyHandle src, dst;
      load(fold_file, src);
      hlpoly_fold_kind kind = HLPOLY_FOLD_MULTIPOLY_TO_POLY;
      if (fold_kind == "multilinear-to-poly") kind = HLPOLY_FOLD_MULTILINEAR_TO_POLY;
      if (fold_kind == "multilinear-to-multipoly") kind = HLPOLY_FOLD_MULTILINEAR_TO_MULTIPOLY;
      std::vector<std::uint32_t> degrees;
      if (kind == HLPOLY_FOLD_MULTILINEAR_TO_MULTIPOLY) {
        if (fold_degrees.empty()) throw Failure("this fold needs --degrees");
        degrees = parse_degrees(fold_degrees);
      }
      check(hlpoly_fold(src.ptr, kind, degrees.data(), degrees.size(), &dst.ptr), "fold");
      json cfg = {{"command", "fold"}, {"kind", fold_kind}, {"source", fold_file}};
      if (!degrees.empty()) cfg["degrees"] = degrees;
      emit_poly(dst, fold_out, cfg);
    } else if (*sweep) {
      const std::string config = read_input(sweep_config);
      OwnedString csv;
      check(hlpoly_sweep_run(config.c_str(), &csv.ptr), "sweep");
      write_output(sweep_out, csv.str());
    } else if (*exps) {
      const double p = parse_p(exp_p);
      hlpoly_regime regime = HLPOLY_REGIME_INVALID;
      check(hlpoly_classify_regime(exp_m, p, &regime), "exponents");
      json out = {{"M", exp_m}, {"p", p_json(p)}};
      out["regime"] = regime == HLPOLY_REGIME_HIGH_P  ? "high_p"
                      : regime == HLPOLY_REGIME_LOW_P ? "low_p"
                                                      : "invalid";
      double v = 0.0;
      out["hl_exponent_high"] =
          hlpoly_hl_exponent_high(exp_m, p, &v) == HLPOLY_OK ? json(v) : json(nullptr);
      out["hl_exponent_low"] =
          hlpoly_hl_exponent_low(exp_m, p, &v) == HLPOLY_OK ? json(v) : json(nullptr);
      check(hlpoly_ksz_exponent(exp_m, p, &v), "exponents");
      out["ksz_exponent"] = v;
      check(hlpoly_alpha_of_q(p, &v), "exponents");
      out["alpha_p"] = v;
      std::cout << out.dump() << '\n';
    }
  } catch (const Failure& e) {
    std::cerr << "hlpoly: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
