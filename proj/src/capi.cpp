#include "hlpoly/hlpoly.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <json.hpp>
#include <new>
#include <sstream>
#include <string>

#include "hlpoly/constructions.hpp"
#include "hlpoly/core.hpp"
#include "hlpoly/error.hpp"
#include "hlpoly/exponents.hpp"
#include "hlpoly/json_io.hpp"
#include "hlpoly/norms.hpp"

struct hlpoly_poly {
  hlpoly::Multipolynomial poly;
};

namespace {

thread_local std::string g_last_error;

hlpoly_status to_status(hlpoly::ErrorKind kind) {
  using hlpoly::ErrorKind;
  switch (kind) {
    case ErrorKind::kInvalidArgument: return HLPOLY_ERR_INVALID_ARGUMENT;
    case ErrorKind::kDimensionMismatch: return HLPOLY_ERR_DIMENSION;
    case ErrorKind::kBudgetExceeded: return HLPOLY_ERR_BUDGET;
    case ErrorKind::kPrecondition: return HLPOLY_ERR_PRECONDITION;
    case ErrorKind::kInvalidPolynomial: return HLPOLY_ERR_INVALID_POLYNOMIAL;
    case ErrorKind::kParse: return HLPOLY_ERR_PARSE;
    case ErrorKind::kIo: return HLPOLY_ERR_IO;
  }
  return HLPOLY_ERR_INTERNAL;
}

// Runs body, translating exceptions into status codes.
template <typename F>
hlpoly_status guarded(F&& body) {
  try {
    body();
    return HLPOLY_OK;
  } catch (const hlpoly::Error& e) {
    g_last_error = e.what();
    return to_status(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return HLPOLY_ERR_BUDGET;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return HLPOLY_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return HLPOLY_ERR_INTERNAL;
  }
}

void require_ptr(const void* p, const char* name) {
  hlpoly::require(p != nullptr, hlpoly::ErrorKind::kInvalidArgument,
                  std::string(name) + " must not be null");
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

hlpoly_poly* wrap(hlpoly::Multipolynomial p) { return new hlpoly_poly{std::move(p)}; }

hlpoly::BlockDegrees degrees_from(const std::uint32_t* degrees, std::size_t blocks) {
  hlpoly::require(degrees != nullptr || blocks == 0,
                  hlpoly::ErrorKind::kInvalidArgument, "degrees must not be null");
  return hlpoly::BlockDegrees(std::vector<std::uint32_t>(degrees, degrees + blocks));
}

hlpoly::OptimizerConfig optimizer_from(const hlpoly_optimizer_config* cfg) {
  hlpoly::OptimizerConfig out;
  if (cfg == nullptr) return out;
  out.starts = cfg->starts;
  out.max_iters = cfg->max_iters;
  out.step_init = cfg->step_init;
  out.rel_tol = cfg->rel_tol;
  out.seed = cfg->seed;
  out.workers = cfg->workers;
  return out;
}

void fill_result(const hlpoly::NormEstimate& est, hlpoly_norm_result* out,
                 char** json_out) {
  if (out != nullptr) {
    out->value = est.value;
    out->method = static_cast<hlpoly_norm_method>(est.method);
    out->starts = est.starts;
    out->converged_starts = est.converged_starts;
  }
  if (json_out != nullptr) *json_out = dup_string(hlpoly::norm_estimate_to_json(est));
}

std::string read_file(const char* path) {
  std::ifstream in(path, std::ios::binary);
  hlpoly::require(static_cast<bool>(in), hlpoly::ErrorKind::kIo,
                  std::string("cannot open '") + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

extern "C" {

const char* hlpoly_version(void) { return "0.1.0"; }

const char* hlpoly_status_name(hlpoly_status status) {
  switch (status) {
    case HLPOLY_OK: return "ok";
    case HLPOLY_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case HLPOLY_ERR_DIMENSION: return "dimension_mismatch";
    case HLPOLY_ERR_BUDGET: return "budget_exceeded";
    case HLPOLY_ERR_PRECONDITION: return "precondition_violated";
    case HLPOLY_ERR_INVALID_POLYNOMIAL: return "invalid_polynomial";
    case HLPOLY_ERR_PARSE: return "parse_error";
    case HLPOLY_ERR_IO: return "io_error";
    case HLPOLY_ERR_INTERNAL: return "internal_error";
  }
  return "unknown";
}

const char* hlpoly_last_error(void) { return g_last_error.c_str(); }

void hlpoly_string_free(char* s) { delete[] s; }

// ------------------------------------------------------------------ polynomials

hlpoly_status hlpoly_poly_from_json(const char* json, hlpoly_poly** out) {
  return guarded([&] {
    require_ptr(json, "json");
    require_ptr(out, "out");
    *out = wrap(hlpoly::polynomial_from_json(json));
  });
}

hlpoly_status hlpoly_poly_load(const char* path, hlpoly_poly** out) {
  return guarded([&] {
    require_ptr(path, "path");
    require_ptr(out, "out");
    *out = wrap(hlpoly::polynomial_from_json(read_file(path)));
  });
}

hlpoly_status hlpoly_poly_to_json(const hlpoly_poly* poly, char** out) {
  return guarded([&] {
    require_ptr(poly, "poly");
    require_ptr(out, "out");
    *out = dup_string(hlpoly::polynomial_to_json(poly->poly));
  });
}

hlpoly_status hlpoly_poly_save(const hlpoly_poly* poly, const char* path,
                               const char* run_config_json) {
  return guarded([&] {
    require_ptr(poly, "poly");
    require_ptr(path, "path");
    std::string text = hlpoly::polynomial_to_json(poly->poly);
    if (run_config_json != nullptr) {
      auto j = nlohmann::json::parse(text);
      try {
        j["run_config"] = nlohmann::json::parse(run_config_json);
      } catch (const nlohmann::json::parse_error& e) {
        hlpoly::fail(hlpoly::ErrorKind::kParse, e.what());
      }
      text = j.dump();
    }
    std::ofstream f(path, std::ios::binary);
    hlpoly::require(static_cast<bool>(f), hlpoly::ErrorKind::kIo,
                    std::string("cannot write '") + path + "'");
    f << text << '\n';
    hlpoly::require(static_cast<bool>(f), hlpoly::ErrorKind::kIo,
                    std::string("write failed for '") + path + "'");
  });
}

void hlpoly_poly_free(hlpoly_poly* poly) { delete poly; }

hlpoly_status hlpoly_poly_shape(const hlpoly_poly* poly, size_t* blocks, size_t* terms,
                                size_t* total_dim) {
  return guarded([&] {
    require_ptr(poly, "poly");
    if (blocks) *blocks = poly->poly.blocks();
    if (terms) *terms = poly->poly.size();
    if (total_dim) *total_dim = poly->poly.total_dim();
  });
}

hlpoly_status hlpoly_poly_dims(const hlpoly_poly* poly, uint32_t* dims, size_t cap) {
  return guarded([&] {
    require_ptr(poly, "poly");
    require_ptr(dims, "dims");
    const auto& d = poly->poly.dims();
    for (size_t i = 0; i < d.size() && i < cap; ++i) dims[i] = d[i];
  });
}

hlpoly_status hlpoly_poly_validate(const hlpoly_poly* poly, int* ok, char** report) {
  return guarded([&] {
    require_ptr(poly, "poly");
    require_ptr(ok, "ok");
    const auto r = hlpoly::validate(poly->poly);
    *ok = r.ok() ? 1 : 0;
    if (report) *report = dup_string(r.to_string());
  });
}

hlpoly_status hlpoly_poly_evaluate(const hlpoly_poly* poly, const double* x, size_t len,
                                   double* out) {
  return guarded([&] {
    require_ptr(poly, "poly");
    require_ptr(out, "out");
    hlpoly::require(x != nullptr || len == 0, hlpoly::ErrorKind::kInvalidArgument,
                    "x must not be null");
    *out = poly->poly.evaluate_flat({x, len});
  });
}

hlpoly_status hlpoly_poly_gradient(const hlpoly_poly* poly, const double* x, size_t len,
                                   double* grad) {
  return guarded([&] {
    require_ptr(poly, "poly");
    require_ptr(x, "x");
    require_ptr(grad, "grad");
    poly->poly.gradient_flat({x, len}, {grad, len});
  });
}

hlpoly_status hlpoly_poly_coeff_ls(const hlpoly_poly* poly, double s, double* out) {
  return guarded([&] {
    require_ptr(poly, "poly");
    require_ptr(out, "out");
    *out = hlpoly::coeff_ls_value(poly->poly, s);
  });
}

// ---------------------------------------------------------------- constructions

hlpoly_status hlpoly_make_diagonal(uint64_t n, const uint32_t* degrees, size_t blocks,
                                   hlpoly_poly** out) {
  return guarded([&] {
    require_ptr(out, "out");
    *out = wrap(hlpoly::diagonal_witness(n, degrees_from(degrees, blocks)));
  });
}

hlpoly_status hlpoly_make_ksz(uint64_t n, const uint32_t* degrees, size_t blocks,
                              uint64_t seed, hlpoly_poly** out) {
  return guarded([&] {
    require_ptr(out, "out");
    *out = wrap(hlpoly::ksz_witness(n, degrees_from(degrees, blocks), seed));
  });
}

hlpoly_status hlpoly_fold(const hlpoly_poly* src, hlpoly_fold_kind kind,
                          const uint32_t* degrees, size_t blocks, hlpoly_poly** out) {
  return guarded([&] {
    using hlpoly::PartitionScheme;
    require_ptr(src, "src");
    require_ptr(out, "out");
    const auto& p = src->poly;
    switch (kind) {
      case HLPOLY_FOLD_MULTILINEAR_TO_POLY: {
        const auto t = hlpoly::SignTensor::from_multilinear(p);
        *out = wrap(hlpoly::fold_multilinear_to_polynomial(
            t, PartitionScheme::multilinear_to_poly(t.order(), t.dim())));
        return;
      }
      case HLPOLY_FOLD_MULTILINEAR_TO_MULTIPOLY: {
        const auto t = hlpoly::SignTensor::from_multilinear(p);
        const auto deg = degrees_from(degrees, blocks);
        *out = wrap(hlpoly::fold_multilinear_to_multipolynomial(
            t, deg, PartitionScheme::multilinear_to_multipoly(deg, t.dim())));
        return;
      }
      case HLPOLY_FOLD_MULTIPOLY_TO_POLY: {
        p.require_valid();
        std::uint32_t d = 0;
        for (auto dim : p.dims()) d = std::max(d, dim);
        *out = wrap(hlpoly::fold_multipolynomial_to_homogeneous(
            p, PartitionScheme::multipoly_to_poly(
                   static_cast<std::uint32_t>(p.blocks()), d)));
        return;
      }
    }
    hlpoly::fail(hlpoly::ErrorKind::kInvalidArgument, "unknown fold kind");
  });
}

// ------------------------------------------------------------------------ norms

void hlpoly_optimizer_config_default(hlpoly_optimizer_config* cfg) {
  if (cfg == nullptr) return;
  const hlpoly::OptimizerConfig d;
  cfg->starts = d.starts;
  cfg->max_iters = d.max_iters;
  cfg->step_init = d.step_init;
  cfg->rel_tol = d.rel_tol;
  cfg->seed = d.seed;
  cfg->workers = d.workers;
}

hlpoly_status hlpoly_norm_estimate(const hlpoly_poly* poly, double p,
                                   const hlpoly_optimizer_config* cfg,
                                   hlpoly_norm_result* out, char** json_out) {
  return guarded([&] {
    require_ptr(poly, "poly");
    fill_result(hlpoly::sup_norm_estimate(poly->poly, p, optimizer_from(cfg)), out,
                json_out);
  });
}

hlpoly_status hlpoly_norm_exact_vertex(const hlpoly_poly* poly, uint64_t budget,
                                       hlpoly_norm_result* out, char** json_out) {
  return guarded([&] {
    require_ptr(poly, "poly");
    fill_result(hlpoly::sup_norm_exact_vertex(
                    poly->poly, budget == 0 ? hlpoly::kDefaultVertexBudget : budget),
                out, json_out);
  });
}

hlpoly_status hlpoly_lp_sphere_project(const double* v, size_t len, double p,
                                       double* out) {
  return guarded([&] {
    require_ptr(v, "v");
    require_ptr(out, "out");
    const auto r = hlpoly::lp_sphere_project({v, len}, p);
    std::copy(r.begin(), r.end(), out);
  });
}

hlpoly_status hlpoly_holder_diagonal_bound(uint64_t n, uint32_t m, double p,
                                           double* out) {
  return guarded([&] {
    require_ptr(out, "out");
    *out = hlpoly::holder_diagonal_bound(n, m, p);
  });
}

hlpoly_status hlpoly_interpolated_norm_bound(double norm2, double norm1, double q,
                                             double* out) {
  return guarded([&] {
    require_ptr(out, "out");
    *out = hlpoly::interpolated_norm_bound(norm2, norm1, q);
  });
}

hlpoly_status hlpoly_ksz_bound(uint64_t n, uint32_t m, double p, double* out) {
  return guarded([&] {
    require_ptr(out, "out");
    *out = hlpoly::ksz_bound(n, m, p);
  });
}

// -------------------------------------------------------------------- exponents

hlpoly_status hlpoly_classify_regime(uint32_t m, double p, hlpoly_regime* out) {
  return guarded([&] {
    require_ptr(out, "out");
    *out = static_cast<hlpoly_regime>(hlpoly::classify_regime(m, p).kind);
  });
}

hlpoly_status hlpoly_alpha_of_q(double q, double* out) {
  return guarded([&] {
    require_ptr(out, "out");
    *out = hlpoly::alpha_of_q(q);
  });
}

hlpoly_status hlpoly_hl_exponent_high(uint32_t m, double p, double* out) {
  return guarded([&] {
    require_ptr(out, "out");
    *out = hlpoly::hl_exponent_high(m, p);
  });
}

hlpoly_status hlpoly_hl_exponent_low(uint32_t m, double p, double* out) {
  return guarded([&] {
    require_ptr(out, "out");
    *out = hlpoly::hl_exponent_low(m, p);
  });
}

hlpoly_status hlpoly_ksz_exponent(uint32_t m, double p, double* out) {
  return guarded([&] {
    require_ptr(out, "out");
    *out = hlpoly::ksz_exponent(m, p);
  });
}

hlpoly_status hlpoly_theoretical_ratio_slope(uint32_t m, double p, double s,
                                             hlpoly_witness witness, double* out) {
  return guarded([&] {
    require_ptr(out, "out");
    const auto w = witness == HLPOLY_WITNESS_KSZ ? hlpoly::WitnessFamily::kKsz
                                                 : hlpoly::WitnessFamily::kDiagonal;
    *out = hlpoly::theoretical_ratio_slope(m, p, s, w);
  });
}

// ------------------------------------------------------------------ experiments

hlpoly_status hlpoly_sweep_resolve(const char* config_json, char** resolved) {
  return guarded([&] {
    require_ptr(config_json, "config_json");
    require_ptr(resolved, "resolved");
    *resolved = dup_string(hlpoly::sweep_run_to_json(hlpoly::parse_sweep_run(config_json)));
  });
}

hlpoly_status hlpoly_sweep_run(const char* config_json, char** csv_out) {
  return guarded([&] {
    require_ptr(config_json, "config_json");
    require_ptr(csv_out, "csv_out");
    *csv_out = dup_string(hlpoly::run_sweep_csv(hlpoly::parse_sweep_run(config_json)));
  });
}

}  // extern "C"
