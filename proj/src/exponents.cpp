#include "hlpoly/exponents.hpp"

#include <cmath>

#include "hlpoly/error.hpp"

namespace hlpoly {

namespace {

double inverse(double p) { return std::isinf(p) ? 0.0 : 1.0 / p; }

void require_degree(std::uint32_t degree_total) {
  require(degree_total >= 1, ErrorKind::kInvalidArgument, "M must be >= 1");
}

void require_p(double p) {
  require(p >= 1.0 && !std::isnan(p), ErrorKind::kInvalidArgument,
          "p must lie in [1, inf]");
}

}  // namespace

std::string to_string(RegimeKind kind) {
  switch (kind) {
    case RegimeKind::kHighP: return "high_p";
    case RegimeKind::kLowP: return "low_p";
    case RegimeKind::kInvalid: return "invalid";
  }
  return "invalid";
}

Regime classify_regime(std::uint32_t degree_total, double p) {
  const double m = degree_total;
  RegimeKind kind = RegimeKind::kInvalid;
  if (p >= 2.0 * m) {
    kind = RegimeKind::kHighP;
  } else if (p > m) {
    kind = RegimeKind::kLowP;
  }
  return {kind, degree_total, p};
}

double alpha_of_q(double q) {
  require(q >= 1.0 && !std::isnan(q), ErrorKind::kInvalidArgument, "q must be >= 1");
  return q >= 2.0 ? 0.5 - inverse(q) : 0.0;
}

double hl_exponent_high(std::uint32_t degree_total, double p) {
  require_degree(degree_total);
  const double m = degree_total;
  require(p >= 2.0 * m, ErrorKind::kInvalidArgument,
          "high-p exponent needs p >= 2M");
  if (std::isinf(p)) return 2.0 * m / (m + 1.0);
  return 2.0 * m * p / (m * p + p - 2.0 * m);
}

double hl_exponent_low(std::uint32_t degree_total, double p) {
  require_degree(degree_total);
  const double m = degree_total;
  require(p > m && p <= 2.0 * m, ErrorKind::kInvalidArgument,
          "low-p exponent needs M < p <= 2M");
  return p / (p - m);
}

double hl_critical_exponent(std::uint32_t degree_total, double p) {
  switch (classify_regime(degree_total, p).kind) {
    case RegimeKind::kHighP: return hl_exponent_high(degree_total, p);
    case RegimeKind::kLowP: return hl_exponent_low(degree_total, p);
    case RegimeKind::kInvalid: break;
  }
  fail(ErrorKind::kInvalidArgument, "no critical exponent for p <= M");
}

double ksz_exponent(std::uint32_t degree_total, double p) {
  require_degree(degree_total);
  require_p(p);
  const double m = degree_total;
  const double ip = inverse(p);
  return std::max(m * (0.5 - ip) + 0.5, 1.0 - ip);
}

std::string to_string(WitnessFamily f) {
  return f == WitnessFamily::kDiagonal ? "diagonal" : "ksz";
}

WitnessFamily parse_witness_family(const std::string& s) {
  if (s == "diagonal") return WitnessFamily::kDiagonal;
  if (s == "ksz") return WitnessFamily::kKsz;
  fail(ErrorKind::kParse, "unknown witness family '" + s + "'");
}

double theoretical_ratio_slope(std::uint32_t degree_total, double p, double s,
                               WitnessFamily witness) {
  require_degree(degree_total);
  require_p(p);
  require(s > 0.0, ErrorKind::kInvalidArgument, "s must be positive");
  const double m = degree_total;
  const double ip = inverse(p);
  if (witness == WitnessFamily::kDiagonal) {
    require(p > m, ErrorKind::kPrecondition, "diagonal witness needs p > M");
    return 1.0 / s - (1.0 - m * ip);
  }
  require(p >= 2.0 * m, ErrorKind::kPrecondition, "KSZ witness needs p >= 2M");
  return m / s - (m * (0.5 - ip) + 0.5);
}

}  // namespace hlpoly
