#pragma once

#include <cstdint>
#include <string>

namespace hlpoly {

// Critical-exponent regimes for total degree M. p = inf is represented by
// std::numeric_limits<double>::infinity() and treated as 1/p = 0.
enum class RegimeKind { kHighP, kLowP, kInvalid };

struct Regime {
  RegimeKind kind;
  std::uint32_t degree_total;
  double p;
};

std::string to_string(RegimeKind kind);

// high_p for p >= 2M (boundary included), low_p for M < p < 2M, else invalid.
Regime classify_regime(std::uint32_t degree_total, double p);

// 1/2 - 1/q for q >= 2, else 0.
double alpha_of_q(double q);

// 2Mp / (Mp + p - 2M) for p >= 2M; 2M/(M+1) at p = inf.
double hl_exponent_high(std::uint32_t degree_total, double p);

// p / (p - M) for M < p <= 2M.
double hl_exponent_low(std::uint32_t degree_total, double p);

// Whichever of the two applies; throws for p <= M.
double hl_critical_exponent(std::uint32_t degree_total, double p);

// max{M(1/2 - 1/p) + 1/2, 1 - 1/p}.
double ksz_exponent(std::uint32_t degree_total, double p);

enum class WitnessFamily { kDiagonal, kKsz };

std::string to_string(WitnessFamily f);
WitnessFamily parse_witness_family(const std::string& s);

// Predicted d log(ratio) / d log(n) for the witness family:
//   diagonal: 1/s - (p - M)/p          (requires p > M)
//   ksz:      M/s - (M(1/2 - 1/p) + 1/2) (requires p >= 2M)
double theoretical_ratio_slope(std::uint32_t degree_total, double p, double s,
                               WitnessFamily witness);

}  // namespace hlpoly
