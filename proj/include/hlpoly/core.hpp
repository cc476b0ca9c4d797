#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace hlpoly {

inline constexpr std::size_t kDefaultMaxTerms = 10'000'000;

// Degrees (n_1, ..., n_m) of a multipolynomial, one per argument block.
class BlockDegrees {
 public:
  // Throws kInvalidArgument unless degrees is non-empty with all entries >= 1.
  explicit BlockDegrees(std::vector<std::uint32_t> degrees);

  std::size_t blocks() const noexcept { return degrees_.size(); }
  std::uint32_t operator[](std::size_t i) const { return degrees_[i]; }
  std::uint32_t total() const noexcept { return total_; }
  const std::vector<std::uint32_t>& values() const noexcept { return degrees_; }

  bool operator==(const BlockDegrees&) const = default;

  // "2,1" style rendering, also accepted by parse().
  std::string to_string() const;
  static BlockDegrees parse(const std::string& text);

  // m copies of degree 1: the shape of an m-linear form.
  static BlockDegrees multilinear(std::size_t m);

 private:
  std::vector<std::uint32_t> degrees_;
  std::uint32_t total_ = 0;
};

// One variable power x_coord^exponent inside block `block`.
struct Factor {
  std::uint32_t block = 0;
  std::uint32_t coord = 0;
  std::uint32_t exponent = 0;

  bool operator==(const Factor&) const = default;
};

// Exponent vectors alpha^(1), ..., alpha^(m) of a monomial, stored sparsely as
// factors sorted by (block, coord) with positive exponents. Ordering is the
// lexicographic order of the dense exponent vectors concatenated block after
// block.
class MultiIndex {
 public:
  MultiIndex() = default;

  // Builds from dense per-block exponent vectors.
  static MultiIndex from_dense(const std::vector<std::vector<std::uint32_t>>& blocks);
  // Factors may arrive in any order; equal (block, coord) pairs are merged.
  static MultiIndex from_factors(std::vector<Factor> factors);

  std::vector<std::vector<std::uint32_t>> to_dense(
      std::span<const std::uint32_t> dims) const;

  const std::vector<Factor>& factors() const noexcept { return factors_; }
  // |alpha^(block)|
  std::uint32_t block_degree(std::size_t block) const;
  std::uint32_t max_exponent() const noexcept;

  std::strong_ordering operator<=>(const MultiIndex& other) const;
  bool operator==(const MultiIndex& other) const = default;

 private:
  std::vector<Factor> factors_;
};

// Arguments x^(1), ..., x^(m) of a multipolynomial.
struct Point {
  std::vector<std::vector<double>> blocks;

  static Point zeros(std::span<const std::uint32_t> dims);
  std::vector<double> flatten() const;
  static Point unflatten(std::span<const double> flat,
                         std::span<const std::uint32_t> dims);
};

struct Term {
  MultiIndex alpha;
  double coeff = 0.0;
};

struct Violation {
  std::size_t term_index;  // SIZE_MAX for shape problems not tied to a term
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const noexcept { return violations.empty(); }
  std::string to_string() const;
};

// Real (n_1, ..., n_m)-homogeneous polynomial on R^{d_1} x ... x R^{d_m} with
// sparse coefficients. Immutable once constructed.
//
// Construction keeps the terms as given (sorted into multi-index order) so a
// malformed polynomial can still be inspected through validate(); every
// numerical operation requires a valid polynomial and throws
// kInvalidPolynomial otherwise.
class Multipolynomial {
 public:
  Multipolynomial(BlockDegrees degrees, std::vector<std::uint32_t> dims,
                  std::vector<Term> terms);

  const BlockDegrees& degrees() const noexcept { return degrees_; }
  const std::vector<std::uint32_t>& dims() const noexcept { return dims_; }
  const std::vector<Term>& terms() const noexcept { return terms_; }
  std::size_t blocks() const noexcept { return dims_.size(); }
  std::size_t size() const noexcept { return terms_.size(); }
  std::size_t total_dim() const noexcept { return offsets_.back(); }
  // Start of block i in the flattened coordinate vector.
  std::size_t block_offset(std::size_t i) const { return offsets_[i]; }

  const ValidationReport& validation() const noexcept { return report_; }
  bool valid() const noexcept { return report_.ok(); }
  void require_valid() const;

  // True when every exponent is 0 or 1.
  bool multi_affine() const noexcept;

  // Flattened-coordinate evaluation, terms summed in multi-index order.
  double evaluate_flat(std::span<const double> x) const;
  // Gradient with respect to every flattened coordinate.
  void gradient_flat(std::span<const double> x, std::span<double> grad) const;

 private:
  BlockDegrees degrees_;
  std::vector<std::uint32_t> dims_;
  std::vector<Term> terms_;
  std::vector<std::size_t> offsets_;
  ValidationReport report_;
};

// Accumulates monomials and produces a valid polynomial. Coefficients of equal
// multi-indices are summed and exact zeros dropped.
class PolynomialBuilder {
 public:
  PolynomialBuilder(BlockDegrees degrees, std::vector<std::uint32_t> dims,
                    std::size_t max_terms = kDefaultMaxTerms);

  PolynomialBuilder& add(MultiIndex alpha, double coeff);
  // Validates and builds; throws kInvalidPolynomial with the report on failure.
  Multipolynomial build();

 private:
  BlockDegrees degrees_;
  std::vector<std::uint32_t> dims_;
  std::size_t max_terms_;
  std::vector<Term> terms_;
};

ValidationReport validate(const Multipolynomial& p);

double evaluate(const Multipolynomial& p, const Point& x);

// Gradient per block, same shape as x.
Point gradient(const Multipolynomial& p, const Point& x);

// Checks P(x with block i scaled by t) == t^{n_i} P(x) to relative tolerance
// 1e-12 (absolute for values near zero).
bool scale_homogeneity_check(const Multipolynomial& p, const Point& x,
                             std::size_t block, double t);

// (sum |c_alpha|^s)^{1/s}; a quasi-norm for s < 1.
double coeff_ls_value(const Multipolynomial& p, double s);

// Absolute coefficient values sorted ascending.
std::vector<double> sorted_abs_coefficients(const Multipolynomial& p);

// Relative tolerance used for exact algebraic identities.
inline constexpr double kIdentityRelTol = 1e-12;

bool nearly_equal(double a, double b, double rel_tol = kIdentityRelTol);

}  // namespace hlpoly
