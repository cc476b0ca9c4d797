#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "hlpoly/core.hpp"

namespace hlpoly {

inline constexpr std::uint64_t kDefaultDenseBudget = std::uint64_t{1} << 24;

// Coefficient tensor delta_{i_1...i_M} in {-1, 0, 1} of an M-linear form on
// (R^n)^M. Dense storage (row-major, i_1 slowest) when n^M fits the budget,
// otherwise a sorted list of nonzero entries.
class SignTensor {
 public:
  using Visitor = std::function<void(std::span<const std::uint32_t> index, int value)>;

  std::uint32_t order() const noexcept { return order_; }
  std::uint32_t dim() const noexcept { return dim_; }
  std::uint64_t seed() const noexcept { return seed_; }
  bool dense() const noexcept { return dense_; }
  std::uint64_t nonzeros() const noexcept { return nonzeros_; }

  int at(std::span<const std::uint32_t> index) const;

  // Visits nonzero entries in lexicographic index order.
  void for_each_nonzero(const Visitor& visit) const;

  // T(x^(1), ..., x^(M)).
  double apply(const std::vector<std::vector<double>>& args) const;

  // Builds a tensor from explicit entries; zero entries are dropped. Throws
  // if a value is outside {-1, 0, 1} or an index is out of range.
  static SignTensor from_entries(
      std::uint32_t order, std::uint32_t dim,
      const std::vector<std::pair<std::vector<std::uint32_t>, int>>& entries,
      std::uint64_t dense_budget = kDefaultDenseBudget);

  // Reads an M-linear form written as a multipolynomial with degrees (1,...,1)
  // and equal block dims.
  static SignTensor from_multilinear(const Multipolynomial& poly,
                                     std::uint64_t dense_budget = kDefaultDenseBudget);

  // The form as an M-block multipolynomial, degrees (1,...,1), dims n.
  Multipolynomial to_multilinear(std::size_t max_terms = kDefaultMaxTerms) const;

 private:
  friend SignTensor ksz_sample(std::uint64_t, std::uint32_t, std::uint64_t,
                               std::uint64_t);
  friend SignTensor diagonal_form(std::uint64_t, std::uint32_t, std::uint64_t);

  SignTensor(std::uint32_t order, std::uint32_t dim, std::uint64_t seed,
             bool dense);
  std::uint64_t flat_index(std::span<const std::uint32_t> index) const;
  void unflatten(std::uint64_t flat, std::span<std::uint32_t> index) const;

  std::uint32_t order_;
  std::uint32_t dim_;
  std::uint64_t seed_;
  bool dense_;
  std::uint64_t nonzeros_ = 0;
  std::vector<std::int8_t> values_;                             // dense
  std::vector<std::pair<std::uint64_t, std::int8_t>> entries_;  // sparse
};

// n^M, or nullopt-like UINT64_MAX on overflow.
std::uint64_t checked_power(std::uint64_t n, std::uint32_t m);

// i.i.d. uniform signs for all n^M positions. Throws kBudgetExceeded when
// n^M exceeds the dense budget.
SignTensor ksz_sample(std::uint64_t n, std::uint32_t order, std::uint64_t seed,
                      std::uint64_t dense_budget = kDefaultDenseBudget);

// sum_i x_i^(1) ... x_i^(M).
SignTensor diagonal_form(std::uint64_t n, std::uint32_t order,
                         std::uint64_t dense_budget = kDefaultDenseBudget);

// Assignment of source argument slots to disjoint contiguous coordinate
// ranges of fewer target blocks. Part k of a target block occupies
// coordinates [k*d, (k+1)*d).
class PartitionScheme {
 public:
  enum class Direction { kMultilinearToPoly, kMultilinearToMultipoly, kMultipolyToPoly };

  struct Slot {
    std::uint32_t target_block;
    std::uint32_t part;  // position within the target block
  };

  // Every one of `slots` source slots goes to target block 0.
  static PartitionScheme multilinear_to_poly(std::uint32_t slots, std::uint32_t d);
  // Slots grouped consecutively: n_1 slots to block 0, n_2 to block 1, ...
  static PartitionScheme multilinear_to_multipoly(const BlockDegrees& degrees,
                                                  std::uint32_t d);
  // Each of m source blocks becomes one part of the single target block.
  static PartitionScheme multipoly_to_poly(std::uint32_t blocks, std::uint32_t d);

  Direction direction() const noexcept { return direction_; }
  std::uint32_t part_dim() const noexcept { return part_dim_; }
  std::size_t source_slots() const noexcept { return slots_.size(); }
  const Slot& slot(std::size_t s) const { return slots_[s]; }
  std::size_t target_blocks() const noexcept { return parts_per_block_.size(); }
  std::uint32_t parts(std::size_t target_block) const {
    return parts_per_block_[target_block];
  }
  std::uint32_t target_dim(std::size_t target_block) const {
    return parts_per_block_[target_block] * part_dim_;
  }

  // Splits target block vectors into the source slot vectors.
  std::vector<std::vector<double>> split(const Point& target) const;

 private:
  PartitionScheme(Direction direction, std::uint32_t d, std::vector<Slot> slots);

  Direction direction_;
  std::uint32_t part_dim_;
  std::vector<Slot> slots_;
  std::vector<std::uint32_t> parts_per_block_;
};

// One-block degree-M polynomial on R^{M d}.
Multipolynomial fold_multilinear_to_polynomial(const SignTensor& tensor,
                                               const PartitionScheme& scheme);

// (n_1, ..., n_m)-multipolynomial with block i on R^{n_i d}.
Multipolynomial fold_multilinear_to_multipolynomial(const SignTensor& tensor,
                                                    const BlockDegrees& degrees,
                                                    const PartitionScheme& scheme);

// One-block (n_1 + ... + n_m)-homogeneous polynomial; requires every source
// block dim <= scheme.part_dim().
Multipolynomial fold_multipolynomial_to_homogeneous(const Multipolynomial& poly,
                                                    const PartitionScheme& scheme);

// Contiguous-scheme fold of a freshly sampled KSZ tensor: exactly n^M terms,
// all +-1.
Multipolynomial ksz_witness(std::uint64_t n, const BlockDegrees& degrees,
                            std::uint64_t seed,
                            std::size_t max_terms = kDefaultMaxTerms);

// Contiguous-scheme fold of the diagonal form into the given block degrees.
Multipolynomial diagonal_witness(std::uint64_t n, const BlockDegrees& degrees,
                                 std::size_t max_terms = kDefaultMaxTerms);

// n^{max{M(1/2-1/p)+1/2, 1-1/p}} without the constant C_M.
double ksz_bound(std::uint64_t n, std::uint32_t order, double p);

}  // namespace hlpoly
