#include "hlpoly/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hlpoly/error.hpp"
#include "hlpoly/exponents.hpp"
#include "hlpoly/rng.hpp"

namespace hlpoly {

std::uint64_t checked_power(std::uint64_t n, std::uint32_t m) {
  std::uint64_t r = 1;
  for (std::uint32_t k = 0; k < m; ++k) {
    if (n != 0 && r > std::numeric_limits<std::uint64_t>::max() / n) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    r *= n;
  }
  return r;
}

// ------------------------------------------------------------------ SignTensor

SignTensor::SignTensor(std::uint32_t order, std::uint32_t dim, std::uint64_t seed,
                       bool dense)
    : order_(order), dim_(dim), seed_(seed), dense_(dense) {}

std::uint64_t SignTensor::flat_index(std::span<const std::uint32_t> index) const {
  require(index.size() == order_, ErrorKind::kDimensionMismatch,
          "tensor index has wrong order");
  std::uint64_t flat = 0;
  for (auto i : index) {
    require(i < dim_, ErrorKind::kDimensionMismatch, "tensor index out of range");
    flat = flat * dim_ + i;
  }
  return flat;
}

void SignTensor::unflatten(std::uint64_t flat, std::span<std::uint32_t> index) const {
  for (std::size_t k = order_; k-- > 0;) {
    index[k] = static_cast<std::uint32_t>(flat % dim_);
    flat /= dim_;
  }
}

int SignTensor::at(std::span<const std::uint32_t> index) const {
  const auto flat = flat_index(index);
  if (dense_) return values_[flat];
  auto it = std::lower_bound(entries_.begin(), entries_.end(), flat,
                             [](const auto& e, std::uint64_t f) { return e.first < f; });
  return it != entries_.end() && it->first == flat ? it->second : 0;
}

void SignTensor::for_each_nonzero(const Visitor& visit) const {
  std::vector<std::uint32_t> index(order_);
  if (dense_) {
    for (std::uint64_t f = 0; f < values_.size(); ++f) {
      if (values_[f] == 0) continue;
      unflatten(f, index);
      visit(index, values_[f]);
    }
    return;
  }
  for (const auto& [f, v] : entries_) {
    unflatten(f, index);
    visit(index, v);
  }
}

double SignTensor::apply(const std::vector<std::vector<double>>& args) const {
  require(args.size() == order_, ErrorKind::kDimensionMismatch,
          "tensor applied to wrong number of arguments");
  for (const auto& a : args) {
    require(a.size() == dim_, ErrorKind::kDimensionMismatch,
            "tensor argument has wrong length");
  }
  double sum = 0.0;
  for_each_nonzero([&](std::span<const std::uint32_t> index, int v) {
    double prod = v;
    for (std::size_t k = 0; k < index.size(); ++k) prod *= args[k][index[k]];
    sum += prod;
  });
  return sum;
}

SignTensor SignTensor::from_entries(
    std::uint32_t order, std::uint32_t dim,
    const std::vector<std::pair<std::vector<std::uint32_t>, int>>& entries,
    std::uint64_t dense_budget) {
  require(order >= 1 && dim >= 1, ErrorKind::kInvalidArgument,
          "tensor order and dim must be >= 1");
  const auto size = checked_power(dim, order);
  SignTensor t(order, dim, 0, size <= dense_budget);
  require(t.dense_ || size != std::numeric_limits<std::uint64_t>::max(),
          ErrorKind::kBudgetExceeded, "tensor index space overflows");
  if (t.dense_) t.values_.assign(size, 0);
  for (const auto& [index, v] : entries) {
    require(v >= -1 && v <= 1, ErrorKind::kInvalidArgument,
            "sign tensor entries must be in {-1, 0, 1}");
    const auto f = t.flat_index(index);
    if (t.dense_) {
      t.values_[f] = static_cast<std::int8_t>(v);
    } else {
      t.entries_.emplace_back(f, static_cast<std::int8_t>(v));
    }
  }
  if (t.dense_) {
    t.nonzeros_ = static_cast<std::uint64_t>(
        std::count_if(t.values_.begin(), t.values_.end(), [](auto v) { return v != 0; }));
  } else {
    // Last write wins, matching the dense path.
    std::stable_sort(t.entries_.begin(), t.entries_.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::pair<std::uint64_t, std::int8_t>> unique;
    for (const auto& e : t.entries_) {
      if (!unique.empty() && unique.back().first == e.first) {
        unique.back() = e;
      } else {
        unique.push_back(e);
      }
    }
    std::erase_if(unique, [](const auto& e) { return e.second == 0; });
    t.entries_ = std::move(unique);
    t.nonzeros_ = t.entries_.size();
  }
  return t;
}

SignTensor SignTensor::from_multilinear(const Multipolynomial& poly,
                                        std::uint64_t dense_budget) {
  poly.require_valid();
  const auto& deg = poly.degrees().values();
  require(std::all_of(deg.begin(), deg.end(), [](auto d) { return d == 1; }),
          ErrorKind::kPrecondition, "multilinear form needs degrees (1,...,1)");
  const auto dim = poly.dims().front();
  require(std::all_of(poly.dims().begin(), poly.dims().end(),
                      [&](auto d) { return d == dim; }),
          ErrorKind::kPrecondition, "multilinear form needs equal block dims");

  std::vector<std::pair<std::vector<std::uint32_t>, int>> entries;
  entries.reserve(poly.size());
  for (const auto& term : poly.terms()) {
    require(term.coeff == 1.0 || term.coeff == -1.0, ErrorKind::kPrecondition,
            "sign tensor coefficients must be +-1");
    std::vector<std::uint32_t> index(poly.blocks());
    for (const auto& f : term.alpha.factors()) index[f.block] = f.coord;
    entries.emplace_back(std::move(index), term.coeff > 0.0 ? 1 : -1);
  }
  return from_entries(static_cast<std::uint32_t>(poly.blocks()), dim, entries,
                      dense_budget);
}

Multipolynomial SignTensor::to_multilinear(std::size_t max_terms) const {
  require(nonzeros_ <= max_terms, ErrorKind::kBudgetExceeded,
          "tensor has more nonzeros than the term limit");
  std::vector<Term> terms;
  terms.reserve(nonzeros_);
  for_each_nonzero([&](std::span<const std::uint32_t> index, int v) {
    std::vector<Factor> fs;
    fs.reserve(index.size());
    for (std::size_t k = 0; k < index.size(); ++k) {
      fs.push_back({static_cast<std::uint32_t>(k), index[k], 1});
    }
    terms.push_back({MultiIndex::from_factors(std::move(fs)), static_cast<double>(v)});
  });
  Multipolynomial p(BlockDegrees::multilinear(order_),
                    std::vector<std::uint32_t>(order_, dim_), std::move(terms));
  p.require_valid();
  return p;
}

SignTensor ksz_sample(std::uint64_t n, std::uint32_t order, std::uint64_t seed,
                      std::uint64_t dense_budget) {
  require(n >= 1 && order >= 1, ErrorKind::kInvalidArgument, "n and M must be >= 1");
  require(n <= std::numeric_limits<std::uint32_t>::max(), ErrorKind::kBudgetExceeded,
          "dimension too large");
  const auto size = checked_power(n, order);
  require(size <= dense_budget, ErrorKind::kBudgetExceeded,
          "KSZ tensor with n^M = " +
              (size == std::numeric_limits<std::uint64_t>::max()
                   ? std::string("overflow")
                   : std::to_string(size)) +
              " entries exceeds budget " + std::to_string(dense_budget));

  SignTensor t(order, static_cast<std::uint32_t>(n), seed, true);
  t.values_.resize(size);
  Engine engine = make_engine(seed, 0);
  std::uint64_t bits = 0;
  for (std::uint64_t f = 0; f < size; ++f) {
    if (f % 64 == 0) bits = engine();
    t.values_[f] = (bits & 1U) ? -1 : 1;
    bits >>= 1;
  }
  t.nonzeros_ = size;
  return t;
}

SignTensor diagonal_form(std::uint64_t n, std::uint32_t order,
                         std::uint64_t dense_budget) {
  require(n >= 1 && order >= 1, ErrorKind::kInvalidArgument, "n and M must be >= 1");
  require(n <= std::numeric_limits<std::uint32_t>::max(), ErrorKind::kBudgetExceeded,
          "dimension too large");
  const auto size = checked_power(n, order);
  require(size != std::numeric_limits<std::uint64_t>::max(),
          ErrorKind::kBudgetExceeded, "tensor index space overflows");

  SignTensor t(order, static_cast<std::uint32_t>(n), 0, size <= dense_budget);
  // Flat offset between consecutive diagonal entries: 1 + n + ... + n^{M-1}.
  std::uint64_t stride = 0;
  for (std::uint32_t k = 0; k < order; ++k) stride = stride * n + 1;
  if (t.dense_) {
    t.values_.assign(size, 0);
    for (std::uint64_t i = 0; i < n; ++i) t.values_[i * stride] = 1;
  } else {
    t.entries_.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) t.entries_.emplace_back(i * stride, 1);
  }
  t.nonzeros_ = n;
  return t;
}

// ------------------------------------------------------------- PartitionScheme

PartitionScheme::PartitionScheme(Direction direction, std::uint32_t d,
                                 std::vector<Slot> slots)
    : direction_(direction), part_dim_(d), slots_(std::move(slots)) {
  require(d >= 1, ErrorKind::kInvalidArgument, "part dimension must be >= 1");
  require(!slots_.empty(), ErrorKind::kInvalidArgument, "scheme needs >= 1 slot");
  for (const auto& s : slots_) {
    if (s.target_block >= parts_per_block_.size()) {
      parts_per_block_.resize(s.target_block + 1, 0);
    }
    require(s.part == parts_per_block_[s.target_block], ErrorKind::kInvalidArgument,
            "scheme parts must be assigned contiguously");
    ++parts_per_block_[s.target_block];
  }
}

PartitionScheme PartitionScheme::multilinear_to_poly(std::uint32_t slots,
                                                     std::uint32_t d) {
  std::vector<Slot> out;
  for (std::uint32_t k = 0; k < slots; ++k) out.push_back({0, k});
  return PartitionScheme(Direction::kMultilinearToPoly, d, std::move(out));
}

PartitionScheme PartitionScheme::multilinear_to_multipoly(const BlockDegrees& degrees,
                                                          std::uint32_t d) {
  std::vector<Slot> out;
  for (std::uint32_t b = 0; b < degrees.blocks(); ++b) {
    for (std::uint32_t k = 0; k < degrees[b]; ++k) out.push_back({b, k});
  }
  return PartitionScheme(Direction::kMultilinearToMultipoly, d, std::move(out));
}

PartitionScheme PartitionScheme::multipoly_to_poly(std::uint32_t blocks,
                                                   std::uint32_t d) {
  std::vector<Slot> out;
  for (std::uint32_t b = 0; b < blocks; ++b) out.push_back({0, b});
  return PartitionScheme(Direction::kMultipolyToPoly, d, std::move(out));
}

std::vector<std::vector<double>> PartitionScheme::split(const Point& target) const {
  require(target.blocks.size() == target_blocks(), ErrorKind::kDimensionMismatch,
          "point does not match scheme target blocks");
  for (std::size_t b = 0; b < target_blocks(); ++b) {
    require(target.blocks[b].size() == target_dim(b), ErrorKind::kDimensionMismatch,
            "point block does not match scheme target dim");
  }
  std::vector<std::vector<double>> out;
  out.reserve(slots_.size());
  for (const auto& s : slots_) {
    const auto& src = target.blocks[s.target_block];
    const auto begin = src.begin() + static_cast<std::ptrdiff_t>(s.part) * part_dim_;
    out.emplace_back(begin, begin + part_dim_);
  }
  return out;
}

// ----------------------------------------------------------------------- folds

namespace {

Multipolynomial fold_tensor(const SignTensor& tensor, const BlockDegrees& degrees,
                            const PartitionScheme& scheme) {
  require(scheme.source_slots() == tensor.order(), ErrorKind::kPrecondition,
          "scheme has " + std::to_string(scheme.source_slots()) +
              " slots but tensor has order " + std::to_string(tensor.order()));
  require(scheme.part_dim() == tensor.dim(), ErrorKind::kPrecondition,
          "scheme part dimension must equal tensor dimension");
  require(scheme.target_blocks() == degrees.blocks(), ErrorKind::kPrecondition,
          "scheme target blocks do not match block degrees");
  std::vector<std::uint32_t> dims;
  for (std::size_t b = 0; b < degrees.blocks(); ++b) {
    require(scheme.parts(b) == degrees[b], ErrorKind::kPrecondition,
            "scheme groups slots inconsistently with block degrees");
    dims.push_back(scheme.target_dim(b));
  }
  require(tensor.nonzeros() <= kDefaultMaxTerms, ErrorKind::kBudgetExceeded,
          "folded polynomial would exceed the term limit");

  std::vector<Term> terms;
  terms.reserve(tensor.nonzeros());
  const std::uint32_t d = scheme.part_dim();
  tensor.for_each_nonzero([&](std::span<const std::uint32_t> index, int v) {
    std::vector<Factor> fs;
    fs.reserve(index.size());
    for (std::size_t k = 0; k < index.size(); ++k) {
      const auto& slot = scheme.slot(k);
      fs.push_back({slot.target_block, slot.part * d + index[k], 1});
    }
    terms.push_back({MultiIndex::from_factors(std::move(fs)), static_cast<double>(v)});
  });
  Multipolynomial p(degrees, std::move(dims), std::move(terms));
  p.require_valid();
  return p;
}

}  // namespace

Multipolynomial fold_multilinear_to_polynomial(const SignTensor& tensor,
                                               const PartitionScheme& scheme) {
  require(scheme.direction() == PartitionScheme::Direction::kMultilinearToPoly,
          ErrorKind::kPrecondition, "scheme direction must be multilinear->poly");
  return fold_tensor(tensor, BlockDegrees({tensor.order()}), scheme);
}

Multipolynomial fold_multilinear_to_multipolynomial(const SignTensor& tensor,
                                                    const BlockDegrees& degrees,
                                                    const PartitionScheme& scheme) {
  require(scheme.direction() == PartitionScheme::Direction::kMultilinearToMultipoly,
          ErrorKind::kPrecondition, "scheme direction must be multilinear->multipoly");
  require(degrees.total() == tensor.order(), ErrorKind::kPrecondition,
          "block degrees must sum to the tensor order");
  return fold_tensor(tensor, degrees, scheme);
}

Multipolynomial fold_multipolynomial_to_homogeneous(const Multipolynomial& poly,
                                                    const PartitionScheme& scheme) {
  poly.require_valid();
  require(scheme.direction() == PartitionScheme::Direction::kMultipolyToPoly,
          ErrorKind::kPrecondition, "scheme direction must be multipoly->poly");
  require(scheme.source_slots() == poly.blocks(), ErrorKind::kPrecondition,
          "scheme parts do not match polynomial blocks");
  const std::uint32_t d = scheme.part_dim();
  for (auto dim : poly.dims()) {
    require(dim <= d, ErrorKind::kPrecondition,
            "scheme part dimension smaller than a source block");
  }

  std::vector<Term> terms;
  terms.reserve(poly.size());
  for (const auto& term : poly.terms()) {
    std::vector<Factor> fs;
    for (const auto& f : term.alpha.factors()) {
      fs.push_back({0, scheme.slot(f.block).part * d + f.coord, f.exponent});
    }
    terms.push_back({MultiIndex::from_factors(std::move(fs)), term.coeff});
  }
  Multipolynomial q(BlockDegrees({poly.degrees().total()}), {scheme.target_dim(0)},
                    std::move(terms));
  q.require_valid();
  return q;
}

Multipolynomial ksz_witness(std::uint64_t n, const BlockDegrees& degrees,
                            std::uint64_t seed, std::size_t max_terms) {
  const auto count = checked_power(n, degrees.total());
  require(count <= max_terms, ErrorKind::kBudgetExceeded,
          "KSZ witness would have " +
              (count == std::numeric_limits<std::uint64_t>::max()
                   ? std::string("overflowing")
                   : std::to_string(count)) +
              " terms, limit is " + std::to_string(max_terms));
  const auto tensor = ksz_sample(n, degrees.total(), seed);
  return fold_multilinear_to_multipolynomial(
      tensor, degrees,
      PartitionScheme::multilinear_to_multipoly(degrees, tensor.dim()));
}

Multipolynomial diagonal_witness(std::uint64_t n, const BlockDegrees& degrees,
                                 std::size_t max_terms) {
  require(n <= max_terms, ErrorKind::kBudgetExceeded,
          "diagonal witness exceeds the term limit");
  const auto tensor = diagonal_form(n, degrees.total());
  return fold_multilinear_to_multipolynomial(
      tensor, degrees,
      PartitionScheme::multilinear_to_multipoly(degrees, tensor.dim()));
}

double ksz_bound(std::uint64_t n, std::uint32_t order, double p) {
  require(n >= 1, ErrorKind::kInvalidArgument, "n must be >= 1");
  return std::pow(static_cast<double>(n), ksz_exponent(order, p));
}

}  // namespace hlpoly
