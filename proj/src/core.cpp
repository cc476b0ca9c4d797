#include "hlpoly/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "hlpoly/error.hpp"

namespace hlpoly {

namespace {

double ipow(double x, std::uint32_t e) {
  double r = 1.0;
  for (; e > 0; --e) r *= x;
  return r;
}

bool factor_less(const Factor& a, const Factor& b) {
  return a.block != b.block ? a.block < b.block : a.coord < b.coord;
}

}  // namespace

// ---------------------------------------------------------------- BlockDegrees

BlockDegrees::BlockDegrees(std::vector<std::uint32_t> degrees)
    : degrees_(std::move(degrees)) {
  require(!degrees_.empty(), ErrorKind::kInvalidArgument,
          "block degrees must be non-empty");
  for (auto d : degrees_) {
    require(d >= 1, ErrorKind::kInvalidArgument, "block degrees must be >= 1");
    total_ += d;
  }
}

std::string BlockDegrees::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < degrees_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(degrees_[i]);
  }
  return out;
}

BlockDegrees BlockDegrees::parse(const std::string& text) {
  std::vector<std::uint32_t> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const long v = std::stol(item, &used);
      require(used == item.size() && v >= 1, ErrorKind::kInvalidArgument,
              "bad block degree '" + item + "'");
      values.push_back(static_cast<std::uint32_t>(v));
    } catch (const std::logic_error&) {
      fail(ErrorKind::kInvalidArgument, "bad block degree '" + item + "'");
    }
  }
  return BlockDegrees(std::move(values));
}

BlockDegrees BlockDegrees::multilinear(std::size_t m) {
  return BlockDegrees(std::vector<std::uint32_t>(m, 1));
}

// ------------------------------------------------------------------ MultiIndex

MultiIndex MultiIndex::from_dense(
    const std::vector<std::vector<std::uint32_t>>& blocks) {
  MultiIndex out;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    for (std::size_t j = 0; j < blocks[b].size(); ++j) {
      if (blocks[b][j] > 0) {
        out.factors_.push_back({static_cast<std::uint32_t>(b),
                                static_cast<std::uint32_t>(j), blocks[b][j]});
      }
    }
  }
  return out;
}

MultiIndex MultiIndex::from_factors(std::vector<Factor> factors) {
  std::sort(factors.begin(), factors.end(), factor_less);
  MultiIndex out;
  for (const auto& f : factors) {
    if (f.exponent == 0) continue;
    if (!out.factors_.empty() && out.factors_.back().block == f.block &&
        out.factors_.back().coord == f.coord) {
      out.factors_.back().exponent += f.exponent;
    } else {
      out.factors_.push_back(f);
    }
  }
  return out;
}

std::vector<std::vector<std::uint32_t>> MultiIndex::to_dense(
    std::span<const std::uint32_t> dims) const {
  std::vector<std::vector<std::uint32_t>> out(dims.size());
  for (std::size_t b = 0; b < dims.size(); ++b) out[b].assign(dims[b], 0);
  for (const auto& f : factors_) {
    require(f.block < dims.size() && f.coord < dims[f.block],
            ErrorKind::kDimensionMismatch, "multi-index exceeds dims");
    out[f.block][f.coord] = f.exponent;
  }
  return out;
}

std::uint32_t MultiIndex::block_degree(std::size_t block) const {
  std::uint32_t sum = 0;
  for (const auto& f : factors_) {
    if (f.block == block) sum += f.exponent;
  }
  return sum;
}

std::uint32_t MultiIndex::max_exponent() const noexcept {
  std::uint32_t m = 0;
  for (const auto& f : factors_) m = std::max(m, f.exponent);
  return m;
}

std::strong_ordering MultiIndex::operator<=>(const MultiIndex& other) const {
  const auto& a = factors_;
  const auto& b = other.factors_;
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t k = 0; k < n; ++k) {
    if (a[k] == b[k]) continue;
    if (a[k].block == b[k].block && a[k].coord == b[k].coord) {
      return a[k].exponent <=> b[k].exponent;
    }
    // The side whose next nonzero sits at the later position has a zero at
    // the earlier position, so it is the smaller dense vector.
    return factor_less(a[k], b[k]) ? std::strong_ordering::greater
                                   : std::strong_ordering::less;
  }
  return a.size() <=> b.size();
}

// ----------------------------------------------------------------------- Point

Point Point::zeros(std::span<const std::uint32_t> dims) {
  Point p;
  for (auto d : dims) p.blocks.emplace_back(d, 0.0);
  return p;
}

std::vector<double> Point::flatten() const {
  std::vector<double> out;
  for (const auto& b : blocks) out.insert(out.end(), b.begin(), b.end());
  return out;
}

Point Point::unflatten(std::span<const double> flat,
                       std::span<const std::uint32_t> dims) {
  Point p;
  std::size_t at = 0;
  for (auto d : dims) {
    require(at + d <= flat.size(), ErrorKind::kDimensionMismatch,
            "flat point too short");
    p.blocks.emplace_back(flat.begin() + at, flat.begin() + at + d);
    at += d;
  }
  require(at == flat.size(), ErrorKind::kDimensionMismatch,
          "flat point too long");
  return p;
}

// ------------------------------------------------------------ ValidationReport

std::string ValidationReport::to_string() const {
  if (ok()) return "ok";
  std::string out;
  for (const auto& v : violations) {
    if (!out.empty()) out += '\n';
    if (v.term_index != std::numeric_limits<std::size_t>::max()) {
      out += "term " + std::to_string(v.term_index) + ": ";
    }
    out += v.message;
  }
  return out;
}

// ------------------------------------------------------------- Multipolynomial

Multipolynomial::Multipolynomial(BlockDegrees degrees,
                                 std::vector<std::uint32_t> dims,
                                 std::vector<Term> terms)
    : degrees_(std::move(degrees)), dims_(std::move(dims)), terms_(std::move(terms)) {
  std::stable_sort(terms_.begin(), terms_.end(),
                   [](const Term& a, const Term& b) { return a.alpha < b.alpha; });
  offsets_.assign(dims_.size() + 1, 0);
  for (std::size_t i = 0; i < dims_.size(); ++i) offsets_[i + 1] = offsets_[i] + dims_[i];

  constexpr auto kShape = std::numeric_limits<std::size_t>::max();
  auto& v = report_.violations;
  if (dims_.size() != degrees_.blocks()) {
    v.push_back({kShape, "dims has " + std::to_string(dims_.size()) +
                             " blocks but degrees has " +
                             std::to_string(degrees_.blocks())});
  }
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    if (dims_[i] == 0) v.push_back({kShape, "dims[" + std::to_string(i) + "] is 0"});
  }
  if (!v.empty()) return;

  for (std::size_t t = 0; t < terms_.size(); ++t) {
    const Term& term = terms_[t];
    if (term.coeff == 0.0) v.push_back({t, "stored coefficient is zero"});
    if (!std::isfinite(term.coeff)) v.push_back({t, "coefficient is not finite"});
    if (t > 0 && terms_[t - 1].alpha == term.alpha) {
      v.push_back({t, "duplicate multi-index"});
    }
    bool shape_ok = true;
    for (const auto& f : term.alpha.factors()) {
      if (f.block >= dims_.size() || f.coord >= dims_[f.block]) {
        v.push_back({t, "exponent position (" + std::to_string(f.block) + "," +
                            std::to_string(f.coord) + ") outside dims"});
        shape_ok = false;
      }
    }
    if (!shape_ok) continue;
    for (std::size_t b = 0; b < dims_.size(); ++b) {
      const auto deg = term.alpha.block_degree(b);
      if (deg != degrees_[b]) {
        v.push_back({t, "|alpha^(" + std::to_string(b + 1) + ")| = " +
                            std::to_string(deg) + " != " +
                            std::to_string(degrees_[b])});
      }
    }
  }
}

void Multipolynomial::require_valid() const {
  require(valid(), ErrorKind::kInvalidPolynomial,
          "invalid polynomial:\n" + report_.to_string());
}

bool Multipolynomial::multi_affine() const noexcept {
  return std::all_of(terms_.begin(), terms_.end(),
                     [](const Term& t) { return t.alpha.max_exponent() <= 1; });
}

double Multipolynomial::evaluate_flat(std::span<const double> x) const {
  require_valid();
  require(x.size() == total_dim(), ErrorKind::kDimensionMismatch,
          "point has " + std::to_string(x.size()) + " coordinates, expected " +
              std::to_string(total_dim()));
  double sum = 0.0;
  for (const auto& term : terms_) {
    double prod = term.coeff;
    for (const auto& f : term.alpha.factors()) {
      prod *= ipow(x[offsets_[f.block] + f.coord], f.exponent);
    }
    sum += prod;
  }
  return sum;
}

void Multipolynomial::gradient_flat(std::span<const double> x,
                                    std::span<double> grad) const {
  require_valid();
  require(x.size() == total_dim() && grad.size() == total_dim(),
          ErrorKind::kDimensionMismatch, "gradient buffer size mismatch");
  std::fill(grad.begin(), grad.end(), 0.0);
  std::vector<double> powers, prefix;
  for (const auto& term : terms_) {
    const auto& fs = term.alpha.factors();
    const std::size_t k = fs.size();
    powers.resize(k);
    prefix.resize(k + 1);
    prefix[0] = 1.0;
    for (std::size_t j = 0; j < k; ++j) {
      powers[j] = ipow(x[offsets_[fs[j].block] + fs[j].coord], fs[j].exponent);
      prefix[j + 1] = prefix[j] * powers[j];
    }
    double suffix = 1.0;
    for (std::size_t j = k; j-- > 0;) {
      const std::size_t idx = offsets_[fs[j].block] + fs[j].coord;
      const double d = fs[j].exponent * ipow(x[idx], fs[j].exponent - 1);
      grad[idx] += term.coeff * prefix[j] * d * suffix;
      suffix *= powers[j];
    }
  }
}

// ----------------------------------------------------------- PolynomialBuilder

PolynomialBuilder::PolynomialBuilder(BlockDegrees degrees,
                                     std::vector<std::uint32_t> dims,
                                     std::size_t max_terms)
    : degrees_(std::move(degrees)), dims_(std::move(dims)), max_terms_(max_terms) {}

PolynomialBuilder& PolynomialBuilder::add(MultiIndex alpha, double coeff) {
  terms_.push_back({std::move(alpha), coeff});
  return *this;
}

Multipolynomial PolynomialBuilder::build() {
  std::stable_sort(terms_.begin(), terms_.end(),
                   [](const Term& a, const Term& b) { return a.alpha < b.alpha; });
  std::vector<Term> merged;
  merged.reserve(terms_.size());
  for (auto& t : terms_) {
    if (!merged.empty() && merged.back().alpha == t.alpha) {
      merged.back().coeff += t.coeff;
    } else {
      merged.push_back(std::move(t));
    }
  }
  std::erase_if(merged, [](const Term& t) { return t.coeff == 0.0; });
  terms_.clear();
  require(merged.size() <= max_terms_, ErrorKind::kBudgetExceeded,
          "polynomial has " + std::to_string(merged.size()) +
              " terms, limit is " + std::to_string(max_terms_));
  Multipolynomial p(degrees_, dims_, std::move(merged));
  p.require_valid();
  return p;
}

// ------------------------------------------------------------------ operations

ValidationReport validate(const Multipolynomial& p) { return p.validation(); }

namespace {
std::vector<double> conforming_flat(const Multipolynomial& p, const Point& x) {
  require(x.blocks.size() == p.blocks(), ErrorKind::kDimensionMismatch,
          "point has " + std::to_string(x.blocks.size()) + " blocks, expected " +
              std::to_string(p.blocks()));
  for (std::size_t i = 0; i < p.blocks(); ++i) {
    require(x.blocks[i].size() == p.dims()[i], ErrorKind::kDimensionMismatch,
            "point block " + std::to_string(i) + " has length " +
                std::to_string(x.blocks[i].size()) + ", expected " +
                std::to_string(p.dims()[i]));
  }
  return x.flatten();
}
}  // namespace

double evaluate(const Multipolynomial& p, const Point& x) {
  return p.evaluate_flat(conforming_flat(p, x));
}

Point gradient(const Multipolynomial& p, const Point& x) {
  const auto flat = conforming_flat(p, x);
  std::vector<double> g(flat.size());
  p.gradient_flat(flat, g);
  return Point::unflatten(g, p.dims());
}

bool nearly_equal(double a, double b, double rel_tol) {
  if (a == b) return true;
  return std::abs(a - b) <= rel_tol * std::max(std::abs(a), std::abs(b));
}

bool scale_homogeneity_check(const Multipolynomial& p, const Point& x,
                             std::size_t block, double t) {
  require(block < p.blocks(), ErrorKind::kInvalidArgument, "block out of range");
  const double base = evaluate(p, x);
  Point scaled = x;
  for (auto& v : scaled.blocks[block]) v *= t;
  const double lhs = evaluate(p, scaled);
  const double rhs = ipow(t, p.degrees()[block]) * base;

  // Cancellation can leave both sides near zero; measure against the sum of
  // term magnitudes instead.
  double magnitude = 0.0;
  const auto flat = scaled.flatten();
  for (const auto& term : p.terms()) {
    double prod = std::abs(term.coeff);
    for (const auto& f : term.alpha.factors()) {
      prod *= std::abs(ipow(flat[p.block_offset(f.block) + f.coord], f.exponent));
    }
    magnitude += prod;
  }
  return std::abs(lhs - rhs) <= kIdentityRelTol * std::max(magnitude, std::abs(rhs));
}

double coeff_ls_value(const Multipolynomial& p, double s) {
  require(s > 0.0 && std::isfinite(s), ErrorKind::kInvalidArgument,
          "coefficient exponent s must be in (0, inf)");
  p.require_valid();
  // Summing in ascending magnitude makes the value a function of the
  // coefficient multiset alone, independent of monomial order.
  double sum = 0.0;
  for (double c : sorted_abs_coefficients(p)) sum += std::pow(c, s);
  return std::pow(sum, 1.0 / s);
}

std::vector<double> sorted_abs_coefficients(const Multipolynomial& p) {
  std::vector<double> out;
  out.reserve(p.size());
  for (const auto& t : p.terms()) out.push_back(std::abs(t.coeff));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace hlpoly
