#pragma once

// Frequency sets: hyperbolic crosses, integer l_p balls, full grids,
// difference sets, and the weight functions that generate them.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "tlfft/core.hpp"

namespace tlfft {

using Freq = std::int32_t;

/// Default upper bound on materialized set sizes.
inline constexpr std::uint64_t default_set_cap = 100'000'000;

enum class SetKind { hc, lp, grid, custom };

inline std::string_view to_string(SetKind kind) {
  switch (kind) {
    case SetKind::hc: return "hc";
    case SetKind::lp: return "lp";
    case SetKind::grid: return "grid";
    case SetKind::custom: return "custom";
  }
  return "?";
}

/// Generating rule of a set: hc uses param = beta, lp uses param = p
/// (infinity allowed), grid ignores param.
struct SetDescriptor {
  SetKind kind = SetKind::custom;
  double N = 0.0;
  double param = 0.0;

  std::string describe() const {
    std::ostringstream os;
    os << to_string(kind) << "(N=" << N;
    if (kind == SetKind::hc) os << ",beta=" << param;
    if (kind == SetKind::lp) {
      if (std::isinf(param))
        os << ",p=inf";
      else
        os << ",p=" << param;
    }
    os << ")";
    return os.str();
  }

  friend bool operator==(const SetDescriptor&, const SetDescriptor&) = default;
};

namespace detail {

// Relative slack on real thresholds; only matters when a product or power
// sum lands exactly on the threshold.
inline constexpr double threshold_slack = 1e-12;

inline std::int64_t hc_product_bound(double N, double beta) {
  if (!(beta > 0.0)) throw DomainError("hyperbolic cross: beta must be > 0");
  if (N < 1.0) return 0;
  const double t = std::pow(N, 1.0 / beta) * (1.0 + threshold_slack);
  if (t >= 9.0e18) return std::numeric_limits<std::int64_t>::max();
  return static_cast<std::int64_t>(std::floor(t));
}

inline double lp_budget(double N, double p) { return std::pow(N, p) * (1.0 + threshold_slack); }

}  // namespace detail

/// Membership predicate of a descriptor; the enumeration below uses the
/// same arithmetic so both always agree.
inline bool descriptor_contains(const SetDescriptor& desc, std::span<const Freq> k) {
  switch (desc.kind) {
    case SetKind::hc: {
      const std::int64_t bound = detail::hc_product_bound(desc.N, desc.param);
      std::int64_t prod = 1;
      for (Freq v : k) {
        const std::int64_t m = std::max<std::int64_t>(1, std::abs(static_cast<std::int64_t>(v)));
        if (m > bound / prod) return false;
        prod *= m;
      }
      return prod <= bound;
    }
    case SetKind::lp: {
      if (std::isinf(desc.param)) {
        for (Freq v : k)
          if (std::abs(static_cast<double>(v)) > desc.N) return false;
        return true;
      }
      const double budget = detail::lp_budget(desc.N, desc.param);
      double sum = 0.0;
      for (Freq v : k) {
        sum += std::pow(std::abs(static_cast<double>(v)), desc.param);
        if (sum > budget) return false;
      }
      return true;
    }
    case SetKind::grid:
      for (Freq v : k)
        if (std::abs(static_cast<double>(v)) > desc.N) return false;
      return true;
    case SetKind::custom:
      break;
  }
  throw InputError("custom descriptor has no membership rule");
}

/// Finite, deduplicated, lexicographically ordered set of integer vectors.
/// A lazy set carries only its descriptor (used for huge search grids).
class FrequencySet {
 public:
  FrequencySet() = default;

  /// Takes row-major data (size() * dim entries), sorts and deduplicates.
  FrequencySet(std::size_t dim, std::vector<Freq> flat,
               std::optional<SetDescriptor> descriptor = std::nullopt)
      : dim_(dim), descriptor_(descriptor) {
    if (dim == 0) throw InputError("frequency set dimension must be >= 1");
    if (flat.size() % dim != 0) throw InputError("frequency data not a multiple of dim");
    canonicalize(std::move(flat));
  }

  static FrequencySet from_rows(const std::vector<std::vector<Freq>>& rows) {
    if (rows.empty()) throw InputError("from_rows needs at least one row");
    const std::size_t d = rows.front().size();
    std::vector<Freq> flat;
    flat.reserve(rows.size() * d);
    for (const auto& r : rows) {
      if (r.size() != d) throw InputError("ragged frequency rows");
      flat.insert(flat.end(), r.begin(), r.end());
    }
    return FrequencySet(d, std::move(flat));
  }

  static FrequencySet lazy(std::size_t dim, SetDescriptor descriptor, std::uint64_t cardinality) {
    FrequencySet s;
    s.dim_ = dim;
    s.descriptor_ = descriptor;
    s.lazy_ = true;
    s.lazy_cardinality_ = cardinality;
    return s;
  }

  std::size_t dim() const { return dim_; }
  bool materialized() const { return !lazy_; }
  /// Number of stored frequencies (0 for lazy sets).
  std::size_t size() const { return dim_ == 0 ? 0 : data_.size() / dim_; }
  std::uint64_t cardinality() const { return lazy_ ? lazy_cardinality_ : size(); }
  bool empty() const { return cardinality() == 0; }

  std::span<const Freq> operator[](std::size_t i) const {
    return {data_.data() + i * dim_, dim_};
  }
  std::span<const Freq> data() const { return data_; }
  const std::optional<SetDescriptor>& descriptor() const { return descriptor_; }

  /// Index of k in canonical order, if present.
  std::optional<std::size_t> index_of(std::span<const Freq> k) const {
    if (k.size() != dim_) throw InputError("frequency dimension mismatch");
    std::size_t lo = 0, hi = size();
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      const auto row = (*this)[mid];
      if (std::lexicographical_compare(row.begin(), row.end(), k.begin(), k.end()))
        lo = mid + 1;
      else
        hi = mid;
    }
    if (lo < size() && std::equal(k.begin(), k.end(), (*this)[lo].begin())) return lo;
    return std::nullopt;
  }

  bool contains(std::span<const Freq> k) const {
    if (lazy_) return descriptor_contains(*descriptor_, k);
    return index_of(k).has_value();
  }

  /// Largest |k_j| over all members and coordinates.
  Freq max_abs() const {
    Freq m = 0;
    for (Freq v : data_) m = std::max(m, static_cast<Freq>(std::abs(v)));
    return m;
  }

  std::vector<std::vector<Freq>> rows() const {
    std::vector<std::vector<Freq>> out;
    out.reserve(size());
    for (std::size_t i = 0; i < size(); ++i) out.emplace_back((*this)[i].begin(), (*this)[i].end());
    return out;
  }

  friend bool operator==(const FrequencySet& a, const FrequencySet& b) {
    return a.dim_ == b.dim_ && a.lazy_ == b.lazy_ && a.data_ == b.data_ &&
           a.lazy_cardinality_ == b.lazy_cardinality_;
  }

 private:
  void canonicalize(std::vector<Freq> flat) {
    const std::size_t n = flat.size() / dim_;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto row = [&](std::size_t i) { return flat.begin() + static_cast<std::ptrdiff_t>(i * dim_); };
    auto less = [&](std::size_t a, std::size_t b) {
      return std::lexicographical_compare(row(a), row(a) + dim_, row(b), row(b) + dim_);
    };
    if (!std::is_sorted(order.begin(), order.end(), less)) std::sort(order.begin(), order.end(), less);
    data_.clear();
    data_.reserve(flat.size());
    for (std::size_t idx = 0; idx < n; ++idx) {
      const auto r = row(order[idx]);
      if (idx > 0 && std::equal(r, r + dim_, data_.end() - static_cast<std::ptrdiff_t>(dim_)))
        continue;
      data_.insert(data_.end(), r, r + dim_);
    }
  }

  std::size_t dim_ = 0;
  std::vector<Freq> data_;
  std::optional<SetDescriptor> descriptor_;
  bool lazy_ = false;
  std::uint64_t lazy_cardinality_ = 0;
};

namespace detail {

class Enumerator {
 public:
  Enumerator(std::size_t d, const SetDescriptor& desc, std::uint64_t cap)
      : d_(d), desc_(desc), cap_(cap), cur_(d, 0) {}

  std::vector<Freq> run() {
    switch (desc_.kind) {
      case SetKind::hc:
        hc(0, hc_product_bound(desc_.N, desc_.param));
        break;
      case SetKind::lp:
        if (std::isinf(desc_.param))
          box(0, static_cast<Freq>(std::floor(desc_.N)));
        else
          lp(0, 0.0, lp_budget(desc_.N, desc_.param));
        break;
      case SetKind::grid:
        box(0, static_cast<Freq>(std::floor(desc_.N)));
        break;
      case SetKind::custom:
        throw InputError("cannot enumerate a custom descriptor");
    }
    return std::move(out_);
  }

 private:
  void emit() {
    if (++count_ > cap_) throw ResourceError("frequency set exceeds cardinality cap");
    out_.insert(out_.end(), cur_.begin(), cur_.end());
  }

  // Remaining product budget: prod_{i>=j} max(1,|k_i|) <= budget.
  void hc(std::size_t j, std::int64_t budget) {
    if (j == d_) return emit();
    if (budget < 1) return;
    const Freq b = static_cast<Freq>(std::min<std::int64_t>(budget, std::numeric_limits<Freq>::max()));
    for (Freq v = -b; v <= b; ++v) {
      cur_[j] = v;
      const std::int64_t m = std::max<std::int64_t>(1, std::abs(static_cast<std::int64_t>(v)));
      hc(j + 1, budget / m);
    }
  }

  // Partial sums accumulate in coordinate order, exactly as descriptor_contains.
  void lp(std::size_t j, double sum, double budget) {
    if (j == d_) return emit();
    const Freq b = static_cast<Freq>(std::floor(std::pow(budget, 1.0 / desc_.param))) + 1;
    for (Freq v = -b; v <= b; ++v) {
      const double s = sum + std::pow(std::abs(static_cast<double>(v)), desc_.param);
      if (s > budget) continue;
      cur_[j] = v;
      lp(j + 1, s, budget);
    }
  }

  void box(std::size_t j, Freq b) {
    if (j == d_) return emit();
    for (Freq v = -b; v <= b; ++v) {
      cur_[j] = v;
      box(j + 1, b);
    }
  }

  std::size_t d_;
  SetDescriptor desc_;
  std::uint64_t cap_;
  std::uint64_t count_ = 0;
  std::vector<Freq> cur_;
  std::vector<Freq> out_;
};

inline FrequencySet enumerate(std::size_t d, const SetDescriptor& desc, std::uint64_t cap) {
  if (d == 0) throw InputError("dimension must be >= 1");
  auto flat = Enumerator(d, desc, cap).run();
  return FrequencySet(d, std::move(flat), desc);
}

}  // namespace detail

/// {k : prod_j max(1,|k_j|)^beta <= N}.
inline FrequencySet hyperbolic_cross(std::size_t d, double N, double beta,
                                     std::uint64_t cap = default_set_cap) {
  return detail::enumerate(d, SetDescriptor{SetKind::hc, N, beta}, cap);
}

/// {k : ||k||_p <= N}; p = infinity gives the cube.
inline FrequencySet lp_ball(std::size_t d, double N, double p, std::uint64_t cap = default_set_cap) {
  if (!(p >= 1.0)) throw DomainError("lp_ball: p must be >= 1");
  return detail::enumerate(d, SetDescriptor{SetKind::lp, N, p}, cap);
}

/// [-N, N]^d. Returned lazily (descriptor only) when larger than materialize_limit.
inline FrequencySet full_grid(std::size_t d, std::int64_t N, std::uint64_t materialize_limit = 10'000'000) {
  if (N < 0) throw DomainError("full_grid: N must be >= 0");
  const SetDescriptor desc{SetKind::grid, static_cast<double>(N), 0.0};
  const double side = 2.0 * static_cast<double>(N) + 1.0;
  const double card = std::pow(side, static_cast<double>(d));
  if (card > static_cast<double>(materialize_limit)) {
    const auto c = card >= 1.8e19 ? std::numeric_limits<std::uint64_t>::max()
                                   : static_cast<std::uint64_t>(std::llround(card));
    return FrequencySet::lazy(d, desc, c);
  }
  return detail::enumerate(d, desc, materialize_limit);
}

/// {k1 - k2 : k1, k2 in I}.
inline FrequencySet difference_set(const FrequencySet& I, std::uint64_t pair_cap = default_set_cap) {
  if (!I.materialized() || I.empty()) throw InputError("difference_set needs a non-empty materialized set");
  const std::size_t n = I.size(), d = I.dim();
  if (static_cast<double>(n) * static_cast<double>(n) > static_cast<double>(pair_cap))
    throw ResourceError("difference set work exceeds cap");
  std::vector<Freq> flat;
  flat.reserve(n * n * d);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t j = 0; j < d; ++j) flat.push_back(I[a][j] - I[b][j]);
  return FrequencySet(d, std::move(flat));
}

/// lp norm of an integer vector; q = infinity gives the max norm.
inline double lp_norm(std::span<const Freq> k, double q) {
  if (std::isinf(q)) {
    double m = 0.0;
    for (Freq v : k) m = std::max(m, std::abs(static_cast<double>(v)));
    return m;
  }
  if (q == 1.0) {
    double s = 0.0;
    for (Freq v : k) s += std::abs(static_cast<double>(v));
    return s;
  }
  if (q == 2.0) {
    double s = 0.0;
    for (Freq v : k) s += static_cast<double>(v) * static_cast<double>(v);
    return std::sqrt(s);
  }
  double s = 0.0;
  for (Freq v : k) s += std::pow(std::abs(static_cast<double>(v)), q);
  return std::pow(s, 1.0 / q);
}

/// omega(k): hyperbolic-cross weight prod max(1,|k_j|)^beta, or the lp norm.
struct WeightFunction {
  enum class Kind { hc, lp };
  Kind kind = Kind::hc;
  double param = 1.0;

  static WeightFunction hc(double beta) { return {Kind::hc, beta}; }
  static WeightFunction lp(double p) { return {Kind::lp, p}; }

  double operator()(std::span<const Freq> k) const {
    if (kind == Kind::lp) return lp_norm(k, param);
    double w = 1.0;
    for (Freq v : k) w *= std::pow(std::max(1.0, std::abs(static_cast<double>(v))), param);
    return w;
  }
};

/// Checked form of WeightFunction::operator().
inline double weight(const WeightFunction& w, std::span<const Freq> k, std::size_t expected_dim) {
  if (k.size() != expected_dim) throw InputError("weight: dimension mismatch");
  return w(k);
}

}  // namespace tlfft
