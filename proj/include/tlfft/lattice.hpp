#pragma once

// Rank-1 lattices, transformed lattices, reconstruction checks, and the
// single / multiple lattice searches.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tlfft/core.hpp"
#include "tlfft/freqsets.hpp"
#include "tlfft/transforms.hpp"

namespace tlfft {

namespace detail {

inline std::int64_t mod_floor(__int128 a, std::int64_t m) {
  __int128 r = a % m;
  if (r < 0) r += m;
  return static_cast<std::int64_t>(r);
}

inline bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  if (n % 3 == 0) return n == 3;
  for (std::int64_t f = 5; f * f <= n; f += 6)
    if (n % f == 0 || n % (f + 2) == 0) return false;
  return true;
}

inline std::int64_t next_prime(std::int64_t n) {
  if (n <= 2) return 2;
  if (n % 2 == 0) ++n;
  while (!is_prime(n)) n += 2;
  return n;
}

inline std::int64_t prev_prime(std::int64_t n) {
  while (n >= 2 && !is_prime(n)) --n;
  return n;
}

inline std::uint64_t hash_set(const FrequencySet& I) {
  std::uint64_t h = splitmix64(I.dim());
  for (Freq v : I.data()) h = splitmix64(h ^ static_cast<std::uint32_t>(v));
  return h;
}

// Occupancy marks over [0, M) that reset in O(1) between checks.
class StampTable {
 public:
  void reset(std::size_t m) {
    if (stamps_.size() < m) stamps_.assign(m, 0), gen_ = 0;
    if (++gen_ == 0) {
      std::fill(stamps_.begin(), stamps_.end(), 0);
      gen_ = 1;
    }
  }
  /// Marks r; false if it was already marked since the last reset.
  bool insert(std::int64_t r) {
    auto& s = stamps_[static_cast<std::size_t>(r)];
    if (s == gen_) return false;
    s = gen_;
    return true;
  }

 private:
  std::vector<std::uint32_t> stamps_;
  std::uint32_t gen_ = 0;
};

}  // namespace detail

/// Lambda(z, M): nodes x_j = (j z / M mod 1), shifted into [-1/2, 1/2)^d.
class Rank1Lattice {
 public:
  Rank1Lattice(std::vector<std::int64_t> z, std::int64_t M) : z_(std::move(z)), M_(M) {
    if (M < 1) throw InputError("lattice size M must be >= 1");
    if (z_.empty()) throw InputError("generating vector must be non-empty");
    for (auto& v : z_) v = detail::mod_floor(v, M_);
  }

  std::size_t dim() const { return z_.size(); }
  std::int64_t size() const { return M_; }
  const std::vector<std::int64_t>& z() const { return z_; }

  /// k . z mod M in [0, M), exact for any integer inputs.
  std::int64_t residue(std::span<const Freq> k) const {
    if (k.size() != z_.size()) throw InputError("lattice/frequency dimension mismatch");
    __int128 s = 0;
    for (std::size_t t = 0; t < k.size(); ++t) s += static_cast<__int128>(k[t]) * z_[t];
    return detail::mod_floor(s, M_);
  }

  /// Integer numerator r of coordinate t of node j, x = r / M before shifting.
  std::int64_t node_numerator(std::int64_t j, std::size_t t) const {
    return static_cast<std::int64_t>((static_cast<unsigned __int128>(j) * static_cast<std::uint64_t>(z_[t])) %
                                     static_cast<std::uint64_t>(M_));
  }

  /// Writes node j; returns true if any coordinate sits exactly on -1/2.
  bool node(std::int64_t j, std::span<double> x) const {
    bool on_boundary = false;
    const double inv = 1.0 / static_cast<double>(M_);
    for (std::size_t t = 0; t < z_.size(); ++t) {
      const std::int64_t r = node_numerator(j, t);
      if (2 * r >= M_) {
        x[t] = static_cast<double>(r - M_) * inv;
        on_boundary |= (2 * r == M_);
      } else {
        x[t] = static_cast<double>(r) * inv;
      }
    }
    return on_boundary;
  }

  /// All M nodes, row-major (M x d).
  std::vector<double> nodes() const {
    std::vector<double> out(static_cast<std::size_t>(M_) * dim());
    for (std::int64_t j = 0; j < M_; ++j) node(j, {out.data() + j * dim(), dim()});
    return out;
  }

  friend bool operator==(const Rank1Lattice&, const Rank1Lattice&) = default;

 private:
  std::vector<std::int64_t> z_;
  std::int64_t M_;
};

/// Lambda_psi(z, M): nodes y_j = psi(x_j).
class TransformedLattice {
 public:
  TransformedLattice(Rank1Lattice base, TransformD transform)
      : base_(std::move(base)), transform_(std::move(transform)) {
    if (base_.dim() != transform_.dim()) throw InputError("lattice/transform dimension mismatch");
  }

  const Rank1Lattice& base() const { return base_; }
  const TransformD& transform() const { return transform_; }
  std::int64_t size() const { return base_.size(); }
  std::size_t dim() const { return base_.dim(); }

  /// Writes y_j into y and the torus node into x; returns the boundary flag.
  bool node(std::int64_t j, std::span<double> x, std::span<double> y) const {
    const bool b = base_.node(j, x);
    transform_.forward(x, y);
    return b;
  }

  std::vector<double> nodes() const {
    std::vector<double> out(static_cast<std::size_t>(size()) * dim());
    std::vector<double> x(dim());
    for (std::int64_t j = 0; j < size(); ++j) node(j, x, {out.data() + j * dim(), dim()});
    return out;
  }

 private:
  Rank1Lattice base_;
  TransformD transform_;
};

/// t in the dual lattice, i.e. t . z == 0 (mod M).
inline bool dual_contains(const Rank1Lattice& lat, std::span<const Freq> t) {
  return lat.residue(t) == 0;
}

/// All residues k . z mod M over I, in canonical order of I.
inline std::vector<std::int64_t> residues(const Rank1Lattice& lat, const FrequencySet& I) {
  if (lat.dim() != I.dim()) throw InputError("lattice/frequency dimension mismatch");
  std::vector<std::int64_t> out(I.size());
  for (std::size_t i = 0; i < I.size(); ++i) out[i] = lat.residue(I[i]);
  return out;
}

/// Reconstruction property: the residues k . z mod M are pairwise distinct on I,
/// which is equivalent to t . z != 0 (mod M) for all t in D(I) \ {0}.
inline bool is_reconstructing(const Rank1Lattice& lat, const FrequencySet& I) {
  if (lat.dim() != I.dim()) throw InputError("lattice/frequency dimension mismatch");
  if (static_cast<std::uint64_t>(I.size()) > static_cast<std::uint64_t>(lat.size())) return false;
  auto r = residues(lat, I);
  std::sort(r.begin(), r.end());
  return std::adjacent_find(r.begin(), r.end()) == r.end();
}

/// The size-bound hypothesis I in [-|I|, |I|]^d with |I| > 8.
inline bool size_bound_hypothesis(const FrequencySet& I) {
  return I.size() > 8 && static_cast<std::size_t>(I.max_abs()) <= I.size();
}

struct SingleSearchOptions {
  double cap_factor = 4.0;        ///< give up beyond M = cap_factor * |I|^2
  std::uint64_t seed = 0;
  int tries_per_dim = 64;         ///< candidate z_j per dimension and M
  double growth = 1.0 / 256.0;    ///< minimum relative step between candidate M
  bool odd_size = false;          ///< only odd M, so no node lies on the torus boundary
};

struct SearchStats {
  std::uint64_t candidates_tried = 0;  ///< lattice sizes attempted
  std::uint64_t z_trials = 0;          ///< z_j candidates checked
};

/// Deterministic component-by-component search for a reconstructing lattice.
///
/// Candidate sizes start at M = |I| and continue over primes with at least a
/// `growth` relative step. For each M the generating vector is built one
/// coordinate at a time: z_j is the product of the extents of the previous
/// coordinates (the tensor-grid choice) or a pseudorandom value, and is
/// accepted once the projection of I onto coordinates 0..j maps injectively
/// to residues. Since I is sorted lexicographically, distinct prefixes are
/// exactly the starts of runs, so only those rows are checked per level.
inline Rank1Lattice search_single(const FrequencySet& I, const SingleSearchOptions& opt = {},
                                  SearchStats* stats = nullptr) {
  if (!I.materialized() || I.empty()) throw InputError("search_single needs a non-empty materialized set");
  const std::size_t n = I.size(), d = I.dim();
  SearchStats local;
  SearchStats& st = stats ? *stats : local;

  if (n == 1) {
    st.candidates_tried = 1;
    return Rank1Lattice(std::vector<std::int64_t>(d, 0), 1);
  }

  // Rows that start a new prefix at each level.
  std::vector<std::vector<std::uint32_t>> reps(d);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      if (i == 0) {
        reps[j].push_back(0);
        continue;
      }
      const auto a = I[i - 1], b = I[i];
      if (!std::equal(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(j + 1), b.begin()))
        reps[j].push_back(static_cast<std::uint32_t>(i));
    }
  }
  std::vector<std::int64_t> extent(d);
  for (std::size_t j = 0; j < d; ++j) {
    Freq lo = std::numeric_limits<Freq>::max(), hi = std::numeric_limits<Freq>::min();
    for (std::size_t i = 0; i < n; ++i) lo = std::min(lo, I[i][j]), hi = std::max(hi, I[i][j]);
    extent[j] = static_cast<std::int64_t>(hi) - lo + 1;
  }

  const double limit_d = opt.cap_factor * static_cast<double>(n) * static_cast<double>(n);
  const std::int64_t limit = static_cast<std::int64_t>(
      std::min(limit_d, static_cast<double>(std::numeric_limits<std::int32_t>::max())));

  Rng gen(derive_seed(opt.seed ^ detail::hash_set(I), "search_single"));
  detail::StampTable table;
  std::vector<std::int64_t> res(n);
  std::vector<std::int64_t> z(d);

  auto attempt = [&](std::int64_t M) -> bool {
    std::fill(res.begin(), res.end(), 0);
    std::int64_t tensor = 1;
    for (std::size_t j = 0; j < d; ++j) {
      const int tries = static_cast<int>(std::min<std::int64_t>(opt.tries_per_dim, M));
      bool ok = false;
      for (int t = 0; t < tries && !ok; ++t) {
        const std::int64_t c = t == 0 ? tensor % M : 1 + static_cast<std::int64_t>(uniform_below(gen, M - 1));
        ++st.z_trials;
        table.reset(static_cast<std::size_t>(M));
        ok = true;
        for (std::uint32_t i : reps[j]) {
          const std::int64_t r = detail::mod_floor(res[i] + static_cast<__int128>(I[i][j]) * c, M);
          if (!table.insert(r)) {
            ok = false;
            break;
          }
        }
        if (ok) {
          z[j] = c;
          for (std::size_t i = 0; i < n; ++i) res[i] = detail::mod_floor(res[i] + static_cast<__int128>(I[i][j]) * c, M);
        }
      }
      if (!ok) return false;
      tensor = tensor > limit ? tensor : tensor * extent[j];
    }
    return true;
  };

  std::int64_t M = static_cast<std::int64_t>(n);
  if (opt.odd_size && M % 2 == 0) ++M;
  while (M <= limit) {
    ++st.candidates_tried;
    if (attempt(M)) return Rank1Lattice(z, M);
    const auto step = static_cast<std::int64_t>(std::ceil(static_cast<double>(M) * opt.growth));
    M = detail::next_prime(std::max(M + 1, M + step));
    if (M == 2 && opt.odd_size) M = 3;
  }
  throw SearchExhausted("no reconstructing rank-1 lattice with M <= " + std::to_string(limit) + " for |I| = " +
                        std::to_string(n));
}

/// Union of s rank-1 lattices with, for each frequency of I (canonical order),
/// the components in which it is alias-free.
struct MultipleRank1Lattice {
  std::vector<Rank1Lattice> components;
  std::vector<std::vector<std::uint32_t>> assignment;

  std::int64_t total_size() const {
    std::int64_t s = 0;
    for (const auto& c : components) s += c.size();
    return s;
  }
  bool covers_all() const {
    return std::all_of(assignment.begin(), assignment.end(), [](const auto& a) { return !a.empty(); });
  }
};

/// Indices of the frequencies whose residue is unique within one lattice.
inline std::vector<bool> alias_free_mask(const Rank1Lattice& lat, const FrequencySet& I) {
  const auto r = residues(lat, I);
  std::vector<bool> free(I.size(), true);
  if (lat.size() <= 64 * static_cast<std::int64_t>(I.size()) + 1024) {
    std::vector<std::uint32_t> count(static_cast<std::size_t>(lat.size()), 0);
    for (auto v : r) ++count[static_cast<std::size_t>(v)];
    for (std::size_t i = 0; i < r.size(); ++i) free[i] = count[static_cast<std::size_t>(r[i])] == 1;
  } else {
    std::vector<std::pair<std::int64_t, std::uint32_t>> s(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) s[i] = {r[i], static_cast<std::uint32_t>(i)};
    std::sort(s.begin(), s.end());
    for (std::size_t i = 0; i < s.size(); ++i) {
      const bool dup = (i > 0 && s[i - 1].first == s[i].first) || (i + 1 < s.size() && s[i + 1].first == s[i].first);
      free[s[i].second] = !dup;
    }
  }
  return free;
}

struct MultipleSearchOptions {
  double c_param = 30.0;
  int n_param = 30;
  double delta = 0.5;
  std::uint64_t seed = 0;
  int max_rounds = 8;
};

/// Randomized union of rank-1 lattices covering every frequency of I.
///
/// Component sizes are random primes in [ceil(c/2 * lambda), ceil(c * lambda)]
/// with lambda = max(|I|, n), generating vectors uniform in [0, M_i)^d. A
/// round draws up to n components and stops as soon as every frequency is
/// alias-free somewhere; components that cover nothing new are dropped. An
/// incomplete round is followed by another with lambda scaled by (1 + delta).
inline MultipleRank1Lattice search_multiple(const FrequencySet& I, const MultipleSearchOptions& opt = {}) {
  if (!I.materialized() || I.size() < 2) throw InputError("search_multiple needs at least two frequencies");
  if (!(opt.c_param > 1.0) || opt.n_param < 1 || !(opt.delta > 0.0 && opt.delta < 1.0))
    throw InputError("search_multiple: need c > 1, n >= 1, 0 < delta < 1");
  const std::size_t n = I.size(), d = I.dim();
  Rng gen(derive_seed(opt.seed, "search_multiple"));

  MultipleRank1Lattice out;
  out.assignment.assign(n, {});
  std::size_t uncovered = n;
  double lambda = static_cast<double>(std::max<std::size_t>(n, static_cast<std::size_t>(opt.n_param)));

  for (int round = 0; round < opt.max_rounds && uncovered > 0; ++round) {
    const auto lo = static_cast<std::int64_t>(std::ceil(opt.c_param / 2.0 * lambda));
    const auto hi = static_cast<std::int64_t>(std::ceil(opt.c_param * lambda));
    for (int comp = 0; comp < opt.n_param && uncovered > 0; ++comp) {
      const std::int64_t u = lo + static_cast<std::int64_t>(uniform_below(gen, static_cast<std::uint64_t>(hi - lo + 1)));
      std::int64_t M = detail::next_prime(u);
      if (M > hi) M = detail::prev_prime(u);
      if (M < 2) M = detail::next_prime(lo);
      std::vector<std::int64_t> z(d);
      for (auto& v : z) v = static_cast<std::int64_t>(uniform_below(gen, static_cast<std::uint64_t>(M)));
      Rank1Lattice lat(std::move(z), M);
      const auto free = alias_free_mask(lat, I);
      bool useful = false;
      for (std::size_t i = 0; i < n; ++i)
        if (free[i] && out.assignment[i].empty()) useful = true;
      if (!useful) continue;
      const auto idx = static_cast<std::uint32_t>(out.components.size());
      for (std::size_t i = 0; i < n; ++i) {
        if (!free[i]) continue;
        if (out.assignment[i].empty()) --uncovered;
        out.assignment[i].push_back(idx);
      }
      out.components.push_back(std::move(lat));
    }
    lambda *= 1.0 + opt.delta;
  }
  if (uncovered > 0) {
    std::string msg = "multiple lattice construction left " + std::to_string(uncovered) + " frequencies aliased, e.g. (";
    for (std::size_t i = 0; i < n; ++i) {
      if (!out.assignment[i].empty()) continue;
      for (std::size_t j = 0; j < d; ++j) msg += (j ? "," : "") + std::to_string(I[i][j]);
      break;
    }
    throw SearchExhausted(msg + ")");
  }
  return out;
}

}  // namespace tlfft
