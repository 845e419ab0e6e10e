#pragma once

// Dimension-incremental detection of a sparse frequency support inside the
// search grid [-N, N]^d from samples of a transformed function.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "tlfft/core.hpp"
#include "tlfft/freqsets.hpp"
#include "tlfft/lattice.hpp"
#include "tlfft/tfft.hpp"
#include "tlfft/transforms.hpp"

namespace tlfft {

struct SparseConfig {
  std::size_t d = 1;
  std::int64_t N = 1;
  std::size_t s = 100;
  double threshold_rel = 1e-6;
  std::uint64_t seed = 0;
  int detection_rounds = 1;
  std::size_t expansion_factor = 4;  ///< candidate cap per step is s * expansion_factor
  int anchors = 2;                   ///< random positions of not-yet-included coordinates
  int oversampling = 4;              ///< 1-D grids use oversampling * (2N + 1) points

  void validate() const {
    if (d < 1) throw InputError("sparse: d must be >= 1");
    if (N < 1) throw InputError("sparse: N must be >= 1");
    if (s < 1) throw InputError("sparse: s must be >= 1");
    if (!(threshold_rel > 0.0 && threshold_rel < 1.0)) throw InputError("sparse: need 0 < threshold < 1");
    if (detection_rounds < 1 || anchors < 1 || oversampling < 1 || expansion_factor < 1)
      throw InputError("sparse: rounds, anchors, oversampling and expansion factor must be >= 1");
  }
};

struct SparseStep {
  std::size_t dims = 0;        ///< coordinates 0..dims-1 covered after this step
  std::size_t candidates = 0;  ///< |J|
  std::int64_t M = 0;
  std::size_t detected = 0;
};

struct SparseResult {
  FrequencySet support;
  CoefficientMap coeffs;
  std::vector<SparseStep> steps;
  std::uint64_t total_samples = 0;
};

namespace detail {

// Samples h(psi(x)) where the coordinates in `dims` follow the lattice nodes
// and the rest stay at the anchor.
inline std::vector<Complex> sample_anchored(const Sampler& h, const TransformD& transform, const Rank1Lattice& lat,
                                            std::span<const std::size_t> dims, std::span<const double> anchor) {
  const std::size_t d = transform.dim();
  std::vector<Complex> out(static_cast<std::size_t>(lat.size()));
  std::atomic<bool> bad{false};
  parallel_for(lat.size(), h.concurrent, [&](std::int64_t lo, std::int64_t hi) {
    std::vector<double> xl(dims.size()), x(anchor.begin(), anchor.end()), y(d);
    for (std::int64_t j = lo; j < hi; ++j) {
      if (lat.node(j, xl)) {
        out[static_cast<std::size_t>(j)] = 0.0;
        continue;
      }
      for (std::size_t t = 0; t < dims.size(); ++t) x[dims[t]] = xl[t];
      transform.forward(x, y);
      const Complex v = h(y);
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) bad = true;
      out[static_cast<std::size_t>(j)] = v;
    }
  });
  if (bad) throw InputError("sampler returned a non-finite value");
  return out;
}

inline std::vector<double> draw_anchor(Rng& gen, std::size_t d) {
  std::vector<double> a(d);
  for (auto& v : a) v = 0.9 * (uniform_unit(gen) - 0.5);
  return a;
}

// Rank key: moduli equal to about 12 digits relative to mx compare equal, so
// roundoff does not decide ties.
inline double rank_key(double m, double mx) { return mx > 0.0 ? std::nearbyint(m / mx * 1e12) : 0.0; }

// Indices of I kept after the relative threshold and the top-s cut; ties in
// modulus go to the lexicographically smaller frequency (smaller index).
inline std::vector<std::size_t> select(std::span<const double> modulus, double threshold_rel, std::size_t s) {
  double mx = 0.0;
  for (double m : modulus) mx = std::max(mx, m);
  std::vector<std::size_t> keep;
  if (mx == 0.0) return keep;
  for (std::size_t i = 0; i < modulus.size(); ++i)
    if (modulus[i] >= threshold_rel * mx) keep.push_back(i);
  if (keep.size() > s) {
    std::stable_sort(keep.begin(), keep.end(), [&](std::size_t a, std::size_t b) {
      return rank_key(modulus[a], mx) > rank_key(modulus[b], mx);
    });
    keep.resize(s);
    std::sort(keep.begin(), keep.end());
  }
  return keep;
}

inline FrequencySet subset(const FrequencySet& I, std::span<const std::size_t> idx) {
  std::vector<Freq> flat;
  flat.reserve(idx.size() * I.dim());
  for (auto i : idx) flat.insert(flat.end(), I[i].begin(), I[i].end());
  return FrequencySet(I.dim(), std::move(flat));
}

// Full grid [-N, N]^m as a tensor lattice of P^m points, P = oversampling (2N+1)
// rounded up to odd.
inline Rank1Lattice projection_lattice(std::size_t m, std::int64_t N, int oversampling) {
  const std::int64_t P = (static_cast<std::int64_t>(oversampling) * (2 * N + 1)) | 1;
  std::vector<std::int64_t> z(m);
  std::int64_t M = 1;
  for (std::size_t t = 0; t < m; ++t) {
    z[t] = M;
    if (static_cast<double>(M) * static_cast<double>(P) > 1e8) throw ResourceError("projection grid too large");
    M *= P;
  }
  return Rank1Lattice(std::move(z), M);
}

// Per-frequency largest modulus over all anchors.
class AnchoredReconstruction {
 public:
  AnchoredReconstruction(const Sampler& h, const TransformD& transform, const SparseConfig& cfg)
      : h_(h), transform_(transform), cfg_(cfg) {}

  std::vector<double> run(const FrequencySet& J, const Rank1Lattice& lat, std::span<const std::size_t> dims,
                          Rng& gen, std::uint64_t& samples, std::vector<Complex>* last = nullptr) const {
    const bool anchored = dims.size() < cfg_.d;
    const int passes = anchored ? cfg_.anchors : 1;
    std::vector<double> modulus(J.size(), 0.0);
    for (int a = 0; a < passes; ++a) {
      const auto anchor = draw_anchor(gen, cfg_.d);
      const auto values = sample_anchored(h_, transform_, lat, dims, anchor);
      samples += static_cast<std::uint64_t>(lat.size());
      const auto c = reconstruct(values, J, lat);
      // Modulus relative to the pass maximum, so anchors with small
      // cross-section values count as much as the others.
      double mx = 0.0;
      for (const auto& v : c.values) mx = std::max(mx, std::abs(v));
      if (mx > 0.0)
        for (std::size_t i = 0; i < J.size(); ++i) modulus[i] = std::max(modulus[i], std::abs(c.values[i]) / mx);
      if (last) *last = c.values;
    }
    return modulus;
  }

 private:
  const Sampler& h_;
  const TransformD& transform_;
  const SparseConfig& cfg_;
};

inline SparseResult detect_once(const Sampler& h, const TransformD& transform, const SparseConfig& cfg,
                                std::uint64_t seed) {
  const std::size_t d = cfg.d;
  SparseResult res;
  AnchoredReconstruction rec(h, transform, cfg);

  // One-dimensional candidates per coordinate, with their strength.
  std::vector<std::vector<Freq>> cand(d);
  std::vector<std::vector<double>> strength(d);
  std::vector<std::uint64_t> samples_1d(d, 0);
  const FrequencySet line = full_grid(1, cfg.N);
  const auto line_lat = projection_lattice(1, cfg.N, cfg.oversampling);
  parallel_for(static_cast<std::int64_t>(d), h.concurrent, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t t = lo; t < hi; ++t) {
      Rng gen(derive_seed(seed, "sparse/coordinate/" + std::to_string(t)));
      const std::size_t dims[] = {static_cast<std::size_t>(t)};
      const auto mod = rec.run(line, line_lat, dims, gen, samples_1d[t]);
      for (auto i : select(mod, cfg.threshold_rel, line.size())) {
        cand[t].push_back(line[i][0]);
        strength[t].push_back(mod[i]);
      }
    }
  });
  for (auto v : samples_1d) res.total_samples += v;

  const std::size_t cap = cfg.s * cfg.expansion_factor;
  FrequencySet I;
  std::vector<Complex> final_values;
  for (std::size_t t = 0; t < d; ++t) {
    if (cand[t].empty()) throw DetectionError("step " + std::to_string(t) + ": no candidates along coordinate " +
                                              std::to_string(t));
    const std::size_t prev = t == 0 ? 1 : I.size();
    // Trim the weakest new-coordinate candidates until |J| fits the cap.
    std::vector<std::size_t> order(cand[t].size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return detail::rank_key(strength[t][a], 1.0) > detail::rank_key(strength[t][b], 1.0);
    });
    const std::size_t keep = std::max<std::size_t>(1, std::min(order.size(), cap / std::max<std::size_t>(prev, 1)));
    order.resize(keep);
    std::sort(order.begin(), order.end());

    std::vector<Freq> flat;
    flat.reserve(prev * keep * (t + 1));
    for (std::size_t i = 0; i < prev; ++i)
      for (auto o : order) {
        if (t > 0) flat.insert(flat.end(), I[i].begin(), I[i].end());
        flat.push_back(cand[t][o]);
      }
    const FrequencySet J(t + 1, std::move(flat));

    Rank1Lattice lat({0}, 1);
    try {
      lat = search_single(J, SingleSearchOptions{.seed = derive_seed(seed, "sparse/lattice"), .odd_size = true});
    } catch (const SearchExhausted& e) {
      throw DetectionError("step " + std::to_string(t) + ": " + e.what());
    }
    std::vector<std::size_t> dims(t + 1);
    std::iota(dims.begin(), dims.end(), std::size_t{0});
    Rng gen(derive_seed(seed, "sparse/step/" + std::to_string(t)));
    std::vector<Complex> values;
    const auto mod = rec.run(J, lat, dims, gen, res.total_samples, &values);
    const auto idx = select(mod, cfg.threshold_rel, cfg.s);
    if (idx.empty()) throw DetectionError("step " + std::to_string(t) + ": nothing above threshold");
    I = subset(J, idx);
    res.steps.push_back({t + 1, J.size(), lat.size(), I.size()});
    if (t + 1 == d) {
      final_values.clear();
      for (auto i : idx) final_values.push_back(values[i]);
    }
  }
  res.support = I;
  res.coeffs = CoefficientMap(I, std::move(final_values), Provenance::reconstructed);
  return res;
}

}  // namespace detail

/// Detects up to s frequencies of h o psi in [-N, N]^d with their coefficients.
///
/// Candidates are first found per coordinate; then coordinates are added one
/// at a time, each step reconstructing on a lattice for the product of the
/// current support with the next coordinate's candidates while the remaining
/// coordinates sit at random anchors. With detection_rounds > 1 the supports
/// of reseeded runs are intersected and the coefficients recomputed on it.
inline SparseResult detect(const Sampler& h, const TransformD& transform, const SparseConfig& cfg) {
  cfg.validate();
  if (transform.dim() != cfg.d) throw InputError("sparse: transform dimension does not match d");
  auto res = detail::detect_once(h, transform, cfg, derive_seed(cfg.seed, "sparse/round/0"));
  if (cfg.detection_rounds == 1) return res;

  FrequencySet common = res.support;
  for (int r = 1; r < cfg.detection_rounds; ++r) {
    auto other = detail::detect_once(h, transform, cfg, derive_seed(cfg.seed, "sparse/round/" + std::to_string(r)));
    res.total_samples += other.total_samples;
    res.steps.insert(res.steps.end(), other.steps.begin(), other.steps.end());
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < common.size(); ++i)
      if (other.support.contains(common[i])) keep.push_back(i);
    common = detail::subset(common, keep);
  }
  if (common.empty()) throw DetectionError("detection rounds share no frequency");
  const auto lat = search_single(common, SingleSearchOptions{.seed = derive_seed(cfg.seed, "sparse/lattice"), .odd_size = true});
  const auto values = sample(h, TransformedLattice(lat, transform));
  res.total_samples += static_cast<std::uint64_t>(lat.size());
  res.coeffs = reconstruct(values, common, lat);
  res.support = common;
  res.steps.push_back({cfg.d, common.size(), lat.size(), common.size()});
  return res;
}

/// Candidate frequencies in [-N, N]^|dims| along the given coordinates; the
/// other coordinates are held at random anchors and the union over anchors is
/// returned.
inline FrequencySet detect_projection(const Sampler& h, const TransformD& transform, const SparseConfig& cfg,
                                      std::span<const std::size_t> dims) {
  cfg.validate();
  if (transform.dim() != cfg.d) throw InputError("sparse: transform dimension does not match d");
  if (dims.empty() || !std::is_sorted(dims.begin(), dims.end()) ||
      std::adjacent_find(dims.begin(), dims.end()) != dims.end() || dims.back() >= cfg.d)
    throw InputError("detect_projection: dims must be sorted, distinct and < d");
  const FrequencySet grid = full_grid(dims.size(), cfg.N);
  if (!grid.materialized()) throw ResourceError("projection grid too large");
  const auto lat = detail::projection_lattice(dims.size(), cfg.N, cfg.oversampling);
  Rng gen(derive_seed(cfg.seed, "sparse/projection"));
  std::uint64_t samples = 0;
  const auto mod = detail::AnchoredReconstruction(h, transform, cfg).run(grid, lat, dims, gen, samples);
  const auto idx = detail::select(mod, cfg.threshold_rel, grid.size());
  return detail::subset(grid, idx);
}

}  // namespace tlfft
