#pragma once

// Lattice FFT evaluation and reconstruction of transformed trigonometric
// polynomials, Fejer/Riesz smoothing and the discrete approximation error.
//
// The Fourier matrix A = (exp(2 pi i k . x_j))_{j,k} is never formed: on
// lattice nodes k . x_j = (k . z mod M) j / M, so A h collapses to one
// length-M FFT after binning coefficients by residue.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "tlfft/core.hpp"
#include "tlfft/fft.hpp"
#include "tlfft/freqsets.hpp"
#include "tlfft/lattice.hpp"
#include "tlfft/transforms.hpp"

namespace tlfft {

enum class Provenance { exact, quadrature, reconstructed };

inline std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::exact: return "exact";
    case Provenance::quadrature: return "quadrature";
    case Provenance::reconstructed: return "reconstructed";
  }
  return "?";
}

/// Coefficients aligned with the canonical order of their frequency set.
struct CoefficientMap {
  FrequencySet freqs;
  std::vector<Complex> values;
  Provenance provenance = Provenance::reconstructed;

  CoefficientMap() = default;
  CoefficientMap(FrequencySet I, std::vector<Complex> v, Provenance p)
      : freqs(std::move(I)), values(std::move(v)), provenance(p) {
    if (values.size() != freqs.size()) throw InputError("coefficient count does not match |I|");
  }

  std::size_t size() const { return values.size(); }

  std::optional<Complex> at(std::span<const Freq> k) const {
    if (auto i = freqs.index_of(k)) return values[*i];
    return std::nullopt;
  }
};

/// Black-box function R^d -> C. `concurrent` declares it safe to call from
/// several threads at once.
struct Sampler {
  std::function<Complex(std::span<const double>)> fn;
  bool concurrent = false;

  Complex operator()(std::span<const double> y) const { return fn(y); }
};

namespace detail {

template <class Fn>
void parallel_for(std::int64_t n, bool allowed, Fn&& body) {
  const unsigned hw = std::thread::hardware_concurrency();
  const unsigned workers = allowed && n >= 4096 && hw > 1 ? std::min<unsigned>(hw, 16) : 1;
  if (workers == 1) {
    body(std::int64_t{0}, n);
    return;
  }
  std::vector<std::jthread> pool;
  const std::int64_t chunk = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::int64_t lo = w * chunk, hi = std::min(n, lo + chunk);
    if (lo < hi) pool.emplace_back([&body, lo, hi] { body(lo, hi); });
  }
}

inline void check_dims(const FrequencySet& I, const Rank1Lattice& lat) {
  if (!I.materialized()) throw InputError("frequency set must be materialized");
  if (I.dim() != lat.dim()) throw InputError("lattice/frequency dimension mismatch");
}

}  // namespace detail

/// h_j = sum_k c_k exp(2 pi i k . x_j) for all M lattice nodes.
inline std::vector<Complex> evaluate(const FrequencySet& I, std::span<const Complex> coeffs,
                                     const Rank1Lattice& lat) {
  detail::check_dims(I, lat);
  if (coeffs.size() != I.size()) throw InputError("coefficient count does not match |I|");
  std::vector<Complex> g(static_cast<std::size_t>(lat.size()));
  for (std::size_t i = 0; i < I.size(); ++i) g[static_cast<std::size_t>(lat.residue(I[i]))] += coeffs[i];
  fft_backward(g);
  return g;
}

inline std::vector<Complex> evaluate(const CoefficientMap& coeffs, const Rank1Lattice& lat) {
  return evaluate(coeffs.freqs, coeffs.values, lat);
}

/// c_k = (1/M) sum_j h_j exp(-2 pi i k . x_j). Exact for polynomials on I
/// when the lattice is reconstructing; otherwise each value is the sum of the
/// true coefficients over k + dual lattice.
inline CoefficientMap reconstruct(std::span<const Complex> samples, const FrequencySet& I,
                                  const Rank1Lattice& lat) {
  detail::check_dims(I, lat);
  if (static_cast<std::int64_t>(samples.size()) != lat.size()) throw InputError("sample count does not match M");
  std::vector<Complex> g(samples.begin(), samples.end());
  fft_forward(g);
  const double inv = 1.0 / static_cast<double>(lat.size());
  std::vector<Complex> c(I.size());
  for (std::size_t i = 0; i < I.size(); ++i) c[i] = g[static_cast<std::size_t>(lat.residue(I[i]))] * inv;
  return CoefficientMap(I, std::move(c), Provenance::reconstructed);
}

/// Samples h at the transformed nodes. Nodes on the torus boundary get 0,
/// the extension h(psi(x)) := 0 there.
inline std::vector<Complex> sample(const Sampler& h, const TransformedLattice& tl) {
  std::vector<Complex> out(static_cast<std::size_t>(tl.size()));
  const std::size_t d = tl.dim();
  std::atomic<bool> bad{false};
  detail::parallel_for(tl.size(), h.concurrent, [&](std::int64_t lo, std::int64_t hi) {
    std::vector<double> x(d), y(d);
    for (std::int64_t j = lo; j < hi; ++j) {
      if (tl.base().node(j, x)) {
        out[static_cast<std::size_t>(j)] = 0.0;
        continue;
      }
      tl.transform().forward(x, y);
      const Complex v = h(y);
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) bad = true;
      out[static_cast<std::size_t>(j)] = v;
    }
  });
  if (bad) throw InputError("sampler returned a non-finite value");
  return out;
}

/// Approximated transformed Fourier coefficients from samples on tl.
inline CoefficientMap approx_coefficients(const Sampler& h, const FrequencySet& I, const TransformedLattice& tl) {
  return reconstruct(sample(h, tl), I, tl.base());
}

/// Direct summation sum_k c_k exp(2 pi i k . psi^{-1}(y)) at one point of R^d.
inline Complex partial_sum(const CoefficientMap& coeffs, const TransformD& transform, std::span<const double> y) {
  const auto x = transform.inverse(y);
  Complex s = 0.0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    double phase = 0.0;
    for (std::size_t t = 0; t < x.size(); ++t) phase += coeffs.freqs[i][t] * x[t];
    s += coeffs.values[i] * std::polar(1.0, 2.0 * std::numbers::pi * phase);
  }
  return s;
}

struct SmoothingMode {
  enum class Kind { plain, fejer, riesz };
  Kind kind = Kind::plain;
  double q = 2.0;      ///< norm index, 1, 2 or infinity
  double alpha = 1.0;  ///< Riesz exponent, > 0
  double gamma = 1.0;  ///< Riesz inner exponent, >= 1
  double N = 1.0;      ///< level

  static SmoothingMode plain() { return {}; }
  static SmoothingMode fejer(double q, double N) { return {Kind::fejer, q, 1.0, 1.0, N}; }
  static SmoothingMode riesz(double q, double alpha, double gamma, double N) {
    return {Kind::riesz, q, alpha, gamma, N};
  }

  std::string name() const {
    switch (kind) {
      case Kind::plain: return "plain";
      case Kind::fejer: return "fejer";
      case Kind::riesz: return "riesz";
    }
    return "?";
  }
};

/// Per-frequency damping factors in [0, 1]. Frequencies with ||k||_q > N get
/// weight 0 and are counted in *outside.
inline std::vector<double> smoothing_weights(const SmoothingMode& mode, const FrequencySet& I,
                                             std::size_t* outside = nullptr) {
  std::vector<double> w(I.size(), 1.0);
  std::size_t out_count = 0;
  if (mode.kind != SmoothingMode::Kind::plain) {
    if (!(mode.N > 0.0)) throw DomainError("smoothing level N must be > 0");
    if (mode.kind == SmoothingMode::Kind::riesz && (!(mode.alpha > 0.0) || !(mode.gamma >= 1.0)))
      throw DomainError("Riesz mean needs alpha > 0 and gamma >= 1");
    for (std::size_t i = 0; i < I.size(); ++i) {
      const double r = lp_norm(I[i], mode.q) / mode.N;
      if (r > 1.0 + 1e-12) {
        w[i] = 0.0;
        ++out_count;
        continue;
      }
      const double base = std::max(0.0, 1.0 - (mode.kind == SmoothingMode::Kind::riesz ? std::pow(r, mode.gamma) : r));
      w[i] = mode.kind == SmoothingMode::Kind::riesz ? std::pow(base, mode.alpha) : base;
    }
  }
  if (outside) *outside = out_count;
  return w;
}

/// One row of an error sweep.
struct ExperimentRecord {
  std::string experiment;
  std::string transform;    ///< e.g. "algebraic(c=1)"
  std::string descriptor;   ///< set rule, e.g. "hc(N=4,beta=0.95)"
  std::size_t d = 0;
  double N = 0.0;
  double beta_or_p = 0.0;
  std::size_t card_I = 0;
  std::int64_t M = 0;       ///< lattice size, or sum of component sizes
  std::string lattice = "single";
  std::string mode = "plain";
  double abs_err = 0.0;
  double rel_err = 0.0;
  bool rel_defined = true;  ///< false when ||h||_inf = 0
  bool verified = true;     ///< lattice reconstructing (single) / covering (multiple)
  double seconds = 0.0;
  std::uint64_t seed = 0;
  std::string error;        ///< non-empty when the row failed
};

namespace detail {

inline void finish_record(ExperimentRecord& rec, double diff, double hmax) {
  rec.abs_err = diff;
  rec.rel_defined = hmax > 0.0;
  rec.rel_err = rec.rel_defined ? diff / hmax : 0.0;
}

}  // namespace detail

/// Discrete approximation error ||h - h_approx||_inf over the lattice nodes,
/// where h_approx = A D A^* h / M and D holds the smoothing weights.
inline ExperimentRecord roundtrip_error(const Sampler& h, const FrequencySet& I, const Rank1Lattice& lat,
                                        const TransformD& transform, const SmoothingMode& mode = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentRecord rec;
  rec.d = I.dim();
  rec.card_I = I.size();
  rec.M = lat.size();
  rec.mode = mode.name();
  if (auto desc = I.descriptor()) {
    rec.descriptor = desc->describe();
    rec.N = desc->N;
    rec.beta_or_p = desc->param;
  }
  rec.verified = is_reconstructing(lat, I);
  const TransformedLattice tl(lat, transform);
  const auto samples = sample(h, tl);
  auto coeffs = reconstruct(samples, I, lat);
  const auto w = smoothing_weights(mode, I);
  for (std::size_t i = 0; i < w.size(); ++i) coeffs.values[i] *= w[i];
  const auto approx = evaluate(coeffs, lat);
  double diff = 0.0, hmax = 0.0;
  for (std::size_t j = 0; j < samples.size(); ++j) {
    diff = std::max(diff, std::abs(samples[j] - approx[j]));
    hmax = std::max(hmax, std::abs(samples[j]));
  }
  detail::finish_record(rec, diff, hmax);
  rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

/// Per-component reconstruction; each coefficient is the mean of its reads
/// from the components where it is alias-free.
inline CoefficientMap reconstruct_multiple(const Sampler& h, const FrequencySet& I, const MultipleRank1Lattice& mlat,
                                           const TransformD& transform) {
  if (mlat.assignment.size() != I.size()) throw InputError("assignment table does not match |I|");
  if (!mlat.covers_all()) throw SearchExhausted("multiple lattice leaves frequencies uncovered");
  std::vector<Complex> sum(I.size());
  for (std::size_t c = 0; c < mlat.components.size(); ++c) {
    const auto& lat = mlat.components[c];
    const auto part = approx_coefficients(h, I, TransformedLattice(lat, transform));
    for (std::size_t i = 0; i < I.size(); ++i)
      if (std::find(mlat.assignment[i].begin(), mlat.assignment[i].end(), c) != mlat.assignment[i].end())
        sum[i] += part.values[i];
  }
  for (std::size_t i = 0; i < I.size(); ++i) sum[i] /= static_cast<double>(mlat.assignment[i].size());
  return CoefficientMap(I, std::move(sum), Provenance::reconstructed);
}

/// Discrete error over the union of all component nodes.
inline ExperimentRecord roundtrip_error_multiple(const Sampler& h, const FrequencySet& I,
                                                 const MultipleRank1Lattice& mlat, const TransformD& transform,
                                                 const SmoothingMode& mode = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentRecord rec;
  rec.d = I.dim();
  rec.card_I = I.size();
  rec.M = mlat.total_size();
  rec.lattice = "multiple";
  rec.mode = mode.name();
  if (auto desc = I.descriptor()) {
    rec.descriptor = desc->describe();
    rec.N = desc->N;
    rec.beta_or_p = desc->param;
  }
  rec.verified = mlat.covers_all();
  auto coeffs = reconstruct_multiple(h, I, mlat, transform);
  const auto w = smoothing_weights(mode, I);
  for (std::size_t i = 0; i < w.size(); ++i) coeffs.values[i] *= w[i];
  double diff = 0.0, hmax = 0.0;
  for (const auto& lat : mlat.components) {
    const auto samples = sample(h, TransformedLattice(lat, transform));
    const auto approx = evaluate(coeffs, lat);
    for (std::size_t j = 0; j < samples.size(); ++j) {
      diff = std::max(diff, std::abs(samples[j] - approx[j]));
      hmax = std::max(hmax, std::abs(samples[j]));
    }
  }
  detail::finish_record(rec, diff, hmax);
  rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

}  // namespace tlfft
