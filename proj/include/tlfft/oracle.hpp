#pragma once

// Runge test function, closed-form transformed coefficients, torus quadrature
// and Wiener norm estimation.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

#include "tlfft/core.hpp"
#include "tlfft/fft.hpp"
#include "tlfft/freqsets.hpp"
#include "tlfft/tfft.hpp"
#include "tlfft/transforms.hpp"

namespace tlfft {

struct TestFunction {
  enum class Kind { runge_product };
  Kind kind = Kind::runge_product;
  std::size_t dim = 1;
};

/// prod_j 1 / (1 + y_j^2).
inline double runge(std::span<const double> y) {
  double p = 1.0;
  for (double v : y) p /= 1.0 + v * v;
  return p;
}

inline double eval_test(const TestFunction& f, std::span<const double> y) {
  if (y.size() != f.dim) throw InputError("test function dimension mismatch");
  return runge(y);
}

inline Sampler runge_sampler() {
  return Sampler{[](std::span<const double> y) { return Complex(runge(y), 0.0); }, true};
}

/// One-dimensional coefficient of the Runge function under the algebraic map, c = 1.
inline double algebraic_runge_coeff_1d(Freq k) {
  if (k == 0) return 2.0 / 3.0;
  const double kk = static_cast<double>(k) * static_cast<double>(k);
  const double sign = (std::abs(k) % 2 == 1) ? 1.0 : -1.0;
  return sign * 2.0 / (std::numbers::pi * std::numbers::pi * kk);
}

inline double exact_coeff_algebraic(std::span<const Freq> k, std::span<const double> c) {
  if (c.size() != k.size()) throw InputError("exact_coeff_algebraic: dimension mismatch");
  double p = 1.0;
  for (std::size_t j = 0; j < k.size(); ++j) {
    if (c[j] != 1.0) throw DomainError("closed form for the algebraic map needs c = 1");
    p *= algebraic_runge_coeff_1d(k[j]);
  }
  return p;
}

inline double exact_coeff_algebraic(std::span<const Freq> k) {
  return exact_coeff_algebraic(k, std::vector<double>(k.size(), 1.0));
}

/// One-dimensional coefficient of the Runge function under the tangens map.
inline double tangens_runge_coeff_1d(Freq k, double c) {
  if (!(c > 0.0)) throw DomainError("tangens parameter c must be > 0");
  if (k == 0) return 1.0 / (c + 1.0);
  const double q = (c - 1.0) / (c + 1.0);
  const int e = std::abs(k) - 1;
  const double qe = e == 0 ? 1.0 : std::pow(q, e);
  return c / ((c + 1.0) * (c + 1.0)) * qe;
}

inline double exact_coeff_tangens(std::span<const Freq> k, std::span<const double> c) {
  if (c.size() != k.size()) throw InputError("exact_coeff_tangens: dimension mismatch");
  double p = 1.0;
  for (std::size_t j = 0; j < k.size(); ++j) p *= tangens_runge_coeff_1d(k[j], c[j]);
  return p;
}

inline double exact_coeff_tangens(std::span<const Freq> k, double c) {
  return exact_coeff_tangens(k, std::vector<double>(k.size(), c));
}

/// Samples f(psi(x_j)) on x_j = -1/2 + j/R with the boundary sample set to 0,
/// then returns all R torus coefficients; index k mod R holds coefficient k.
inline std::vector<Complex> quadrature_table(const Transform1D& t, const std::function<double(double)>& f1d,
                                             std::size_t R) {
  if (R < 1024 || (R & (R - 1)) != 0) throw InputError("quadrature needs R a power of two >= 1024");
  std::vector<Complex> g(R);
  for (std::size_t j = 1; j < R; ++j) {
    const double x = -0.5 + static_cast<double>(j) / static_cast<double>(R);
    const double v = f1d(t.forward(x));
    if (!std::isfinite(v)) throw InputError("quadrature: non-finite sample");
    g[j] = v;
  }
  fft_forward(g);
  // x_j starts at -1/2, so the shift contributes exp(i pi k) = (-1)^k.
  const double inv = 1.0 / static_cast<double>(R);
  for (std::size_t k = 0; k < R; ++k) g[k] *= (k % 2 == 0 ? inv : -inv);
  return g;
}

inline Complex quadrature_coeff(const Transform1D& t, const std::function<double(double)>& f1d, Freq k,
                                std::size_t R) {
  const auto table = quadrature_table(t, f1d, R);
  const auto r = static_cast<std::size_t>(((static_cast<std::int64_t>(k) % static_cast<std::int64_t>(R)) +
                                           static_cast<std::int64_t>(R)) %
                                          static_cast<std::int64_t>(R));
  return table[r];
}

/// C with b^{-k} <= C k^{-1-eps} for all k >= 1. The left side over the right
/// is maximal at k2 = (1+eps)/ln b, so C = b^{-k2} k2^{1+eps}.
inline double decay_constant(double b, double eps) {
  if (!(b > 1.0) || !(eps > 0.0)) throw DomainError("decay_constant needs b > 1 and eps > 0");
  const double k2 = (1.0 + eps) / std::log(b);
  return std::pow(b, -k2) * std::pow(k2, 1.0 + eps);
}

struct WienerEstimate {
  double value = 0.0;           ///< sum over ||k||_inf <= K
  std::vector<double> shells;   ///< shells[r] = contribution of ||k||_inf == r
  double last_shell = 0.0;
  double shell_ratio = 0.0;     ///< shells[K] / shells[ceil(K/2)]
  bool converging = true;
};

namespace detail {

// Decay faster than r^{-1} per shell gives ratio below 1/2.
inline constexpr double divergence_ratio = 0.5;

inline void finish_wiener(WienerEstimate& est) {
  const std::size_t K = est.shells.size() - 1;
  est.value = 0.0;
  for (double s : est.shells) est.value += s;
  est.last_shell = est.shells[K];
  if (K == 0) return;
  const double half = est.shells[(K + 1) / 2];
  est.shell_ratio = half > 0.0 ? est.last_shell / half : (est.last_shell > 0.0 ? INFINITY : 0.0);
  est.converging = est.shell_ratio < divergence_ratio;
}

}  // namespace detail

/// Truncated sum_k omega(k) |c(k)| over the cube ||k||_inf <= K in d dimensions.
inline WienerEstimate wiener_norm_estimate(const std::function<double(std::span<const Freq>)>& coeff,
                                           const WeightFunction& w, std::size_t d, std::int64_t K,
                                           std::uint64_t cap = default_set_cap) {
  if (d == 0 || K < 0) throw InputError("wiener_norm_estimate: need d >= 1 and K >= 0");
  const double card = std::pow(2.0 * static_cast<double>(K) + 1.0, static_cast<double>(d));
  if (card > static_cast<double>(cap)) throw ResourceError("wiener_norm_estimate: cube exceeds cap");
  WienerEstimate est;
  est.shells.assign(static_cast<std::size_t>(K) + 1, 0.0);
  std::vector<Freq> k(d, static_cast<Freq>(-K));
  while (true) {
    Freq r = 0;
    for (Freq v : k) r = std::max(r, static_cast<Freq>(std::abs(v)));
    est.shells[static_cast<std::size_t>(r)] += w(k) * std::abs(coeff(k));
    std::size_t j = d;
    while (j > 0 && k[j - 1] == K) k[j - 1] = static_cast<Freq>(-K), --j;
    if (j == 0) break;
    ++k[j - 1];
  }
  detail::finish_wiener(est);
  return est;
}

/// Same quantity for product coefficients and the hc weight, in O(d K):
/// sum_k prod_j max(1,|k_j|)^beta |c1(k_j)| factorizes per coordinate.
inline double wiener_norm_product(const std::function<double(Freq)>& coeff1d, double beta, std::size_t d,
                                  std::int64_t K) {
  double s = 0.0;
  for (std::int64_t k = -K; k <= K; ++k)
    s += std::pow(std::max<double>(1.0, std::abs(static_cast<double>(k))), beta) *
         std::abs(coeff1d(static_cast<Freq>(k)));
  return std::pow(s, static_cast<double>(d));
}

struct OracleRow {
  Freq k = 0;
  double exact = 0.0;
  double quadrature = 0.0;
  double abs_diff = 0.0;
};

/// Closed form against quadrature for the 1-D Runge function, k in [-kmax, kmax].
/// Only the algebraic (c = 1) and tangens maps have closed forms.
inline std::vector<OracleRow> oracle_table(const Transform1D& t, Freq kmax, std::size_t R = 1u << 16) {
  if (t.kind() != TransformKind::algebraic && t.kind() != TransformKind::tangens)
    throw DomainError("no closed-form coefficients for the " + std::string(to_string(t.kind())) + " map");
  if (t.kind() == TransformKind::algebraic && t.c() != 1.0)
    throw DomainError("closed form for the algebraic map needs c = 1");
  const auto table = quadrature_table(t, [](double y) { return 1.0 / (1.0 + y * y); }, R);
  std::vector<OracleRow> rows;
  for (Freq k = -kmax; k <= kmax; ++k) {
    OracleRow row;
    row.k = k;
    row.exact = t.kind() == TransformKind::algebraic ? algebraic_runge_coeff_1d(k) : tangens_runge_coeff_1d(k, t.c());
    const auto idx = static_cast<std::size_t>((k % static_cast<std::int64_t>(R) + static_cast<std::int64_t>(R)) %
                                              static_cast<std::int64_t>(R));
    row.quadrature = table[idx].real();
    row.abs_diff = std::abs(row.exact - row.quadrature);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace tlfft
