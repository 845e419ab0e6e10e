#pragma once

// Independent reference implementations used as test oracles. Nothing here
// calls the library's FFT, enumeration or residue code.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <set>
#include <vector>

#include "tlfft/tlfft.hpp"

namespace oracle {

using tlfft::Complex;
using Row = std::vector<int>;

inline constexpr long double two_pi_l = 2.0L * std::numbers::pi_v<long double>;

/// Node j of Lambda(z, M) via long double, shifted into [-1/2, 1/2).
inline std::vector<long double> node(const std::vector<std::int64_t>& z, std::int64_t M, std::int64_t j) {
  std::vector<long double> x(z.size());
  for (std::size_t t = 0; t < z.size(); ++t) {
    const std::int64_t zt = ((z[t] % M) + M) % M;
    const auto r = static_cast<std::int64_t>((static_cast<__int128>(j) * zt) % M);
    long double v = static_cast<long double>(r) / static_cast<long double>(M);
    if (v >= 0.5L) v -= 1.0L;
    x[t] = v;
  }
  return x;
}

/// h_j = sum_k c_k exp(2 pi i k . x_j) by direct summation.
inline std::vector<Complex> naive_evaluate(const tlfft::FrequencySet& I, const std::vector<Complex>& c,
                                           const tlfft::Rank1Lattice& lat) {
  std::vector<Complex> out(static_cast<std::size_t>(lat.size()));
  for (std::int64_t j = 0; j < lat.size(); ++j) {
    const auto x = node(lat.z(), lat.size(), j);
    std::complex<long double> s = 0;
    for (std::size_t i = 0; i < I.size(); ++i) {
      long double ph = 0;
      for (std::size_t t = 0; t < x.size(); ++t) ph += static_cast<long double>(I[i][t]) * x[t];
      ph -= std::floor(ph);
      s += std::complex<long double>(c[i].real(), c[i].imag()) * std::polar(1.0L, two_pi_l * ph);
    }
    out[static_cast<std::size_t>(j)] = Complex(static_cast<double>(s.real()), static_cast<double>(s.imag()));
  }
  return out;
}

/// c_k = (1/M) sum_j h_j exp(-2 pi i k . x_j) by direct summation.
inline std::vector<Complex> naive_reconstruct(const std::vector<Complex>& h, const tlfft::FrequencySet& I,
                                              const tlfft::Rank1Lattice& lat) {
  std::vector<Complex> out(I.size());
  for (std::size_t i = 0; i < I.size(); ++i) {
    std::complex<long double> s = 0;
    for (std::int64_t j = 0; j < lat.size(); ++j) {
      const auto x = node(lat.z(), lat.size(), j);
      long double ph = 0;
      for (std::size_t t = 0; t < x.size(); ++t) ph += static_cast<long double>(I[i][t]) * x[t];
      ph -= std::floor(ph);
      const auto hj = h[static_cast<std::size_t>(j)];
      s += std::complex<long double>(hj.real(), hj.imag()) * std::polar(1.0L, -two_pi_l * ph);
    }
    s /= static_cast<long double>(lat.size());
    out[i] = Complex(static_cast<double>(s.real()), static_cast<double>(s.imag()));
  }
  return out;
}

/// Every point of [-R, R]^d.
inline std::vector<Row> box(int d, int R) {
  std::vector<Row> out;
  Row k(static_cast<std::size_t>(d), -R);
  while (true) {
    out.push_back(k);
    int j = d - 1;
    while (j >= 0 && k[static_cast<std::size_t>(j)] == R) k[static_cast<std::size_t>(j--)] = -R;
    if (j < 0) break;
    ++k[static_cast<std::size_t>(j)];
  }
  return out;
}

/// Hyperbolic cross by filtering a box, comparing in long double.
inline std::set<Row> brute_hc(int d, double N, double beta) {
  const int R = static_cast<int>(std::floor(std::pow(N, 1.0 / beta) + 1e-9));
  std::set<Row> out;
  for (const auto& k : box(d, R)) {
    long double w = 1;
    for (int v : k) w *= std::pow(static_cast<long double>(std::max(1, std::abs(v))), static_cast<long double>(beta));
    if (w <= static_cast<long double>(N) * (1 + 1e-12L)) out.insert(k);
  }
  return out;
}

inline std::set<Row> brute_lp(int d, double N, double p) {
  const int R = static_cast<int>(std::floor(N + 1e-9));
  std::set<Row> out;
  for (const auto& k : box(d, R)) {
    long double s = 0;
    if (std::isinf(p)) {
      for (int v : k) s = std::max<long double>(s, std::abs(v));
      if (s <= N) out.insert(k);
      continue;
    }
    for (int v : k) s += std::pow(static_cast<long double>(std::abs(v)), static_cast<long double>(p));
    if (s <= std::pow(static_cast<long double>(N), static_cast<long double>(p)) * (1 + 1e-12L)) out.insert(k);
  }
  return out;
}

inline std::set<Row> rows_of(const tlfft::FrequencySet& I) {
  std::set<Row> out;
  for (std::size_t i = 0; i < I.size(); ++i) out.insert(Row(I[i].begin(), I[i].end()));
  return out;
}

inline std::set<Row> brute_difference(const tlfft::FrequencySet& I) {
  std::set<Row> out;
  for (std::size_t a = 0; a < I.size(); ++a)
    for (std::size_t b = 0; b < I.size(); ++b) {
      Row r(I.dim());
      for (std::size_t t = 0; t < I.dim(); ++t) r[t] = I[a][t] - I[b][t];
      out.insert(r);
    }
  return out;
}

/// Exact reconstruction property via the dual-lattice definition on D(I).
inline bool brute_reconstructing(const tlfft::Rank1Lattice& lat, const tlfft::FrequencySet& I) {
  for (const auto& t : brute_difference(I)) {
    bool zero = true;
    for (int v : t) zero &= v == 0;
    if (zero) continue;
    __int128 s = 0;
    for (std::size_t j = 0; j < t.size(); ++j) s += static_cast<__int128>(t[j]) * lat.z()[j];
    if (s % lat.size() == 0) return false;
  }
  return true;
}

inline std::vector<Complex> random_coefficients(std::mt19937_64& gen, std::size_t n) {
  std::normal_distribution<double> nd;
  std::vector<Complex> c(n);
  for (auto& v : c) v = Complex(nd(gen), nd(gen));
  return c;
}

/// Random set of n distinct frequencies in [-R, R]^d.
inline tlfft::FrequencySet random_set(std::mt19937_64& gen, std::size_t d, int R, std::size_t n) {
  std::uniform_int_distribution<int> u(-R, R);
  // n is capped at the size of the grid [-R, R]^d.
  const double grid = std::pow(2.0 * R + 1, static_cast<double>(d));
  if (static_cast<double>(n) > grid) n = static_cast<std::size_t>(grid);
  std::set<Row> s;
  while (s.size() < n) {
    Row r(d);
    for (auto& v : r) v = u(gen);
    s.insert(r);
  }
  return tlfft::FrequencySet::from_rows({s.begin(), s.end()});
}

/// h(y) = sum_k c_k exp(2 pi i k . psi^{-1}(y)), a member of the transformed polynomial space.
inline tlfft::Sampler polynomial_sampler(const tlfft::FrequencySet& I, std::vector<Complex> c,
                                         const tlfft::TransformD& T) {
  return tlfft::Sampler{[I, c = std::move(c), T](std::span<const double> y) {
                          const auto x = T.inverse(y);
                          std::complex<long double> s = 0;
                          for (std::size_t i = 0; i < I.size(); ++i) {
                            long double ph = 0;
                            for (std::size_t t = 0; t < x.size(); ++t) ph += static_cast<long double>(I[i][t]) * x[t];
                            s += std::complex<long double>(c[i].real(), c[i].imag()) * std::polar(1.0L, two_pi_l * ph);
                          }
                          return Complex(static_cast<double>(s.real()), static_cast<double>(s.imag()));
                        },
                        true};
}

inline double max_abs_diff(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace oracle
