#pragma once

// Change-of-coordinate maps psi : (-1/2, 1/2) -> R, their inverses and the
// inverse-derivative densities, in one dimension and as tensor products.

#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tlfft/core.hpp"

namespace tlfft {

enum class TransformKind { algebraic, logarithmic, error, tangens };

inline std::string_view to_string(TransformKind kind) {
  switch (kind) {
    case TransformKind::algebraic: return "algebraic";
    case TransformKind::logarithmic: return "logarithmic";
    case TransformKind::error: return "error";
    case TransformKind::tangens: return "tangens";
  }
  return "?";
}

inline TransformKind parse_transform_kind(std::string_view name) {
  if (name == "algebraic") return TransformKind::algebraic;
  if (name == "logarithmic" || name == "log") return TransformKind::logarithmic;
  if (name == "error" || name == "erf") return TransformKind::error;
  if (name == "tangens" || name == "tan") return TransformKind::tangens;
  throw InputError("unknown transform kind '" + std::string(name) + "'");
}

/// Nodes closer than this to +-1/2 are pulled inside before psi is applied.
inline constexpr double boundary_clamp = 0x1.0p-40;

namespace detail {

inline double erfinv_seed(double q, double r) {
  // Giles' single precision polynomial; |p| = q, r = 1 - q.
  double w = -std::log(r * (2.0 - r));
  double p;
  if (w < 5.0) {
    w -= 2.5;
    p = 2.81022636e-08;
    p = 3.43273939e-07 + p * w;
    p = -3.5233877e-06 + p * w;
    p = -4.39150654e-06 + p * w;
    p = 0.00021858087 + p * w;
    p = -0.00125372503 + p * w;
    p = -0.00417768164 + p * w;
    p = 0.246640727 + p * w;
    p = 1.50140941 + p * w;
  } else {
    w = std::sqrt(w) - 3.0;
    p = -0.000200214257;
    p = 0.000100950558 + p * w;
    p = 0.00134934322 + p * w;
    p = -0.00367342844 + p * w;
    p = 0.00573950773 + p * w;
    p = -0.0076224613 + p * w;
    p = 0.00943887047 + p * w;
    p = 1.00167406 + p * w;
    p = 2.83297682 + p * w;
  }
  return p * q;
}

}  // namespace detail

/// Inverse of the error function on (-1, 1).
///
/// Polynomial seed followed by Newton steps. For |p| > 1/2 the residual is
/// taken on erfc against 1 - |p|, which is exact there, so accuracy holds all
/// the way into the tails.
inline double inverse_erf(double p) {
  if (!(std::abs(p) < 1.0)) throw DomainError("inverse_erf: |p| must be < 1");
  if (p == 0.0) return 0.0;
  const double q = std::abs(p);
  const double r = 1.0 - q;
  const double two_over_sqrt_pi = 2.0 / std::sqrt(std::numbers::pi);
  double x = detail::erfinv_seed(q, r);
  // Newton on erf in the centre, on log erfc in the tail.
  for (int it = 0; it < 8; ++it) {
    const double deriv = two_over_sqrt_pi * std::exp(-x * x);
    double step;
    if (q <= 0.5) {
      step = (std::erf(x) - q) / deriv;
    } else {
      const double e = std::erfc(x);
      step = -(std::log(e) - std::log(r)) * e / deriv;
    }
    x -= step;
    if (it >= 1 && std::abs(step) <= 1e-16 * std::abs(x)) break;
  }
  return p < 0 ? -x : x;
}

/// One-dimensional transformation with scale parameter c > 0.
class Transform1D {
 public:
  Transform1D(TransformKind kind, double c) : kind_(kind), c_(c) {
    if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("transform parameter c must be > 0");
  }

  TransformKind kind() const { return kind_; }
  double c() const { return c_; }

  double forward(double x) const {
    if (!(std::abs(x) <= 0.5)) throw DomainError("forward: |x| must be <= 1/2");
    const double lim = 0.5 - boundary_clamp;
    if (x > lim) x = lim;
    if (x < -lim) x = -lim;
    switch (kind_) {
      case TransformKind::algebraic: {
        // 1 - 4x^2 = (1 - 2x)(1 + 2x) keeps precision near the boundary
        return c_ * 2.0 * x / std::sqrt((1.0 - 2.0 * x) * (1.0 + 2.0 * x));
      }
      case TransformKind::logarithmic:
        return 2.0 * c_ * std::atanh(2.0 * x);
      case TransformKind::error:
        return c_ * inverse_erf(2.0 * x);
      case TransformKind::tangens:
        return c_ * std::tan(std::numbers::pi * x);
    }
    return 0.0;
  }

  double inverse(double y) const {
    switch (kind_) {
      case TransformKind::algebraic:
        return y / (2.0 * std::hypot(y, c_));
      case TransformKind::logarithmic:
        return 0.5 * std::tanh(y / (2.0 * c_));
      case TransformKind::error:
        return 0.5 * std::erf(y / c_);
      case TransformKind::tangens:
        return std::atan(y / c_) / std::numbers::pi;
    }
    return 0.0;
  }

  /// Derivative of the inverse map, (psi^{-1})'(y).
  double inverse_density(double y) const {
    switch (kind_) {
      case TransformKind::algebraic: {
        const double r = std::hypot(y, c_);
        return c_ * c_ / (2.0 * r * r * r);
      }
      case TransformKind::logarithmic: {
        const double ch = std::cosh(y / (2.0 * c_));
        return 1.0 / (4.0 * c_ * ch * ch);
      }
      case TransformKind::error: {
        const double u = y / c_;
        return std::exp(-u * u) / (c_ * std::sqrt(std::numbers::pi));
      }
      case TransformKind::tangens:
        return c_ / (std::numbers::pi * (c_ * c_ + y * y));
    }
    return 0.0;
  }

  /// psi'(x) in closed form, for |x| < 1/2.
  double derivative(double x) const {
    const double a = (1.0 - 2.0 * x) * (1.0 + 2.0 * x);
    switch (kind_) {
      case TransformKind::algebraic:
        return 2.0 * c_ / (a * std::sqrt(a));
      case TransformKind::logarithmic:
        return 4.0 * c_ / a;
      case TransformKind::error: {
        const double u = inverse_erf(2.0 * x);
        return c_ * std::sqrt(std::numbers::pi) * std::exp(u * u);
      }
      case TransformKind::tangens: {
        const double cs = std::cos(std::numbers::pi * x);
        return c_ * std::numbers::pi / (cs * cs);
      }
    }
    return 0.0;
  }

  friend bool operator==(const Transform1D&, const Transform1D&) = default;

 private:
  TransformKind kind_;
  double c_;
};

/// Tensor product of one-dimensional transforms, possibly different per axis.
class TransformD {
 public:
  explicit TransformD(std::vector<Transform1D> per_dimension) : dims_(std::move(per_dimension)) {
    if (dims_.empty()) throw InputError("TransformD needs at least one dimension");
  }

  /// Same map in every direction.
  static TransformD uniform(TransformKind kind, double c, std::size_t d) {
    return TransformD(std::vector<Transform1D>(d, Transform1D(kind, c)));
  }

  std::size_t dim() const { return dims_.size(); }
  const Transform1D& operator[](std::size_t j) const { return dims_[j]; }
  const std::vector<Transform1D>& components() const { return dims_; }

  void forward(std::span<const double> x, std::span<double> y) const {
    check(x.size());
    for (std::size_t j = 0; j < dims_.size(); ++j) y[j] = dims_[j].forward(x[j]);
  }
  std::vector<double> forward(std::span<const double> x) const {
    std::vector<double> y(dims_.size());
    forward(x, y);
    return y;
  }

  std::vector<double> inverse(std::span<const double> y) const {
    check(y.size());
    std::vector<double> x(dims_.size());
    for (std::size_t j = 0; j < dims_.size(); ++j) x[j] = dims_[j].inverse(y[j]);
    return x;
  }

  double density(std::span<const double> y) const {
    check(y.size());
    double prod = 1.0;
    for (std::size_t j = 0; j < dims_.size(); ++j) prod *= dims_[j].inverse_density(y[j]);
    return prod;
  }

  friend bool operator==(const TransformD&, const TransformD&) = default;

 private:
  void check(std::size_t n) const {
    if (n != dims_.size()) throw InputError("transform dimension mismatch");
  }

  std::vector<Transform1D> dims_;
};

}  // namespace tlfft
