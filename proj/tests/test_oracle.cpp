#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "support.hpp"
#include "tlfft/oracle.hpp"

using namespace tlfft;

namespace {

constexpr double pi = std::numbers::pi;

double runge1(double y) { return 1.0 / (1.0 + y * y); }

// Coefficient k of h(psi(.)) as an integral over R, by composite Simpson in
// the substitution y = c * sinh(u) to spread out the heavy tails.
double coefficient_by_substitution(const Transform1D& t, Freq k) {
  const double U = 12.0;
  const int n = 200000;
  const double h = 2 * U / n;
  auto f = [&](double u) {
    const double y = t.c() * std::sinh(u);
    const double dy = t.c() * std::cosh(u);
    return runge1(y) * t.inverse_density(y) * std::cos(2 * pi * k * t.inverse(y)) * dy;
  };
  double s = f(-U) + f(U);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4 : 2) * f(-U + i * h);
  return s * h / 3;
}

}  // namespace

TEST(Runge, Examples) {
  EXPECT_EQ(runge(std::vector<double>{0, 0}), 1.0);
  EXPECT_EQ(runge(std::vector<double>{1}), 0.5);
  EXPECT_DOUBLE_EQ(runge(std::vector<double>{1, 2, 3}), 0.01);
  EXPECT_DOUBLE_EQ(eval_test({TestFunction::Kind::runge_product, 3}, std::vector<double>{1, 2, 3}), 0.01);
  EXPECT_THROW(eval_test({TestFunction::Kind::runge_product, 2}, std::vector<double>{1}), InputError);
}

TEST(ExactCoefficients, Algebraic) {
  EXPECT_DOUBLE_EQ(exact_coeff_algebraic(std::vector<Freq>{0, 0}), 4.0 / 9.0);
  EXPECT_NEAR(exact_coeff_algebraic(std::vector<Freq>{1}), 0.20264236728467555, 1e-17);
  EXPECT_NEAR(exact_coeff_algebraic(std::vector<Freq>{2}), -0.05066059182116889, 1e-17);
  EXPECT_EQ(exact_coeff_algebraic(std::vector<Freq>{-3}), exact_coeff_algebraic(std::vector<Freq>{3}));
  EXPECT_THROW(exact_coeff_algebraic(std::vector<Freq>{1}, std::vector<double>{2.0}), DomainError);
}

TEST(ExactCoefficients, Tangens) {
  EXPECT_EQ(exact_coeff_tangens(std::vector<Freq>{0}, 1.0), 0.5);
  EXPECT_EQ(exact_coeff_tangens(std::vector<Freq>{1}, 1.0), 0.25);
  EXPECT_EQ(exact_coeff_tangens(std::vector<Freq>{2}, 1.0), 0.0);
  EXPECT_EQ(exact_coeff_tangens(std::vector<Freq>{-2}, 1.0), 0.0);
  EXPECT_DOUBLE_EQ(exact_coeff_tangens(std::vector<Freq>{2}, 3.0), 3.0 / 32.0);
  EXPECT_DOUBLE_EQ(exact_coeff_tangens(std::vector<Freq>{1, -1}, std::vector<double>{1.0, 3.0}), 0.25 * 3.0 / 16.0);
  EXPECT_THROW(exact_coeff_tangens(std::vector<Freq>{1}, 0.0), DomainError);
}

TEST(ExactCoefficients, TangensContinuousAtOne) {
  for (double c : {1 - 1e-8, 1 + 1e-8}) {
    EXPECT_NEAR(tangens_runge_coeff_1d(0, c), 0.5, 1e-8);
    EXPECT_NEAR(tangens_runge_coeff_1d(1, c), 0.25, 1e-8);
    EXPECT_NEAR(tangens_runge_coeff_1d(2, c), 0.0, 1e-8);
    EXPECT_NEAR(tangens_runge_coeff_1d(5, c), 0.0, 1e-8);
  }
}

TEST(Quadrature, Examples) {
  const Transform1D alg(TransformKind::algebraic, 1);
  EXPECT_NEAR(std::abs(quadrature_coeff(alg, [](double) { return 1.0; }, 0, 1u << 12) - Complex(1.0)), 0.0, 1e-3);
  EXPECT_NEAR(std::abs(quadrature_coeff(alg, runge1, 0, 1u << 16) - Complex(2.0 / 3.0)), 0.0, 1e-6);
  const Transform1D tan1(TransformKind::tangens, 1);
  EXPECT_NEAR(std::abs(quadrature_coeff(tan1, runge1, 3, 1u << 16)), 0.0, 1e-10);
  EXPECT_THROW(quadrature_table(alg, runge1, 1000), InputError);
  EXPECT_THROW(quadrature_table(alg, runge1, 512), InputError);
  EXPECT_THROW(quadrature_table(alg, [](double y) { return y > 1 ? NAN : 1.0; }, 1024), InputError);
}

TEST(Quadrature, MatchesClosedForms) {
  std::vector<Transform1D> ts{Transform1D(TransformKind::algebraic, 1)};
  for (double c : {0.5, 1.0, 1.5}) ts.emplace_back(TransformKind::tangens, c);
  for (const auto& t : ts) {
    const auto rows = oracle_table(t, 32);
    ASSERT_EQ(rows.size(), 65u);
    for (const auto& r : rows) {
      EXPECT_LE(r.abs_diff, 1e-6) << to_string(t.kind()) << " c=" << t.c() << " k=" << r.k;
      EXPECT_EQ(r.abs_diff, std::abs(r.exact - r.quadrature));
    }
  }
}

TEST(Quadrature, AgreesWithIntegralOverRealLine) {
  for (auto kind : {TransformKind::logarithmic, TransformKind::error, TransformKind::tangens}) {
    const Transform1D t(kind, 1.0);
    const auto table = quadrature_table(t, runge1, 1u << 16);
    // h(psi(x)) decays only logarithmically at x = +-1/2 for the error map,
    // so its trapezoidal error at R = 2^16 is about 1.3e-6 and shrinks slowly in R.
    const double tol = kind == TransformKind::error ? 2e-6 : 1e-6;
    const auto fine = kind == TransformKind::error ? quadrature_table(t, runge1, 1u << 20) : table;
    for (Freq k = 0; k <= 4; ++k) {
      const double ref = coefficient_by_substitution(t, k);
      EXPECT_NEAR(table[static_cast<std::size_t>(k)].real(), ref, tol) << to_string(kind) << " k=" << k;
      if (kind == TransformKind::error) {
        EXPECT_LT(std::abs(fine[static_cast<std::size_t>(k)].real() - ref),
                  std::abs(table[static_cast<std::size_t>(k)].real() - ref) / 2);
      }
      EXPECT_NEAR(table[static_cast<std::size_t>(k)].imag(), 0.0, 1e-12);
      if (k > 0) {
        EXPECT_NEAR(table[(1u << 16) - static_cast<std::size_t>(k)].real(), table[static_cast<std::size_t>(k)].real(),
                    1e-15);
      }
    }
  }
}

TEST(Quadrature, OracleTableRejectsMapsWithoutClosedForm) {
  EXPECT_THROW(oracle_table(Transform1D(TransformKind::logarithmic, 1), 4), DomainError);
  EXPECT_THROW(oracle_table(Transform1D(TransformKind::algebraic, 2), 4), DomainError);
}

TEST(DecayConstant, BoundHoldsOnScan) {
  for (double b : {1.1, 1.5, 2.0, std::numbers::e, 10.0})
    for (double eps : {0.05, 0.5, 1.0, 3.0}) {
      const double C = decay_constant(b, eps);
      for (int k = 1; k <= 100000; ++k) {
        const double lhs = -k * std::log(b);
        const double rhs = std::log(C) - (1 + eps) * std::log(static_cast<double>(k));
        ASSERT_LE(lhs, rhs + 1e-12) << "b=" << b << " eps=" << eps << " k=" << k;
      }
      const double k2 = (1 + eps) / std::log(b);
      EXPECT_NEAR(std::pow(b, -k2), C * std::pow(k2, -1 - eps), 1e-9 * std::pow(b, -k2));
    }
  EXPECT_LE(0.5, decay_constant(2, 1));
  EXPECT_THROW(decay_constant(1.0, 1.0), DomainError);
  EXPECT_THROW(decay_constant(2.0, 0.0), DomainError);
}

TEST(Wiener, TangensFiniteSupport) {
  auto coeff = [](std::span<const Freq> k) { return exact_coeff_tangens(k, 1.0); };
  for (std::int64_t K : {1, 2, 10}) {
    const auto e = wiener_norm_estimate(coeff, WeightFunction::hc(0), 1, K);
    EXPECT_NEAR(e.value, 1.0, 1e-15);
    const auto w = wiener_norm_estimate(coeff, WeightFunction::hc(1), 1, K);
    EXPECT_NEAR(w.value, 0.5 + 2 * 0.25, 1e-15);
  }
  const auto e2 = wiener_norm_estimate(coeff, WeightFunction::hc(0.5), 2, 5);
  EXPECT_NEAR(e2.value, 1.0, 1e-15);
  EXPECT_NEAR(e2.value, wiener_norm_product([](Freq k) { return tangens_runge_coeff_1d(k, 1.0); }, 0.5, 2, 5), 1e-15);
}

TEST(Wiener, AlgebraicConvergesForSmallBeta) {
  auto coeff = [](std::span<const Freq> k) { return exact_coeff_algebraic(k); };
  const auto e = wiener_norm_estimate(coeff, WeightFunction::hc(0.95), 1, 10000);
  EXPECT_TRUE(e.converging);
  EXPECT_TRUE(std::isfinite(e.value));
  EXPECT_NEAR(e.shell_ratio, std::pow(2.0, -1.05), 1e-3);
  for (std::size_t r = 2; r < e.shells.size(); r *= 3) {
    const double expect = 2 * std::pow(static_cast<double>(r), 0.95) * 2 / (pi * pi * double(r) * double(r));
    EXPECT_NEAR(e.shells[r], expect, 1e-12 * expect);
  }
  double prev = 0;
  for (std::int64_t K = 0; K < 30; ++K) {
    const double v = wiener_norm_estimate(coeff, WeightFunction::hc(0.95), 1, K).value;
    EXPECT_GE(v, prev);
    prev = v;
  }
}

TEST(Wiener, AlgebraicDivergesForBetaTwo) {
  auto coeff = [](std::span<const Freq> k) { return exact_coeff_algebraic(k); };
  const auto e = wiener_norm_estimate(coeff, WeightFunction::hc(2), 1, 10000);
  EXPECT_FALSE(e.converging);
  EXPECT_GE(e.shell_ratio, 0.99);
}

TEST(Wiener, ProductMatchesCube) {
  auto coeff = [](std::span<const Freq> k) { return exact_coeff_algebraic(k); };
  const auto e = wiener_norm_estimate(coeff, WeightFunction::hc(0.7), 3, 12);
  EXPECT_NEAR(e.value, wiener_norm_product(algebraic_runge_coeff_1d, 0.7, 3, 12), 1e-12);
  EXPECT_THROW(wiener_norm_estimate(coeff, WeightFunction::hc(1), 8, 100, 1000), ResourceError);
}

TEST(WienerBound, TangensErrorBelowWeightedNorm) {
  auto coeff = [](std::span<const Freq> k) { return exact_coeff_tangens(k, 1.0); };
  const auto T = TransformD::uniform(TransformKind::tangens, 1, 2);
  for (double beta : {0.5, 0.9}) {
    const double norm = wiener_norm_estimate(coeff, WeightFunction::hc(beta), 2, 8).value;
    for (double N : {2.0, 4.0, 8.0}) {
      const auto I = hyperbolic_cross(2, N, beta);
      const auto rec = roundtrip_error(runge_sampler(), I, search_single(I), T);
      EXPECT_LE(rec.abs_err, 2.0 / N * norm);
    }
  }
}
