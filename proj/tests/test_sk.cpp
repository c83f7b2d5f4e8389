// Copyright (c) the ratfit contributors
// SPDX-License-Identifier: Apache-2.0

#include "ratfit/sk.hpp"
#include "ratfit/linalg.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <complex>

namespace
{

using ratfit::Basis;
using ratfit::CMatrix;
using ratfit::Complex;
using ratfit::CVector;
using ratfit::SampleSet;
using ratfit::SkOptions;
using ratfit::SkResult;
using ratfit::Weight;

// Samples of (2z + 1)/(z^2 + 0.5 z + 3) on a tilted segment away from the
// denominator roots.
SampleSet exact_rational_samples(int n_pts)
{
  CVector z(n_pts), f(n_pts);
  for (int j = 0; j < n_pts; ++j)
  {
    z[j] = Complex(-1.0 + 2.0 * j / (n_pts - 1.0), 0.4 + 0.02 * j);
    f[j] = (2.0 * z[j] + 1.0) / (z[j] * z[j] + 0.5 * z[j] + 3.0);
  }
  return SampleSet(z, f);
}

} // namespace

TEST(SkFit, ExactRationalRecoveredInOneIteration)
{
  const SampleSet s = exact_rational_samples(20);
  SkOptions o;
  o.max_iter = 1;
  const SkResult res = ratfit::sk_fit(s, 1, 2, Basis::monomial(1), Basis::monomial(2),
                                      Weight::identity(), o);
  const double rel = residual_norm(s, res.model) / s.values().norm();
  EXPECT_LT(rel, 1e-10);
  // Coefficients match the generating function up to the pinned normalization
  // b_0 = 3 b0_true = 1 -> everything scaled by 1/3.
  EXPECT_NEAR(std::abs(res.model.b[1] - Complex(0.5 / 3.0, 0)), 0.0, 1e-10);
  EXPECT_NEAR(std::abs(res.model.b[2] - Complex(1.0 / 3.0, 0)), 0.0, 1e-10);
  EXPECT_NEAR(std::abs(res.model.a[1] - Complex(2.0 / 3.0, 0)), 0.0, 1e-10);
}

TEST(SkFit, FirstIterationMatchesDirectLeastSquares)
{
  // With monomial bases and the default start, the first pass reduces to an
  // unscaled linear least-squares problem that the test can solve on its own.
  CVector z(12), f(12);
  for (int j = 0; j < 12; ++j)
  {
    z[j] = Complex(0.921 * std::cos(0.5 * j), 0.921 * std::sin(0.5 * j));
    f[j] = std::exp(z[j]) / (z[j] + 2.0);
  }
  const SampleSet s(z, f);
  const int m = 2, n = 1;
  const Basis num = Basis::monomial(m);
  const Basis den = Basis::monomial(n);

  SkOptions o;
  o.max_iter = 1;
  const SkResult res = ratfit::sk_fit(s, m, n, num, den, Weight::identity(), o);

  const CMatrix Phi = num.vandermonde(z);
  const CMatrix Psi = den.vandermonde(z);
  CMatrix M(12, m + 1 + n);
  M.leftCols(m + 1) = -Phi;
  M.rightCols(n) = f.asDiagonal() * Psi.rightCols(n);
  const CVector x = ratfit::lstsq(M, CVector(-f));

  EXPECT_LT((res.model.a - x.head(m + 1)).norm(), 1e-12 * x.norm());
  EXPECT_LT((res.model.b.tail(n) - x.tail(n)).norm(), 1e-12 * x.norm());
}

TEST(SkFit, ConstantConvergesImmediately)
{
  CVector z(6), f(6);
  for (int j = 0; j < 6; ++j)
  {
    z[j] = Complex(j, 0.5);
    f[j] = Complex(4, -2);
  }
  const SampleSet s(z, f);
  const SkResult res = ratfit::sk_fit(s, 0, 0, Basis::monomial(0), Basis::monomial(0));
  EXPECT_TRUE(res.converged);
  EXPECT_EQ(res.history.size(), 1u);
  EXPECT_NEAR(std::abs(evaluate(res.model, Complex(9, 9)) - Complex(4, -2)), 0.0, 1e-13);
}

TEST(SkFit, LeadingDenominatorCoefficientPinned)
{
  const SampleSet s = exact_rational_samples(25);
  {
    const SkResult res = ratfit::sk_fit(s, 2, 2, Basis::monomial(2), Basis::monomial(2));
    for (const ratfit::SkIterate &it : res.history)
      EXPECT_EQ(it.b[0], Complex(1, 0));
  }
  {
    // Classic Legendre members have psi_0 = 1 everywhere, including 0.
    const Basis leg = Basis::scaled_legendre_auto(2, s.points());
    const SkResult res = ratfit::sk_fit(s, 2, 2, leg.truncated(2), leg);
    for (const ratfit::SkIterate &it : res.history)
      EXPECT_EQ(it.b[0], leg.evaluate(Complex(0, 0))[0]);
  }
}

TEST(SkFit, ConvergedDenominatorIsAFixedPoint)
{
  const SampleSet s = exact_rational_samples(30);
  const SkResult first = ratfit::sk_fit(s, 1, 2, Basis::monomial(1), Basis::monomial(2));
  EXPECT_TRUE(first.converged);
  const CVector b_conv = first.model.b;
  const SkResult again = ratfit::sk_fit(s, 1, 2, Basis::monomial(1), Basis::monomial(2),
                                        Weight::identity(), SkOptions{}, &b_conv);
  EXPECT_TRUE(again.converged);
  EXPECT_EQ(again.history.size(), 1u);
  EXPECT_LT((again.model.b - b_conv).norm(), 1e-10);
}

TEST(SkFit, DiagonalWeightChangesTheFit)
{
  // Underparameterized fit of exp: emphasis on the left half of the segment
  // must move the coefficients.
  CVector z(20), f(20);
  for (int j = 0; j < 20; ++j)
  {
    z[j] = Complex(j / 19.0, 0.3);
    f[j] = std::exp(2.0 * z[j]);
  }
  const SampleSet s(z, f);
  ratfit::RVector w = ratfit::RVector::Ones(20);
  w.head(10).array() = 50.0;
  const SkResult plain = ratfit::sk_fit(s, 1, 1, Basis::monomial(1), Basis::monomial(1));
  const SkResult weighted = ratfit::sk_fit(s, 1, 1, Basis::monomial(1), Basis::monomial(1),
                                           Weight::diagonal(w));
  EXPECT_GT((plain.model.a - weighted.model.a).norm(), 1e-6);
  // The weighted fit wins in its own norm.
  const CVector rp = s.values() - evaluate(plain.model, z);
  const CVector rw = s.values() - evaluate(weighted.model, z);
  EXPECT_LT(Weight::diagonal(w).apply(rw).norm(), Weight::diagonal(w).apply(rp).norm());
}

TEST(SkFit, DenseWeightRejected)
{
  const SampleSet s = exact_rational_samples(10);
  const CMatrix dense = CMatrix::Identity(10, 10);
  EXPECT_THROW(ratfit::sk_fit(s, 1, 2, Basis::monomial(1), Basis::monomial(2),
                              Weight::dense(dense)),
               std::invalid_argument);
}

TEST(SkFit, ValidatesDegreesAndSampleCount)
{
  const SampleSet s = exact_rational_samples(4);
  // m + n + 2 = 5 > 4 samples.
  EXPECT_THROW(ratfit::sk_fit(s, 1, 2, Basis::monomial(1), Basis::monomial(2)),
               std::invalid_argument);
  const SampleSet s10 = exact_rational_samples(10);
  EXPECT_THROW(ratfit::sk_fit(s10, 2, 2, Basis::monomial(1), Basis::monomial(2)),
               std::invalid_argument);
}

TEST(SkFit, VanishingInitialDenominatorThrows)
{
  // b(z) = 1 - z evaluates to exactly zero at the sample z = 1.
  CVector z(6), f(6);
  for (int j = 0; j < 6; ++j)
  {
    z[j] = Complex(0.5 * j, 0.0);
    f[j] = 1.0 / (z[j] + 5.0);
  }
  const SampleSet s(z, f);
  CVector b0(2);
  b0 << Complex(1, 0), Complex(-1, 0);
  EXPECT_THROW(ratfit::sk_fit(s, 1, 1, Basis::monomial(1), Basis::monomial(1),
                              Weight::identity(), SkOptions{}, &b0),
               ratfit::domain_error);
}

TEST(SkFit, DenominatorBasisVanishingAtZeroRejected)
{
  // The pinned coefficient is b_0 = psi_0(0), so a denominator basis whose
  // first member vanishes at 0 leaves nothing to pin. For lagrange nodes
  // {1, 0}, phi_0(z) = z - 0 and phi_0(0) = 0; for nodes {0, 1},
  // phi_0(z) = z - 1 and phi_0(0) = -1 is usable.
  CVector nodes_ok(2), nodes_bad(2);
  nodes_ok << Complex(0, 0), Complex(1, 0);
  nodes_bad << Complex(1, 0), Complex(0, 0);
  const SampleSet s = exact_rational_samples(10);
  EXPECT_THROW(ratfit::sk_fit(s, 1, 1, Basis::monomial(1), Basis::lagrange_nodes(nodes_bad)),
               std::invalid_argument);
  EXPECT_NO_THROW(ratfit::sk_fit(s, 1, 1, Basis::monomial(1), Basis::lagrange_nodes(nodes_ok)));
}
