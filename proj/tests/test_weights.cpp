// Copyright (c) the ratfit contributors
// SPDX-License-Identifier: Apache-2.0

#include "ratfit/weights.hpp"
#include "ratfit/synth.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <complex>

namespace
{

using ratfit::CMatrix;
using ratfit::Complex;
using ratfit::CVector;
using ratfit::RVector;
using ratfit::Weight;

} // namespace

TEST(WeightApply, IdentityDiagonalDense)
{
  CVector v(2);
  v << Complex(1, 0), Complex(2, 0);

  EXPECT_EQ(Weight::identity().apply(v), v);

  RVector d(2);
  d << 2.0, 3.0;
  const CVector dv = Weight::diagonal(d).apply(v);
  EXPECT_EQ(dv[0], Complex(2, 0));
  EXPECT_EQ(dv[1], Complex(6, 0));

  CMatrix swap(2, 2);
  swap << Complex(0, 0), Complex(1, 0), Complex(1, 0), Complex(0, 0);
  const CVector sv = Weight::dense(swap).apply(v);
  EXPECT_EQ(sv[0], Complex(2, 0));
  EXPECT_EQ(sv[1], Complex(1, 0));
}

TEST(WeightApply, AdjointMatchesMatrix)
{
  CMatrix w(2, 2);
  w << Complex(1, 2), Complex(0, -1), Complex(3, 0), Complex(0.5, 0.5);
  const Weight weight = Weight::dense(w);
  CVector v(2);
  v << Complex(1, -1), Complex(2, 0.5);
  EXPECT_LT((weight.apply_adjoint(v) - w.adjoint() * v).norm(), 1e-15);
  EXPECT_LT((weight.as_matrix(2) - w).norm(), 1e-15);
  // Matrix apply acts columnwise.
  CMatrix a(2, 3);
  a.setRandom();
  EXPECT_LT((weight.apply(a) - w * a).norm(), 1e-14);
}

TEST(WeightApply, SizeChecks)
{
  RVector d(2);
  d << 1.0, 2.0;
  CVector v3 = CVector::Ones(3);
  EXPECT_THROW(Weight::diagonal(d).apply(v3), std::invalid_argument);
  RVector bad(1);
  bad << -1.0;
  EXPECT_THROW(Weight::diagonal(bad), std::invalid_argument);
  EXPECT_THROW(Weight::dense(CMatrix::Ones(2, 3)), std::invalid_argument);
}

TEST(CauchyMass, ClosedFormEntries)
{
  {
    CVector z(1);
    z << Complex(1, 0);
    const CMatrix m = ratfit::cauchy_mass(z);
    ASSERT_EQ(m.rows(), 1);
    EXPECT_NEAR(std::abs(m(0, 0) - Complex(0.5, 0)), 0.0, 1e-16);
  }
  {
    CVector z(2);
    z << Complex(1, 0), Complex(1, 1);
    const CMatrix m = ratfit::cauchy_mass(z);
    EXPECT_NEAR(std::abs(m(0, 0) - Complex(0.5, 0)), 0.0, 1e-16);
    EXPECT_NEAR(std::abs(m(1, 1) - Complex(0.5, 0)), 0.0, 1e-16);
    EXPECT_NEAR(std::abs(m(0, 1) - 1.0 / Complex(2, -1)), 0.0, 1e-16);
    EXPECT_NEAR(std::abs(m(1, 0) - 1.0 / Complex(2, 1)), 0.0, 1e-16);
  }
}

TEST(CauchyMass, ExactlyHermitian)
{
  CVector z(4);
  z << Complex(0.5, -3), Complex(1.2, 0.7), Complex(2, 4), Complex(0.01, -0.2);
  const CMatrix m = ratfit::cauchy_mass(z);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      EXPECT_EQ(m(i, j), std::conj(m(j, i)));
}

TEST(CauchyMass, RequiresRightHalfPlane)
{
  CVector z(2);
  z << Complex(1, 0), Complex(-0.5, 2);
  EXPECT_THROW(ratfit::cauchy_mass(z), std::invalid_argument);
  CVector on_axis(1);
  on_axis << Complex(0, 1);
  EXPECT_THROW(ratfit::cauchy_mass(on_axis), std::invalid_argument);
}

TEST(InverseSqrtWeight, ScalarAndIdentity)
{
  CMatrix m(1, 1);
  m << Complex(4, 0);
  const ratfit::InverseSqrtFactorization fac = ratfit::inverse_sqrt_weight(m);
  EXPECT_NEAR(std::abs(fac.W.as_matrix(1)(0, 0)), 0.5, 1e-14);

  const CMatrix id = CMatrix::Identity(2, 2);
  const ratfit::InverseSqrtFactorization fi = ratfit::inverse_sqrt_weight(id);
  const CMatrix w = fi.W.as_matrix(2);
  EXPECT_LT((w * id * w.adjoint() - id).norm(), 1e-14);
}

TEST(InverseSqrtWeight, WhitensCauchyMass)
{
  CVector z(3);
  z << Complex(1, 0), Complex(2, 0), Complex(4, 0);
  const CMatrix m = ratfit::cauchy_mass(z);
  const Weight w = ratfit::cauchy_weight(z);
  EXPECT_LT(ratfit::whitening_error(w, m), 1e-10);
  EXPECT_EQ(w.kind(), ratfit::WeightKind::dense);
}

TEST(InverseSqrtWeight, SeededPointCloudWhitensWell)
{
  // Frequency-like points hugging the imaginary axis with spacing larger than
  // their distance to the axis: the kernel columns 1/(s + conj z_k) are then
  // nearly orthogonal and the mass matrix is diagonally dominant. A generic box
  // cloud with the same separation bounds can exceed condition 1/eps.
  ratfit::Rng rng(42);
  CVector z(50);
  for (int j = 0; j < 50; ++j)
    z[j] = Complex(rng.uniform(1e-3, 0.01), -5.0 + 0.2 * j + rng.uniform(-0.03, 0.03));
  double min_sep = 1e9;
  for (int j = 0; j < 50; ++j)
    for (int i = 0; i < j; ++i)
      min_sep = std::min(min_sep, std::abs(z[j] - z[i]));
  ASSERT_GE(min_sep, 0.01);
  const CMatrix m = ratfit::cauchy_mass(z);
  const Weight w = ratfit::cauchy_weight(z);
  EXPECT_LT(ratfit::whitening_error(w, m), 1e-6);
}

TEST(InverseSqrtWeight, IllConditionedCarriesRatio)
{
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = 1e-18;
  try
  {
    ratfit::inverse_sqrt_weight(m, 1e-15);
    FAIL() << "expected ill_conditioned_error";
  }
  catch (const ratfit::ill_conditioned_error &e)
  {
    EXPECT_LT(e.ratio(), 1e-15);
    EXPECT_GT(e.ratio(), 0.0);
  }
}

TEST(WeightedResidualNorm, DenseExample)
{
  CVector z(1), f(1);
  z << Complex(0, 1);
  f << Complex(1, 0);
  const ratfit::SampleSet s(z, f);
  CMatrix two(1, 1);
  two << Complex(2, 0);
  const CVector model = CVector::Zero(1);
  EXPECT_NEAR(ratfit::weighted_residual_norm(s, model, Weight::dense(two)), 2.0, 1e-15);
  EXPECT_NEAR(ratfit::weighted_residual_norm(s, model, Weight::identity()), 1.0, 1e-15);
}
