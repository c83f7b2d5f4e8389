// Copyright (c) the ratfit contributors
// SPDX-License-Identifier: Apache-2.0

#include "ratfit/optimizer.hpp"
#include "ratfit/linalg.hpp"
#include "ratfit/synth.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <complex>

namespace
{

using ratfit::Complex;
using ratfit::CVector;
using ratfit::FitOptions;
using ratfit::FitOutcome;
using ratfit::GnOptions;
using ratfit::GnResult;
using ratfit::Method;
using ratfit::Parameterization;
using ratfit::RMatrix;
using ratfit::RVector;
using ratfit::SampleSet;
using ratfit::StopReason;
using ratfit::VarproProblem;
using ratfit::Weight;

SampleSet three_pole_samples()
{
  const CVector poles = (CVector(3) << Complex(-0.5, 2.0), Complex(-1.2, -1.0),
                         Complex(-2.0, 0.5))
                            .finished();
  const CVector residues = (CVector(3) << Complex(1, 0.5), Complex(-0.7, 1.2),
                            Complex(2, -0.3))
                               .finished();
  CVector z(40), f(40);
  for (int j = 0; j < 40; ++j)
  {
    z[j] = Complex(0.1 * j - 2.0, 1.0 + 0.05 * j);
    f[j] = 0.0;
    for (int k = 0; k < 3; ++k)
      f[j] += residues[k] / (z[j] - poles[k]);
  }
  return SampleSet(z, f);
}

SampleSet conj_symmetric_frequency_samples(int half)
{
  CVector z(2 * half), f(2 * half);
  for (int j = 0; j < half; ++j)
  {
    const Complex zj(0.0, 0.3 * (j + 1));
    const Complex fj = 1.0 / (zj + 1.0) + (zj + 0.5) / (zj * zj + zj + 4.0);
    z[2 * j] = zj;
    f[2 * j] = fj;
    z[2 * j + 1] = std::conj(zj);
    f[2 * j + 1] = std::conj(fj);
  }
  return SampleSet(z, f);
}

} // namespace

TEST(GaussNewton, LinearProblemConvergesInOneIteration)
{
  RVector c(3);
  c << 1.0, -2.0, 0.5;
  const ratfit::GnFunction fn = [&](const RVector &x, bool) {
    return std::make_pair(RVector(x - c), RMatrix(RMatrix::Identity(3, 3)));
  };
  RVector x0 = RVector::Zero(3);
  const GnResult res = ratfit::gauss_newton(fn, x0);
  EXPECT_TRUE(res.converged);
  EXPECT_EQ(res.iterations, 1);
  EXPECT_LT((res.x - c).norm(), 1e-12);
  EXPECT_LT(res.residual_norm, 1e-12);
}

TEST(GaussNewton, StationaryStartStopsAtZeroIterations)
{
  // r = [x - 1; 10] with J = [1; 0]: at x = 1 the gradient is zero while the
  // residual is large.
  const ratfit::GnFunction fn = [](const RVector &x, bool) {
    RVector r(2);
    r << x[0] - 1.0, 10.0;
    RMatrix J(2, 1);
    J << 1.0, 0.0;
    return std::make_pair(r, J);
  };
  RVector x0(1);
  x0 << 1.0;
  const GnResult res = ratfit::gauss_newton(fn, x0);
  EXPECT_TRUE(res.converged);
  EXPECT_EQ(res.reason, StopReason::grad_tol);
  EXPECT_EQ(res.iterations, 0);
  EXPECT_NEAR(res.residual_norm, 10.0, 1e-14);
}

TEST(GaussNewton, ConstantResidualFailsLineSearch)
{
  // The reported Jacobian promises descent that the function never delivers.
  const ratfit::GnFunction fn = [](const RVector &, bool) {
    RVector r(1);
    r << 1.0;
    RMatrix J(1, 1);
    J << 1.0;
    return std::make_pair(r, J);
  };
  RVector x0(1);
  x0 << 0.0;
  const GnResult res = ratfit::gauss_newton(fn, x0);
  EXPECT_FALSE(res.converged);
  EXPECT_EQ(res.reason, StopReason::line_search_failure);
}

TEST(GaussNewton, DomainErrorsAreRejectedByLineSearch)
{
  // Quadratic residual with a hard barrier at x < 0.5; full steps toward the
  // minimizer at 0.4 throw, shorter steps are accepted.
  const ratfit::GnFunction fn = [](const RVector &x, bool) {
    if (x[0] < 0.5)
      throw ratfit::domain_error("out of domain");
    RVector r(1);
    r << x[0] - 0.4;
    RMatrix J(1, 1);
    J << 1.0;
    return std::make_pair(r, J);
  };
  RVector x0(1);
  x0 << 3.0;
  const GnResult res = ratfit::gauss_newton(fn, x0);
  EXPECT_GE(res.x[0], 0.5);
  EXPECT_LT(res.x[0], 0.75);
  EXPECT_GT(res.line_search_evals, 0);
}

TEST(GaussNewton, TrajectoryMonotone)
{
  const SampleSet s = three_pole_samples();
  const VarproProblem prob(s, Weight::identity(), Parameterization::pf, 2, 3);
  const ratfit::GnFunction fn = [&](const RVector &x, bool need_j) {
    const ratfit::VarproEval ev = prob.evaluate(x, need_j);
    return std::make_pair(ev.r, ev.J);
  };
  const CVector start = (CVector(3) << Complex(-0.83, 1.57), Complex(-1.04, -1.41),
                         Complex(-1.52, 0.23))
                            .finished();
  const GnResult res = ratfit::gauss_newton(fn, VarproProblem::pack_poles(start));
  ASSERT_GE(res.trajectory.size(), 2u);
  for (std::size_t i = 1; i < res.trajectory.size(); ++i)
    EXPECT_LE(res.trajectory[i], res.trajectory[i - 1] + 1e-15);
}

TEST(GaussNewton, RecoversPerturbedPoles)
{
  const SampleSet s = three_pole_samples();
  const VarproProblem prob(s, Weight::identity(), Parameterization::pf, 2, 3);
  const ratfit::GnFunction fn = [&](const RVector &x, bool need_j) {
    const ratfit::VarproEval ev = prob.evaluate(x, need_j);
    return std::make_pair(ev.r, ev.J);
  };
  // True poles perturbed by about 1%.
  const CVector start = (CVector(3) << Complex(-0.505, 2.02), Complex(-1.188, -0.99),
                         Complex(-2.02, 0.505))
                            .finished();
  const GnResult res = ratfit::gauss_newton(fn, VarproProblem::pack_poles(start));
  EXPECT_TRUE(res.converged);
  EXPECT_LT(res.residual_norm, 1e-8);
  EXPECT_LT(res.gradient_norm, 1e-8);
  const CVector found = VarproProblem::unpack_poles(res.x);
  for (const Complex truth : {Complex(-0.5, 2.0), Complex(-1.2, -1.0), Complex(-2.0, 0.5)})
  {
    double best = 1e9;
    for (Eigen::Index k = 0; k < 3; ++k)
      best = std::min(best, std::abs(found[k] - truth));
    EXPECT_LT(best, 1e-6);
  }
}

TEST(GaussNewton, TruncatedStepAvoidsDiscardedDirections)
{
  // The poly parameterization has a two-dimensional gauge nullspace; the step
  // must not leave the retained singular subspace.
  const SampleSet s = three_pole_samples();
  const VarproProblem prob(s, Weight::identity(), Parameterization::poly, 3, 3);
  const ratfit::GnFunction fn = [&](const RVector &x, bool need_j) {
    const ratfit::VarproEval ev = prob.evaluate(x, need_j);
    return std::make_pair(ev.r, ev.J);
  };
  CVector b(4);
  b << Complex(1, 0.1), Complex(0.8, -0.2), Complex(0.4, 0.3), Complex(0.2, 0.05);
  const RVector x0 = VarproProblem::pack_poly(b);

  GnOptions o;
  o.max_iter = 1;
  const GnResult res = ratfit::gauss_newton(fn, x0, o);
  const RVector step = res.x - x0;
  ASSERT_GT(step.norm(), 0.0);

  const ratfit::VarproEval ev0 = prob.evaluate(x0, true);
  Eigen::JacobiSVD<RMatrix> svd(ev0.J, Eigen::ComputeThinV);
  const RVector sv = svd.singularValues();
  double discarded = 0.0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] <= 1e-10 * sv[0])
      discarded = std::hypot(discarded, svd.matrixV().col(i).dot(step));
  EXPECT_LT(discarded, 1e-10 * step.norm());
}

TEST(InitPoles, AaaFindsTruePole)
{
  CVector z(12), f(12);
  for (int j = 0; j < 12; ++j)
  {
    z[j] = Complex(j / 11.0, 0.0);
    f[j] = 1.0 / (z[j] - 2.0);
  }
  const SampleSet s(z, f);
  const CVector poles = ratfit::aaa_init_poles(s, 1, false);
  ASSERT_EQ(poles.size(), 1);
  EXPECT_LT(std::abs(poles[0] - Complex(2, 0)), 1e-8);
}

TEST(InitPoles, AaaPadsToRequestedCountWithDistinctPoles)
{
  CVector z(20), f(20);
  for (int j = 0; j < 20; ++j)
  {
    z[j] = Complex(j / 19.0, 0.0);
    f[j] = 1.0 / (z[j] - 2.0);
  }
  const SampleSet s(z, f);
  const CVector poles = ratfit::aaa_init_poles(s, 4, false);
  ASSERT_EQ(poles.size(), 4);
  for (Eigen::Index i = 0; i < 4; ++i)
    for (Eigen::Index k = 0; k < i; ++k)
      EXPECT_GT(std::abs(poles[i] - poles[k]), 1e-12);
}

TEST(InitPoles, SymmetrizedSetsAreExactlyConjugateClosed)
{
  const SampleSet s = conj_symmetric_frequency_samples(12);
  for (const int n : {2, 3, 5})
  {
    const CVector aaa = ratfit::aaa_init_poles(s, n, true);
    const CVector rnd = ratfit::random_init_poles(s, n, 7u, true);
    for (const CVector *set : {&aaa, &rnd})
    {
      ASSERT_EQ(set->size(), n);
      for (Eigen::Index i = 0; i < n; ++i)
      {
        bool found = false;
        for (Eigen::Index k = 0; k < n; ++k)
          if ((*set)[k] == std::conj((*set)[i]))
            found = true;
        EXPECT_TRUE(found);
      }
    }
  }
}

TEST(InitPoles, RandomSeededDeterministicAndLeftOfAxisHuggingData)
{
  const SampleSet s = conj_symmetric_frequency_samples(10);
  const CVector a = ratfit::random_init_poles(s, 4, 3u, false);
  const CVector b = ratfit::random_init_poles(s, 4, 3u, false);
  EXPECT_EQ(a, b);
  const CVector c = ratfit::random_init_poles(s, 4, 4u, false);
  EXPECT_GT((a - c).norm(), 0.0);
  // Samples on the imaginary axis: poles are reflected into the left plane.
  for (Eigen::Index i = 0; i < a.size(); ++i)
    EXPECT_LT(a[i].real(), 0.0);
}

TEST(FitRational, PartialFractionMethodsReachSmallResiduals)
{
  const ratfit::PartialFraction model = ratfit::make_pole_model(3, 6);
  const CVector z = ratfit::imaginary_segment_points(200);
  const SampleSet s = ratfit::sample_model(model, z);

  FitOptions opt;
  opt.method = Method::gn_pf;
  opt.m = 5;
  opt.n = 6;
  const FitOutcome out = ratfit::fit_rational(s, Weight::identity(), opt);
  EXPECT_TRUE(out.report.converged);
  EXPECT_LT(out.report.normalized_residual, 1e-8);
  EXPECT_TRUE(out.pf.has_value());
  EXPECT_FALSE(std::isnan(out.report.gradient_norm));
}

TEST(FitRational, RealMethodOnSymmetricDataGivesRealSymmetricModel)
{
  const SampleSet s = conj_symmetric_frequency_samples(20);
  FitOptions opt;
  opt.method = Method::gn_pf_real;
  opt.m = 2;
  opt.n = 3;
  const FitOutcome out = ratfit::fit_rational(s, Weight::identity(), opt);
  ASSERT_TRUE(out.pf.has_value());
  EXPECT_TRUE(out.pf->real_sym);
  EXPECT_LT(out.report.normalized_residual, 1e-10);
  // r(conj z) = conj r(z) exactly for the recovered model.
  const Complex z(0.123, 0.456);
  const Complex v = evaluate(*out.pf, z);
  const Complex vc = evaluate(*out.pf, std::conj(z));
  EXPECT_LT(std::abs(vc - std::conj(v)), 1e-13 * std::abs(v));
}

TEST(FitRational, DeterministicAcrossRuns)
{
  const SampleSet s = three_pole_samples();
  FitOptions opt;
  opt.method = Method::gn_pf;
  opt.m = 2;
  opt.n = 3;
  opt.init = ratfit::InitKind::random;
  opt.seed = 11;
  const FitOutcome a = ratfit::fit_rational(s, Weight::identity(), opt);
  const FitOutcome b = ratfit::fit_rational(s, Weight::identity(), opt);
  EXPECT_EQ(a.report.residual_norm, b.report.residual_norm);
  EXPECT_EQ(a.report.gradient_norm, b.report.gradient_norm);
  EXPECT_EQ(a.gn.x, b.gn.x);
}

TEST(FitRational, DispatchesClassicMethods)
{
  const SampleSet s = three_pole_samples();
  for (const Method method : {Method::aaa, Method::sk, Method::vf})
  {
    FitOptions opt;
    opt.method = method;
    opt.m = 2;
    opt.n = 3;
    const FitOutcome out = ratfit::fit_rational(s, Weight::identity(), opt);
    EXPECT_LT(out.report.normalized_residual, 1e-6) << method_name(method);
    EXPECT_FALSE(std::isnan(out.report.gradient_norm)) << method_name(method);
    EXPECT_EQ(out.report.method, std::string(method_name(method)));
  }
}

TEST(FitRational, AaaRejectsNonIdentityWeight)
{
  const SampleSet s = three_pole_samples();
  FitOptions opt;
  opt.method = Method::aaa;
  opt.m = 2;
  opt.n = 3;
  ratfit::RVector w = ratfit::RVector::Ones(s.size());
  EXPECT_THROW(ratfit::fit_rational(s, Weight::diagonal(w), opt), std::invalid_argument);
}

TEST(PfGradientNorm, NearZeroAtConvergedOptimum)
{
  const SampleSet s = three_pole_samples();
  FitOptions opt;
  opt.method = Method::gn_pf;
  opt.m = 2;
  opt.n = 3;
  const FitOutcome out = ratfit::fit_rational(s, Weight::identity(), opt);
  ASSERT_TRUE(out.pf.has_value());
  const double g = ratfit::pf_gradient_norm(s, Weight::identity(), 2, *out.pf);
  EXPECT_LT(g, 1e-8);
  // Consistent with the gradient reported by the fit itself.
  EXPECT_NEAR(g, out.report.gradient_norm, 1e-10 + 0.5 * std::abs(g));
}

TEST(GaussNewton, GradientOrthogonalityAtOptimum)
{
  const SampleSet s = three_pole_samples();
  const VarproProblem prob(s, Weight::identity(), Parameterization::pf, 2, 3);
  const ratfit::GnFunction fn = [&](const RVector &x, bool need_j) {
    const ratfit::VarproEval ev = prob.evaluate(x, need_j);
    return std::make_pair(ev.r, ev.J);
  };
  const CVector start = (CVector(3) << Complex(-0.505, 2.02), Complex(-1.188, -0.99),
                         Complex(-2.02, 0.505))
                            .finished();
  const GnResult res = ratfit::gauss_newton(fn, VarproProblem::pack_poles(start));
  const ratfit::VarproEval ev = prob.evaluate(res.x, true);
  EXPECT_LT((ev.J.transpose() * ev.r).norm(),
            1e-8 * std::max(1.0, ev.r.norm() * ev.J.norm()));
}
