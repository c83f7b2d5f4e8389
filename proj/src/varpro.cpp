// Copyright (c) the ratfit contributors
// SPDX-License-Identifier: Apache-2.0

#include "ratfit/varpro.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ratfit/linalg.hpp"

namespace ratfit
{

namespace
{

constexpr double kRPinvRtol = 1e-12;
constexpr double kDenFloor = 1e-300;

RVector stack(const CVector &v)
{
  RVector out(2 * v.size());
  out.head(v.size()) = v.real();
  out.tail(v.size()) = v.imag();
  return out;
}

RMatrix stack(const CMatrix &A)
{
  RMatrix out(2 * A.rows(), A.cols());
  out.topRows(A.rows()) = A.real();
  out.bottomRows(A.rows()) = A.imag();
  return out;
}

CVector unstack(const RVector &v)
{
  const Eigen::Index n = v.size() / 2;
  CVector out(n);
  out.real() = v.head(n);
  out.imag() = v.tail(n);
  return out;
}

// Pseudoinverse, condition number and rank flag of the triangular factor; the
// QR factor is orthonormal, so these are also the model matrix's.
template <typename Matrix>
struct TriangularInfo
{
  Matrix Rplus;
  double cond = 0.0;
  bool rank_deficient = false;
};

template <typename Matrix>
TriangularInfo<Matrix> analyze_triangular(const Matrix &R)
{
  TriangularInfo<Matrix> out;
  if (R.cols() == 0)
  {
    out.Rplus = Matrix(0, 0);
    out.cond = 1.0;
    return out;
  }
  Eigen::JacobiSVD<Matrix> svd(R, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVector &s = svd.singularValues();
  const double smax = s[0];
  RVector inv = RVector::Zero(s.size());
  Eigen::Index kept = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
  {
    if (s[i] > kRPinvRtol * smax)
    {
      inv[i] = 1.0 / s[i];
      ++kept;
    }
  }
  out.rank_deficient = kept < s.size();
  out.cond = s[s.size() - 1] > 0.0 ? smax / s[s.size() - 1]
                                   : std::numeric_limits<double>::infinity();
  out.Rplus = svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
  return out;
}

// Projection pieces shared by the two complex parameterizations.
struct ComplexCore
{
  ThinQR qr;
  TriangularInfo<CMatrix> tri;
  CVector residual;
  CVector linear;
};

ComplexCore project_complex(const CMatrix &model, const CVector &wf)
{
  ComplexCore core;
  core.qr = thin_qr(model);
  core.tri = analyze_triangular(core.qr.R);
  const CVector g = core.qr.Q.adjoint() * wf;
  core.residual = wf - core.qr.Q * g;
  core.linear = core.tri.Rplus * g;
  return core;
}

struct RealCore
{
  ThinQRReal qr;
  TriangularInfo<RMatrix> tri;
  RVector residual; // stacked
  RVector linear;
};

RealCore project_real(const RMatrix &model, const RVector &wf_stacked)
{
  RealCore core;
  core.qr = thin_qr(model);
  core.tri = analyze_triangular(core.qr.R);
  const RVector g = core.qr.Q.transpose() * wf_stacked;
  core.residual = wf_stacked - core.qr.Q * g;
  core.linear = core.tri.Rplus * g;
  return core;
}

// Real-stacked Jacobian from the Wirtinger terms: column for Re p_k is
// [Re(K+L); Im(K+L)], column for Im p_k is [-Im(K-L); Re(K-L)], with the Re
// block of parameters first.
RMatrix stack_wirtinger(const CMatrix &K, const CMatrix &L)
{
  const Eigen::Index N = K.rows(), p = K.cols();
  RMatrix J(2 * N, 2 * p);
  for (Eigen::Index k = 0; k < p; ++k)
  {
    const CVector sum = K.col(k) + L.col(k);
    const CVector dif = K.col(k) - L.col(k);
    J.col(k).head(N) = sum.real();
    J.col(k).tail(N) = sum.imag();
    J.col(p + k).head(N) = -dif.imag();
    J.col(p + k).tail(N) = dif.real();
  }
  return J;
}

} // namespace

VarproProblem::VarproProblem(SampleSet samples, Weight weight, Parameterization param, int m,
                             int n, const Basis *num_basis, const Basis *den_basis,
                             const Basis *tail_basis)
  : samples_(std::move(samples)), weight_(std::move(weight)), param_(param), m_(m), n_(n)
{
  if (m_ < 0 || n_ < 0)
  {
    throw std::invalid_argument("VarproProblem: degrees must be nonnegative");
  }
  const bool realness = param_ == Parameterization::poly_real || param_ == Parameterization::pf_real;
  const bool pf_form = param_ == Parameterization::pf || param_ == Parameterization::pf_real;
  if (pf_form && m_ < n_ - 1)
  {
    throw std::invalid_argument("VarproProblem: partial-fraction form requires m >= n - 1");
  }
  const Eigen::Index N = samples_.size();
  if (weight_.kind() != WeightKind::identity && weight_.size() != N)
  {
    throw std::invalid_argument("VarproProblem: weight size does not match sample count");
  }
  const CVector &z = samples_.points();
  if (pf_form)
  {
    const int t = m_ - n_ + 1;
    if (t > 0)
    {
      tail_basis_ = tail_basis != nullptr
                        ? *tail_basis
                        : (realness ? Basis::scaled_legendre_real(t - 1, z)
                                    : Basis::scaled_legendre_auto(t - 1, z));
      if (tail_basis_.degree() != t - 1)
      {
        throw std::invalid_argument("VarproProblem: tail basis degree must be m - n");
      }
      if (realness && !tail_basis_.real_coefficients())
      {
        throw std::invalid_argument("VarproProblem: real parameterization needs a real tail basis");
      }
    }
  }
  else
  {
    num_basis_ = num_basis != nullptr ? *num_basis
                                      : (realness ? Basis::scaled_legendre_real(m_, z)
                                                  : Basis::scaled_legendre_auto(m_, z));
    den_basis_ = den_basis != nullptr ? *den_basis
                                      : (realness ? Basis::scaled_legendre_real(n_, z)
                                                  : Basis::scaled_legendre_auto(n_, z));
    if (num_basis_.degree() != m_ || den_basis_.degree() != n_)
    {
      throw std::invalid_argument("VarproProblem: basis degrees must match (m, n)");
    }
    if (realness && (!num_basis_.real_coefficients() || !den_basis_.real_coefficients()))
    {
      throw std::invalid_argument("VarproProblem: real parameterization needs real bases");
    }
  }
  const Eigen::Index lin_cols = pf_form ? n_ + std::max(m_ - n_ + 1, 0) : m_ + 1;
  const Eigen::Index rows = realness ? 2 * N : N;
  if (rows < lin_cols)
  {
    throw std::invalid_argument("VarproProblem: too few samples for the numerator column count");
  }
  wf_ = weight_.apply(samples_.values());
  wf_norm_ = wf_.norm();
}

int VarproProblem::dim() const
{
  switch (param_)
  {
  case Parameterization::poly:
    return 2 * (n_ + 1);
  case Parameterization::poly_real:
    return n_ + 1;
  case Parameterization::pf:
    return 2 * n_;
  case Parameterization::pf_real:
    return n_;
  }
  return 0;
}

int VarproProblem::residual_dim() const
{
  return static_cast<int>(2 * samples_.size());
}

RVector VarproProblem::pack_poly(const CVector &b)
{
  return stack(b);
}

CVector VarproProblem::unpack_poly(const RVector &x)
{
  if (x.size() % 2 != 0)
  {
    throw std::invalid_argument("unpack_poly: odd parameter count");
  }
  return unstack(x);
}

RVector VarproProblem::pack_poles(const CVector &lambda)
{
  return stack(lambda);
}

CVector VarproProblem::unpack_poles(const RVector &x)
{
  return unpack_poly(x);
}

RVector VarproProblem::pack_quadratics(const CVector &lambda)
{
  const Eigen::Index n = lambda.size();
  std::vector<double> reals;
  std::vector<Complex> upper;
  std::vector<bool> used(n, false);
  for (Eigen::Index i = 0; i < n; ++i)
  {
    if (std::abs(lambda[i].imag()) <= 1e-12 * std::max(1.0, std::abs(lambda[i])))
    {
      reals.push_back(lambda[i].real());
      used[i] = true;
    }
  }
  for (Eigen::Index i = 0; i < n; ++i)
  {
    if (used[i] || lambda[i].imag() < 0.0)
    {
      continue;
    }
    // Find the conjugate partner among the unused lower-half poles.
    Eigen::Index best = -1;
    double best_dist = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < n; ++j)
    {
      if (used[j] || j == i || lambda[j].imag() > 0.0)
      {
        continue;
      }
      const double d = std::abs(lambda[j] - std::conj(lambda[i]));
      if (d < best_dist)
      {
        best_dist = d;
        best = j;
      }
    }
    if (best < 0 || best_dist > 1e-6 * std::max(1.0, std::abs(lambda[i])))
    {
      throw std::invalid_argument("pack_quadratics: pole set is not closed under conjugation");
    }
    used[i] = used[best] = true;
    upper.push_back(lambda[i]);
  }
  for (Eigen::Index i = 0; i < n; ++i)
  {
    if (!used[i])
    {
      throw std::invalid_argument("pack_quadratics: pole set is not closed under conjugation");
    }
  }

  RVector b(n);
  Eigen::Index pos = 0;
  for (const Complex &lam : upper)
  {
    b[pos] = std::norm(lam);        // constant coefficient
    b[pos + 1] = -2.0 * lam.real(); // z coefficient
    pos += 2;
  }
  // Pair real poles outermost-with-innermost so each quadratic keeps
  // well-separated roots; the middle one (odd count) becomes the linear factor.
  std::sort(reals.begin(), reals.end());
  Eigen::Index lo = 0, hi = static_cast<Eigen::Index>(reals.size()) - 1;
  while (lo < hi)
  {
    const double mu = reals[lo], nu = reals[hi];
    b[pos] = mu * nu;
    b[pos + 1] = -(mu + nu);
    pos += 2;
    ++lo;
    --hi;
  }
  if (lo == hi)
  {
    if (n % 2 == 0)
    {
      throw std::invalid_argument("pack_quadratics: odd real pole count for even n");
    }
    b[n - 1] = -reals[lo];
  }
  return b;
}

namespace
{

VarproEval eval_poly(const VarproProblem &pb, const SampleSet &samples, const Weight &weight,
                     const CVector &wf, const CVector &b, bool need_jacobian)
{
  const CVector &z = samples.points();
  const Eigen::Index N = z.size();
  const CMatrix Phi = pb.num_basis().vandermonde(z);
  const CMatrix Psi = pb.den_basis().vandermonde(z);
  const CVector den = Psi * b;
  for (Eigen::Index j = 0; j < N; ++j)
  {
    if (std::abs(den[j]) < kDenFloor)
    {
      throw domain_error("poly residual: denominator vanishes at sample " + std::to_string(j));
    }
  }
  const CMatrix scaled = den.cwiseInverse().asDiagonal() * Phi;
  const CMatrix Om = weight.apply(scaled);

  VarproEval out;
  ComplexCore core = project_complex(Om, wf);
  out.basis_matrix = Om;
  out.Q = core.qr.Q;
  out.R = core.qr.R;
  out.residual = core.residual;
  out.r = stack(core.residual);
  out.linear = core.linear;
  out.rnorm = core.residual.norm();
  out.model_cond = core.tri.cond;
  out.rank_deficient = core.tri.rank_deficient;
  out.orthogonality = (Om.adjoint() * core.residual).norm();
  if (!need_jacobian)
  {
    return out;
  }

  const CVector pa = Phi * core.linear;
  const CVector wr = weight.apply_adjoint(core.residual);
  const CVector den2inv = den.cwiseProduct(den).cwiseInverse();
  const CMatrix QRps = core.qr.Q * core.tri.Rplus.adjoint();
  const Eigen::Index p = b.size();
  out.K.resize(N, p);
  out.L.resize(N, p);
  for (Eigen::Index k = 0; k < p; ++k)
  {
    const CVector u = Psi.col(k).cwiseProduct(den2inv);
    const CVector wk = weight.apply(CVector(u.cwiseProduct(pa)));
    out.K.col(k) = wk - core.qr.Q * (core.qr.Q.adjoint() * wk);
    const CVector t = Phi.adjoint() * u.conjugate().cwiseProduct(wr);
    out.L.col(k) = QRps * t;
  }
  out.J = stack_wirtinger(out.K, out.L);
  return out;
}

VarproEval eval_poly_real(const VarproProblem &pb, const SampleSet &samples, const Weight &weight,
                          const CVector &wf, const RVector &b, bool need_jacobian)
{
  const CVector &z = samples.points();
  const Eigen::Index N = z.size();
  const CMatrix Phi = pb.num_basis().vandermonde(z);
  const CMatrix Psi = pb.den_basis().vandermonde(z);
  const CVector den = Psi * b.cast<Complex>();
  for (Eigen::Index j = 0; j < N; ++j)
  {
    if (std::abs(den[j]) < kDenFloor)
    {
      throw domain_error("poly_real residual: denominator vanishes at sample " +
                         std::to_string(j));
    }
  }
  const CMatrix Om = weight.apply(CMatrix(den.cwiseInverse().asDiagonal() * Phi));
  const RMatrix Oms = stack(Om);
  const RVector fs = stack(wf);

  VarproEval out;
  RealCore core = project_real(Oms, fs);
  out.basis_matrix_real = Oms;
  out.Q_real = core.qr.Q;
  out.R_real = core.qr.R;
  out.r = core.residual;
  out.residual = unstack(core.residual);
  out.linear = core.linear.cast<Complex>();
  out.rnorm = core.residual.norm();
  out.model_cond = core.tri.cond;
  out.rank_deficient = core.tri.rank_deficient;
  out.orthogonality = (Oms.transpose() * core.residual).norm();
  if (!need_jacobian)
  {
    return out;
  }

  const CVector pa = Phi * out.linear;
  const CVector wr = weight.apply_adjoint(out.residual);
  const CVector den2inv = den.cwiseProduct(den).cwiseInverse();
  const RMatrix QRps = core.qr.Q * core.tri.Rplus.transpose();
  const Eigen::Index p = b.size();
  out.K_real.resize(2 * N, p);
  out.L_real.resize(2 * N, p);
  for (Eigen::Index k = 0; k < p; ++k)
  {
    const CVector u = Psi.col(k).cwiseProduct(den2inv);
    const CVector wk = weight.apply(CVector(u.cwiseProduct(pa)));
    const RVector wks = stack(wk);
    out.K_real.col(k) = wks - core.qr.Q * (core.qr.Q.transpose() * wks);
    const RVector t = (Phi.adjoint() * u.conjugate().cwiseProduct(wr)).real();
    out.L_real.col(k) = QRps * t;
  }
  out.J = out.K_real + out.L_real;
  return out;
}

VarproEval eval_pf(const VarproProblem &pb, const SampleSet &samples, const Weight &weight,
                   const CVector &wf, const CVector &lambda, bool need_jacobian)
{
  const CVector &z = samples.points();
  const Eigen::Index N = z.size();
  const Eigen::Index n = lambda.size();
  const double zscale = samples.scale();
  for (Eigen::Index i = 0; i < n; ++i)
  {
    for (Eigen::Index j = i + 1; j < n; ++j)
    {
      const double sep = 1e-12 * std::max({zscale, std::abs(lambda[i]), std::abs(lambda[j])});
      if (std::abs(lambda[i] - lambda[j]) < sep)
      {
        throw domain_error("pf residual: poles " + std::to_string(i) + " and " +
                           std::to_string(j) + " coincide");
      }
    }
  }
  CMatrix C(N, n);
  for (Eigen::Index j = 0; j < N; ++j)
  {
    for (Eigen::Index k = 0; k < n; ++k)
    {
      const Complex dz = z[j] - lambda[k];
      if (std::abs(dz) < 1e-14 * std::max(zscale, std::abs(lambda[k])))
      {
        throw domain_error("pf residual: pole " + std::to_string(k) + " collides with sample " +
                           std::to_string(j));
      }
      C(j, k) = 1.0 / dz;
    }
  }
  const int t = pb.m() - pb.n() + 1;
  CMatrix model(N, n + std::max(t, 0));
  model.leftCols(n) = C;
  if (t > 0)
  {
    model.rightCols(t) = pb.tail_basis().vandermonde(z);
  }
  const CMatrix Lam = weight.apply(model);

  VarproEval out;
  ComplexCore core = project_complex(Lam, wf);
  out.basis_matrix = Lam;
  out.Q = core.qr.Q;
  out.R = core.qr.R;
  out.residual = core.residual;
  out.r = stack(core.residual);
  out.linear = core.linear;
  out.rnorm = core.residual.norm();
  out.model_cond = core.tri.cond;
  out.rank_deficient = core.tri.rank_deficient;
  out.orthogonality = (Lam.adjoint() * core.residual).norm();
  if (!need_jacobian)
  {
    return out;
  }

  const CVector wr = weight.apply_adjoint(core.residual);
  const CMatrix QRps = core.qr.Q * core.tri.Rplus.adjoint();
  out.K.resize(N, n);
  out.L.resize(N, n);
  for (Eigen::Index k = 0; k < n; ++k)
  {
    const CVector d = C.col(k).cwiseProduct(C.col(k)); // (z - lambda_k)^{-2}
    const CVector wd = weight.apply(CVector(d * core.linear[k]));
    out.K.col(k) = -(wd - core.qr.Q * (core.qr.Q.adjoint() * wd));
    out.L.col(k) = -QRps.col(k) * d.dot(wr);
  }
  out.J = stack_wirtinger(out.K, out.L);
  return out;
}

VarproEval eval_pf_real(const VarproProblem &pb, const SampleSet &samples, const Weight &weight,
                        const CVector &wf, const RVector &b, bool need_jacobian)
{
  const CVector &z = samples.points();
  const Eigen::Index N = z.size();
  const Eigen::Index n = b.size();
  const Eigen::Index nq = n / 2;
  const bool odd = n % 2 != 0;
  const int t = pb.m() - pb.n() + 1;

  // Factor values q_k(z_j) = z^2 + b[2k+1] z + b[2k]; odd tail factor z + b[n-1].
  CMatrix qvals(N, nq + (odd ? 1 : 0));
  for (Eigen::Index k = 0; k < nq; ++k)
  {
    for (Eigen::Index j = 0; j < N; ++j)
    {
      qvals(j, k) = (z[j] + b[2 * k + 1]) * z[j] + b[2 * k];
    }
  }
  if (odd)
  {
    for (Eigen::Index j = 0; j < N; ++j)
    {
      qvals(j, nq) = z[j] + b[n - 1];
    }
  }
  for (Eigen::Index k = 0; k < qvals.cols(); ++k)
  {
    for (Eigen::Index j = 0; j < N; ++j)
    {
      if (std::abs(qvals(j, k)) < kDenFloor)
      {
        throw domain_error("pf_real residual: factor " + std::to_string(k) +
                           " vanishes at sample " + std::to_string(j));
      }
    }
  }

  CMatrix model(N, n + std::max(t, 0));
  for (Eigen::Index k = 0; k < nq; ++k)
  {
    model.col(2 * k) = qvals.col(k).cwiseInverse();
    model.col(2 * k + 1) = z.cwiseProduct(model.col(2 * k));
  }
  if (odd)
  {
    model.col(n - 1) = qvals.col(nq).cwiseInverse();
  }
  if (t > 0)
  {
    model.rightCols(t) = pb.tail_basis().vandermonde(z);
  }
  const CMatrix Theta = weight.apply(model);
  const RMatrix Thetas = stack(Theta);
  const RVector fs = stack(wf);

  VarproEval out;
  RealCore core = project_real(Thetas, fs);
  out.basis_matrix_real = Thetas;
  out.Q_real = core.qr.Q;
  out.R_real = core.qr.R;
  out.r = core.residual;
  out.residual = unstack(core.residual);
  out.linear = core.linear.cast<Complex>();
  out.rnorm = core.residual.norm();
  out.model_cond = core.tri.cond;
  out.rank_deficient = core.tri.rank_deficient;
  out.orthogonality = (Thetas.transpose() * core.residual).norm();
  if (!need_jacobian)
  {
    return out;
  }

  const CVector wr = weight.apply_adjoint(out.residual);
  const RMatrix QRps = core.qr.Q * core.tri.Rplus.transpose();
  const Eigen::Index lin_cols = model.cols();
  out.K_real.resize(2 * N, n);
  out.L_real.resize(2 * N, n);
  auto fill_column = [&](Eigen::Index i, const CVector &dq, Eigen::Index block,
                         const CVector &pnum)
  {
    const CVector qinv2 =
        qvals.col(block).cwiseProduct(qvals.col(block)).cwiseInverse();
    const CVector base = dq.cwiseProduct(qinv2);
    const CVector wk = weight.apply(CVector(base.cwiseProduct(pnum)));
    const RVector wks = stack(wk);
    out.K_real.col(i) = wks - core.qr.Q * (core.qr.Q.transpose() * wks);
    RVector v = RVector::Zero(lin_cols);
    if (block < nq)
    {
      v[2 * block] = base.dot(wr).real();
      v[2 * block + 1] = z.cwiseProduct(base).dot(wr).real();
    }
    else
    {
      v[n - 1] = base.dot(wr).real();
    }
    out.L_real.col(i) = QRps * v;
  };
  const CVector ones = CVector::Ones(N);
  for (Eigen::Index k = 0; k < nq; ++k)
  {
    CVector pnum(N);
    for (Eigen::Index j = 0; j < N; ++j)
    {
      pnum[j] = core.linear[2 * k] + core.linear[2 * k + 1] * z[j];
    }
    fill_column(2 * k, ones, k, pnum);
    fill_column(2 * k + 1, z, k, pnum);
  }
  if (odd)
  {
    const CVector pnum = CVector::Constant(N, Complex(core.linear[n - 1], 0.0));
    fill_column(n - 1, ones, nq, pnum);
  }
  out.J = out.K_real + out.L_real;
  return out;
}

} // namespace

VarproEval VarproProblem::evaluate(const RVector &x, bool need_jacobian) const
{
  if (x.size() != dim())
  {
    throw std::invalid_argument("VarproProblem::evaluate: parameter size must be " +
                                std::to_string(dim()));
  }
  switch (param_)
  {
  case Parameterization::poly:
    return eval_poly(*this, samples_, weight_, wf_, unpack_poly(x), need_jacobian);
  case Parameterization::poly_real:
    return eval_poly_real(*this, samples_, weight_, wf_, x, need_jacobian);
  case Parameterization::pf:
    return eval_pf(*this, samples_, weight_, wf_, unpack_poles(x), need_jacobian);
  case Parameterization::pf_real:
    return eval_pf_real(*this, samples_, weight_, wf_, x, need_jacobian);
  }
  throw std::logic_error("VarproProblem::evaluate: unknown parameterization");
}

PolyRatio VarproProblem::poly_model(const RVector &x) const
{
  if (param_ != Parameterization::poly && param_ != Parameterization::poly_real)
  {
    throw std::invalid_argument("poly_model: problem is not polynomial-parameterized");
  }
  const VarproEval ev = evaluate(x, false);
  const bool realness = param_ == Parameterization::poly_real;
  const CVector b = realness ? CVector(x.cast<Complex>()) : unpack_poly(x);
  return PolyRatio(num_basis_, den_basis_, ev.linear, b, realness);
}

PartialFraction VarproProblem::pf_model(const RVector &x) const
{
  if (param_ == Parameterization::pf)
  {
    const VarproEval ev = evaluate(x, false);
    const CVector lambda = unpack_poles(x);
    const int t = m_ - n_ + 1;
    return PartialFraction(lambda, ev.linear.head(n_), tail_basis_,
                           t > 0 ? CVector(ev.linear.tail(t)) : CVector(), false);
  }
  if (param_ == Parameterization::pf_real)
  {
    const VarproEval ev = evaluate(x, false);
    const int t = m_ - n_ + 1;
    const RVector a = ev.linear.head(n_).real();
    const RVector c = t > 0 ? RVector(ev.linear.tail(t).real()) : RVector();
    return quad_to_partial_fraction(x, a, tail_basis_, c);
  }
  throw std::invalid_argument("pf_model: problem is not pole-parameterized");
}

PartialFraction quad_to_partial_fraction(const RVector &b, const RVector &a,
                                         const Basis &tail_basis, const RVector &tail,
                                         double tol_root_sep)
{
  const Eigen::Index n = b.size();
  if (a.size() != n)
  {
    throw std::invalid_argument("quad_to_partial_fraction: numerator length must match");
  }
  const Eigen::Index nq = n / 2;
  CVector poles(n), residues(n);
  for (Eigen::Index k = 0; k < nq; ++k)
  {
    const double c0 = b[2 * k], c1 = b[2 * k + 1]; // z^2 + c1 z + c0
    const double a0 = a[2 * k], a1 = a[2 * k + 1]; // a1 z + a0
    const double disc = c1 * c1 - 4.0 * c0;
    const double dscale = std::max({c1 * c1, 4.0 * std::abs(c0), 1e-300});
    if (std::abs(disc) <= 1e-14 * dscale)
    {
      throw conversion_error("quad_to_partial_fraction: quadratic factor " + std::to_string(k) +
                             " has a (nearly) repeated root");
    }
    if (disc < 0.0)
    {
      const Complex lam(-c1 / 2.0, std::sqrt(-disc) / 2.0);
      const Complex rho = (a0 + a1 * lam) / (lam - std::conj(lam));
      poles[2 * k] = lam;
      poles[2 * k + 1] = std::conj(lam);
      residues[2 * k] = rho;
      residues[2 * k + 1] = std::conj(rho);
    }
    else
    {
      // Stable real-root pair: the larger-magnitude root first, the other via
      // the product c0 = x1 x2.
      const double sq = std::sqrt(disc);
      const double qq = -(c1 + (c1 >= 0.0 ? sq : -sq)) / 2.0;
      const double x1 = qq;
      const double x2 = c0 / qq;
      poles[2 * k] = x1;
      poles[2 * k + 1] = x2;
      residues[2 * k] = (a0 + a1 * x1) / (x1 - x2);
      residues[2 * k + 1] = (a0 + a1 * x2) / (x2 - x1);
    }
  }
  if (n % 2 != 0)
  {
    poles[n - 1] = -b[n - 1];
    residues[n - 1] = a[n - 1];
  }
  double rmax = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
  {
    rmax = std::max(rmax, std::abs(poles[i]));
  }
  for (Eigen::Index i = 0; i < n; ++i)
  {
    for (Eigen::Index j = i + 1; j < n; ++j)
    {
      if (std::abs(poles[i] - poles[j]) <= tol_root_sep * rmax)
      {
        throw conversion_error("quad_to_partial_fraction: (nearly) repeated root across factors");
      }
    }
  }
  if (tail.size() > 0 && !tail_basis.real_coefficients())
  {
    throw std::invalid_argument("quad_to_partial_fraction: tail basis must be real");
  }
  return PartialFraction(poles, residues, tail_basis, tail.cast<Complex>(), true);
}

} // namespace ratfit
