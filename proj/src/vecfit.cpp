// Copyright (c) the ratfit contributors
// SPDX-License-Identifier: Apache-2.0

#include "ratfit/vecfit.hpp"

#include <cmath>

#include "ratfit/linalg.hpp"

namespace ratfit
{

CVector vf_auto_poles(const SampleSet &samples, int n)
{
  if (n < 1)
  {
    throw std::invalid_argument("vf_auto_poles: need n >= 1");
  }
  const CVector &z = samples.points();
  double imin = z[0].imag(), imax = z[0].imag();
  double rmin = z[0].real(), rmax = z[0].real();
  for (Eigen::Index j = 1; j < z.size(); ++j)
  {
    imin = std::min(imin, z[j].imag());
    imax = std::max(imax, z[j].imag());
    rmin = std::min(rmin, z[j].real());
    rmax = std::max(rmax, z[j].real());
  }
  const double span = imax - imin;
  CVector poles(n);
  if (span <= 1e-12 * samples.scale())
  {
    // Flat data (real axis or a single height): spread over the real range with
    // small conjugate imaginary offsets instead.
    const double rspan = std::max(rmax - rmin, samples.scale() * 1e-3);
    for (int k = 0; k < n; ++k)
    {
      const double re = n == 1 ? 0.5 * (rmin + rmax)
                               : rmin + rspan * static_cast<double>(k) / (n - 1);
      const double im = (k % 2 == 0 ? 1.0 : -1.0) * rspan / 100.0;
      poles[k] = Complex(re, n == 1 ? 0.0 : im);
    }
    return poles;
  }
  RVector y(n);
  for (int k = 0; k < n; ++k)
  {
    y[k] = n == 1 ? 0.5 * (imin + imax)
                  : imin + span * static_cast<double>(k) / (n - 1);
  }
  if (is_conjugate_symmetric(samples))
  {
    // Make the spacing exactly antisymmetric so poles come in exact conjugate
    // pairs (middle value, if any, becomes a real pole).
    for (int k = 0; k < n / 2; ++k)
    {
      const double v = 0.5 * (y[n - 1 - k] - y[k]);
      y[n - 1 - k] = v;
      y[k] = -v;
    }
    if (n % 2 == 1)
    {
      y[n / 2] = 0.0;
    }
  }
  for (int k = 0; k < n; ++k)
  {
    poles[k] = Complex(-span / 100.0, y[k]);
  }
  return poles;
}

CVector vf_pole_update(const CVector &poles, const CVector &b)
{
  if (poles.size() != b.size())
  {
    throw std::invalid_argument("vf_pole_update: length mismatch");
  }
  const Eigen::Index n = poles.size();
  CMatrix A = CMatrix(poles.asDiagonal());
  A.noalias() -= CVector::Ones(n) * b.transpose();
  Eigen::ComplexEigenSolver<CMatrix> es(A, false);
  if (es.info() != Eigen::Success)
  {
    throw std::runtime_error("vf_pole_update: eigensolver failed");
  }
  return es.eigenvalues();
}

VfResult vf_fit(const SampleSet &samples, int m, int n, CVector initial_poles,
                const Weight &weight, const VfOptions &options, const Basis *tail_basis)
{
  if (n < 1)
  {
    throw std::invalid_argument("vf_fit: need n >= 1");
  }
  if (m < n - 1)
  {
    throw std::invalid_argument("vf_fit: partial-fraction form requires m >= n - 1");
  }
  if (weight.kind() == WeightKind::dense)
  {
    throw std::invalid_argument("vf_fit: dense weights are not supported");
  }
  if (samples.size() < m + n + 2)
  {
    throw std::invalid_argument("vf_fit: need at least m + n + 2 samples");
  }
  const Eigen::Index N = samples.size();
  const CVector &z = samples.points();
  const CVector &f = samples.values();
  const int t = m - n + 1; // tail coefficient count

  Basis tail;
  if (t > 0)
  {
    tail = tail_basis != nullptr ? *tail_basis : Basis::scaled_legendre_auto(t - 1, z);
    if (tail.degree() != t - 1)
    {
      throw std::invalid_argument("vf_fit: tail basis degree must be m - n");
    }
  }
  const CMatrix Phi = t > 0 ? tail.vandermonde(z) : CMatrix(N, 0);

  CVector wdiag;
  if (weight.kind() == WeightKind::diagonal)
  {
    if (weight.size() != N)
    {
      throw std::invalid_argument("vf_fit: weight length does not match sample count");
    }
    wdiag = weight.diag().cast<Complex>();
  }
  else
  {
    wdiag = CVector::Ones(N);
  }

  CVector poles = initial_poles.size() > 0 ? initial_poles : vf_auto_poles(samples, n);
  if (poles.size() != n)
  {
    throw std::invalid_argument("vf_fit: initial pole count does not match n");
  }

  VfResult out;
  const double zscale = samples.scale();
  auto fix_collisions = [&]()
  {
    for (Eigen::Index k = 0; k < n; ++k)
    {
      for (int attempt = 0; attempt < 8; ++attempt)
      {
        double dmin = std::numeric_limits<double>::infinity();
        for (Eigen::Index j = 0; j < N; ++j)
        {
          dmin = std::min(dmin, std::abs(z[j] - poles[k]));
        }
        if (dmin >= 1e-14 * zscale)
        {
          break;
        }
        poles[k] += Complex(-1e-12 * zscale, 1e-12 * zscale);
        ++out.collision_perturbations;
      }
    }
  };
  fix_collisions();

  CVector a;
  for (int iter = 0; iter < options.max_iter; ++iter)
  {
    CMatrix C(N, n);
    for (Eigen::Index j = 0; j < N; ++j)
    {
      for (Eigen::Index k = 0; k < n; ++k)
      {
        C(j, k) = 1.0 / (z[j] - poles[k]);
      }
    }
    CMatrix M(N, n + t + n);
    M.leftCols(n) = C;
    if (t > 0)
    {
      M.middleCols(n, t) = Phi;
    }
    M.rightCols(n) = -(f.asDiagonal() * C);
    const CMatrix WM = wdiag.asDiagonal() * M;
    const CVector x = lstsq(WM, wdiag.cwiseProduct(f));

    a = x.head(n + t);
    const CVector b = x.tail(n);

    VfIterate it;
    it.poles = poles;
    it.a = a;
    it.b = b;
    it.cond = cond2(WM);
    it.b_norm = b.norm();
    out.history.push_back(it);

    if (it.b_norm < options.tol)
    {
      out.converged = true;
      break;
    }
    poles = vf_pole_update(poles, b);
    fix_collisions();
  }

  // The loop's numerator belongs to the pre-relocation poles; recompute it at
  // the exit poles.
  {
    CMatrix C(N, n);
    for (Eigen::Index j = 0; j < N; ++j)
    {
      for (Eigen::Index k = 0; k < n; ++k)
      {
        C(j, k) = 1.0 / (z[j] - poles[k]);
      }
    }
    CMatrix M(N, n + t);
    M.leftCols(n) = C;
    if (t > 0)
    {
      M.rightCols(t) = Phi;
    }
    a = lstsq(CMatrix(wdiag.asDiagonal() * M), wdiag.cwiseProduct(f));
  }

  out.model = PartialFraction(poles, a.head(n), tail, t > 0 ? CVector(a.tail(t)) : CVector(),
                              false);
  return out;
}

} // namespace ratfit
