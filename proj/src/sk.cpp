// Copyright (c) the ratfit contributors
// SPDX-License-Identifier: Apache-2.0

#include "ratfit/sk.hpp"

#include <cmath>

#include "ratfit/linalg.hpp"

namespace ratfit
{

SkResult sk_fit(const SampleSet &samples, int m, int n, const Basis &num_basis,
                const Basis &den_basis, const Weight &weight, const SkOptions &options,
                const CVector *b_init)
{
  if (m < 0 || n < 0)
  {
    throw std::invalid_argument("sk_fit: negative degree");
  }
  if (num_basis.degree() != m || den_basis.degree() != n)
  {
    throw std::invalid_argument("sk_fit: basis degrees do not match (m, n)");
  }
  if (weight.kind() == WeightKind::dense)
  {
    throw std::invalid_argument("sk_fit: dense weights are not supported");
  }
  if (samples.size() < m + n + 2)
  {
    throw std::invalid_argument("sk_fit: need at least m + n + 2 samples");
  }
  const Complex psi00 = den_basis.evaluate(0.0)[0];
  if (psi00 == 0.0)
  {
    throw std::invalid_argument("sk_fit: denominator basis has psi_0(0) = 0");
  }

  const Eigen::Index N = samples.size();
  const CVector &f = samples.values();
  const CMatrix Phi = num_basis.vandermonde(samples.points());
  const CMatrix Psi = den_basis.vandermonde(samples.points());

  // Fixed part of the linearized residual q f - p once b_0 = psi0(0) is pinned.
  const CVector fixed = psi00 * Psi.col(0).cwiseProduct(f);
  CMatrix M(N, m + 1 + n);
  M.leftCols(m + 1) = -Phi;
  if (n > 0)
  {
    M.rightCols(n) = f.asDiagonal() * Psi.rightCols(n);
  }

  CVector wdiag;
  if (weight.kind() == WeightKind::diagonal)
  {
    if (weight.size() != N)
    {
      throw std::invalid_argument("sk_fit: weight length does not match sample count");
    }
    wdiag = weight.diag().cast<Complex>();
  }
  else
  {
    wdiag = CVector::Ones(N);
  }

  SkResult out;
  CVector b_prev;
  if (b_init != nullptr)
  {
    if (b_init->size() != n + 1)
    {
      throw std::invalid_argument("sk_fit: initial denominator has wrong length");
    }
    b_prev = *b_init;
  }
  else
  {
    b_prev = CVector::Zero(n + 1);
    b_prev[0] = psi00;
  }

  CVector a = CVector::Zero(m + 1);
  CVector b = b_prev;
  for (int iter = 0; iter < options.max_iter; ++iter)
  {
    const CVector den_prev = Psi * b_prev;
    CVector scale(N);
    for (Eigen::Index j = 0; j < N; ++j)
    {
      if (std::abs(den_prev[j]) < 1e-300)
      {
        throw domain_error("sk_fit: previous denominator vanishes at sample " +
                           std::to_string(j));
      }
      scale[j] = wdiag[j] / den_prev[j];
    }
    const CMatrix SM = scale.asDiagonal() * M;
    const CVector x = lstsq(SM, -scale.cwiseProduct(fixed));

    a = x.head(m + 1);
    b = CVector(n + 1);
    b[0] = psi00;
    b.tail(n) = x.tail(n);

    SkIterate it;
    it.a = a;
    it.b = b;
    it.cond = cond2(SM);
    it.step_norm = (b - b_prev).norm();
    out.history.push_back(it);

    if (it.step_norm < options.tol)
    {
      out.converged = true;
      break;
    }
    b_prev = b;
  }

  out.model = PolyRatio(num_basis, den_basis, a, b, false);
  return out;
}

} // namespace ratfit
