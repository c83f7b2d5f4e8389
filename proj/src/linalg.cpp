// Copyright (c) the ratfit contributors
// SPDX-License-Identifier: Apache-2.0

#include "ratfit/linalg.hpp"

#define LAPACK_COMPLEX_CPP
#include <lapacke.h>

#include <cmath>

namespace ratfit
{

namespace
{

template <typename Matrix>
Matrix pinv_impl(const Matrix &A, double rtol)
{
  Eigen::JacobiSVD<Matrix> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto &sv = svd.singularValues();
  Matrix sigma_inv = Matrix::Zero(sv.size(), sv.size());
  const double cutoff = rtol * (sv.size() > 0 ? sv(0) : 0.0);
  for (Eigen::Index i = 0; i < sv.size(); ++i)
  {
    if (sv(i) > cutoff && sv(i) > 0.0)
    {
      sigma_inv(i, i) = 1.0 / sv(i);
    }
  }
  return svd.matrixV() * sigma_inv * svd.matrixU().adjoint();
}

template <typename Matrix>
double cond2_impl(const Matrix &A)
{
  Eigen::JacobiSVD<Matrix> svd(A);
  const auto &sv = svd.singularValues();
  if (sv.size() == 0)
  {
    return 0.0;
  }
  const double smin = sv(sv.size() - 1);
  if (smin <= 0.0)
  {
    return std::numeric_limits<double>::infinity();
  }
  return sv(0) / smin;
}

template <typename Matrix, typename Vector>
Vector lstsq_impl(const Matrix &A, const Vector &b, double rtol)
{
  Eigen::JacobiSVD<Matrix> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(rtol);
  return svd.solve(b);
}

} // namespace

ThinQR thin_qr(const CMatrix &A)
{
  if (A.rows() < A.cols())
  {
    throw std::invalid_argument("thin_qr: matrix has fewer rows than columns");
  }
  Eigen::HouseholderQR<CMatrix> qr(A);
  ThinQR out;
  out.Q = qr.householderQ() * CMatrix::Identity(A.rows(), A.cols());
  out.R = qr.matrixQR().topRows(A.cols()).triangularView<Eigen::Upper>();
  return out;
}

ThinQRReal thin_qr(const RMatrix &A)
{
  if (A.rows() < A.cols())
  {
    throw std::invalid_argument("thin_qr: matrix has fewer rows than columns");
  }
  Eigen::HouseholderQR<RMatrix> qr(A);
  ThinQRReal out;
  out.Q = qr.householderQ() * RMatrix::Identity(A.rows(), A.cols());
  out.R = qr.matrixQR().topRows(A.cols()).triangularView<Eigen::Upper>();
  return out;
}

CMatrix pinv(const CMatrix &A, double rtol)
{
  return pinv_impl(A, rtol);
}

RMatrix pinv(const RMatrix &A, double rtol)
{
  return pinv_impl(A, rtol);
}

double cond2(const CMatrix &A)
{
  return cond2_impl(A);
}

double cond2(const RMatrix &A)
{
  return cond2_impl(A);
}

CVector lstsq(const CMatrix &A, const CVector &b, double rtol)
{
  return lstsq_impl(A, b, rtol);
}

RVector lstsq(const RMatrix &A, const RVector &b, double rtol)
{
  return lstsq_impl(A, b, rtol);
}

CVector companion_roots(const CVector &coeffs)
{
  // Trim leading (highest-order) coefficients that are negligible relative to
  // the largest one, then form the companion matrix of the monic polynomial.
  const double cmax = coeffs.cwiseAbs().maxCoeff();
  if (coeffs.size() == 0 || cmax == 0.0)
  {
    throw std::invalid_argument("companion_roots: zero polynomial");
  }
  Eigen::Index d = coeffs.size() - 1;
  while (d > 0 && std::abs(coeffs[d]) <= 1e-13 * cmax)
  {
    --d;
  }
  if (d == 0)
  {
    return CVector(0);
  }
  CMatrix C = CMatrix::Zero(d, d);
  for (Eigen::Index i = 0; i + 1 < d; ++i)
  {
    C(i + 1, i) = 1.0;
  }
  for (Eigen::Index i = 0; i < d; ++i)
  {
    C(i, d - 1) = -coeffs[i] / coeffs[d];
  }
  // zgeev balances the matrix internally, which matters when coefficients span
  // many orders of magnitude.
  CVector w(d);
  lapack_int info = LAPACKE_zgeev(
      LAPACK_COL_MAJOR, 'N', 'N', static_cast<lapack_int>(d),
      reinterpret_cast<lapack_complex_double *>(C.data()), static_cast<lapack_int>(d),
      reinterpret_cast<lapack_complex_double *>(w.data()), nullptr, 1, nullptr, 1);
  if (info != 0)
  {
    throw std::runtime_error("companion_roots: zgeev failed with info " + std::to_string(info));
  }
  return w;
}

CVector generalized_eig_finite(const CMatrix &A, const CMatrix &B, double beta_tol)
{
  if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows())
  {
    throw std::invalid_argument("generalized_eig_finite: pencil matrices must be square and equal size");
  }
  const lapack_int n = static_cast<lapack_int>(A.rows());
  CMatrix Ac = A, Bc = B;
  CVector alpha(n), beta(n);
  lapack_int info = LAPACKE_zggev(
      LAPACK_COL_MAJOR, 'N', 'N', n, reinterpret_cast<lapack_complex_double *>(Ac.data()), n,
      reinterpret_cast<lapack_complex_double *>(Bc.data()), n,
      reinterpret_cast<lapack_complex_double *>(alpha.data()),
      reinterpret_cast<lapack_complex_double *>(beta.data()), nullptr, 1, nullptr, 1);
  if (info != 0)
  {
    throw std::runtime_error("generalized_eig_finite: zggev failed with info " +
                             std::to_string(info));
  }
  std::vector<Complex> finite;
  finite.reserve(n);
  for (lapack_int i = 0; i < n; ++i)
  {
    if (std::abs(beta[i]) > beta_tol * (std::abs(alpha[i]) + std::abs(beta[i])))
    {
      finite.push_back(alpha[i] / beta[i]);
    }
  }
  return Eigen::Map<const CVector>(finite.data(), static_cast<Eigen::Index>(finite.size()));
}

} // namespace ratfit
