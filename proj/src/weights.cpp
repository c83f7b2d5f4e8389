// Copyright (c) the ratfit contributors
// SPDX-License-Identifier: Apache-2.0

#include "ratfit/weights.hpp"

#include <cmath>

namespace ratfit
{

Weight Weight::identity()
{
  return Weight{};
}

Weight Weight::diagonal(RVector w)
{
  if (w.size() == 0)
  {
    throw std::invalid_argument("Weight: empty diagonal");
  }
  for (Eigen::Index i = 0; i < w.size(); ++i)
  {
    if (!(w[i] > 0.0) || !std::isfinite(w[i]))
    {
      throw std::invalid_argument("Weight: diagonal entries must be positive and finite");
    }
  }
  Weight out;
  out.kind_ = WeightKind::diagonal;
  out.diag_ = std::move(w);
  return out;
}

Weight Weight::dense(CMatrix W)
{
  if (W.rows() == 0 || W.rows() != W.cols())
  {
    throw std::invalid_argument("Weight: dense weight must be square and nonempty");
  }
  Weight out;
  out.kind_ = WeightKind::dense;
  out.dense_ = std::move(W);
  return out;
}

int Weight::size() const
{
  switch (kind_)
  {
    case WeightKind::identity:
      return 0;
    case WeightKind::diagonal:
      return static_cast<int>(diag_.size());
    case WeightKind::dense:
      return static_cast<int>(dense_.rows());
  }
  return 0;
}

namespace
{

void check_len(const Weight &w, Eigen::Index n)
{
  if (w.size() != 0 && w.size() != n)
  {
    throw std::invalid_argument("Weight: operand length does not match weight size");
  }
}

} // namespace

CVector Weight::apply(const CVector &v) const
{
  check_len(*this, v.size());
  switch (kind_)
  {
    case WeightKind::identity:
      return v;
    case WeightKind::diagonal:
      return diag_.cast<Complex>().cwiseProduct(v);
    case WeightKind::dense:
      return dense_ * v;
  }
  return v;
}

CMatrix Weight::apply(const CMatrix &A) const
{
  check_len(*this, A.rows());
  switch (kind_)
  {
    case WeightKind::identity:
      return A;
    case WeightKind::diagonal:
      return diag_.cast<Complex>().asDiagonal() * A;
    case WeightKind::dense:
      return dense_ * A;
  }
  return A;
}

CVector Weight::apply_adjoint(const CVector &v) const
{
  check_len(*this, v.size());
  switch (kind_)
  {
    case WeightKind::identity:
      return v;
    case WeightKind::diagonal:
      return diag_.cast<Complex>().cwiseProduct(v);
    case WeightKind::dense:
      return dense_.adjoint() * v;
  }
  return v;
}

CMatrix Weight::as_matrix(int n) const
{
  check_len(*this, n);
  switch (kind_)
  {
    case WeightKind::identity:
      return CMatrix::Identity(n, n);
    case WeightKind::diagonal:
      return CMatrix(diag_.cast<Complex>().asDiagonal());
    case WeightKind::dense:
      return dense_;
  }
  return CMatrix::Identity(n, n);
}

CMatrix cauchy_mass(const CVector &points)
{
  const Eigen::Index n = points.size();
  for (Eigen::Index j = 0; j < n; ++j)
  {
    if (!(points[j].real() > 0.0))
    {
      throw std::invalid_argument("cauchy_mass: points must have positive real part (index " +
                                  std::to_string(j) + ")");
    }
  }
  CMatrix M(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
  {
    for (Eigen::Index k = 0; k < n; ++k)
    {
      M(j, k) = 1.0 / (points[j] + std::conj(points[k]));
    }
  }
  return M;
}

InverseSqrtFactorization inverse_sqrt_weight(const CMatrix &M, double sigma_cutoff)
{
  // M is Hermitian positive definite, so its SVD coincides with its
  // eigendecomposition M = U Sigma U^*; the one-sided Jacobi SVD retains good
  // relative accuracy for the small singular values.
  Eigen::JacobiSVD<CMatrix> svd(M, Eigen::ComputeThinU);
  InverseSqrtFactorization out;
  out.U = svd.matrixU();
  out.sigma = svd.singularValues();
  const double ratio =
      out.sigma.size() > 0 && out.sigma(0) > 0.0 ? out.sigma(out.sigma.size() - 1) / out.sigma(0)
                                                 : 0.0;
  if (!(ratio > sigma_cutoff))
  {
    throw ill_conditioned_error("inverse_sqrt_weight: relative singular value range " +
                                    std::to_string(ratio) + " below cutoff",
                                ratio);
  }
  RVector inv_sqrt(out.sigma.size());
  for (Eigen::Index i = 0; i < out.sigma.size(); ++i)
  {
    inv_sqrt(i) = 1.0 / std::sqrt(out.sigma(i));
  }
  out.W = Weight::dense(inv_sqrt.cast<Complex>().asDiagonal() * out.U.adjoint());
  return out;
}

Weight cauchy_weight(const CVector &points)
{
  return inverse_sqrt_weight(cauchy_mass(points)).W;
}

double whitening_error(const Weight &w, const CMatrix &M)
{
  const int n = static_cast<int>(M.rows());
  const CMatrix Wm = w.as_matrix(n);
  return (Wm * M * Wm.adjoint() - CMatrix::Identity(n, n)).norm();
}

double weighted_residual_norm(const SampleSet &samples, const CVector &model_values,
                              const Weight &w)
{
  if (model_values.size() != samples.size())
  {
    throw std::invalid_argument("weighted_residual_norm: length mismatch");
  }
  const CVector diff = samples.values() - model_values;
  return w.apply(diff).norm();
}

} // namespace ratfit
