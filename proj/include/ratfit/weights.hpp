// Copyright (c) the ratfit contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "ratfit/types.hpp"

namespace ratfit
{

enum class WeightKind
{
  identity,
  diagonal,
  dense
};

// Weighting operator W applied to residual vectors; identity, positive diagonal
// or a full complex matrix.
class Weight
{
public:
  Weight() = default;

  static Weight identity();
  static Weight diagonal(RVector w);
  static Weight dense(CMatrix W);

  WeightKind kind() const { return kind_; }
  // Row count for diagonal/dense, 0 for identity (applies to any length).
  int size() const;

  CVector apply(const CVector &v) const;
  CMatrix apply(const CMatrix &A) const;
  // W^* v, needed by the Jacobian coupling terms.
  CVector apply_adjoint(const CVector &v) const;
  // Explicit matrix form of size n x n.
  CMatrix as_matrix(int n) const;

  const RVector &diag() const { return diag_; }
  const CMatrix &matrix() const { return dense_; }

private:
  WeightKind kind_ = WeightKind::identity;
  RVector diag_;
  CMatrix dense_;
};

// Cauchy mass matrix M_jk = 1/(z_j + conj(z_k)); requires Re z_j > 0 for every
// point so that M is Hermitian positive definite.
CMatrix cauchy_mass(const CVector &points);

// SVD-based inverse square root of a Hermitian positive definite matrix.
struct InverseSqrtFactorization
{
  CMatrix U;     // unitary factor of M = U Sigma U^*
  RVector sigma; // singular values, descending
  Weight W;      // dense weight Sigma^{-1/2} U^*, so W M W^* = I
};

// Throws ill_conditioned_error (carrying sigma_min/sigma_max) when the relative
// singular value range drops below sigma_cutoff.
InverseSqrtFactorization inverse_sqrt_weight(const CMatrix &M, double sigma_cutoff = 1e-15);

Weight cauchy_weight(const CVector &points);

// Whitening quality ||W M W^* - I||_F.
double whitening_error(const Weight &w, const CMatrix &M);

// ||W (f - model_values)||_2.
double weighted_residual_norm(const SampleSet &samples, const CVector &model_values,
                              const Weight &w);

} // namespace ratfit
