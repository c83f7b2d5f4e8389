// Copyright (c) the ratfit contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>

#include "ratfit/models.hpp"
#include "ratfit/types.hpp"
#include "ratfit/weights.hpp"

namespace ratfit
{

// How the denominator (the nonlinear part) is parameterized:
//   poly:      complex denominator coefficients b in a polynomial basis
//   poly_real: real denominator coefficients
//   pf:        complex poles lambda
//   pf_real:   real coefficients of quadratic factors z^2 + b_{2k-1} z + b_{2k}
//              (plus one linear factor z + b_n for odd n)
enum class Parameterization
{
  poly,
  poly_real,
  pf,
  pf_real
};

// One evaluation of the projected residual and (optionally) its Jacobian.
// Complex parameterizations fill the complex factors (basis_matrix, Q, R, K,
// L); real parameterizations factor the [Re; Im]-stacked matrix instead and
// fill the *_real fields. The stacked residual r and Jacobian J are always in
// real form: r = [Re residual; Im residual], and complex parameters split into
// [Re; Im] blocks of x.
struct VarproEval
{
  CVector residual; // complex residual W f - proj(W f), length N
  RVector r;        // stacked residual, length 2N
  RMatrix J;        // stacked Jacobian, 2N x dim; empty unless requested

  CMatrix basis_matrix; // Omega(b) or Lambda(lambda); complex cases
  CMatrix Q, R;
  CMatrix K, L; // Jacobian terms per complex parameter

  RMatrix basis_matrix_real; // [Re; Im] stacking; real cases
  RMatrix Q_real, R_real;
  RMatrix K_real, L_real;

  CVector linear; // eliminated linear coefficients (a, or [rho; c], or [a; c])
  double rnorm = 0.0;
  double model_cond = 0.0;     // condition number of the (stacked) model matrix
  double orthogonality = 0.0;  // || (model matrix)^* residual ||
  bool rank_deficient = false; // model matrix rank fell below its column count
};

// Variable-projection residual r(theta) = W f - P_{range(W M(theta))} W f for a
// fixed sample set, weight and degree (m, n). Parameters enter through the
// denominator only; numerator coefficients are eliminated exactly.
class VarproProblem
{
public:
  VarproProblem(SampleSet samples, Weight weight, Parameterization param, int m, int n,
                const Basis *num_basis = nullptr, const Basis *den_basis = nullptr,
                const Basis *tail_basis = nullptr);

  Parameterization parameterization() const { return param_; }
  int m() const { return m_; }
  int n() const { return n_; }
  int dim() const;          // real parameter count
  int residual_dim() const; // 2N
  const SampleSet &samples() const { return samples_; }
  const Weight &weight() const { return weight_; }
  const Basis &num_basis() const { return num_basis_; }
  const Basis &den_basis() const { return den_basis_; }
  const Basis &tail_basis() const { return tail_basis_; }
  double wf_norm() const { return wf_norm_; }

  // Throws domain_error when x is outside the evaluator's domain (vanishing
  // denominator at a sample, pole-sample collision, coincident poles).
  VarproEval evaluate(const RVector &x, bool need_jacobian) const;

  // Models with the linear coefficients resolved at x.
  PolyRatio poly_model(const RVector &x) const;      // poly / poly_real
  PartialFraction pf_model(const RVector &x) const;  // pf / pf_real

  // Parameter vector for a given denominator / pole set.
  static RVector pack_poly(const CVector &b);
  static CVector unpack_poly(const RVector &x);
  static RVector pack_poles(const CVector &lambda);
  static CVector unpack_poles(const RVector &x);
  // Real quadratic-factor coefficients from a conjugation-closed pole set.
  static RVector pack_quadratics(const CVector &lambda);

private:
  SampleSet samples_;
  Weight weight_;
  Parameterization param_;
  int m_, n_;
  Basis num_basis_, den_basis_, tail_basis_;
  CVector wf_;
  double wf_norm_ = 0.0;
};

// Convert the quadratic-factor representation (real coefficient vector b of
// length n, numerator block coefficients a of length n, tail coefficients) to
// poles, residues and tail. Conjugate pole pairs are constructed exactly;
// (nearly) repeated roots across all factors are rejected.
PartialFraction quad_to_partial_fraction(const RVector &b, const RVector &a,
                                         const Basis &tail_basis, const RVector &tail,
                                         double tol_root_sep = 1e-8);

} // namespace ratfit
