// Copyright (c) the ratfit contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "ratfit/models.hpp"
#include "ratfit/types.hpp"
#include "ratfit/weights.hpp"

namespace ratfit
{

struct VfOptions
{
  int max_iter = 50;
  // Stop when the pole-strength coefficients satisfy ||b||_2 < tol.
  double tol = 1e-10;
};

struct VfIterate
{
  CVector poles;       // poles used for this linear solve
  CVector a;           // residues then tail coefficients
  CVector b;           // denominator strengths (b_0 = 1 implicit)
  double cond = 0.0;   // condition number of the linear-step matrix
  double b_norm = 0.0; // ||b||_2 after the linear step
};

struct VfResult
{
  PartialFraction model;
  std::vector<VfIterate> history;
  bool converged = false;
  int collision_perturbations = 0;
};

// Default starting poles: imaginary parts linearly spaced over the sample
// imaginary range, real parts at -1/100 of that span; built as exact conjugate
// pairs when the data is conjugate-symmetric.
CVector vf_auto_poles(const SampleSet &samples, int n);

// Relocated poles: eigenvalues of diag(poles) - 1 b^T, the roots of the
// barycentric denominator 1 + sum_k b_k/(z - lambda_k).
CVector vf_pole_update(const CVector &poles, const CVector &b);

// Vector fitting: repeatedly solve the pole-relocation least-squares problem
//   min || diag(w) (f - [C(lambda), Phi, -diag(f) C(lambda)] x) ||
// (denominator 1 + sum_k b_k/(z - lambda_k)) and move the poles to the
// eigenvalues of diag(lambda) - 1 b^T. Requires m >= n - 1; identity and
// diagonal weights only. Empty initial_poles selects vf_auto_poles. A final
// least-squares numerator solve at the exit poles produces the model.
VfResult vf_fit(const SampleSet &samples, int m, int n, CVector initial_poles = {},
                const Weight &weight = Weight::identity(), const VfOptions &options = {},
                const Basis *tail_basis = nullptr);

} // namespace ratfit
