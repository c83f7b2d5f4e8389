// Copyright (c) the ratfit contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "ratfit/models.hpp"
#include "ratfit/types.hpp"
#include "ratfit/weights.hpp"

namespace ratfit
{

struct SkOptions
{
  int max_iter = 50;
  // Stop when ||b^(l) - b^(l-1)||_2 < tol.
  double tol = 1e-10;
};

struct SkIterate
{
  CVector a, b;
  double cond = 0.0; // condition number of the scaled stacked matrix
  double step_norm = 0.0;
};

struct SkResult
{
  PolyRatio model;
  std::vector<SkIterate> history;
  bool converged = false;
};

// Iteratively reweighted linearized least squares: at each pass solve
//   min_x || diag(w) diag(Psi b_prev)^{-1} (psi0(0)^2 f + [-Phi | diag(f) Psi_{:,1:n}] x) ||
// with the denominator's leading coefficient fixed at b_0 = psi0(0). Identity
// and diagonal weights only. An optional b_init (length n+1, used verbatim for
// the first left scaling) overrides the default start b = psi0(0) e_0; every
// solved iterate has b_0 = psi0(0) regardless.
SkResult sk_fit(const SampleSet &samples, int m, int n, const Basis &num_basis,
                const Basis &den_basis, const Weight &weight = Weight::identity(),
                const SkOptions &options = {}, const CVector *b_init = nullptr);

} // namespace ratfit
