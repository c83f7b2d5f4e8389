// Copyright (c) the ratfit contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "ratfit/models.hpp"
#include "ratfit/types.hpp"

namespace ratfit
{

struct AaaOptions
{
  // Largest barycentric degree (support points - 1) to build.
  int max_degree = 100;
  // Stop when max_j |f_j - r(z_j)| <= tol * max_j |f_j|.
  double tol = 1e-13;
  // After the greedy loop, drop poles with residue magnitude below
  // 1e-13 * max|f| by removing their nearest support node, then re-solve the
  // weights once.
  bool froissart_cleanup = false;
};

// Snapshot after one greedy step.
struct AaaIterate
{
  std::vector<int> active; // support point indices in insertion order
  CVector weights;         // unit-norm barycentric weights
  CVector residuals;       // f - r over all samples, exactly 0 at active nodes
  double max_abs_residual = 0.0;
  double residual_norm = 0.0; // 2-norm over all samples
};

struct AaaResult
{
  BarycentricRational model;
  std::vector<AaaIterate> history;
  bool reached_tol = false;
  int froissart_removed = 0;
};

// Adaptive barycentric fit: greedily interpolate the worst-fit sample, then
// choose weights minimizing the linearized residual on the remaining samples
// (smallest singular vector of the Loewner matrix).
AaaResult aaa_fit(const SampleSet &samples, const AaaOptions &options = {});

// Divided-difference matrix with rows over non-support samples (ascending
// index) and columns over support points (insertion order):
// L_{j,k} = (f(z_j) - f(t_k)) / (z_j - t_k).
CMatrix build_loewner(const SampleSet &samples, const std::vector<int> &active);

// Finite poles of the barycentric form: finite eigenvalues of the arrowhead
// pencil built from nodes and weights.
CVector barycentric_poles(const BarycentricRational &r);

// Residues of r at given (simple, finite) poles.
CVector barycentric_residues(const BarycentricRational &r, const CVector &poles);

} // namespace ratfit
