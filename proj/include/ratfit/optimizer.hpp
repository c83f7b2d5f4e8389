// Copyright (c) the ratfit contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "ratfit/aaa.hpp"
#include "ratfit/sk.hpp"
#include "ratfit/varpro.hpp"
#include "ratfit/vecfit.hpp"

namespace ratfit
{

struct GnOptions
{
  int max_iter = 100;
  double grad_tol = 1e-10;  // on ||J^T r|| / max(1, ||r||)
  double step_tol = 1e-12;  // on ||step|| / max(1, ||x||)
  double armijo_c = 1e-4;
  double backtrack_factor = 0.5;
  double svd_truncation = 1e-10; // relative cutoff for step directions
};

enum class StopReason
{
  grad_tol,
  step_tol,
  max_iter,
  line_search_failure
};
const char *stop_reason_name(StopReason reason);

struct GnResult
{
  RVector x;
  double residual_norm = 0.0;
  double gradient_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  StopReason reason = StopReason::max_iter;
  std::vector<double> trajectory; // ||r|| at each accepted iterate, including x0
  int line_search_evals = 0;
};

// fn(x, need_jacobian) returns the stacked residual and, when requested, its
// Jacobian; it throws domain_error for parameter values outside its domain
// (such trial points are rejected by the line search).
using GnFunction = std::function<std::pair<RVector, RMatrix>(const RVector &, bool)>;

// Gauss-Newton with an SVD-truncated step (singular directions below
// svd_truncation * sigma_max carry no step component) and Armijo backtracking.
GnResult gauss_newton(const GnFunction &fn, RVector x0, const GnOptions &options = {});

// Degree-n AAA poles for initialization: runs aaa_fit at degree n, keeps the n
// largest-residue finite poles (padding from vf_auto_poles if short). With
// real_symmetric the set is symmetrized into exact conjugate pairs. Requires
// N >= n + 2 samples.
CVector aaa_init_poles(const SampleSet &samples, int n, bool real_symmetric,
                       double aaa_tol = 1e-13);

// Seeded random poles drawn from the bounding box of the samples, reflected to
// negative real part when the data hugs the imaginary axis.
CVector random_init_poles(const SampleSet &samples, int n, std::uint64_t seed,
                          bool real_symmetric);

enum class Method
{
  aaa,
  sk,
  vf,
  gn_poly,
  gn_poly_real,
  gn_pf,
  gn_pf_real
};
const char *method_name(Method method);
std::optional<Method> method_from_name(const std::string &name);
bool is_gn_method(Method method);

enum class InitKind
{
  aaa,
  random,
  user,
  vf_auto // linearly spaced poles from vf_auto_poles (vf: let vf_fit choose)
};

struct FitOptions
{
  Method method = Method::gn_pf;
  int m = 0, n = 0;
  InitKind init = InitKind::aaa;
  std::uint64_t seed = 0;
  GnOptions gn;
  SkOptions sk;
  VfOptions vf;
  double aaa_tol = 1e-13;
  RVector user_x0;    // init = user, gn methods
  CVector user_poles; // init = user, vf (and pole-based gn methods if user_x0 empty)
  // Optional basis overrides; defaults are scaled_legendre fitted to the data
  // (real-interval variant for the *_real methods).
  const Basis *num_basis = nullptr;
  const Basis *den_basis = nullptr;
  const Basis *tail_basis = nullptr;
};

struct FitOutcome
{
  FitReport report;
  std::optional<PolyRatio> poly;
  std::optional<PartialFraction> pf;
  std::optional<BarycentricRational> bary;
  GnResult gn; // populated for gn methods
};

// Uniform fitting entry point: dispatches to aaa_fit / sk_fit / vf_fit or sets
// up the requested variable-projection problem and runs Gauss-Newton. The
// report's gradient norm is always measured through the matching
// variable-projection evaluator (poly for sk, pf for vf and aaa).
FitOutcome fit_rational(const SampleSet &samples, const Weight &weight,
                        const FitOptions &options);

// First-order optimality ||J^T r|| of the pole-parameterized problem of degree
// (m, #poles) at the model's poles, reusing the model's tail basis when it has
// a tail.
double pf_gradient_norm(const SampleSet &samples, const Weight &weight, int m,
                        const PartialFraction &model);

} // namespace ratfit
