// Copyright (c) the ratfit contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "ratfit/optimizer.hpp"
#include "ratfit/types.hpp"
#include "ratfit/weights.hpp"

namespace ratfit
{

struct CompareConfig
{
  std::vector<Method> methods;
  int n_min = 2, n_max = 8;
  int m_offset = -1; // numerator degree m = n + m_offset
  InitKind init = InitKind::aaa;
  std::uint64_t seed = 0;
  WeightKind weight_kind = WeightKind::identity;
  RVector weight_diag;  // diagonal weights (weight_kind == diagonal)
  bool cauchy = false;  // dense inverse-sqrt Cauchy-mass weight
  bool timing = true;   // include wall-clock column in tables
  int threads = 0;      // 0: RATFIT_THREADS env var, else hardware concurrency
  // Start SK and VF from the gn-pf optimum of each degree and report gradients
  // through the pf evaluator (methods list is ignored in this mode).
  bool start_at_optimum = false;
  GnOptions gn;
  SkOptions sk;
  VfOptions vf;
  double aaa_tol = 1e-13;
};

struct CompareRow
{
  int m = 0, n = 0;
  Method method = Method::aaa;
  FitReport report;
  double wall_ms = 0.0;
  std::string error; // nonempty if this fit failed
};

struct CompareResult
{
  std::vector<CompareRow> rows; // sorted by (n, method order in config)
  std::map<std::string, double> metadata;
};

// Fit every (degree, method) combination, in parallel across a thread pool,
// with deterministic row order and per-row error capture.
CompareResult run_compare(const SampleSet &samples, const CompareConfig &config);

std::string compare_to_csv(const CompareResult &result, bool include_timing);
nlohmann::json compare_to_json(const CompareResult &result, bool include_timing);

struct JacobianCheck
{
  double max_rel_err = 0.0; // over entries with magnitude > floor
  int compared = 0;         // entries above the magnitude floor
  int rows = 0, cols = 0;
  int near_null = 0;          // Jacobian singular values below 1e-8 * sigma_max
  double orthogonality = 0.0; // || (model matrix)^* residual || at the instance
  double wf_norm = 0.0;       // || W f || of the instance
};

// Compare the analytic Jacobian of a seeded random instance against central
// finite differences.
JacobianCheck check_jacobian(Parameterization param, std::uint64_t seed, int num_samples,
                             int m, int n, double fd_step = 1e-6, double mag_floor = 1e-8);

} // namespace ratfit
