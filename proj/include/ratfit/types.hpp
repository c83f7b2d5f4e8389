// Copyright (c) the ratfit contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <stdexcept>
#include <string>

namespace ratfit
{

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

// Thrown when an evaluation is requested at a point where the model is singular
// (sample equals a pole, denominator vanishes) or when parameters leave the
// domain of an evaluator (pole collision, coincident poles).
class domain_error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// Thrown when a model cannot be converted to the requested form (repeated
// denominator roots, inconsistent degrees).
class conversion_error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// Thrown when a factorization is too ill-conditioned to be trusted; carries the
// offending singular-value ratio.
class ill_conditioned_error : public std::runtime_error
{
public:
  ill_conditioned_error(const std::string &msg, double ratio)
    : std::runtime_error(msg), ratio_(ratio)
  {
  }
  double ratio() const { return ratio_; }

private:
  double ratio_;
};

// Sampled data: pairwise-distinct points z_j with values f_j.
class SampleSet
{
public:
  SampleSet() = default;
  SampleSet(CVector points, CVector values);

  int size() const { return static_cast<int>(z_.size()); }
  const CVector &points() const { return z_; }
  const CVector &values() const { return f_; }

  // Largest point magnitude, used as the length scale for collision tests.
  double scale() const;

private:
  CVector z_, f_;
};

// True when for every sample (z, f) some sample matches (conj z, conj f) within
// rtol relative to the data scales.
bool is_conjugate_symmetric(const SampleSet &samples, double rtol = 1e-12);

// Numeric summary of one fit, shared by every method.
struct FitReport
{
  std::string method;
  int num_degree = 0; // m
  int den_degree = 0; // n
  double residual_norm = 0.0;          // ||f - r(Z)||_2
  double normalized_residual = 0.0;    // residual_norm / ||f||_2
  double weighted_residual_norm = 0.0; // ||W (f - r(Z))||_2
  double gradient_norm = 0.0;          // first-order optimality, NaN if not computed
  int iterations = 0;
  bool converged = false;
  std::map<std::string, double> diagnostics;
};

} // namespace ratfit
