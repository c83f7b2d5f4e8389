// Copyright (c) the ratfit contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "ratfit/bases.hpp"
#include "ratfit/types.hpp"

namespace ratfit
{

// r(z) = p(z)/q(z) with p = sum_k a_k phi_k and q = sum_k b_k psi_k.
struct PolyRatio
{
  Basis num_basis, den_basis;
  CVector a, b;
  // True when the model represents a real rational function (real-coefficient
  // bases and real expansion coefficients).
  bool real_coeff = false;

  PolyRatio() = default;
  PolyRatio(Basis num, Basis den, CVector a_in, CVector b_in, bool real = false);

  int num_degree() const { return num_basis.degree(); }
  int den_degree() const { return den_basis.degree(); }
};

// r(z) = sum_k rho_k / (z - lambda_k) + sum_k c_k phi_k. The tail holds
// m - n + 1 coefficients for a degree-(m, n) model and is empty when m = n - 1.
struct PartialFraction
{
  CVector poles, residues;
  Basis tail_basis;
  CVector tail;
  // True when the pole multiset is closed under conjugation with conjugate
  // residues and the tail is real, so r is a real rational function.
  bool real_sym = false;

  PartialFraction() = default;
  PartialFraction(CVector poles_in, CVector residues_in, Basis tail_basis_in, CVector tail_in,
                  bool real = false);

  int num_pole_terms() const { return static_cast<int>(poles.size()); }
};

// r(z) = sum_k w_k f_k / (z - t_k) / sum_k w_k / (z - t_k) with unit-norm
// weights; interpolates f_k at each node t_k.
class BarycentricRational
{
public:
  BarycentricRational() = default;
  BarycentricRational(CVector nodes, CVector values, CVector weights);

  int order() const { return static_cast<int>(nodes_.size()); }
  const CVector &nodes() const { return nodes_; }
  const CVector &node_values() const { return values_; }
  const CVector &weights() const { return weights_; }

private:
  CVector nodes_, values_, weights_;
};

// Point evaluation; throws domain_error if the denominator vanishes (PolyRatio),
// z hits a pole (PartialFraction), or the barycentric denominator vanishes away
// from a node. Barycentric evaluation returns the stored node value when z is
// within 1e-13 relative distance of a node.
Complex evaluate(const PolyRatio &r, Complex z);
Complex evaluate(const PartialFraction &r, Complex z);
Complex evaluate(const BarycentricRational &r, Complex z);

// Batch evaluation; domain errors identify the offending point index.
CVector evaluate(const PolyRatio &r, const CVector &points);
CVector evaluate(const PartialFraction &r, const CVector &points);
CVector evaluate(const BarycentricRational &r, const CVector &points);

// Unweighted data misfit ||f - r(Z)||_2.
double residual_norm(const SampleSet &samples, const CVector &model_values);
template <typename Model>
double residual_norm(const SampleSet &samples, const Model &r)
{
  return residual_norm(samples, evaluate(r, samples.points()));
}

// Expand p/q into poles, residues and a polynomial tail. The denominator is
// converted to monomial coefficients and its roots taken from the balanced
// companion matrix; residues are rho_k = p(lambda_k)/q'(lambda_k). Repeated
// roots (pairwise distance <= tol_root_sep * max |root|) are rejected with a
// conversion_error. The tail is re-expanded in the numerator basis truncated to
// the tail degree (monomial if the numerator basis is not degree-graded).
PartialFraction to_partial_fraction(const PolyRatio &r, double tol_root_sep = 1e-8);

} // namespace ratfit
