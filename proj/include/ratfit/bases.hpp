// Copyright (c) the ratfit contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "ratfit/types.hpp"

namespace ratfit
{

enum class BasisKind
{
  monomial,
  scaled_legendre,
  lagrange_nodes
};

// Polynomial basis phi_0, ..., phi_degree used for numerators, denominators and
// partial-fraction tails.
//
//  - monomial:        phi_k(z) = z^k
//  - scaled_legendre: phi_k(z) = P_k(x(z)) with P_k the classic Legendre
//                     polynomials (P_k(1) = 1) and x an affine map sending the
//                     segment [e1, e2] to [-1, 1]
//  - lagrange_nodes:  phi_k(z) = prod_{i != k} (z - t_i); all members share the
//                     full degree, so this basis is not degree-graded
class Basis
{
public:
  Basis() = default;

  static Basis monomial(int degree);
  static Basis scaled_legendre(int degree, Complex e1, Complex e2);
  // Segment chosen from the data: endpoints are the samples of extreme
  // projection onto the principal direction of the point cloud.
  static Basis scaled_legendre_auto(int degree, const CVector &points);
  // Real-coefficient variant: interval [c - s, c + s] with c the mean of Re z_j
  // and s = max_j |z_j - c|, so x(z) = (z - c)/s has real coefficients.
  static Basis scaled_legendre_real(int degree, const CVector &points);
  static Basis lagrange_nodes(CVector nodes);

  BasisKind kind() const { return kind_; }
  int degree() const { return degree_; }
  int size() const { return degree_ + 1; }
  // True when every phi_k has real coefficients, so real expansion coefficients
  // give a real-valued function on the real axis.
  bool real_coefficients() const;
  // Endpoints of the mapped segment (scaled_legendre only).
  Complex e1() const { return e1_; }
  Complex e2() const { return e2_; }

  // Values phi_0(z), ..., phi_degree(z).
  CVector evaluate(Complex z) const;
  // N x (degree+1) matrix with entry (j, k) = phi_k(z_j).
  CMatrix vandermonde(const CVector &points) const;
  // Column k holds the monomial coefficients of phi_k (size degree+1).
  CMatrix to_monomial() const;
  // Same-kind basis of lower degree; not available for lagrange_nodes.
  Basis truncated(int new_degree) const;

private:
  BasisKind kind_ = BasisKind::monomial;
  int degree_ = 0;
  Complex e1_{-1.0, 0.0}, e2_{1.0, 0.0};
  CVector nodes_;
};

} // namespace ratfit
