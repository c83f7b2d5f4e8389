// Copyright (c) the ratfit contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "ratfit/types.hpp"

namespace ratfit
{

// Thin (economy) QR factorization A = Q R with Q of size rows(A) x cols(A).
// Requires rows >= cols. No column pivoting, so range(Q) contains range(A)
// with equality exactly when A has full column rank.
struct ThinQR
{
  CMatrix Q;
  CMatrix R;
};
ThinQR thin_qr(const CMatrix &A);
struct ThinQRReal
{
  RMatrix Q;
  RMatrix R;
};
ThinQRReal thin_qr(const RMatrix &A);

// Moore-Penrose pseudoinverse via SVD with singular values below
// rtol * sigma_max treated as zero.
CMatrix pinv(const CMatrix &A, double rtol = 1e-12);
RMatrix pinv(const RMatrix &A, double rtol = 1e-12);

// 2-norm condition number sigma_max / sigma_min (inf if sigma_min == 0).
double cond2(const CMatrix &A);
double cond2(const RMatrix &A);

// Least-squares solution of min ||A x - b||_2 with the same singular value
// truncation as pinv; minimal-norm solution within the kept subspace.
CVector lstsq(const CMatrix &A, const CVector &b, double rtol = 1e-12);
RVector lstsq(const RMatrix &A, const RVector &b, double rtol = 1e-12);

// Roots of the polynomial c_0 + c_1 z + ... + c_d z^d (monomial coefficients,
// c_d != 0 after trimming trailing near-zeros) as eigenvalues of the balanced
// companion matrix.
CVector companion_roots(const CVector &coeffs);

// Finite eigenvalues of the pencil (A, B). Eigenvalues with |beta| below
// beta_tol * (|alpha| + |beta|) are classified as infinite and dropped.
CVector generalized_eig_finite(const CMatrix &A, const CMatrix &B, double beta_tol = 1e-12);

} // namespace ratfit
