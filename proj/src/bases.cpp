// Copyright (c) the ratfit contributors
// SPDX-License-Identifier: Apache-2.0

#include "ratfit/bases.hpp"

#include <cmath>

namespace ratfit
{

namespace
{

void check_degree(int degree)
{
  if (degree < 0)
  {
    throw std::invalid_argument("Basis: negative degree");
  }
}

// Dominant unit eigenvector of the 2x2 covariance of (Re z, Im z), with a fixed
// sign convention so the segment orientation is deterministic.
Eigen::Vector2d principal_direction(const CVector &points)
{
  const Eigen::Index n = points.size();
  double mx = 0.0, my = 0.0;
  for (Eigen::Index j = 0; j < n; ++j)
  {
    mx += points[j].real();
    my += points[j].imag();
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  Eigen::Matrix2d S = Eigen::Matrix2d::Zero();
  for (Eigen::Index j = 0; j < n; ++j)
  {
    const double dx = points[j].real() - mx, dy = points[j].imag() - my;
    S(0, 0) += dx * dx;
    S(0, 1) += dx * dy;
    S(1, 1) += dy * dy;
  }
  S(1, 0) = S(0, 1);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(S);
  Eigen::Vector2d u = es.eigenvectors().col(1); // largest eigenvalue
  if (u(0) < -1e-12 || (std::abs(u(0)) <= 1e-12 && u(1) < 0.0))
  {
    u = -u;
  }
  return u;
}

} // namespace

Basis Basis::monomial(int degree)
{
  check_degree(degree);
  Basis b;
  b.kind_ = BasisKind::monomial;
  b.degree_ = degree;
  return b;
}

Basis Basis::scaled_legendre(int degree, Complex e1, Complex e2)
{
  check_degree(degree);
  if (e1 == e2)
  {
    throw std::invalid_argument("Basis: degenerate segment");
  }
  Basis b;
  b.kind_ = BasisKind::scaled_legendre;
  b.degree_ = degree;
  b.e1_ = e1;
  b.e2_ = e2;
  return b;
}

Basis Basis::scaled_legendre_auto(int degree, const CVector &points)
{
  if (points.size() < 2)
  {
    throw std::invalid_argument("Basis: need at least two points to pick a segment");
  }
  const Eigen::Vector2d u = principal_direction(points);
  const Complex c(u(0), u(1));
  Eigen::Index jmin = 0, jmax = 0;
  double pmin = std::numeric_limits<double>::infinity(), pmax = -pmin;
  for (Eigen::Index j = 0; j < points.size(); ++j)
  {
    const double p = (std::conj(c) * points[j]).real();
    if (p < pmin)
    {
      pmin = p;
      jmin = j;
    }
    if (p > pmax)
    {
      pmax = p;
      jmax = j;
    }
  }
  return scaled_legendre(degree, points[jmin], points[jmax]);
}

Basis Basis::scaled_legendre_real(int degree, const CVector &points)
{
  if (points.size() < 1)
  {
    throw std::invalid_argument("Basis: empty point set");
  }
  double c = 0.0;
  for (Eigen::Index j = 0; j < points.size(); ++j)
  {
    c += points[j].real();
  }
  c /= static_cast<double>(points.size());
  double s = 0.0;
  for (Eigen::Index j = 0; j < points.size(); ++j)
  {
    s = std::max(s, std::abs(points[j] - c));
  }
  if (s == 0.0)
  {
    throw std::invalid_argument("Basis: degenerate segment");
  }
  return scaled_legendre(degree, Complex(c - s, 0.0), Complex(c + s, 0.0));
}

Basis Basis::lagrange_nodes(CVector nodes)
{
  if (nodes.size() < 1)
  {
    throw std::invalid_argument("Basis: lagrange_nodes needs at least one node");
  }
  for (Eigen::Index i = 0; i < nodes.size(); ++i)
  {
    for (Eigen::Index j = i + 1; j < nodes.size(); ++j)
    {
      if (nodes[i] == nodes[j])
      {
        throw std::invalid_argument("Basis: duplicate lagrange node");
      }
    }
  }
  Basis b;
  b.kind_ = BasisKind::lagrange_nodes;
  b.degree_ = static_cast<int>(nodes.size()) - 1;
  b.nodes_ = std::move(nodes);
  return b;
}

bool Basis::real_coefficients() const
{
  switch (kind_)
  {
    case BasisKind::monomial:
      return true;
    case BasisKind::scaled_legendre:
      return e1_.imag() == 0.0 && e2_.imag() == 0.0;
    case BasisKind::lagrange_nodes:
      for (Eigen::Index i = 0; i < nodes_.size(); ++i)
      {
        if (nodes_[i].imag() != 0.0)
        {
          return false;
        }
      }
      return true;
  }
  return false;
}

CVector Basis::evaluate(Complex z) const
{
  CVector v(degree_ + 1);
  switch (kind_)
  {
    case BasisKind::monomial:
    {
      Complex p = 1.0;
      for (int k = 0; k <= degree_; ++k)
      {
        v[k] = p;
        p *= z;
      }
      break;
    }
    case BasisKind::scaled_legendre:
    {
      const Complex mu = 0.5 * (e1_ + e2_), delta = 0.5 * (e2_ - e1_);
      const Complex x = (z - mu) / delta;
      v[0] = 1.0;
      if (degree_ >= 1)
      {
        v[1] = x;
      }
      for (int k = 1; k < degree_; ++k)
      {
        v[k + 1] = ((2.0 * k + 1.0) * x * v[k] - static_cast<double>(k) * v[k - 1]) /
                   static_cast<double>(k + 1);
      }
      break;
    }
    case BasisKind::lagrange_nodes:
    {
      // phi_k(z) = prod_{i != k} (z - t_i) via prefix/suffix products
      const Eigen::Index d = nodes_.size();
      CVector pre(d + 1), suf(d + 1);
      pre[0] = 1.0;
      for (Eigen::Index i = 0; i < d; ++i)
      {
        pre[i + 1] = pre[i] * (z - nodes_[i]);
      }
      suf[d] = 1.0;
      for (Eigen::Index i = d; i-- > 0;)
      {
        suf[i] = suf[i + 1] * (z - nodes_[i]);
      }
      for (Eigen::Index k = 0; k < d; ++k)
      {
        v[k] = pre[k] * suf[k + 1];
      }
      break;
    }
  }
  return v;
}

CMatrix Basis::vandermonde(const CVector &points) const
{
  CMatrix V(points.size(), degree_ + 1);
  for (Eigen::Index j = 0; j < points.size(); ++j)
  {
    V.row(j) = evaluate(points[j]).transpose();
  }
  return V;
}

CMatrix Basis::to_monomial() const
{
  const int d = degree_;
  CMatrix M = CMatrix::Zero(d + 1, d + 1);
  switch (kind_)
  {
    case BasisKind::monomial:
      M.setIdentity();
      break;
    case BasisKind::scaled_legendre:
    {
      // Legendre recurrence carried out on monomial coefficient vectors of z,
      // with x = (z - mu)/delta substituted at the P_1 stage.
      const Complex mu = 0.5 * (e1_ + e2_), delta = 0.5 * (e2_ - e1_);
      M(0, 0) = 1.0;
      if (d >= 1)
      {
        M(0, 1) = -mu / delta;
        M(1, 1) = 1.0 / delta;
      }
      for (int k = 1; k < d; ++k)
      {
        // P_{k+1} = ((2k+1) x P_k - k P_{k-1}) / (k+1), with
        // x P_k = (z P_k - mu P_k)/delta acting on coefficients.
        CVector xp = CVector::Zero(d + 1);
        for (int i = 0; i <= k; ++i)
        {
          xp[i + 1] += M(i, k) / delta;
          xp[i] -= mu / delta * M(i, k);
        }
        M.col(k + 1) =
            ((2.0 * k + 1.0) * xp - static_cast<double>(k) * M.col(k - 1)) / (k + 1.0);
      }
      break;
    }
    case BasisKind::lagrange_nodes:
    {
      for (Eigen::Index k = 0; k <= d; ++k)
      {
        CVector c = CVector::Zero(d + 1);
        c[0] = 1.0;
        int deg = 0;
        for (Eigen::Index i = 0; i <= d; ++i)
        {
          if (i == k)
          {
            continue;
          }
          for (int q = deg; q >= 0; --q)
          {
            c[q + 1] += c[q];
            c[q] *= -nodes_[i];
          }
          ++deg;
        }
        M.col(k) = c;
      }
      break;
    }
  }
  return M;
}

Basis Basis::truncated(int new_degree) const
{
  if (new_degree > degree_ || new_degree < 0)
  {
    throw std::invalid_argument("Basis: invalid truncation degree");
  }
  if (kind_ == BasisKind::lagrange_nodes)
  {
    throw std::invalid_argument("Basis: lagrange_nodes basis is not degree-graded");
  }
  Basis b = *this;
  b.degree_ = new_degree;
  return b;
}

} // namespace ratfit
