// Copyright (c) the ratfit contributors
// SPDX-License-Identifier: Apache-2.0

#include "ratfit/models.hpp"

#include <algorithm>
#include <cmath>

#include "ratfit/linalg.hpp"

namespace ratfit
{

namespace
{

Complex horner(const CVector &coeffs, Complex z)
{
  Complex p = 0.0;
  for (Eigen::Index i = coeffs.size(); i-- > 0;)
  {
    p = p * z + coeffs[i];
  }
  return p;
}

CVector derivative_coeffs(const CVector &coeffs)
{
  if (coeffs.size() <= 1)
  {
    return CVector::Zero(1);
  }
  CVector d(coeffs.size() - 1);
  for (Eigen::Index i = 1; i < coeffs.size(); ++i)
  {
    d[i - 1] = static_cast<double>(i) * coeffs[i];
  }
  return d;
}

bool is_real_vector(const CVector &v)
{
  for (Eigen::Index i = 0; i < v.size(); ++i)
  {
    if (v[i].imag() != 0.0)
    {
      return false;
    }
  }
  return true;
}

} // namespace

PolyRatio::PolyRatio(Basis num, Basis den, CVector a_in, CVector b_in, bool real)
  : num_basis(std::move(num)), den_basis(std::move(den)), a(std::move(a_in)),
    b(std::move(b_in)), real_coeff(real)
{
  if (a.size() != num_basis.size() || b.size() != den_basis.size())
  {
    throw std::invalid_argument("PolyRatio: coefficient length does not match basis size");
  }
  if (b.cwiseAbs().maxCoeff() == 0.0)
  {
    throw std::invalid_argument("PolyRatio: zero denominator");
  }
  if (real_coeff &&
      (!num_basis.real_coefficients() || !den_basis.real_coefficients() ||
       !is_real_vector(a) || !is_real_vector(b)))
  {
    throw std::invalid_argument("PolyRatio: real_coeff set but model is not real");
  }
}

PartialFraction::PartialFraction(CVector poles_in, CVector residues_in, Basis tail_basis_in,
                                 CVector tail_in, bool real)
  : poles(std::move(poles_in)), residues(std::move(residues_in)),
    tail_basis(std::move(tail_basis_in)), tail(std::move(tail_in)), real_sym(real)
{
  if (poles.size() != residues.size())
  {
    throw std::invalid_argument("PartialFraction: poles and residues differ in length");
  }
  if (tail.size() != 0 && tail.size() != tail_basis.size())
  {
    throw std::invalid_argument("PartialFraction: tail length does not match its basis");
  }
  for (Eigen::Index i = 0; i < poles.size(); ++i)
  {
    for (Eigen::Index j = i + 1; j < poles.size(); ++j)
    {
      if (poles[i] == poles[j])
      {
        throw std::invalid_argument("PartialFraction: repeated pole");
      }
    }
  }
  if (real_sym)
  {
    if (tail.size() != 0 && (!tail_basis.real_coefficients() || !is_real_vector(tail)))
    {
      throw std::invalid_argument("PartialFraction: real_sym set but tail is not real");
    }
    for (Eigen::Index i = 0; i < poles.size(); ++i)
    {
      if (poles[i].imag() == 0.0)
      {
        if (residues[i].imag() != 0.0)
        {
          throw std::invalid_argument("PartialFraction: real pole with complex residue");
        }
        continue;
      }
      bool matched = false;
      for (Eigen::Index j = 0; j < poles.size(); ++j)
      {
        if (poles[j] == std::conj(poles[i]) && residues[j] == std::conj(residues[i]))
        {
          matched = true;
          break;
        }
      }
      if (!matched)
      {
        throw std::invalid_argument("PartialFraction: real_sym set but poles/residues are not "
                                    "closed under conjugation");
      }
    }
  }
}

BarycentricRational::BarycentricRational(CVector nodes, CVector values, CVector weights)
  : nodes_(std::move(nodes)), values_(std::move(values)), weights_(std::move(weights))
{
  if (nodes_.size() != values_.size() || nodes_.size() != weights_.size())
  {
    throw std::invalid_argument("BarycentricRational: mismatched lengths");
  }
  if (nodes_.size() == 0)
  {
    throw std::invalid_argument("BarycentricRational: empty node set");
  }
  for (Eigen::Index i = 0; i < nodes_.size(); ++i)
  {
    for (Eigen::Index j = i + 1; j < nodes_.size(); ++j)
    {
      if (nodes_[i] == nodes_[j])
      {
        throw std::invalid_argument("BarycentricRational: duplicate node");
      }
    }
  }
  const double wn = weights_.norm();
  if (wn == 0.0)
  {
    throw std::invalid_argument("BarycentricRational: zero weight vector");
  }
  weights_ /= wn;
}

Complex evaluate(const PolyRatio &r, Complex z)
{
  const Complex p = r.num_basis.evaluate(z).cwiseProduct(r.a).sum();
  const Complex q = r.den_basis.evaluate(z).cwiseProduct(r.b).sum();
  if (q == 0.0)
  {
    throw domain_error("PolyRatio: denominator vanishes at evaluation point");
  }
  return p / q;
}

Complex evaluate(const PartialFraction &r, Complex z)
{
  Complex s = 0.0;
  for (Eigen::Index k = 0; k < r.poles.size(); ++k)
  {
    if (z == r.poles[k])
    {
      throw domain_error("PartialFraction: evaluation point equals pole " + std::to_string(k));
    }
    s += r.residues[k] / (z - r.poles[k]);
  }
  if (r.tail.size() > 0)
  {
    s += r.tail_basis.evaluate(z).cwiseProduct(r.tail).sum();
  }
  return s;
}

Complex evaluate(const BarycentricRational &r, Complex z)
{
  const CVector &t = r.nodes();
  for (Eigen::Index k = 0; k < t.size(); ++k)
  {
    if (std::abs(z - t[k]) <= 1e-13 * std::max(std::abs(z), std::abs(t[k])))
    {
      return r.node_values()[k];
    }
  }
  Complex num = 0.0, den = 0.0;
  for (Eigen::Index k = 0; k < t.size(); ++k)
  {
    const Complex c = r.weights()[k] / (z - t[k]);
    num += c * r.node_values()[k];
    den += c;
  }
  if (den == 0.0)
  {
    throw domain_error("BarycentricRational: denominator vanishes at evaluation point");
  }
  return num / den;
}

namespace
{

template <typename Model>
CVector evaluate_batch(const Model &r, const CVector &points)
{
  CVector out(points.size());
  for (Eigen::Index j = 0; j < points.size(); ++j)
  {
    try
    {
      out[j] = evaluate(r, points[j]);
    }
    catch (const domain_error &e)
    {
      throw domain_error(std::string(e.what()) + " (point index " + std::to_string(j) + ")");
    }
  }
  return out;
}

} // namespace

CVector evaluate(const PolyRatio &r, const CVector &points)
{
  return evaluate_batch(r, points);
}

CVector evaluate(const PartialFraction &r, const CVector &points)
{
  return evaluate_batch(r, points);
}

CVector evaluate(const BarycentricRational &r, const CVector &points)
{
  return evaluate_batch(r, points);
}

double residual_norm(const SampleSet &samples, const CVector &model_values)
{
  if (model_values.size() != samples.size())
  {
    throw std::invalid_argument("residual_norm: length mismatch");
  }
  return (samples.values() - model_values).norm();
}

PartialFraction to_partial_fraction(const PolyRatio &r, double tol_root_sep)
{
  const CVector qm = r.den_basis.to_monomial() * r.b;
  const CVector pm = r.num_basis.to_monomial() * r.a;
  const CVector roots = companion_roots(qm);
  const Eigen::Index n_eff = roots.size();
  if (n_eff >= 2)
  {
    double max_abs = 0.0;
    for (Eigen::Index i = 0; i < n_eff; ++i)
    {
      max_abs = std::max(max_abs, std::abs(roots[i]));
    }
    for (Eigen::Index i = 0; i < n_eff; ++i)
    {
      for (Eigen::Index j = i + 1; j < n_eff; ++j)
      {
        if (std::abs(roots[i] - roots[j]) <= tol_root_sep * max_abs)
        {
          throw conversion_error("to_partial_fraction: denominator has (nearly) repeated roots");
        }
      }
    }
  }

  // Monomial long division p = s * q + rem; the quotient becomes the tail.
  const double qmax = qm.cwiseAbs().maxCoeff();
  Eigen::Index dq = qm.size() - 1;
  while (dq > 0 && std::abs(qm[dq]) <= 1e-13 * qmax)
  {
    --dq;
  }
  CVector rem = pm;
  Eigen::Index dp = rem.size() - 1;
  const double pmax = std::max(rem.cwiseAbs().maxCoeff(), 1e-300);
  while (dp > 0 && std::abs(rem[dp]) <= 1e-14 * pmax)
  {
    --dp;
  }
  CVector quot;
  if (dq == 0)
  {
    // Constant denominator: the whole model is polynomial, no pole terms.
    quot = rem.head(dp + 1) / qm[0];
    rem.setZero();
  }
  else if (dp >= dq)
  {
    quot = CVector::Zero(dp - dq + 1);
    for (Eigen::Index i = dp; i >= dq; --i)
    {
      const Complex c = rem[i] / qm[dq];
      quot[i - dq] = c;
      for (Eigen::Index k = 0; k <= dq; ++k)
      {
        rem[i - dq + k] -= c * qm[k];
      }
    }
  }

  CVector residues(n_eff);
  const CVector qd = derivative_coeffs(qm.head(dq + 1));
  for (Eigen::Index k = 0; k < n_eff; ++k)
  {
    const Complex qp = horner(qd, roots[k]);
    // A repeated root reaches the residue stage with pairwise distance around
    // sqrt(eps), which can exceed tol_root_sep; q' at such a root is tiny
    // relative to its coefficient scale, so guard the division directly.
    double qd_scale = 0.0;
    const double rk = std::max(1.0, std::abs(roots[k]));
    double power = 1.0;
    for (Eigen::Index j = 0; j < qd.size(); ++j)
    {
      qd_scale += std::abs(qd[j]) * power;
      power *= rk;
    }
    if (std::abs(qp) <= 1e-7 * qd_scale)
    {
      throw conversion_error("to_partial_fraction: denominator has (nearly) repeated roots");
    }
    residues[k] = horner(rem, roots[k]) / qp;
  }

  Basis tail_basis;
  CVector tail;
  if (quot.size() > 0)
  {
    const int td = static_cast<int>(quot.size()) - 1;
    if (r.num_basis.kind() == BasisKind::lagrange_nodes)
    {
      tail_basis = Basis::monomial(td);
      tail = quot;
    }
    else
    {
      tail_basis = r.num_basis.truncated(td);
      tail = lstsq(tail_basis.to_monomial(), quot);
    }
  }
  return PartialFraction(roots, residues, tail_basis, tail, false);
}

} // namespace ratfit
