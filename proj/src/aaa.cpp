// Copyright (c) the ratfit contributors
// SPDX-License-Identifier: Apache-2.0

#include "ratfit/aaa.hpp"

#include <algorithm>
#include <cmath>

#include "ratfit/linalg.hpp"

namespace ratfit
{

namespace
{

// Weights minimizing the linearized residual on the non-support samples:
// unit right singular vector of the smallest singular value of the Loewner
// matrix.
CVector solve_weights(const CMatrix &L)
{
  Eigen::JacobiSVD<CMatrix> svd(L, Eigen::ComputeFullV);
  return svd.matrixV().col(svd.matrixV().cols() - 1);
}

// Residual f - r over all samples with exact zeros at support nodes.
CVector barycentric_residual(const SampleSet &samples, const std::vector<int> &active,
                             const CVector &weights, const std::vector<char> &is_active)
{
  const CVector &z = samples.points();
  const CVector &f = samples.values();
  CVector r(samples.size());
  for (Eigen::Index j = 0; j < samples.size(); ++j)
  {
    if (is_active[j])
    {
      r[j] = 0.0;
      continue;
    }
    Complex num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < active.size(); ++k)
    {
      const Complex c = weights[static_cast<Eigen::Index>(k)] / (z[j] - z[active[k]]);
      num += c * f[active[k]];
      den += c;
    }
    // A vanishing denominator means z_j sits on a pole of the current fit;
    // flag it as infinitely bad so the greedy step interpolates it next.
    r[j] = den == 0.0 ? Complex(std::numeric_limits<double>::infinity(), 0.0)
                      : Complex(f[j] - num / den);
  }
  return r;
}

BarycentricRational make_model(const SampleSet &samples, const std::vector<int> &active,
                               const CVector &weights)
{
  CVector nodes(active.size()), values(active.size());
  for (std::size_t k = 0; k < active.size(); ++k)
  {
    nodes[static_cast<Eigen::Index>(k)] = samples.points()[active[k]];
    values[static_cast<Eigen::Index>(k)] = samples.values()[active[k]];
  }
  return BarycentricRational(nodes, values, weights);
}

} // namespace

CMatrix build_loewner(const SampleSet &samples, const std::vector<int> &active)
{
  if (active.empty())
  {
    throw std::invalid_argument("build_loewner: empty support set");
  }
  std::vector<char> is_active(samples.size(), 0);
  for (int idx : active)
  {
    if (idx < 0 || idx >= samples.size())
    {
      throw std::invalid_argument("build_loewner: support index out of range");
    }
    is_active[idx] = 1;
  }
  const Eigen::Index rows = samples.size() - static_cast<Eigen::Index>(active.size());
  CMatrix L(rows, active.size());
  const CVector &z = samples.points();
  const CVector &f = samples.values();
  Eigen::Index row = 0;
  for (Eigen::Index j = 0; j < samples.size(); ++j)
  {
    if (is_active[j])
    {
      continue;
    }
    for (std::size_t k = 0; k < active.size(); ++k)
    {
      L(row, static_cast<Eigen::Index>(k)) =
          (f[j] - f[active[k]]) / (z[j] - z[active[k]]);
    }
    ++row;
  }
  return L;
}

AaaResult aaa_fit(const SampleSet &samples, const AaaOptions &options)
{
  const Eigen::Index N = samples.size();
  if (N < options.max_degree + 2)
  {
    throw std::invalid_argument("aaa_fit: need at least degree + 2 samples");
  }
  if (options.tol < 0.0)
  {
    throw std::invalid_argument("aaa_fit: negative tolerance");
  }
  const double fmax = samples.values().cwiseAbs().maxCoeff();

  AaaResult out;
  std::vector<int> active;
  std::vector<char> is_active(N, 0);
  CVector residual = samples.values(); // residual of the empty fit
  CVector weights;

  for (int ell = 0; ell <= options.max_degree; ++ell)
  {
    // Greedy pick: worst currently-fit sample, lowest index on ties.
    int jstar = -1;
    double worst = -1.0;
    for (Eigen::Index j = 0; j < N; ++j)
    {
      if (!is_active[j] && std::abs(residual[j]) > worst)
      {
        worst = std::abs(residual[j]);
        jstar = static_cast<int>(j);
      }
    }
    active.push_back(jstar);
    is_active[jstar] = 1;

    weights = solve_weights(build_loewner(samples, active));
    residual = barycentric_residual(samples, active, weights, is_active);

    AaaIterate it;
    it.active = active;
    it.weights = weights;
    it.residuals = residual;
    it.max_abs_residual = residual.cwiseAbs().maxCoeff();
    it.residual_norm = residual.norm();
    out.history.push_back(std::move(it));

    if (out.history.back().max_abs_residual <= options.tol * fmax)
    {
      out.reached_tol = true;
      break;
    }
  }

  if (options.froissart_cleanup && active.size() >= 2)
  {
    BarycentricRational model = make_model(samples, active, weights);
    const CVector poles = barycentric_poles(model);
    if (poles.size() > 0)
    {
      const CVector residues = barycentric_residues(model, poles);
      std::vector<char> drop_node(active.size(), 0);
      for (Eigen::Index p = 0; p < poles.size(); ++p)
      {
        if (std::abs(residues[p]) >= 1e-13 * fmax)
        {
          continue;
        }
        // Drop the support node nearest the spurious pole.
        std::size_t knear = 0;
        double dist = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < active.size(); ++k)
        {
          const double d = std::abs(samples.points()[active[k]] - poles[p]);
          if (d < dist)
          {
            dist = d;
            knear = k;
          }
        }
        drop_node[knear] = 1;
      }
      std::vector<int> kept;
      for (std::size_t k = 0; k < active.size(); ++k)
      {
        if (!drop_node[k])
        {
          kept.push_back(active[k]);
        }
        else
        {
          is_active[active[k]] = 0;
          ++out.froissart_removed;
        }
      }
      if (out.froissart_removed > 0 && !kept.empty())
      {
        active = std::move(kept);
        weights = solve_weights(build_loewner(samples, active));
        residual = barycentric_residual(samples, active, weights, is_active);
        AaaIterate it;
        it.active = active;
        it.weights = weights;
        it.residuals = residual;
        it.max_abs_residual = residual.cwiseAbs().maxCoeff();
        it.residual_norm = residual.norm();
        out.history.push_back(std::move(it));
      }
    }
  }

  out.model = make_model(samples, active, weights);
  return out;
}

CVector barycentric_poles(const BarycentricRational &r)
{
  const Eigen::Index k = r.order();
  if (k < 2)
  {
    throw std::invalid_argument("barycentric_poles: need at least two nodes");
  }
  // Arrowhead pencil: finite eigenvalues of (A, E) are the zeros of the
  // barycentric denominator sum_k w_k/(z - t_k).
  CMatrix A = CMatrix::Zero(k + 1, k + 1), E = CMatrix::Zero(k + 1, k + 1);
  for (Eigen::Index j = 0; j < k; ++j)
  {
    A(0, j + 1) = r.weights()[j];
    A(j + 1, 0) = 1.0;
    A(j + 1, j + 1) = r.nodes()[j];
    E(j + 1, j + 1) = 1.0;
  }
  return generalized_eig_finite(A, E, 1e-12);
}

CVector barycentric_residues(const BarycentricRational &r, const CVector &poles)
{
  CVector out(poles.size());
  for (Eigen::Index p = 0; p < poles.size(); ++p)
  {
    Complex num = 0.0, dden = 0.0;
    for (Eigen::Index j = 0; j < r.order(); ++j)
    {
      const Complex d = poles[p] - r.nodes()[j];
      if (d == 0.0)
      {
        throw domain_error("barycentric_residues: pole coincides with node " + std::to_string(j));
      }
      num += r.weights()[j] * r.node_values()[j] / d;
      dden -= r.weights()[j] / (d * d);
    }
    if (dden == 0.0)
    {
      throw domain_error("barycentric_residues: vanishing denominator derivative");
    }
    out[p] = num / dden;
  }
  return out;
}

} // namespace ratfit
