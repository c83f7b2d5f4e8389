// Copyright (c) the ratfit contributors
// SPDX-License-Identifier: Apache-2.0

#include "ratfit/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ratfit/linalg.hpp"
#include "ratfit/synth.hpp"

namespace ratfit
{

const char *stop_reason_name(StopReason reason)
{
  switch (reason)
  {
  case StopReason::grad_tol:
    return "grad_tol";
  case StopReason::step_tol:
    return "step_tol";
  case StopReason::max_iter:
    return "max_iter";
  case StopReason::line_search_failure:
    return "line_search_failure";
  }
  return "unknown";
}

GnResult gauss_newton(const GnFunction &fn, RVector x0, const GnOptions &options)
{
  if (options.max_iter < 0 || options.grad_tol <= 0.0 || options.step_tol <= 0.0 ||
      options.armijo_c <= 0.0 || options.armijo_c >= 1.0 || options.backtrack_factor <= 0.0 ||
      options.backtrack_factor >= 1.0 || options.svd_truncation <= 0.0)
  {
    throw std::invalid_argument("gauss_newton: options out of range");
  }
  GnResult res;
  res.x = std::move(x0);
  RVector r;
  RMatrix J;
  {
    auto eval = fn(res.x, true);
    r = std::move(eval.first);
    J = std::move(eval.second);
  }
  double rn = r.norm();
  res.trajectory.push_back(rn);

  for (;;)
  {
    const RVector grad = J.transpose() * r;
    if (grad.norm() <= options.grad_tol * std::max(1.0, rn))
    {
      res.converged = true;
      res.reason = StopReason::grad_tol;
      break;
    }
    if (res.iterations >= options.max_iter)
    {
      res.reason = StopReason::max_iter;
      break;
    }

    Eigen::JacobiSVD<RMatrix> svd(J, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RVector &s = svd.singularValues();
    const double cutoff = s.size() > 0 ? options.svd_truncation * s[0] : 0.0;
    RVector coeffs = svd.matrixU().transpose() * r;
    for (Eigen::Index i = 0; i < s.size(); ++i)
    {
      coeffs[i] = s[i] > cutoff && s[i] > 0.0 ? -coeffs[i] / s[i] : 0.0;
    }
    const RVector d = svd.matrixV() * coeffs;
    if (d.norm() <= options.step_tol * std::max(1.0, res.x.norm()))
    {
      res.converged = true;
      res.reason = StopReason::step_tol;
      break;
    }
    const double slope = 2.0 * grad.dot(d);
    const double rn2 = rn * rn;

    double t = 1.0;
    bool accepted = false;
    RVector xt, rt;
    while (t >= 1e-14)
    {
      xt = res.x + t * d;
      ++res.line_search_evals;
      try
      {
        rt = fn(xt, false).first;
        // Difference form: the sum rn2 + c t slope rounds back to rn2 once the
        // decrease term drops below eps * rn2, which would accept no-progress
        // steps at tiny t instead of reporting a line-search failure.
        if (rt.squaredNorm() - rn2 <= options.armijo_c * t * slope)
        {
          accepted = true;
          break;
        }
      }
      catch (const domain_error &)
      {
        // Trial point outside the evaluator's domain; shrink and retry.
      }
      t *= options.backtrack_factor;
    }
    if (!accepted)
    {
      res.reason = StopReason::line_search_failure;
      break;
    }

    const double step_norm = t * d.norm();
    res.x = xt;
    auto eval = fn(res.x, true);
    r = std::move(eval.first);
    J = std::move(eval.second);
    rn = r.norm();
    res.trajectory.push_back(rn);
    ++res.iterations;

    if (step_norm <= options.step_tol * std::max(1.0, res.x.norm()))
    {
      res.converged = true;
      res.reason = StopReason::step_tol;
      break;
    }
  }

  res.residual_norm = rn;
  res.gradient_norm = (J.transpose() * r).norm();
  return res;
}

namespace
{

// Exact-conjugation closure preserving count and importance order: off-axis
// poles are emitted together with their exact conjugate (consuming the best
// matching partner from the opposite half-plane when one exists); near-axis
// poles are snapped to the real axis; a pair that no longer fits the remaining
// budget degrades to its real part.
CVector symmetrize_poles(const CVector &in)
{
  const Eigen::Index n = in.size();
  CVector work = in;
  for (Eigen::Index i = 0; i < n; ++i)
  {
    if (std::abs(work[i].imag()) < 1e-10 * std::abs(work[i]))
    {
      work[i] = Complex(work[i].real(), 0.0);
    }
  }
  CVector out(n);
  Eigen::Index filled = 0;
  std::vector<char> used(n, 0);
  for (Eigen::Index i = 0; i < n && filled < n; ++i)
  {
    if (used[i])
    {
      continue;
    }
    used[i] = 1;
    const Complex lam = work[i];
    if (lam.imag() == 0.0)
    {
      out[filled++] = lam;
      continue;
    }
    if (filled + 2 <= n)
    {
      Eigen::Index best = -1;
      double best_dist = std::numeric_limits<double>::infinity();
      for (Eigen::Index j = 0; j < n; ++j)
      {
        if (used[j] || work[j].imag() * lam.imag() >= 0.0)
        {
          continue;
        }
        const double dist = std::abs(work[j] - std::conj(lam));
        if (dist < best_dist)
        {
          best_dist = dist;
          best = j;
        }
      }
      if (best >= 0)
      {
        used[best] = 1;
      }
      out[filled++] = lam;
      out[filled++] = std::conj(lam);
    }
    else
    {
      out[filled++] = Complex(lam.real(), 0.0);
    }
  }
  return out;
}

// Shift colliding entries apart with real offsets; real_pairs keeps adjacent
// exact-conjugate pairs intact (a real shift preserves conjugation).
void enforce_distinct(CVector &poles, double scale, bool real_pairs)
{
  const Eigen::Index n = poles.size();
  auto unit_start = [&](Eigen::Index i)
  {
    if (!real_pairs)
    {
      return i;
    }
    if (i > 0 && poles[i] == std::conj(poles[i - 1]) && poles[i].imag() != 0.0 &&
        (i < 2 || poles[i - 1] != std::conj(poles[i - 2])))
    {
      return i - 1;
    }
    return i;
  };
  const double tol = 1e-10 * scale;
  for (int pass = 0; pass < 64; ++pass)
  {
    bool moved = false;
    for (Eigen::Index i = 0; i < n; ++i)
    {
      for (Eigen::Index j = i + 1; j < n; ++j)
      {
        if (std::abs(poles[i] - poles[j]) > tol)
        {
          continue;
        }
        const Eigen::Index start = unit_start(j);
        const double delta = scale * 1e-4 * (pass + 1);
        poles[start] += delta;
        if (real_pairs && start + 1 < n && poles[start].imag() != 0.0)
        {
          poles[start + 1] = std::conj(poles[start]);
        }
        moved = true;
      }
    }
    if (!moved)
    {
      return;
    }
  }
}

} // namespace

CVector aaa_init_poles(const SampleSet &samples, int n, bool real_symmetric, double aaa_tol)
{
  if (n < 0)
  {
    throw std::invalid_argument("aaa_init_poles: negative degree");
  }
  if (samples.size() < n + 2)
  {
    throw std::invalid_argument("aaa_init_poles: need at least n + 2 samples");
  }
  if (n == 0)
  {
    return CVector();
  }
  AaaOptions opt;
  opt.max_degree = n;
  opt.tol = aaa_tol;
  const AaaResult res = aaa_fit(samples, opt);
  CVector poles = res.model.order() >= 2 ? barycentric_poles(res.model) : CVector();

  // Importance order: largest residue magnitude first, ties by original index.
  std::vector<Eigen::Index> order(poles.size());
  if (poles.size() > 0)
  {
    const CVector residues = barycentric_residues(res.model, poles);
    for (Eigen::Index i = 0; i < poles.size(); ++i)
    {
      order[i] = i;
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b)
                     { return std::abs(residues[a]) > std::abs(residues[b]); });
  }

  const double scale = samples.scale();
  CVector out(n);
  Eigen::Index filled = 0;
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(order.size()) && filled < n; ++i)
  {
    out[filled++] = poles[order[i]];
  }
  if (filled < n)
  {
    const CVector pad = vf_auto_poles(samples, n);
    for (Eigen::Index i = 0; i < pad.size() && filled < n; ++i)
    {
      Complex cand = pad[i];
      for (int attempt = 1; attempt < 64; ++attempt)
      {
        bool clear = true;
        for (Eigen::Index k = 0; k < filled; ++k)
        {
          if (std::abs(cand - out[k]) < 1e-8 * scale)
          {
            clear = false;
            break;
          }
        }
        if (clear)
        {
          break;
        }
        cand += Complex(0.013 * scale * attempt, 0.029 * scale * attempt);
      }
      out[filled++] = cand;
    }
  }
  if (real_symmetric)
  {
    out = symmetrize_poles(out);
  }
  enforce_distinct(out, scale, real_symmetric);
  return out;
}

CVector random_init_poles(const SampleSet &samples, int n, std::uint64_t seed,
                          bool real_symmetric)
{
  if (n < 0)
  {
    throw std::invalid_argument("random_init_poles: negative degree");
  }
  Rng rng(seed);
  const CVector &z = samples.points();
  double xmin = z[0].real(), xmax = z[0].real();
  double ymin = z[0].imag(), ymax = z[0].imag();
  for (Eigen::Index j = 1; j < z.size(); ++j)
  {
    xmin = std::min(xmin, z[j].real());
    xmax = std::max(xmax, z[j].real());
    ymin = std::min(ymin, z[j].imag());
    ymax = std::max(ymax, z[j].imag());
  }
  const double scale = samples.scale();
  const bool axis_hug = xmax - xmin < 1e-3 * scale;
  auto draw_re = [&]()
  { return axis_hug ? -rng.uniform(scale / 1000.0, scale / 10.0) : rng.uniform(xmin, xmax); };

  CVector out(n);
  if (!real_symmetric)
  {
    for (int k = 0; k < n; ++k)
    {
      const double re = draw_re();
      const double im = rng.uniform(ymin, ymax);
      out[k] = Complex(re, im);
    }
  }
  else
  {
    const double ytop = std::max({std::abs(ymin), std::abs(ymax), 1e-3 * scale});
    for (int k = 0; k + 1 < n; k += 2)
    {
      const double re = draw_re();
      const double im = rng.uniform(ytop / 100.0, ytop);
      out[k] = Complex(re, im);
      out[k + 1] = Complex(re, -im);
    }
    if (n % 2 != 0)
    {
      out[n - 1] = Complex(draw_re(), 0.0);
    }
  }
  enforce_distinct(out, scale, real_symmetric);
  return out;
}

const char *method_name(Method method)
{
  switch (method)
  {
  case Method::aaa:
    return "aaa";
  case Method::sk:
    return "sk";
  case Method::vf:
    return "vf";
  case Method::gn_poly:
    return "gn-poly";
  case Method::gn_poly_real:
    return "gn-poly-real";
  case Method::gn_pf:
    return "gn-pf";
  case Method::gn_pf_real:
    return "gn-pf-real";
  }
  return "unknown";
}

std::optional<Method> method_from_name(const std::string &name)
{
  static const std::pair<const char *, Method> table[] = {
      {"aaa", Method::aaa},          {"sk", Method::sk},
      {"vf", Method::vf},            {"gn-poly", Method::gn_poly},
      {"gn-poly-real", Method::gn_poly_real}, {"gn-pf", Method::gn_pf},
      {"gn-pf-real", Method::gn_pf_real}};
  for (const auto &[key, value] : table)
  {
    if (name == key)
    {
      return value;
    }
  }
  return std::nullopt;
}

bool is_gn_method(Method method)
{
  return method == Method::gn_poly || method == Method::gn_poly_real ||
         method == Method::gn_pf || method == Method::gn_pf_real;
}

namespace
{

// Denominator coefficients representing prod_k (z - lambda_k) in `basis`,
// fitted over the sample points and normalized to unit norm.
CVector poly_coeffs_from_poles(const SampleSet &samples, const CVector &poles,
                               const Basis &basis, bool realness)
{
  const CVector &z = samples.points();
  CVector vals = CVector::Ones(z.size());
  for (Eigen::Index j = 0; j < z.size(); ++j)
  {
    for (Eigen::Index k = 0; k < poles.size(); ++k)
    {
      vals[j] *= z[j] - poles[k];
    }
  }
  const double top = vals.cwiseAbs().maxCoeff();
  if (top > 0.0)
  {
    vals /= top;
  }
  const CMatrix Psi = basis.vandermonde(z);
  CVector b;
  if (realness)
  {
    RMatrix A(2 * Psi.rows(), Psi.cols());
    A.topRows(Psi.rows()) = Psi.real();
    A.bottomRows(Psi.rows()) = Psi.imag();
    RVector rhs(2 * vals.size());
    rhs.head(vals.size()) = vals.real();
    rhs.tail(vals.size()) = vals.imag();
    b = lstsq(A, rhs).cast<Complex>();
  }
  else
  {
    b = lstsq(Psi, vals);
  }
  const double bn = b.norm();
  if (bn == 0.0)
  {
    throw std::runtime_error("fit_rational: degenerate denominator initialization");
  }
  return b / bn;
}

CVector initial_poles_for(const SampleSet &samples, const FitOptions &opt, bool realness)
{
  switch (opt.init)
  {
  case InitKind::aaa:
    return aaa_init_poles(samples, opt.n, realness, opt.aaa_tol);
  case InitKind::random:
    return random_init_poles(samples, opt.n, opt.seed, realness);
  case InitKind::vf_auto:
    return vf_auto_poles(samples, opt.n);
  case InitKind::user:
    if (opt.user_poles.size() != opt.n)
    {
      throw std::invalid_argument("fit_rational: user init needs n poles");
    }
    return opt.user_poles;
  }
  throw std::logic_error("fit_rational: unknown init kind");
}

} // namespace

double pf_gradient_norm(const SampleSet &samples, const Weight &weight, int m,
                        const PartialFraction &model)
{
  const int n = static_cast<int>(model.poles.size());
  // A degenerate model (effective numerator degree below m) carries a shorter
  // tail than the (m, n) problem wants; fall back to the default basis then.
  const Basis *tail = model.tail.size() > 0 && model.tail_basis.degree() == m - n
                          ? &model.tail_basis
                          : nullptr;
  VarproProblem pb(samples, weight, Parameterization::pf, m, n, nullptr, nullptr, tail);
  const VarproEval ev = pb.evaluate(VarproProblem::pack_poles(model.poles), true);
  return (ev.J.transpose() * ev.r).norm();
}

FitOutcome fit_rational(const SampleSet &samples, const Weight &weight, const FitOptions &opt)
{
  if (opt.m < 0 || opt.n < 0)
  {
    throw std::invalid_argument("fit_rational: degrees must be nonnegative");
  }
  FitOutcome out;
  FitReport &rep = out.report;
  rep.method = method_name(opt.method);
  rep.num_degree = opt.m;
  rep.den_degree = opt.n;
  rep.gradient_norm = std::numeric_limits<double>::quiet_NaN();
  const CVector &z = samples.points();
  const double fnorm = samples.values().norm();
  auto record_residuals = [&](const CVector &model_values)
  {
    const CVector diff = samples.values() - model_values;
    rep.residual_norm = diff.norm();
    rep.normalized_residual = fnorm > 0.0 ? rep.residual_norm / fnorm : rep.residual_norm;
    rep.weighted_residual_norm = weight.apply(diff).norm();
  };

  switch (opt.method)
  {
  case Method::aaa:
  {
    if (weight.kind() != WeightKind::identity)
    {
      throw std::invalid_argument("fit_rational: aaa supports the identity weight only");
    }
    AaaOptions ao;
    ao.max_degree = opt.n;
    ao.tol = opt.aaa_tol;
    const AaaResult ar = aaa_fit(samples, ao);
    out.bary = ar.model;
    const int k = ar.model.order() - 1;
    rep.num_degree = rep.den_degree = k;
    record_residuals(evaluate(ar.model, z));
    rep.iterations = static_cast<int>(ar.history.size());
    rep.converged = ar.reached_tol;
    rep.diagnostics["froissart_removed"] = ar.froissart_removed;
    try
    {
      const CVector poles = barycentric_poles(ar.model);
      if (poles.size() > 0)
      {
        const CVector residues = barycentric_residues(ar.model, poles);
        PartialFraction pf_view(poles, residues, Basis(), CVector(), false);
        rep.gradient_norm = pf_gradient_norm(samples, weight, k, pf_view);
      }
    }
    catch (const std::exception &)
    {
      // Pole extraction or evaluation failed; leave the gradient as NaN.
    }
    break;
  }
  case Method::sk:
  {
    const Basis num = opt.num_basis != nullptr ? *opt.num_basis
                                               : Basis::scaled_legendre_auto(opt.m, z);
    const Basis den = opt.den_basis != nullptr ? *opt.den_basis
                                               : Basis::scaled_legendre_auto(opt.n, z);
    const SkResult sr = sk_fit(samples, opt.m, opt.n, num, den, weight, opt.sk);
    out.poly = sr.model;
    record_residuals(evaluate(sr.model, z));
    rep.iterations = static_cast<int>(sr.history.size());
    rep.converged = sr.converged;
    if (!sr.history.empty())
    {
      rep.diagnostics["cond"] = sr.history.back().cond;
      rep.diagnostics["step_norm"] = sr.history.back().step_norm;
    }
    try
    {
      VarproProblem pb(samples, weight, Parameterization::poly, opt.m, opt.n, &num, &den);
      const VarproEval ev = pb.evaluate(VarproProblem::pack_poly(sr.model.b), true);
      rep.gradient_norm = (ev.J.transpose() * ev.r).norm();
    }
    catch (const std::exception &)
    {
    }
    break;
  }
  case Method::vf:
  {
    CVector init_poles;
    if (opt.init != InitKind::vf_auto)
    {
      init_poles = initial_poles_for(samples, opt, false);
    }
    const VfResult vr = vf_fit(samples, opt.m, opt.n, init_poles, weight, opt.vf,
                               opt.tail_basis);
    out.pf = vr.model;
    record_residuals(evaluate(vr.model, z));
    rep.iterations = static_cast<int>(vr.history.size());
    rep.converged = vr.converged;
    rep.diagnostics["collision_perturbations"] = vr.collision_perturbations;
    if (!vr.history.empty())
    {
      rep.diagnostics["cond"] = vr.history.back().cond;
      rep.diagnostics["b_norm"] = vr.history.back().b_norm;
    }
    try
    {
      rep.gradient_norm = pf_gradient_norm(samples, weight, opt.m, vr.model);
    }
    catch (const std::exception &)
    {
    }
    break;
  }
  case Method::gn_poly:
  case Method::gn_poly_real:
  case Method::gn_pf:
  case Method::gn_pf_real:
  {
    const bool realness =
        opt.method == Method::gn_poly_real || opt.method == Method::gn_pf_real;
    const bool pf_form = opt.method == Method::gn_pf || opt.method == Method::gn_pf_real;
    const Parameterization par =
        pf_form ? (realness ? Parameterization::pf_real : Parameterization::pf)
                : (realness ? Parameterization::poly_real : Parameterization::poly);
    VarproProblem pb(samples, weight, par, opt.m, opt.n, opt.num_basis, opt.den_basis,
                     opt.tail_basis);

    RVector x0;
    if (opt.init == InitKind::user && opt.user_x0.size() > 0)
    {
      x0 = opt.user_x0;
      if (x0.size() != pb.dim())
      {
        throw std::invalid_argument("fit_rational: user_x0 has the wrong length");
      }
    }
    else
    {
      const CVector poles = initial_poles_for(samples, opt, realness);
      switch (par)
      {
      case Parameterization::pf:
        x0 = VarproProblem::pack_poles(poles);
        break;
      case Parameterization::pf_real:
        x0 = VarproProblem::pack_quadratics(poles);
        break;
      case Parameterization::poly:
        x0 = VarproProblem::pack_poly(
            poly_coeffs_from_poles(samples, poles, pb.den_basis(), false));
        break;
      case Parameterization::poly_real:
        x0 = poly_coeffs_from_poles(samples, poles, pb.den_basis(), true).real();
        break;
      }
    }

    const GnFunction fn = [&pb](const RVector &x, bool need_jacobian)
    {
      VarproEval ev = pb.evaluate(x, need_jacobian);
      return std::pair<RVector, RMatrix>(std::move(ev.r), std::move(ev.J));
    };
    out.gn = gauss_newton(fn, x0, opt.gn);
    rep.iterations = out.gn.iterations;
    rep.converged = out.gn.converged;
    rep.gradient_norm = out.gn.gradient_norm;
    rep.diagnostics["line_search_evals"] = out.gn.line_search_evals;
    rep.diagnostics["stop_reason"] = static_cast<double>(out.gn.reason);
    const VarproEval final_ev = pb.evaluate(out.gn.x, false);
    rep.diagnostics["model_cond"] = final_ev.model_cond;
    if (pf_form)
    {
      out.pf = pb.pf_model(out.gn.x);
      record_residuals(evaluate(*out.pf, z));
    }
    else
    {
      out.poly = pb.poly_model(out.gn.x);
      record_residuals(evaluate(*out.poly, z));
    }
    break;
  }
  }
  return out;
}

} // namespace ratfit
