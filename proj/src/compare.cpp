// Copyright (c) the ratfit contributors
// SPDX-License-Identifier: Apache-2.0

#include "ratfit/compare.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <thread>

#include "ratfit/io.hpp"
#include "ratfit/linalg.hpp"
#include "ratfit/synth.hpp"

namespace ratfit
{

namespace
{

int resolve_threads(int configured, std::size_t tasks)
{
  int t = configured;
  if (t <= 0)
  {
    if (const char *env = std::getenv("RATFIT_THREADS"))
    {
      t = std::atoi(env);
    }
  }
  if (t <= 0)
  {
    t = static_cast<int>(std::thread::hardware_concurrency());
  }
  if (t <= 0)
  {
    t = 1;
  }
  return static_cast<int>(std::min<std::size_t>(t, std::max<std::size_t>(tasks, 1)));
}

Weight build_weight(const SampleSet &samples, const CompareConfig &config,
                    std::map<std::string, double> &metadata)
{
  if (config.cauchy)
  {
    const Weight w = cauchy_weight(samples.points());
    metadata["whitening_error"] = whitening_error(w, cauchy_mass(samples.points()));
    return w;
  }
  switch (config.weight_kind)
  {
  case WeightKind::identity:
    return Weight::identity();
  case WeightKind::diagonal:
    if (config.weight_diag.size() != samples.size())
    {
      throw std::invalid_argument("compare: diagonal weight length does not match samples");
    }
    return Weight::diagonal(config.weight_diag);
  case WeightKind::dense:
    throw std::invalid_argument("compare: dense weights are available via the cauchy option");
  }
  throw std::logic_error("compare: unknown weight kind");
}

void check_compatibility(const CompareConfig &config, const Weight &weight)
{
  if (config.n_min < 0 || config.n_max < config.n_min)
  {
    throw std::invalid_argument("compare: invalid degree range");
  }
  const std::vector<Method> methods =
      config.start_at_optimum ? std::vector<Method>{Method::gn_pf, Method::sk, Method::vf}
                              : config.methods;
  if (methods.empty())
  {
    throw std::invalid_argument("compare: no methods selected");
  }
  for (Method mth : methods)
  {
    const std::string name = method_name(mth);
    if (weight.kind() == WeightKind::dense &&
        (mth == Method::sk || mth == Method::vf || mth == Method::aaa))
    {
      throw std::invalid_argument("compare: method " + name +
                                  " is incompatible with the cauchy (dense) weight");
    }
    if (weight.kind() != WeightKind::identity && mth == Method::aaa)
    {
      throw std::invalid_argument("compare: method aaa requires the identity weight");
    }
    const bool pole_based = mth == Method::vf || mth == Method::gn_pf ||
                            mth == Method::gn_pf_real || mth == Method::aaa;
    if (pole_based && config.m_offset < -1)
    {
      throw std::invalid_argument("compare: method " + name + " requires m >= n - 1");
    }
    if (!pole_based && config.n_min + config.m_offset < 0)
    {
      throw std::invalid_argument("compare: method " + name + " requires m >= 0");
    }
  }
}

void run_pool(std::size_t tasks, int threads, const std::function<void(std::size_t)> &body)
{
  std::atomic<std::size_t> next{0};
  auto worker = [&]()
  {
    for (;;)
    {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks)
      {
        return;
      }
      body(i);
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t)
  {
    pool.emplace_back(worker);
  }
  worker();
  for (std::thread &t : pool)
  {
    t.join();
  }
}

double elapsed_ms(std::chrono::steady_clock::time_point start)
{
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

// Denominator coefficients of prod_k (z - lambda_k) in `basis`, scaled so the
// leading coefficient matches sk_fit's pinned b_0 = psi_0(0).
CVector sk_denominator_from_poles(const SampleSet &samples, const CVector &poles,
                                  const Basis &basis)
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
  CVector b = lstsq(basis.vandermonde(z), vals);
  const Complex psi00 = basis.evaluate(0.0)[0];
  if (std::abs(b[0]) < 1e-12 * b.norm())
  {
    throw std::runtime_error("compare: optimum denominator has no constant-basis component");
  }
  return b * (psi00 / b[0]);
}

void run_start_at_optimum(const SampleSet &samples, const CompareConfig &config,
                          const Weight &weight, std::vector<CompareRow> &rows, int threads)
{
  const int degrees = config.n_max - config.n_min + 1;
  rows.resize(3 * degrees);
  run_pool(degrees, threads,
           [&](std::size_t i)
           {
             const int n = config.n_min + static_cast<int>(i);
             const int m = n + config.m_offset;
             CompareRow &row_gn = rows[3 * i];
             CompareRow &row_sk = rows[3 * i + 1];
             CompareRow &row_vf = rows[3 * i + 2];
             for (CompareRow *row : {&row_gn, &row_sk, &row_vf})
             {
               row->m = m;
               row->n = n;
             }
             row_gn.method = Method::gn_pf;
             row_sk.method = Method::sk;
             row_vf.method = Method::vf;

             FitOutcome gn_outcome;
             auto tic = std::chrono::steady_clock::now();
             try
             {
               FitOptions fo;
               fo.method = Method::gn_pf;
               fo.m = m;
               fo.n = n;
               fo.init = config.init;
               fo.seed = config.seed;
               fo.gn = config.gn;
               fo.aaa_tol = config.aaa_tol;
               gn_outcome = fit_rational(samples, weight, fo);
               row_gn.report = gn_outcome.report;
             }
             catch (const std::exception &e)
             {
               row_gn.error = e.what();
             }
             row_gn.wall_ms = elapsed_ms(tic);
             if (!row_gn.error.empty())
             {
               row_sk.error = row_vf.error = "gn-pf optimum unavailable";
               return;
             }
             const PartialFraction &opt_model = *gn_outcome.pf;
             const CVector &z = samples.points();
             const CVector &f = samples.values();
             const double fnorm = f.norm();

             tic = std::chrono::steady_clock::now();
             try
             {
               const Basis num = Basis::scaled_legendre_auto(m, z);
               const Basis den = Basis::scaled_legendre_auto(n, z);
               const CVector b0 = sk_denominator_from_poles(samples, opt_model.poles, den);
               const SkResult sr = sk_fit(samples, m, n, num, den, weight, config.sk, &b0);
               const CVector diff = f - evaluate(sr.model, z);
               row_sk.report.method = method_name(Method::sk);
               row_sk.report.num_degree = m;
               row_sk.report.den_degree = n;
               row_sk.report.residual_norm = diff.norm();
               row_sk.report.normalized_residual =
                   fnorm > 0.0 ? diff.norm() / fnorm : diff.norm();
               row_sk.report.weighted_residual_norm = weight.apply(diff).norm();
               row_sk.report.iterations = static_cast<int>(sr.history.size());
               row_sk.report.converged = sr.converged;
               const PartialFraction sk_pf = to_partial_fraction(sr.model);
               row_sk.report.gradient_norm = pf_gradient_norm(samples, weight, m, sk_pf);
             }
             catch (const std::exception &e)
             {
               row_sk.error = e.what();
             }
             row_sk.wall_ms = elapsed_ms(tic);

             tic = std::chrono::steady_clock::now();
             try
             {
               const VfResult vr = vf_fit(samples, m, n, opt_model.poles, weight, config.vf);
               const CVector diff = f - evaluate(vr.model, z);
               row_vf.report.method = method_name(Method::vf);
               row_vf.report.num_degree = m;
               row_vf.report.den_degree = n;
               row_vf.report.residual_norm = diff.norm();
               row_vf.report.normalized_residual =
                   fnorm > 0.0 ? diff.norm() / fnorm : diff.norm();
               row_vf.report.weighted_residual_norm = weight.apply(diff).norm();
               row_vf.report.iterations = static_cast<int>(vr.history.size());
               row_vf.report.converged = vr.converged;
               row_vf.report.gradient_norm = pf_gradient_norm(samples, weight, m, vr.model);
             }
             catch (const std::exception &e)
             {
               row_vf.error = e.what();
             }
             row_vf.wall_ms = elapsed_ms(tic);
           });
}

} // namespace

CompareResult run_compare(const SampleSet &samples, const CompareConfig &config)
{
  CompareResult result;
  const Weight weight = build_weight(samples, config, result.metadata);
  check_compatibility(config, weight);

  if (config.start_at_optimum)
  {
    const int threads =
        resolve_threads(config.threads, 3 * (config.n_max - config.n_min + 1));
    run_start_at_optimum(samples, config, weight, result.rows, threads);
    return result;
  }

  struct Task
  {
    int n;
    Method method;
  };
  std::vector<Task> tasks;
  for (int n = config.n_min; n <= config.n_max; ++n)
  {
    for (Method mth : config.methods)
    {
      tasks.push_back({n, mth});
    }
  }
  result.rows.resize(tasks.size());
  const int threads = resolve_threads(config.threads, tasks.size());
  run_pool(tasks.size(), threads,
           [&](std::size_t i)
           {
             const Task &task = tasks[i];
             CompareRow &row = result.rows[i];
             row.n = task.n;
             row.m = task.n + config.m_offset;
             row.method = task.method;
             const auto tic = std::chrono::steady_clock::now();
             try
             {
               FitOptions fo;
               fo.method = task.method;
               fo.m = row.m;
               fo.n = row.n;
               fo.init = config.init;
               fo.seed = config.seed;
               fo.gn = config.gn;
               fo.sk = config.sk;
               fo.vf = config.vf;
               fo.aaa_tol = config.aaa_tol;
               const FitOutcome outcome = fit_rational(samples, weight, fo);
               row.report = outcome.report;
             }
             catch (const std::exception &e)
             {
               row.report.method = method_name(task.method);
               row.error = e.what();
             }
             row.wall_ms = elapsed_ms(tic);
           });
  return result;
}

namespace
{

std::string fmt(double v)
{
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string csv_escape(const std::string &s)
{
  if (s.find_first_of(",\"\n") == std::string::npos)
  {
    return s;
  }
  std::string out = "\"";
  for (char c : s)
  {
    if (c == '"')
    {
      out += '"';
    }
    out += c;
  }
  out += '"';
  return out;
}

} // namespace

std::string compare_to_csv(const CompareResult &result, bool include_timing)
{
  std::ostringstream out;
  for (const auto &[key, value] : result.metadata)
  {
    out << "# " << key << ',' << fmt(value) << '\n';
  }
  out << "m,n,method,residual_norm,normalized_residual,weighted_residual_norm,gradient_norm,"
         "iterations,converged,error";
  if (include_timing)
  {
    out << ",wall_ms";
  }
  out << '\n';
  for (const CompareRow &row : result.rows)
  {
    out << row.m << ',' << row.n << ',' << method_name(row.method) << ','
        << fmt(row.report.residual_norm) << ',' << fmt(row.report.normalized_residual) << ','
        << fmt(row.report.weighted_residual_norm) << ',' << fmt(row.report.gradient_norm)
        << ',' << row.report.iterations << ',' << (row.report.converged ? 1 : 0) << ','
        << csv_escape(row.error);
    if (include_timing)
    {
      out << ',' << fmt(row.wall_ms);
    }
    out << '\n';
  }
  return out.str();
}

nlohmann::json compare_to_json(const CompareResult &result, bool include_timing)
{
  nlohmann::json out;
  nlohmann::json meta = nlohmann::json::object();
  for (const auto &[key, value] : result.metadata)
  {
    meta[key] = value;
  }
  out["metadata"] = meta;
  nlohmann::json rows = nlohmann::json::array();
  for (const CompareRow &row : result.rows)
  {
    nlohmann::json jr;
    jr["m"] = row.m;
    jr["n"] = row.n;
    jr["method"] = method_name(row.method);
    jr["report"] = report_to_json(row.report);
    if (!row.error.empty())
    {
      jr["error"] = row.error;
    }
    if (include_timing)
    {
      jr["wall_ms"] = row.wall_ms;
    }
    rows.push_back(jr);
  }
  out["rows"] = rows;
  return out;
}

JacobianCheck check_jacobian(Parameterization param, std::uint64_t seed, int num_samples,
                             int m, int n, double fd_step, double mag_floor)
{
  if (num_samples < 2 || m < 0 || n < 0)
  {
    throw std::invalid_argument("check_jacobian: invalid sizes");
  }
  Rng rng(seed);
  CVector z(num_samples), f(num_samples);
  for (int j = 0; j < num_samples; ++j)
  {
    for (;;)
    {
      const Complex cand(rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0));
      bool clear = true;
      for (int i = 0; i < j; ++i)
      {
        if (std::abs(z[i] - cand) < 1e-3)
        {
          clear = false;
          break;
        }
      }
      if (clear)
      {
        z[j] = cand;
        break;
      }
    }
    // The data scale sets which Jacobian entries clear mag_floor; relative
    // finite-difference noise is scale-invariant, so the scale is chosen to
    // keep floor-straddling entries (the noisy ones) out of the comparison.
    f[j] = 2e-6 * Complex(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
  }
  const SampleSet samples(z, f);

  const bool realness =
      param == Parameterization::poly_real || param == Parameterization::pf_real;
  const bool pf_form = param == Parameterization::pf || param == Parameterization::pf_real;

  // Nonlinear parameters from roots placed on an annulus clear of the sample
  // box, conjugate-closed for the real parameterizations. Pole separation and
  // denominator-value spread are kept moderate so the finite-difference
  // comparison stays well above its rounding floor.
  const bool poly_form = !pf_form;
  const double rad_lo = poly_form ? 25.0 : 3.2;
  const double rad_hi = poly_form ? 35.0 : 4.5;
  const double min_sep = 1.3;
  CVector roots(n);
  {
    Eigen::Index pos = 0;
    const int pairs = realness ? n / 2 : 0;
    for (int k = 0; k < pairs; ++k)
    {
      for (;;)
      {
        const double r = rng.uniform(rad_lo, rad_hi);
        const double th = rng.uniform(0.3, M_PI - 0.3);
        const Complex cand = std::polar(r, th);
        bool clear = true;
        for (Eigen::Index i = 0; i < pos; ++i)
        {
          if (std::abs(roots[i] - cand) < min_sep)
          {
            clear = false;
            break;
          }
        }
        if (clear)
        {
          roots[pos++] = cand;
          roots[pos] = std::conj(roots[pos - 1]);
          ++pos;
          break;
        }
      }
    }
    if (realness && n % 2 != 0)
    {
      const double r = rng.uniform(rad_lo, rad_hi);
      roots[pos++] = Complex(rng.uniform(0.0, 1.0) < 0.5 ? -r : r, 0.0);
    }
    while (pos < n)
    {
      const double r = rng.uniform(rad_lo, rad_hi);
      const double th = rng.uniform(0.0, 2.0 * M_PI);
      const Complex cand = std::polar(r, th);
      bool clear = true;
      for (Eigen::Index i = 0; i < pos; ++i)
      {
        if (std::abs(roots[i] - cand) < min_sep)
        {
          clear = false;
          break;
        }
      }
      if (clear)
      {
        roots[pos++] = cand;
      }
    }
  }

  Basis num = Basis::monomial(m);
  Basis den = Basis::monomial(n);
  VarproProblem problem(samples, Weight::identity(), param, m, n, pf_form ? nullptr : &num,
                        pf_form ? nullptr : &den, nullptr);

  RVector x;
  if (pf_form)
  {
    x = realness ? VarproProblem::pack_quadratics(roots) : VarproProblem::pack_poles(roots);
  }
  else
  {
    // Monomial coefficients of prod (z - root_k).
    CVector coeff = CVector::Zero(n + 1);
    coeff[0] = 1.0;
    for (int k = 0; k < n; ++k)
    {
      CVector next = CVector::Zero(n + 1);
      for (int q = 0; q <= k; ++q)
      {
        next[q + 1] += coeff[q];
        next[q] -= roots[k] * coeff[q];
      }
      coeff = next;
    }
    coeff /= coeff.norm();
    if (realness)
    {
      x = coeff.real();
    }
    else
    {
      x = VarproProblem::pack_poly(coeff);
    }
  }

  const VarproEval ev = problem.evaluate(x, true);
  JacobianCheck out;
  out.rows = static_cast<int>(ev.J.rows());
  out.cols = static_cast<int>(ev.J.cols());
  out.orthogonality = ev.orthogonality;
  out.wf_norm = problem.wf_norm();
  if (ev.J.cols() > 0)
  {
    const Eigen::JacobiSVD<RMatrix> svd(ev.J);
    const RVector sv = svd.singularValues();
    for (Eigen::Index i = 0; i < sv.size(); ++i)
    {
      if (sv[i] < 1e-8 * sv[0])
      {
        ++out.near_null;
      }
    }
  }
  for (Eigen::Index k = 0; k < ev.J.cols(); ++k)
  {
    RVector xp = x, xm = x;
    xp[k] += fd_step;
    xm[k] -= fd_step;
    const RVector rp = problem.evaluate(xp, false).r;
    const RVector rm = problem.evaluate(xm, false).r;
    const RVector fd = (rp - rm) / (2.0 * fd_step);
    for (Eigen::Index i = 0; i < fd.size(); ++i)
    {
      const double ref = std::max(std::abs(ev.J(i, k)), std::abs(fd[i]));
      if (ref <= mag_floor)
      {
        continue;
      }
      ++out.compared;
      out.max_rel_err = std::max(out.max_rel_err, std::abs(ev.J(i, k) - fd[i]) / ref);
    }
  }
  return out;
}

} // namespace ratfit
