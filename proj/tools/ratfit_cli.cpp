// Copyright (c) the ratfit contributors
// SPDX-License-Identifier: Apache-2.0
//
// ratfit: least-squares rational approximation of sampled complex functions.
// Subcommands: fit, compare, check-jacobian, synth.
// Exit codes: 0 success, 1 fit failure, 2 configuration error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ratfit/compare.hpp"
#include "ratfit/io.hpp"
#include "ratfit/optimizer.hpp"
#include "ratfit/synth.hpp"

namespace
{

using namespace ratfit;

std::pair<int, int> parse_int_pair(const std::string &text, const std::string &flag)
{
  int a = 0, b = 0;
  char comma = 0;
  std::istringstream in(text);
  if (!(in >> a >> comma >> b) || comma != ',' || !(in >> std::ws).eof())
  {
    throw std::invalid_argument(flag + " expects two integers as 'a,b', got '" + text + "'");
  }
  return {a, b};
}

struct WeightSpec
{
  WeightKind kind = WeightKind::identity;
  std::string diag_path;
  bool cauchy = false;
};

WeightSpec parse_weight_spec(const std::string &text)
{
  WeightSpec spec;
  if (text == "identity")
  {
    return spec;
  }
  if (text == "cauchy")
  {
    spec.kind = WeightKind::dense;
    spec.cauchy = true;
    return spec;
  }
  if (text.rfind("diagonal:", 0) == 0)
  {
    spec.kind = WeightKind::diagonal;
    spec.diag_path = text.substr(9);
    if (spec.diag_path.empty())
    {
      throw std::invalid_argument("diagonal weight needs a file: --weight diagonal:<file>");
    }
    return spec;
  }
  throw std::invalid_argument("unknown weight '" + text +
                              "' (expected identity, diagonal:<file>, or cauchy)");
}

Weight build_weight(const WeightSpec &spec, const SampleSet &samples,
                    std::map<std::string, double> *metadata)
{
  if (spec.cauchy)
  {
    const Weight w = cauchy_weight(samples.points());
    if (metadata != nullptr)
    {
      (*metadata)["whitening_error"] = whitening_error(w, cauchy_mass(samples.points()));
    }
    return w;
  }
  if (spec.kind == WeightKind::diagonal)
  {
    const RVector d = read_weight_file(spec.diag_path);
    if (d.size() != samples.size())
    {
      throw std::invalid_argument("weight file has " + std::to_string(d.size()) +
                                  " entries for " + std::to_string(samples.size()) +
                                  " samples");
    }
    return Weight::diagonal(d);
  }
  return Weight::identity();
}

void check_method_weight(Method method, const WeightSpec &spec)
{
  const std::string name = method_name(method);
  if (spec.cauchy && (method == Method::sk || method == Method::vf || method == Method::aaa))
  {
    throw std::invalid_argument("method " + name + " does not support the cauchy weight");
  }
  if (spec.kind != WeightKind::identity && method == Method::aaa)
  {
    throw std::invalid_argument("method aaa supports only the identity weight");
  }
}

void write_output(const std::string &path, const std::string &text)
{
  if (path.empty())
  {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out)
  {
    throw std::runtime_error("cannot open output file " + path);
  }
  out << text;
}

InitKind init_from_name(const std::string &name)
{
  if (name == "aaa")
  {
    return InitKind::aaa;
  }
  if (name == "random")
  {
    return InitKind::random;
  }
  if (name == "auto")
  {
    return InitKind::vf_auto;
  }
  throw std::invalid_argument("unknown init '" + name + "' (expected aaa, random, or auto)");
}

struct TolFlags
{
  double tol = -1.0; // driving tolerance of the selected method
  double grad_tol = -1.0, step_tol = -1.0;
  double sk_tol = -1.0, vf_tol = -1.0, aaa_tol = -1.0;
  int max_iter = -1;

  void add_to(CLI::App *cmd)
  {
    cmd->add_option("--tol", tol, "Driving tolerance of the selected method(s)");
    cmd->add_option("--grad-tol", grad_tol, "Gauss-Newton gradient tolerance");
    cmd->add_option("--step-tol", step_tol, "Gauss-Newton step tolerance");
    cmd->add_option("--sk-tol", sk_tol, "SK coefficient-step tolerance");
    cmd->add_option("--vf-tol", vf_tol, "VF pole-strength tolerance");
    cmd->add_option("--aaa-tol", aaa_tol, "AAA residual tolerance");
    cmd->add_option("--max-iter", max_iter, "Iteration cap for gn/sk/vf");
  }

  void apply(Method method, GnOptions &gn, SkOptions &sk, VfOptions &vf,
             double &aaa) const
  {
    if (tol >= 0.0)
    {
      switch (method)
      {
      case Method::aaa:
        aaa = tol;
        break;
      case Method::sk:
        sk.tol = tol;
        break;
      case Method::vf:
        vf.tol = tol;
        break;
      default:
        gn.grad_tol = tol;
        break;
      }
    }
    if (grad_tol >= 0.0)
    {
      gn.grad_tol = grad_tol;
    }
    if (step_tol >= 0.0)
    {
      gn.step_tol = step_tol;
    }
    if (sk_tol >= 0.0)
    {
      sk.tol = sk_tol;
    }
    if (vf_tol >= 0.0)
    {
      vf.tol = vf_tol;
    }
    if (aaa_tol >= 0.0)
    {
      aaa = aaa_tol;
    }
    if (max_iter >= 0)
    {
      gn.max_iter = sk.max_iter = vf.max_iter = max_iter;
    }
  }
};

struct FitArgs
{
  std::string input, degree = "0,0", method = "gn-pf", weight = "identity", init = "aaa";
  std::string out, format = "json";
  std::uint64_t seed = 0;
  TolFlags tols;
};

int run_fit(const FitArgs &args)
{
  const auto [m, n] = parse_int_pair(args.degree, "--degree");
  const WeightSpec wspec = parse_weight_spec(args.weight);
  FitOptions fo;
  const auto method = method_from_name(args.method);
  if (!method)
  {
    throw std::invalid_argument("unknown method '" + args.method + "'");
  }
  fo.method = *method;
  fo.m = m;
  fo.n = n;
  fo.init = init_from_name(args.init);
  fo.seed = args.seed;
  args.tols.apply(fo.method, fo.gn, fo.sk, fo.vf, fo.aaa_tol);
  check_method_weight(fo.method, wspec);

  const SampleSet samples = read_samples_csv(args.input);
  std::map<std::string, double> metadata;
  const Weight weight = build_weight(wspec, samples, &metadata);

  FitOutcome outcome;
  try
  {
    outcome = fit_rational(samples, weight, fo);
  }
  catch (const std::exception &e)
  {
    std::cerr << "fit failed: " << e.what() << '\n';
    return 1;
  }
  for (const auto &[key, value] : metadata)
  {
    outcome.report.diagnostics[key] = value;
  }
  if (args.format == "json")
  {
    write_output(args.out, outcome_to_json(outcome).dump(2) + "\n");
  }
  else
  {
    write_output(args.out, report_to_csv(outcome.report));
  }
  return 0;
}

struct CompareArgs
{
  std::string input, methods = "aaa,sk,vf,gn-pf", degrees = "2,8", weight = "identity";
  std::string init = "aaa", out, format = "csv";
  int m_offset = -1;
  std::uint64_t seed = 0;
  int threads = 0;
  bool no_timing = false;
  bool start_at_optimum = false;
  TolFlags tols;
};

int run_compare_cmd(const CompareArgs &args)
{
  CompareConfig config;
  std::stringstream names(args.methods);
  for (std::string name; std::getline(names, name, ',');)
  {
    const auto method = method_from_name(name);
    if (!method)
    {
      throw std::invalid_argument("unknown method '" + name + "'");
    }
    config.methods.push_back(*method);
  }
  std::tie(config.n_min, config.n_max) = parse_int_pair(args.degrees, "--degrees");
  config.m_offset = args.m_offset;
  config.init = init_from_name(args.init);
  config.seed = args.seed;
  config.threads = args.threads;
  config.timing = !args.no_timing;
  config.start_at_optimum = args.start_at_optimum;
  for (Method mth : config.methods)
  {
    args.tols.apply(mth, config.gn, config.sk, config.vf, config.aaa_tol);
  }

  const WeightSpec wspec = parse_weight_spec(args.weight);
  const SampleSet samples = read_samples_csv(args.input);
  std::map<std::string, double> metadata;
  const Weight probe = build_weight(wspec, samples, &metadata);
  config.weight_kind = wspec.kind;
  config.cauchy = wspec.cauchy;
  if (wspec.kind == WeightKind::diagonal)
  {
    config.weight_diag = read_weight_file(wspec.diag_path);
  }
  (void)probe;

  const CompareResult result = run_compare(samples, config);
  if (args.format == "json")
  {
    write_output(args.out, compare_to_json(result, config.timing).dump(2) + "\n");
  }
  else
  {
    write_output(args.out, compare_to_csv(result, config.timing));
  }
  for (const CompareRow &row : result.rows)
  {
    if (!row.error.empty())
    {
      return 1;
    }
  }
  return 0;
}

struct CheckArgs
{
  std::string param = "gn-pf", degree = "2,3";
  std::uint64_t seed = 0;
  int samples = 50;
  double fd_step = 1e-6, floor = 1e-8, tol = 1e-5;
};

int run_check_jacobian(const CheckArgs &args)
{
  Parameterization param;
  if (args.param == "gn-poly")
  {
    param = Parameterization::poly;
  }
  else if (args.param == "gn-poly-real")
  {
    param = Parameterization::poly_real;
  }
  else if (args.param == "gn-pf")
  {
    param = Parameterization::pf;
  }
  else if (args.param == "gn-pf-real")
  {
    param = Parameterization::pf_real;
  }
  else
  {
    throw std::invalid_argument("unknown parameterization '" + args.param +
                                "' (expected gn-poly, gn-poly-real, gn-pf, or gn-pf-real)");
  }
  const auto [m, n] = parse_int_pair(args.degree, "--degree");
  const JacobianCheck check =
      check_jacobian(param, args.seed, args.samples, m, n, args.fd_step, args.floor);
  const bool pass = check.max_rel_err < args.tol;
  std::printf("parameterization: %s\n", args.param.c_str());
  std::printf("jacobian: %d x %d\n", check.rows, check.cols);
  std::printf("entries compared: %d\n", check.compared);
  std::printf("max relative error: %.3e\n", check.max_rel_err);
  std::printf("near-zero singular values: %d\n", check.near_null);
  std::printf("%s\n", pass ? "PASS" : "FAIL");
  return pass ? 0 : 1;
}

struct SynthArgs
{
  std::string out, model = "pole", points = "segment";
  int n_poles = 6, num = 200;
  std::uint64_t seed = 0;
  double half_span = 1000.0, factor = 256.0, scale = 1000.0;
};

int run_synth(const SynthArgs &args)
{
  SampleSet samples;
  if (args.model == "tan")
  {
    samples = tan_samples(args.num, args.factor);
  }
  else if (args.model == "pole")
  {
    const PartialFraction model = make_pole_model(args.seed, args.n_poles, args.scale);
    CVector points;
    if (args.points == "segment")
    {
      points = imaginary_segment_points(args.num, args.half_span);
    }
    else if (args.points == "h2")
    {
      points = h2_surrogate_points(args.seed);
    }
    else if (args.points == "circle")
    {
      points = unit_circle_points(args.num);
    }
    else
    {
      throw std::invalid_argument("unknown point scheme '" + args.points +
                                  "' (expected segment, h2, or circle)");
    }
    samples = sample_model(model, points);
  }
  else
  {
    throw std::invalid_argument("unknown model '" + args.model + "' (expected pole or tan)");
  }
  std::ostringstream out;
  write_samples_csv(out, samples);
  write_output(args.out, out.str());
  return 0;
}

} // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Least-squares rational approximation of sampled complex functions"};
  app.require_subcommand(1);

  FitArgs fit;
  CLI::App *fit_cmd = app.add_subcommand("fit", "Fit one rational model to a CSV sample file");
  fit_cmd->add_option("input", fit.input, "CSV sample file (z_re,z_im,f_re,f_im)")->required();
  fit_cmd->add_option("--degree", fit.degree, "Numerator,denominator degrees m,n")->required();
  fit_cmd->add_option("--method", fit.method,
                      "aaa | sk | vf | gn-poly | gn-poly-real | gn-pf | gn-pf-real");
  fit_cmd->add_option("--weight", fit.weight, "identity | diagonal:<file> | cauchy");
  fit_cmd->add_option("--init", fit.init, "aaa | random | auto");
  fit_cmd->add_option("--seed", fit.seed, "Seed for random initialization");
  fit_cmd->add_option("--out", fit.out, "Output file (default stdout)");
  fit_cmd->add_option("--format", fit.format, "json | csv")
      ->check(CLI::IsMember({"json", "csv"}));
  fit.tols.add_to(fit_cmd);

  CompareArgs cmp;
  CLI::App *cmp_cmd =
      app.add_subcommand("compare", "Fit a degree x method grid and emit a comparison table");
  cmp_cmd->add_option("input", cmp.input, "CSV sample file")->required();
  cmp_cmd->add_option("--methods", cmp.methods, "Comma-separated method list");
  cmp_cmd->add_option("--degrees", cmp.degrees, "Denominator degree range n_min,n_max");
  cmp_cmd->add_option("--m-offset", cmp.m_offset, "Numerator degree offset: m = n + offset");
  cmp_cmd->add_option("--weight", cmp.weight, "identity | diagonal:<file> | cauchy");
  cmp_cmd->add_option("--init", cmp.init, "aaa | random | auto");
  cmp_cmd->add_option("--seed", cmp.seed, "Seed for random initialization");
  cmp_cmd->add_option("--threads", cmp.threads,
                      "Worker threads (0: RATFIT_THREADS env, else hardware)");
  cmp_cmd->add_flag("--no-timing", cmp.no_timing,
                    "Drop the wall-clock column for byte-identical output");
  cmp_cmd->add_flag("--start-at-optimum", cmp.start_at_optimum,
                    "Start sk and vf from the gn-pf optimum of each degree");
  cmp_cmd->add_option("--out", cmp.out, "Output file (default stdout)");
  cmp_cmd->add_option("--format", cmp.format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmp.tols.add_to(cmp_cmd);

  CheckArgs chk;
  CLI::App *chk_cmd = app.add_subcommand(
      "check-jacobian", "Compare an analytic Jacobian against finite differences");
  chk_cmd->add_option("--param", chk.param,
                      "gn-poly | gn-poly-real | gn-pf | gn-pf-real");
  chk_cmd->add_option("--seed", chk.seed, "Instance seed");
  chk_cmd->add_option("--samples", chk.samples, "Number of sample points");
  chk_cmd->add_option("--degree", chk.degree, "Numerator,denominator degrees m,n");
  chk_cmd->add_option("--fd-step", chk.fd_step, "Central-difference step");
  chk_cmd->add_option("--floor", chk.floor, "Magnitude floor for compared entries");
  chk_cmd->add_option("--tol", chk.tol, "Pass threshold on the max relative error");

  SynthArgs syn;
  CLI::App *syn_cmd = app.add_subcommand("synth", "Generate synthetic sample sets");
  syn_cmd->add_option("--model", syn.model, "pole | tan");
  syn_cmd->add_option("--points", syn.points, "segment | h2 | circle");
  syn_cmd->add_option("--n-poles", syn.n_poles, "Poles in the random model");
  syn_cmd->add_option("--num", syn.num, "Number of sample points");
  syn_cmd->add_option("--seed", syn.seed, "Model / point seed");
  syn_cmd->add_option("--half-span", syn.half_span, "Imaginary segment half-span");
  syn_cmd->add_option("--factor", syn.factor, "Argument factor for the tan model");
  syn_cmd->add_option("--scale", syn.scale, "Pole model scale");
  syn_cmd->add_option("--out", syn.out, "Output CSV file (default stdout)");

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError &e)
  {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try
  {
    if (*fit_cmd)
    {
      return run_fit(fit);
    }
    if (*cmp_cmd)
    {
      return run_compare_cmd(cmp);
    }
    if (*chk_cmd)
    {
      return run_check_jacobian(chk);
    }
    return run_synth(syn);
  }
  catch (const std::exception &e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
