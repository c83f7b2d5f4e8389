// Copyright (c) the ratfit contributors
// SPDX-License-Identifier: Apache-2.0

#include "ratfit/compare.hpp"
#include "ratfit/io.hpp"
#include "ratfit/synth.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace
{

using ratfit::CompareConfig;
using ratfit::CompareResult;
using ratfit::Complex;
using ratfit::CVector;
using ratfit::Method;
using ratfit::SampleSet;

SampleSet six_pole_samples()
{
  const ratfit::PartialFraction model = ratfit::make_pole_model(3, 6);
  return ratfit::sample_model(model, ratfit::imaginary_segment_points(200));
}

// Runs the CLI with stdout/stderr captured; returns the exit code.
int run_cli(const std::string &args, std::string *output = nullptr)
{
  const std::string out_path = "/tmp/ratfit_cli_out.txt";
  const std::string cmd =
      std::string(RATFIT_CLI_PATH) + " " + args + " > " + out_path + " 2>&1";
  const int status = std::system(cmd.c_str());
  if (output != nullptr)
  {
    std::ifstream in(out_path);
    std::ostringstream buf;
    buf << in.rdbuf();
    *output = buf.str();
  }
  return WEXITSTATUS(status);
}

void write_samples_file(const SampleSet &s, const std::string &path)
{
  ratfit::write_samples_csv(path, s);
}

} // namespace

TEST(RunCompare, GnReachesFirstOrderOptimalityWhereOthersStall)
{
  const SampleSet s = six_pole_samples();
  CompareConfig cfg;
  cfg.methods = {Method::aaa, Method::vf, Method::gn_pf};
  cfg.n_min = 2;
  cfg.n_max = 8;
  cfg.timing = false;
  const CompareResult res = ratfit::run_compare(s, cfg);
  ASSERT_EQ(res.rows.size(), 3u * 7u);
  const double scale = s.values().norm();
  for (const ratfit::CompareRow &row : res.rows)
  {
    EXPECT_TRUE(row.error.empty()) << row.error;
    EXPECT_EQ(row.m, row.n - 1);
    if (row.method == Method::gn_pf)
      EXPECT_LE(row.report.gradient_norm, 1e-8 * scale) << "n=" << row.n;
  }
}

TEST(RunCompare, DeterministicCsvBytes)
{
  const SampleSet s = six_pole_samples();
  CompareConfig cfg;
  cfg.methods = {Method::sk, Method::gn_pf};
  cfg.n_min = 2;
  cfg.n_max = 5;
  cfg.timing = false;
  cfg.threads = 4;
  const std::string a = compare_to_csv(ratfit::run_compare(s, cfg), false);
  const std::string b = compare_to_csv(ratfit::run_compare(s, cfg), false);
  EXPECT_EQ(a, b);
  // No metadata for identity weights: the header is the first row.
  EXPECT_EQ(a.rfind("m,n,method,", 0), 0u);
}

TEST(RunCompare, ConstantDataDegreeZero)
{
  CVector z(8), f(8);
  for (int j = 0; j < 8; ++j)
  {
    z[j] = Complex(0.25 * j, 0.4);
    f[j] = Complex(3, 0);
  }
  const SampleSet s(z, f);
  CompareConfig cfg;
  cfg.methods = {Method::gn_pf};
  cfg.n_min = 0;
  cfg.n_max = 0;
  cfg.m_offset = 0;
  const CompareResult res = ratfit::run_compare(s, cfg);
  ASSERT_EQ(res.rows.size(), 1u);
  EXPECT_TRUE(res.rows[0].error.empty()) << res.rows[0].error;
  EXPECT_LT(res.rows[0].report.residual_norm, 1e-12);
}

TEST(RunCompare, IncompatibleConfigurationsRejectedUpFront)
{
  const SampleSet s = six_pole_samples();
  {
    CompareConfig cfg;
    cfg.methods = {Method::sk};
    cfg.cauchy = true;
    EXPECT_THROW(ratfit::run_compare(s, cfg), std::invalid_argument);
  }
  {
    CompareConfig cfg;
    cfg.methods = {Method::aaa};
    cfg.weight_kind = ratfit::WeightKind::diagonal;
    cfg.weight_diag = ratfit::RVector::Ones(s.size());
    EXPECT_THROW(ratfit::run_compare(s, cfg), std::invalid_argument);
  }
  {
    CompareConfig cfg;
    cfg.methods = {Method::gn_poly};
    cfg.n_min = 0;
    cfg.n_max = 2;
    cfg.m_offset = -1; // n = 0 would need numerator degree -1
    EXPECT_THROW(ratfit::run_compare(s, cfg), std::invalid_argument);
  }
}

TEST(RunCompare, RowErrorsAreCapturedNotThrown)
{
  // 8 samples cannot support n = 4, m = 3 (needs m + n + 2 = 9): that row
  // reports an error while smaller degrees succeed.
  CVector z(8), f(8);
  for (int j = 0; j < 8; ++j)
  {
    z[j] = Complex(0.3 * j - 1.0, 0.6);
    f[j] = 1.0 / (z[j] - 2.0) + 1.0 / (z[j] + 3.0);
  }
  const SampleSet s(z, f);
  CompareConfig cfg;
  cfg.methods = {Method::sk};
  cfg.n_min = 2;
  cfg.n_max = 4;
  const CompareResult res = ratfit::run_compare(s, cfg);
  ASSERT_EQ(res.rows.size(), 3u);
  EXPECT_TRUE(res.rows[0].error.empty());
  EXPECT_FALSE(res.rows[2].error.empty());
}

TEST(CheckJacobian, AllParameterizationsPassAtDefaultStep)
{
  using ratfit::Parameterization;
  for (const Parameterization p : {Parameterization::poly, Parameterization::poly_real,
                                   Parameterization::pf, Parameterization::pf_real})
  {
    const ratfit::JacobianCheck chk = ratfit::check_jacobian(p, 0, 50, 2, 3);
    EXPECT_LT(chk.max_rel_err, 1e-5);
    EXPECT_GE(chk.compared, 10);
  }
}

TEST(CheckJacobian, NearNullCountsMatchGaugeFreedom)
{
  // Complex denominator scaling: two real gauge directions; real scaling: one.
  const ratfit::JacobianCheck poly = ratfit::check_jacobian(ratfit::Parameterization::poly, 0,
                                                            50, 2, 3);
  EXPECT_EQ(poly.near_null, 2);
  const ratfit::JacobianCheck poly_real =
      ratfit::check_jacobian(ratfit::Parameterization::poly_real, 0, 50, 2, 3);
  EXPECT_EQ(poly_real.near_null, 1);
  const ratfit::JacobianCheck pf = ratfit::check_jacobian(ratfit::Parameterization::pf, 0, 50,
                                                          2, 3);
  EXPECT_EQ(pf.near_null, 0);
}

TEST(Cli, HelpAndBadInvocations)
{
  EXPECT_EQ(run_cli("--help"), 0);
  std::string out;
  EXPECT_EQ(run_cli("fit /nonexistent.csv --degree 1,2", &out), 2);
  EXPECT_EQ(run_cli("fit /nonexistent.csv --degree 1,2 --method nope", &out), 2);
  EXPECT_NE(out.find("error"), std::string::npos);
}

TEST(Cli, SynthFitRoundTrip)
{
  const std::string data = "/tmp/ratfit_test_synth.csv";
  const std::string json_out = "/tmp/ratfit_test_fit.json";
  ASSERT_EQ(run_cli("synth --model pole --points segment --n-poles 6 --num 200 --seed 3 --out " +
                    data),
            0);
  std::string out;
  ASSERT_EQ(run_cli("fit " + data + " --degree 5,6 --method gn-pf --out " + json_out, &out), 0);
  std::ifstream in(json_out);
  nlohmann::json j;
  in >> j;
  EXPECT_EQ(j.at("report").at("method"), "gn-pf");
  EXPECT_LT(j.at("report").at("normalized_residual").get<double>(), 1e-8);
  EXPECT_EQ(j.at("report").at("converged"), true);
  EXPECT_EQ(j.at("model").at("type"), "partial_fraction");
  std::remove(json_out.c_str());
  std::remove(data.c_str());
}

TEST(Cli, CompareDeterministicBytes)
{
  const std::string data = "/tmp/ratfit_test_synth2.csv";
  ASSERT_EQ(run_cli("synth --model pole --points segment --n-poles 6 --num 120 --seed 5 --out " +
                    data),
            0);
  std::string a, b;
  const std::string cmd =
      "compare " + data + " --methods aaa,gn-pf --degrees 2,5 --no-timing --format csv";
  EXPECT_EQ(run_cli(cmd, &a), 0);
  EXPECT_EQ(run_cli(cmd, &b), 0);
  EXPECT_EQ(a, b);
  EXPECT_NE(a.find("m,n,method,"), std::string::npos);
  std::remove(data.c_str());
}

TEST(Cli, IncompatibleWeightMethodExitsWithUsageError)
{
  const std::string data = "/tmp/ratfit_test_synth3.csv";
  ASSERT_EQ(run_cli("synth --model pole --points h2 --n-poles 4 --num 150 --seed 1 --out " +
                    data),
            0);
  std::string out;
  EXPECT_EQ(run_cli("fit " + data + " --degree 3,4 --method sk --weight cauchy", &out), 2);
  EXPECT_NE(out.find("error"), std::string::npos);
  std::remove(data.c_str());
}

TEST(Cli, MalformedCsvExitsWithUsageError)
{
  const std::string data = "/tmp/ratfit_test_bad.csv";
  {
    std::ofstream f(data);
    f << "z_re,z_im,f_re,f_im\n0,0,1,0\n0,0,2,0\n";
  }
  std::string out;
  EXPECT_EQ(run_cli("fit " + data + " --degree 1,2", &out), 2);
  EXPECT_NE(out.find("duplicate"), std::string::npos);
  std::remove(data.c_str());
}

TEST(Cli, CheckJacobianSubcommand)
{
  std::string out;
  EXPECT_EQ(run_cli("check-jacobian --param gn-poly --seed 0 --samples 50 --degree 2,3", &out),
            0);
  EXPECT_NE(out.find("PASS"), std::string::npos);
  EXPECT_NE(out.find("near-zero singular values: 2"), std::string::npos);
  EXPECT_EQ(run_cli("check-jacobian --param bogus", &out), 2);
}
