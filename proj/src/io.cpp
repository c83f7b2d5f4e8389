// Copyright (c) the ratfit contributors
// SPDX-License-Identifier: Apache-2.0

#include "ratfit/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace ratfit
{

namespace
{

std::string fmt(double v)
{
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string trim(const std::string &s)
{
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos)
  {
    return "";
  }
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_field(const std::string &field, int line, int column)
{
  const std::string t = trim(field);
  double value = 0.0;
  const char *begin = t.data();
  const char *end = begin + t.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || t.empty())
  {
    throw std::runtime_error("parse error at line " + std::to_string(line) + ", column " +
                             std::to_string(column));
  }
  return value;
}

std::vector<std::string> split_csv(const std::string &line)
{
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line)
  {
    if (c == ',')
    {
      fields.push_back(cur);
      cur.clear();
    }
    else
    {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

nlohmann::json complex_to_json(Complex c)
{
  return nlohmann::json::array({c.real(), c.imag()});
}

nlohmann::json cvector_to_json(const CVector &v)
{
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i)
  {
    out.push_back(complex_to_json(v[i]));
  }
  return out;
}

nlohmann::json basis_to_json(const Basis &b)
{
  nlohmann::json out;
  out["degree"] = b.degree();
  switch (b.kind())
  {
  case BasisKind::monomial:
    out["kind"] = "monomial";
    break;
  case BasisKind::scaled_legendre:
    out["kind"] = "scaled_legendre";
    out["e1"] = complex_to_json(b.e1());
    out["e2"] = complex_to_json(b.e2());
    break;
  case BasisKind::lagrange_nodes:
    out["kind"] = "lagrange_nodes";
    break;
  }
  return out;
}

} // namespace

SampleSet read_samples_csv(std::istream &in)
{
  std::string line;
  if (!std::getline(in, line))
  {
    throw std::runtime_error("empty sample file");
  }
  if (trim(line) != "z_re,z_im,f_re,f_im")
  {
    throw std::runtime_error("expected header z_re,z_im,f_re,f_im on line 1");
  }
  std::vector<Complex> zs, fs;
  std::vector<int> lines;
  int lineno = 1;
  while (std::getline(in, line))
  {
    ++lineno;
    if (trim(line).empty())
    {
      continue;
    }
    const std::vector<std::string> fields = split_csv(line);
    if (fields.size() != 4)
    {
      throw std::runtime_error("line " + std::to_string(lineno) + ": expected 4 fields, got " +
                               std::to_string(fields.size()));
    }
    double v[4];
    for (int c = 0; c < 4; ++c)
    {
      v[c] = parse_field(fields[c], lineno, c + 1);
      if (!std::isfinite(v[c]))
      {
        throw std::runtime_error("nonfinite value at line " + std::to_string(lineno) +
                                 ", column " + std::to_string(c + 1));
      }
    }
    zs.emplace_back(v[0], v[1]);
    fs.emplace_back(v[2], v[3]);
    lines.push_back(lineno);
  }
  for (std::size_t i = 0; i < zs.size(); ++i)
  {
    for (std::size_t j = i + 1; j < zs.size(); ++j)
    {
      if (zs[i] == zs[j])
      {
        throw std::runtime_error("duplicate point at lines " + std::to_string(lines[i]) +
                                 " and " + std::to_string(lines[j]));
      }
    }
  }
  CVector z(zs.size()), f(fs.size());
  for (std::size_t i = 0; i < zs.size(); ++i)
  {
    z[i] = zs[i];
    f[i] = fs[i];
  }
  return SampleSet(std::move(z), std::move(f));
}

SampleSet read_samples_csv(const std::string &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw std::runtime_error("cannot open " + path);
  }
  return read_samples_csv(in);
}

void write_samples_csv(std::ostream &out, const SampleSet &samples)
{
  out << "z_re,z_im,f_re,f_im\n";
  const CVector &z = samples.points();
  const CVector &f = samples.values();
  for (Eigen::Index j = 0; j < z.size(); ++j)
  {
    out << fmt(z[j].real()) << ',' << fmt(z[j].imag()) << ',' << fmt(f[j].real()) << ','
        << fmt(f[j].imag()) << '\n';
  }
}

void write_samples_csv(const std::string &path, const SampleSet &samples)
{
  std::ofstream out(path);
  if (!out)
  {
    throw std::runtime_error("cannot open " + path + " for writing");
  }
  write_samples_csv(out, samples);
}

RVector read_weight_file(const std::string &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw std::runtime_error("cannot open " + path);
  }
  std::vector<double> vals;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line))
  {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty())
    {
      continue;
    }
    const double v = parse_field(t, lineno, 1);
    if (!(v > 0.0) || !std::isfinite(v))
    {
      throw std::runtime_error("weight at line " + std::to_string(lineno) +
                               " must be a positive finite number");
    }
    vals.push_back(v);
  }
  if (vals.empty())
  {
    throw std::runtime_error("weight file " + path + " is empty");
  }
  RVector w(vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i)
  {
    w[i] = vals[i];
  }
  return w;
}

nlohmann::json report_to_json(const FitReport &report)
{
  nlohmann::json out;
  out["method"] = report.method;
  out["num_degree"] = report.num_degree;
  out["den_degree"] = report.den_degree;
  out["residual_norm"] = report.residual_norm;
  out["normalized_residual"] = report.normalized_residual;
  out["weighted_residual_norm"] = report.weighted_residual_norm;
  out["gradient_norm"] = report.gradient_norm;
  out["iterations"] = report.iterations;
  out["converged"] = report.converged;
  nlohmann::json diag = nlohmann::json::object();
  for (const auto &[key, value] : report.diagnostics)
  {
    diag[key] = value;
  }
  out["diagnostics"] = diag;
  return out;
}

nlohmann::json model_to_json(const PolyRatio &r)
{
  nlohmann::json out;
  out["type"] = "poly_ratio";
  out["real_coeff"] = r.real_coeff;
  out["num_basis"] = basis_to_json(r.num_basis);
  out["den_basis"] = basis_to_json(r.den_basis);
  out["a"] = cvector_to_json(r.a);
  out["b"] = cvector_to_json(r.b);
  return out;
}

nlohmann::json model_to_json(const PartialFraction &r)
{
  nlohmann::json out;
  out["type"] = "partial_fraction";
  out["real_sym"] = r.real_sym;
  out["poles"] = cvector_to_json(r.poles);
  out["residues"] = cvector_to_json(r.residues);
  out["tail"] = cvector_to_json(r.tail);
  if (r.tail.size() > 0)
  {
    out["tail_basis"] = basis_to_json(r.tail_basis);
  }
  return out;
}

nlohmann::json model_to_json(const BarycentricRational &r)
{
  nlohmann::json out;
  out["type"] = "barycentric";
  out["nodes"] = cvector_to_json(r.nodes());
  out["node_values"] = cvector_to_json(r.node_values());
  out["weights"] = cvector_to_json(r.weights());
  return out;
}

nlohmann::json outcome_to_json(const FitOutcome &outcome)
{
  nlohmann::json out;
  out["report"] = report_to_json(outcome.report);
  if (outcome.pf.has_value())
  {
    out["model"] = model_to_json(*outcome.pf);
  }
  else if (outcome.poly.has_value())
  {
    out["model"] = model_to_json(*outcome.poly);
  }
  else if (outcome.bary.has_value())
  {
    out["model"] = model_to_json(*outcome.bary);
  }
  if (!outcome.gn.trajectory.empty())
  {
    nlohmann::json gn;
    gn["stop_reason"] = stop_reason_name(outcome.gn.reason);
    gn["iterations"] = outcome.gn.iterations;
    gn["line_search_evals"] = outcome.gn.line_search_evals;
    gn["trajectory"] = outcome.gn.trajectory;
    out["gn"] = gn;
  }
  return out;
}

std::string report_to_csv(const FitReport &report)
{
  std::ostringstream out;
  out << "key,value\n";
  out << "method," << report.method << '\n';
  out << "num_degree," << report.num_degree << '\n';
  out << "den_degree," << report.den_degree << '\n';
  out << "residual_norm," << fmt(report.residual_norm) << '\n';
  out << "normalized_residual," << fmt(report.normalized_residual) << '\n';
  out << "weighted_residual_norm," << fmt(report.weighted_residual_norm) << '\n';
  out << "gradient_norm," << fmt(report.gradient_norm) << '\n';
  out << "iterations," << report.iterations << '\n';
  out << "converged," << (report.converged ? 1 : 0) << '\n';
  for (const auto &[key, value] : report.diagnostics)
  {
    out << "diag." << key << ',' << fmt(value) << '\n';
  }
  return out.str();
}

} // namespace ratfit
