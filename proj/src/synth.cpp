// Copyright (c) the ratfit contributors
// SPDX-License-Identifier: Apache-2.0

#include "ratfit/synth.hpp"

#include <cmath>

namespace ratfit
{

PartialFraction make_pole_model(std::uint64_t seed, int n_poles, double scale)
{
  if (n_poles < 1)
  {
    throw std::invalid_argument("make_pole_model: need at least one pole");
  }
  Rng rng(seed);
  CVector poles(n_poles), residues(n_poles);
  const int pairs = n_poles / 2;
  for (int k = 0; k < pairs; ++k)
  {
    const double re = -rng.uniform(scale / 500.0, scale / 10.0);
    const double im = rng.uniform(scale / 20.0, 0.95 * scale);
    const double mag = rng.uniform(0.5, 1.5);
    const double phase = rng.uniform(0.0, 2.0 * M_PI);
    const Complex lam(re, im);
    const Complex rho = mag * Complex(std::cos(phase), std::sin(phase));
    poles[2 * k] = lam;
    poles[2 * k + 1] = std::conj(lam);
    residues[2 * k] = rho;
    residues[2 * k + 1] = std::conj(rho);
  }
  if (n_poles % 2 != 0)
  {
    const double re = -rng.uniform(scale / 500.0, scale / 10.0);
    const double mag = rng.uniform(0.5, 1.5);
    const double sign = rng.uniform(0.0, 1.0) < 0.5 ? -1.0 : 1.0;
    poles[n_poles - 1] = Complex(re, 0.0);
    residues[n_poles - 1] = Complex(sign * mag, 0.0);
  }
  return PartialFraction(poles, residues, Basis(), CVector(), true);
}

CVector imaginary_segment_points(int N, double half_span)
{
  if (N < 1)
  {
    throw std::invalid_argument("imaginary_segment_points: need at least one point");
  }
  const int pairs = N / 2;
  CVector z(N);
  Eigen::Index pos = 0;
  for (int k = pairs; k >= 1; --k)
  {
    z[pos++] = Complex(0.0, -half_span * k / pairs);
  }
  if (N % 2 != 0)
  {
    z[pos++] = Complex(0.0, 0.0);
  }
  for (int k = 1; k <= pairs; ++k)
  {
    z[pos++] = Complex(0.0, half_span * k / pairs);
  }
  return z;
}

CVector h2_surrogate_points(std::uint64_t seed)
{
  Rng rng(seed);
  const std::pair<double, int> groups[] = {{1e-3, 80}, {1e-2, 40}, {1e-1, 20}, {1.0, 10}};
  CVector z(150);
  Eigen::Index pos = 0;
  for (const auto &[re, count] : groups)
  {
    for (int k = 0; k < count; ++k)
    {
      Complex cand;
      do
      {
        cand = Complex(re, rng.uniform(-1000.0, 1000.0));
        bool clear = true;
        for (Eigen::Index j = 0; j < pos; ++j)
        {
          if (z[j] == cand)
          {
            clear = false;
            break;
          }
        }
        if (clear)
        {
          break;
        }
      } while (true);
      z[pos++] = cand;
    }
  }
  return z;
}

CVector unit_circle_points(int N)
{
  if (N < 1)
  {
    throw std::invalid_argument("unit_circle_points: need at least one point");
  }
  CVector z(N);
  for (int k = 0; k < N; ++k)
  {
    const double theta = 2.0 * M_PI * k / N;
    z[k] = Complex(std::cos(theta), std::sin(theta));
  }
  return z;
}

SampleSet sample_model(const PartialFraction &model, const CVector &points)
{
  return SampleSet(points, evaluate(model, points));
}

SampleSet tan_samples(int N, double factor)
{
  const CVector z = unit_circle_points(N);
  CVector f(N);
  for (int k = 0; k < N; ++k)
  {
    f[k] = std::tan(factor * z[k]);
  }
  return SampleSet(z, f);
}

} // namespace ratfit
