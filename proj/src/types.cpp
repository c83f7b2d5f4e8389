// Copyright (c) the ratfit contributors
// SPDX-License-Identifier: Apache-2.0

#include "ratfit/types.hpp"

#include <cmath>

namespace ratfit
{

SampleSet::SampleSet(CVector points, CVector values) : z_(std::move(points)), f_(std::move(values))
{
  if (z_.size() != f_.size())
  {
    throw std::invalid_argument("SampleSet: points and values have different lengths");
  }
  if (z_.size() == 0)
  {
    throw std::invalid_argument("SampleSet: empty sample set");
  }
  for (Eigen::Index j = 0; j < z_.size(); ++j)
  {
    if (!std::isfinite(z_[j].real()) || !std::isfinite(z_[j].imag()) ||
        !std::isfinite(f_[j].real()) || !std::isfinite(f_[j].imag()))
    {
      throw std::invalid_argument("SampleSet: non-finite entry at row " + std::to_string(j));
    }
  }
  for (Eigen::Index j = 0; j < z_.size(); ++j)
  {
    for (Eigen::Index k = j + 1; k < z_.size(); ++k)
    {
      if (z_[j] == z_[k])
      {
        throw std::invalid_argument("SampleSet: duplicate sample points at rows " +
                                    std::to_string(j) + " and " + std::to_string(k));
      }
    }
  }
}

double SampleSet::scale() const
{
  double s = 0.0;
  for (Eigen::Index j = 0; j < z_.size(); ++j)
  {
    s = std::max(s, std::abs(z_[j]));
  }
  return s > 0.0 ? s : 1.0;
}

bool is_conjugate_symmetric(const SampleSet &samples, double rtol)
{
  const CVector &z = samples.points();
  const CVector &f = samples.values();
  const double zs = samples.scale();
  double fs = 0.0;
  for (Eigen::Index j = 0; j < f.size(); ++j)
  {
    fs = std::max(fs, std::abs(f[j]));
  }
  if (fs == 0.0)
  {
    fs = 1.0;
  }
  for (Eigen::Index j = 0; j < z.size(); ++j)
  {
    bool matched = false;
    for (Eigen::Index k = 0; k < z.size(); ++k)
    {
      if (std::abs(z[k] - std::conj(z[j])) <= rtol * zs &&
          std::abs(f[k] - std::conj(f[j])) <= rtol * fs)
      {
        matched = true;
        break;
      }
    }
    if (!matched)
    {
      return false;
    }
  }
  return true;
}

} // namespace ratfit
