// Copyright (c) the ratfit contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>

#include "ratfit/models.hpp"
#include "ratfit/types.hpp"

namespace ratfit
{

// Seeded uniform draws with a fixed mapping from mt19937_64 output, so results
// do not depend on the standard library's distribution implementation.
class Rng
{
public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform(double lo, double hi)
  {
    const double u = static_cast<double>(gen_()) * 0x1p-64;
    return lo + (hi - lo) * u;
  }

private:
  std::mt19937_64 gen_;
};

// Random stable real-symmetric pole model: floor(n/2) conjugate pairs (plus one
// real pole for odd n) with Re lambda in [-scale/10, -scale/500] and |Im| in
// [scale/20, 0.95 scale], unit-magnitude-order conjugate residues, no tail.
PartialFraction make_pole_model(std::uint64_t seed, int n_poles, double scale = 1000.0);

// N points on the imaginary segment [-i Y, i Y], built as exact conjugate pairs
// (plus 0 for odd N).
CVector imaginary_segment_points(int N, double half_span = 1000.0);

// 150 points with positive real parts in four decades (80 at 1e-3, 40 at 1e-2,
// 20 at 1e-1, 10 at 1) and seeded imaginary parts uniform on [-1000, 1000].
CVector h2_surrogate_points(std::uint64_t seed);

// N-th roots of unity.
CVector unit_circle_points(int N);

SampleSet sample_model(const PartialFraction &model, const CVector &points);

// f(z) = tan(factor * z) sampled at the N-th roots of unity.
SampleSet tan_samples(int N, double factor = 256.0);

} // namespace ratfit
