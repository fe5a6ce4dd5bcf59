// Copyright 2026 The SNTH Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SNTH_TESTS_TEST_HELPERS_HPP_
#define SNTH_TESTS_TEST_HELPERS_HPP_

#include <cmath>
#include <random>

#include "snth/types.hpp"

namespace snth::testing {

// Random correlation-like SPD matrix of size d.
inline Matrix RandomSpd(int d, std::mt19937_64& rng, double ridge = 0.5) {
  std::normal_distribution<double> n01;
  Matrix a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = n01(rng);
  return a * a.transpose() / d + ridge * Matrix::Identity(d, d);
}

inline Matrix RandomCorrelation(int d, std::mt19937_64& rng) {
  const Matrix s = RandomSpd(d, rng);
  const Vector inv = s.diagonal().array().rsqrt();
  Matrix r = inv.asDiagonal() * s * inv.asDiagonal();
  r.diagonal().setOnes();
  return 0.5 * (r + r.transpose());
}

inline Vector RandomVector(int d, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> n01;
  Vector v(d);
  for (int i = 0; i < d; ++i) v(i) = scale * n01(rng);
  return v;
}

// |a - b| <= k * se, with se the combined standard error.
inline bool WithinSe(double a, double b, double se, double k = 4.0) {
  return std::fabs(a - b) <= k * se;
}

}  // namespace snth::testing

#endif  // SNTH_TESTS_TEST_HELPERS_HPP_
