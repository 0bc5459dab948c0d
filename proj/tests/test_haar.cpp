// Copyright 2026 The qpool Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <numbers>

#include "qpool/haar.hpp"
#include "test_support.hpp"

using namespace qpool;
using namespace qpool::testing;

namespace {

TEST(SamplePureState, DimensionOne) {
  Rng rng(1);
  const auto s = sample_pure_state(1, rng);
  EXPECT_NEAR(std::abs(s.amplitudes(0)), 1.0, 1e-15);
  EXPECT_EQ(s.probs.size(), 1u);
  EXPECT_THROW(sample_pure_state(0, rng), ShapeError);
}

TEST(SamplePureState, NormalizedWithConsistentCoordinates) {
  Rng rng(2);
  for (int t = 0; t < 1000; ++t) {
    const auto s = sample_pure_state(1 + t % 5, rng);
    EXPECT_NEAR(s.amplitudes.norm(), 1.0, 1e-14);
    for (Eigen::Index k = 0; k < s.dim(); ++k) {
      const auto uk = static_cast<std::size_t>(k);
      EXPECT_NEAR(std::norm(s.amplitudes(k)), s.probs[uk], 1e-14);
      EXPECT_GE(s.phases[uk], 0.0);
      EXPECT_LT(s.phases[uk], 2 * std::numbers::pi);
    }
  }
}

TEST(SamplePureState, QubitPopulationIsUniform) {
  Rng rng(3);
  std::vector<double> p1;
  for (int t = 0; t < 100000; ++t) p1.push_back(sample_pure_state(2, rng).probs[1]);
  EXPECT_GT(ks_uniform_pvalue(p1), 0.01);
}

TEST(SamplePureState, KsHelperRejectsNonUniform) {
  Rng rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> skew;
  for (int t = 0; t < 10000; ++t) skew.push_back(std::pow(u(rng), 1.2));
  EXPECT_LT(ks_uniform_pvalue(skew), 1e-6);
}

TEST(SamplePureState, UnitaryInvariance) {
  Gen g(5);
  const ComplexVector phi = random_ket(3, g);
  const ComplexMatrix u = random_unitary(3, g);
  Rng r1(6), r2(7);
  std::vector<double> a, b;
  for (int t = 0; t < 100000; ++t) {
    a.push_back(std::norm(phi.dot(sample_pure_state(3, r1).amplitudes)));
    b.push_back(std::norm(phi.dot(u * sample_pure_state(3, r2).amplitudes)));
  }
  EXPECT_GT(ks_two_sample_pvalue(a, b), 0.01);
}

TEST(SamplePureState, PhasesIndependentOfProbabilities) {
  Rng rng(8);
  const int n = 100000;
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (int t = 0; t < n; ++t) {
    const auto s = sample_pure_state(2, rng);
    const double x = s.probs[1], y = s.phases[1];
    sx += x, sy += y, sxx += x * x, syy += y * y, sxy += x * y;
  }
  const double cov = sxy / n - (sx / n) * (sy / n);
  const double corr = cov / std::sqrt((sxx / n - sx * sx / n / n) * (syy / n - sy * sy / n / n));
  EXPECT_LT(std::abs(corr), 0.01);
}

TEST(MeasureNormalization, Values) {
  EXPECT_NEAR(measure_normalization(1), 2 * std::numbers::pi, 1e-12);
  EXPECT_NEAR(measure_normalization(2), 2 * std::pow(std::numbers::pi, 2), 1e-12);
  EXPECT_NEAR(measure_normalization(3), std::pow(std::numbers::pi, 3), 1e-12);
  EXPECT_THROW(measure_normalization(0), ShapeError);
}

TEST(AverageProjector, ConvergesToMaximallyMixed) {
  for (Eigen::Index d : {2, 3}) {
    const ComplexMatrix m = average_projector(d, 1000000, 10 + static_cast<std::uint64_t>(d));
    const ComplexMatrix target = ComplexMatrix::Identity(d, d) / static_cast<double>(d);
    EXPECT_LT(max_abs(m - target), d == 2 ? 3e-3 : 5e-3);
  }
}

TEST(AverageProjector, SingleSampleIsRankOne) {
  const ComplexMatrix m = average_projector(3, 1, 1);
  EXPECT_LT(max_abs(m * m - m), 1e-14);
  EXPECT_NEAR(m.trace().real(), 1.0, 1e-14);
}

TEST(Random, StreamsAreReproducibleAndThreadCountIndependent) {
  EXPECT_EQ(derive_seed(1, 0), derive_seed(1, 0));
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
  const std::size_t n = 5 * kChunkSize + 17;
  auto body = [](Rng& rng, std::size_t b, std::size_t e, ComplexMatrix& acc) {
    for (std::size_t k = b; k < e; ++k) acc += sample_pure_state(2, rng).projector();
  };
  const ComplexMatrix zero = ComplexMatrix::Zero(2, 2);
  const ComplexMatrix one = chunked_reduce(n, 42, zero, body, 1);
  const ComplexMatrix four = chunked_reduce(n, 42, zero, body, 4);
  EXPECT_EQ(one, four);
}

}  // namespace
