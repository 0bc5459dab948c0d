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

#include "qpool/fusion.hpp"
#include "test_support.hpp"

using namespace qpool;
using namespace qpool::testing;

namespace {

const DensityMatrix kHalf = DensityMatrix::maximally_mixed(2);
const DensityMatrix kZero = DensityMatrix::pure(basis_ket(2, 0));
const DensityMatrix kOne = DensityMatrix::pure(basis_ket(2, 1));
const DensityMatrix kPlus = DensityMatrix::pure(plus_ket());

TEST(Consistency, Examples) {
  const auto same = check_consistency(kZero, kZero);
  EXPECT_TRUE(same.consistent);
  EXPECT_EQ(same.intersection.dim(), 1);
  EXPECT_FALSE(check_consistency(kZero, kOne).consistent);
  const auto mixed = check_consistency(kHalf, kPlus);
  ASSERT_TRUE(mixed.consistent);
  ASSERT_EQ(mixed.intersection.dim(), 1);
  EXPECT_NEAR(std::abs(mixed.intersection.basis().col(0).dot(plus_ket())), 1.0, 1e-12);
}

TEST(Consistency, SelfConsistentWithSupport) {
  Gen g(31);
  for (int t = 0; t < 50; ++t) {
    const Eigen::Index d = 2 + t % 3;
    const DensityMatrix rho(random_density(d, 1 + t % d, g));
    const auto c = check_consistency(rho, rho);
    ASSERT_TRUE(c.consistent);
    EXPECT_LT(projection_residual(c.intersection, support(rho)), 1e-10);
    EXPECT_LT(projection_residual(support(rho), c.intersection), 1e-10);
  }
}

TEST(MaxCommonWeight, Examples) {
  EXPECT_NEAR(max_common_weight(kPlus, kPlus), 1.0, 1e-12);
  EXPECT_NEAR(max_common_weight(kHalf, kZero), 0.5, 1e-12);
  EXPECT_EQ(max_common_weight(kZero, kPlus), 0.0);
}

TEST(MaxCommonWeight, MatchesBisectionOracle) {
  Gen g(32);
  for (int t = 0; t < 200; ++t) {
    const Eigen::Index d = 2 + t % 3;
    const auto p = random_consistent_pair(d, g);
    const DensityMatrix rho(p.rho_a), sigma(p.sigma);
    EXPECT_NEAR(max_common_weight(rho, sigma), bisect_max_weight(p.rho_a, p.sigma), 1e-8);
  }
}

TEST(MaxCommonWeight, UnityOnlyForEqualStates) {
  Gen g(33);
  for (int t = 0; t < 50; ++t) {
    const DensityMatrix a(random_density(3, 2, g)), b(random_density(3, 3, g));
    EXPECT_NEAR(max_common_weight(a, a), 1.0, 1e-9);
    EXPECT_LT(max_common_weight(b, a), 1.0 - 1e-9);
  }
}

TEST(DecomposeCommon, Examples) {
  const auto dec = decompose_common(kHalf, kHalf, kZero, 0.5, 0.5);
  ASSERT_EQ(dec.remainder_a.size(), 1u);
  EXPECT_NEAR(dec.remainder_a[0].weight, 0.5, 1e-12);
  EXPECT_NEAR(std::abs(dec.remainder_a[0].ket(1)), 1.0, 1e-12);
  EXPECT_LT(max_abs(dec.reconstruct_a() - kHalf.matrix()), 1e-14);
  EXPECT_LT(max_abs(dec.reconstruct_b() - kHalf.matrix()), 1e-14);

  EXPECT_TRUE(decompose_common(kPlus, kPlus, kPlus, 1.0, 1.0).remainder_a.empty());
  EXPECT_THROW(decompose_common(kHalf, kHalf, kZero, 0.6, 0.5), PositivityError);
  EXPECT_THROW(decompose_common(kHalf, kHalf, kZero, 0.0, 0.5), DegenerateConstructionError);
}

TEST(BrunConstruct, QubitExample) {
  const auto sc = brun_construct(decompose_common(kHalf, kHalf, kZero, 0.5, 0.5));
  EXPECT_EQ(sc.d_s, 2);
  EXPECT_EQ(sc.d_a, 2);
  EXPECT_EQ(sc.d_b, 2);
  EXPECT_NEAR(sc.psi.squaredNorm(), 3.0, 1e-12);

  const auto sim = simulate_construction(sc);
  ASSERT_EQ(sim.alice.probability.size(), 1u);
  EXPECT_NEAR(sim.alice.probability[0], 2.0 / 3, 1e-12);
  EXPECT_LT(max_abs(sim.alice.recovered.matrix() - kHalf.matrix()), 1e-12);
  EXPECT_LT(max_abs(sim.charlie.matrix() - kZero.matrix()), 1e-12);
}

TEST(BrunConstruct, PureCommonStateIsSingleTerm) {
  const auto sc = brun_construct(decompose_common(kPlus, kPlus, kPlus, 1.0, 1.0));
  EXPECT_EQ(sc.n, 1u);
  EXPECT_EQ(sc.k + sc.l, 0u);
  ComplexVector want = tensor(tensor(plus_ket(), basis_ket(1, 0)), basis_ket(1, 0));
  EXPECT_NEAR(std::abs(sc.psi.dot(want)), 1.0, 1e-12);
  const auto sim = simulate_construction(sc);
  EXPECT_NEAR(sim.alice.probability[0], 1.0, 1e-12);
  EXPECT_LT(max_abs(sim.charlie.matrix() - kPlus.matrix()), 1e-12);
}

TEST(BrunConstruct, FullWeightMixedState) {
  const auto sc = brun_construct(decompose_common(kHalf, kHalf, kHalf, 1.0, 1.0));
  EXPECT_EQ(sc.n, 2u);
  const auto sim = simulate_construction(sc);
  for (std::size_t n = 0; n < 2; ++n) {
    EXPECT_NEAR(sim.alice.states[n].matrix().trace().real(), 1.0, 1e-12);
    EXPECT_NEAR(min_eigenvalue(sim.alice.states[n].matrix()), 0.0, 1e-12);  // pure branch
  }
  EXPECT_LT(max_abs(sim.alice.recovered.matrix() - kHalf.matrix()), 1e-12);
}

TEST(BrunConstruct, RejectsZeroWeight) {
  auto dec = decompose_common(kHalf, kHalf, kZero, 0.5, 0.5);
  dec.alpha = 0.0;
  EXPECT_THROW(brun_construct(dec), DegenerateConstructionError);
}

TEST(Realize, RoundTripOnRandomConsistentPairs) {
  Gen g(34);
  for (int t = 0; t < 100; ++t) {
    const Eigen::Index d = 2 + t % 3;
    const auto p = random_consistent_pair(d, g);
    const DensityMatrix ra(p.rho_a), rb(p.rho_b), sigma(p.sigma);
    const auto z = realize(ra, rb, sigma);
    EXPECT_LT(max_abs(z.simulation.alice.recovered.matrix() - p.rho_a), 1e-10);
    EXPECT_LT(max_abs(z.simulation.bob.recovered.matrix() - p.rho_b), 1e-10);
    EXPECT_LT(z.charlie_error, 1e-10);
    for (const auto* o : {&z.simulation.alice, &z.simulation.bob}) {
      for (std::size_t n = 0; n < o->probability.size(); ++n) {
        EXPECT_NEAR(o->probability[n], o->probability_formula[n], 1e-12);
      }
    }
  }
}

TEST(Realize, RejectsNonCommonSigma) {
  EXPECT_THROW(realize(kZero, kHalf, kPlus), DegenerateConstructionError);
}

TEST(Ambiguity, Examples) {
  const auto a = demonstrate_ambiguity(kHalf, kHalf, kZero, kPlus);
  EXPECT_NEAR(a.charlie_distance, std::sqrt(0.5), 1e-9);
  EXPECT_NEAR(demonstrate_ambiguity(kHalf, kHalf, kPlus, kPlus).charlie_distance, 0.0, 1e-12);
  EXPECT_THROW(demonstrate_ambiguity(kZero, kZero, kZero, kOne), LemmaPreconditionError);
  EXPECT_THROW(demonstrate_ambiguity(kZero, kOne, kZero, kZero), LemmaPreconditionError);
}

TEST(Ambiguity, OneDimensionalIntersectionIsUnique) {
  Gen g(35);
  for (int t = 0; t < 30; ++t) {
    const Eigen::Index d = 3;
    // Supports span{u0, u1} and span{u0, u2}: intersection is u0 alone.
    const ComplexMatrix u = random_unitary(d, g);
    ComplexMatrix a = 0.6 * outer(u.col(0)) + 0.4 * outer(u.col(1));
    ComplexMatrix b = 0.3 * outer(u.col(0)) + 0.7 * outer(u.col(2));
    const DensityMatrix ra(a), rb(b);
    const auto c = check_consistency(ra, rb);
    ASSERT_EQ(c.intersection.dim(), 1);
    // Any admissible sigma must be the pure intersection state; two
    // different phase conventions of it give the same Charlie state.
    const DensityMatrix s1 = DensityMatrix::pure(u.col(0));
    const DensityMatrix s2 = DensityMatrix::pure(Complex(0, 1) * u.col(0));
    EXPECT_LT(demonstrate_ambiguity(ra, rb, s1, s2).charlie_distance, 1e-9);
    EXPECT_THROW(demonstrate_ambiguity(ra, rb, s1, DensityMatrix::pure(u.col(1))), LemmaPreconditionError);
  }
}

TEST(AveragedFusion, Examples) {
  HistoryMeasureConfig cfg;
  cfg.samples = 2000;
  for (auto fam : {HistoryFamily::HaarIntersection, HistoryFamily::HaarIntersectionUnweighted}) {
    cfg.family = fam;
    EXPECT_LT(max_abs(averaged_fusion(kZero, kZero, cfg).matrix() - kZero.matrix()), 1e-12);
  }
  cfg = {};
  cfg.samples = 100000;
  cfg.seed = 5;
  EXPECT_LT(max_abs(averaged_fusion(kHalf, kHalf, cfg).matrix() - kHalf.matrix()), 5e-3);
  EXPECT_THROW(averaged_fusion(kZero, kOne, cfg), InconsistentStatesError);
}

TEST(AveragedFusion, SupportInsideIntersectionAndDeterministic) {
  Gen g(36);
  HistoryMeasureConfig cfg;
  cfg.samples = 3000;
  cfg.seed = 9;
  for (int t = 0; t < 5; ++t) {
    const auto p = random_consistent_pair(3, g);
    const DensityMatrix ra(p.rho_a), rb(p.rho_b);
    const auto out = averaged_fusion(ra, rb, cfg);
    const auto meet = check_consistency(ra, rb).intersection;
    EXPECT_LT(projection_residual(support(out), meet), 1e-9);
    EXPECT_EQ(out.matrix(), averaged_fusion(ra, rb, cfg).matrix());
  }
}

TEST(AveragedFusion, FamilyNames) {
  for (auto f : {HistoryFamily::HaarIntersection, HistoryFamily::HaarIntersectionUnweighted}) {
    EXPECT_EQ(history_family_from_string(to_string(f)), f);
  }
  EXPECT_FALSE(history_family_from_string("uniform").has_value());
}

}  // namespace
