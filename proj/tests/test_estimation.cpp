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

#include "qpool/audit.hpp"
#include "qpool/estimation.hpp"
#include "test_support.hpp"

using namespace qpool;
using namespace qpool::testing;

namespace {

Rational R(long a, long b = 1) { return Rational(a) / Rational(b); }

// Composite Simpson rule for r -> p0 of the predictive state, computed
// straight from the likelihood product without the polynomial class.
double quadrature_p0(const std::vector<double>& xs, int power = 1, int intervals = 4000) {
  auto q = [&](double r) {
    double v = 1.0;
    for (double x : xs) v *= (2 * x - 1) * r + (1 - x);
    return std::pow(v, power);
  };
  double m0 = 0, m1 = 0;
  const double h = 1.0 / intervals;
  for (int k = 0; k <= intervals; ++k) {
    const double r = k * h;
    const double w = (k == 0 || k == intervals) ? 1 : (k % 2 ? 4 : 2);
    m0 += w * q(r);
    m1 += w * r * q(r);
  }
  return m1 / m0;
}

std::vector<DiagonalEffect> effects_of(const std::vector<double>& xs) {
  std::vector<DiagonalEffect> out;
  for (double x : xs) out.push_back(DiagonalEffect::from_double(x));
  return out;
}

TEST(DiagonalEffect, RangeAndParsing) {
  EXPECT_THROW(DiagonalEffect(R(3, 2)), InvalidEffectError);
  EXPECT_EQ(DiagonalEffect::from_fraction(3, 10).x(), R(3, 10));
  EXPECT_EQ(DiagonalEffect::from_double(0.25).x(), R(1, 4));
  EXPECT_LT(max_abs(DiagonalEffect(R(3, 4)).effect().matrix() - diag({0.75, 0.25})), 1e-16);
}

TEST(QubitPosterior, Examples) {
  EXPECT_EQ(qubit_diagonal_posterior({}).coefficients(), std::vector<Rational>{R(1)});
  const Rational a = R(3, 7);
  EXPECT_EQ(qubit_diagonal_posterior({DiagonalEffect(a)}).coefficients(), (std::vector<Rational>{1 - a, 2 * a - 1}));
  const Rational b = R(2, 5), c = R(5, 6);
  const auto q = qubit_diagonal_posterior({DiagonalEffect(b), DiagonalEffect(c)});
  const std::vector<Rational> want{(1 - b) * (1 - c), 3 * b + 3 * c - 4 * b * c - 2, (2 * b - 1) * (2 * c - 1)};
  EXPECT_EQ(q.coefficients(), want);
}

TEST(PolynomialPredictive, Examples) {
  EXPECT_LT(max_abs(polynomial_predictive(qubit_diagonal_posterior({})).matrix() - diag({0.5, 0.5})), 1e-16);
  for (long n = 1; n < 10; ++n) {
    const Rational a = R(n, 10);
    const auto s = exact_predictive(qubit_diagonal_posterior({DiagonalEffect(a)}));
    EXPECT_EQ(s.p0, (a + 1) / 3);
    EXPECT_EQ(s.p1, (2 - a) / 3);
  }
}

TEST(PolynomialPredictive, TwoEffectClosedForm) {
  for (long i = 1; i < 10; ++i) {
    for (long j = 1; j < 10; ++j) {
      const Rational b = R(i, 10), c = R(j, 10);
      const auto s = exact_predictive(qubit_diagonal_posterior({DiagonalEffect(b), DiagonalEffect(c)}));
      const Rational n = 2 + 2 * b * c - b - c;
      EXPECT_EQ(s.p0, (b * c + R(1, 2)) / n);
      EXPECT_EQ(s.p1, ((1 - b) * (1 - c) + R(1, 2)) / n);
    }
  }
}

TEST(PolynomialPredictive, MatchesQuadratureOracle) {
  Gen g(41);
  std::uniform_real_distribution<double> u(0.02, 0.98);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> xs(static_cast<std::size_t>(t % 5));
    for (auto& x : xs) x = u(g);
    const auto s = exact_predictive(qubit_diagonal_posterior(effects_of(xs)));
    EXPECT_NEAR(to_double(s.p0), quadrature_p0(xs), 1e-11);
  }
}

TEST(PooledPredictive, Examples) {
  const auto half = qubit_diagonal_posterior({DiagonalEffect(R(1, 2))});
  EXPECT_EQ(exact_pooled(half, half).p0, R(1, 2));
  // General alpha against the squared-likelihood integral.
  for (double a : {0.1, 0.3, 0.75, 0.9}) {
    const auto q = qubit_diagonal_posterior(effects_of({a}));
    EXPECT_NEAR(to_double(exact_pooled(q, q).p0), quadrature_p0({a}, 2), 1e-11);
  }
  const auto two = qubit_diagonal_posterior({DiagonalEffect(R(3, 4)), DiagonalEffect(R(3, 10))});
  const auto pooled = exact_pooled(two, two);
  EXPECT_NEAR(to_double(pooled.p0), quadrature_p0({0.75, 0.3}, 2), 1e-11);
  EXPECT_EQ(pooled.p0, R(1405, 2634));
}

TEST(PooledPredictive, FlatNeutralAndSymmetric) {
  Gen g(42);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  const auto flat = qubit_diagonal_posterior({});
  for (int t = 0; t < 30; ++t) {
    const auto a = qubit_diagonal_posterior(effects_of({u(g), u(g)}));
    const auto b = qubit_diagonal_posterior(effects_of({u(g)}));
    EXPECT_EQ(exact_pooled(a, flat), exact_predictive(a));
    EXPECT_EQ(exact_pooled(a, b), exact_pooled(b, a));
    EXPECT_GT(a.moment(0), 0);
  }
}

TEST(BetaConstraint, Examples) {
  EXPECT_EQ(beta_constraint(R(1, 2), R(1, 4)), R(3, 4));
  for (long n = 1; n < 10; ++n) EXPECT_EQ(beta_constraint(R(1, 2), R(n, 10)), 1 - R(n, 10));
  EXPECT_EQ(beta_constraint(R(3, 4), R(3, 10)), R(59, 64));
  EXPECT_THROW(beta_constraint(R(19, 20), R(1, 20)), InvalidEffectError);
}

TEST(BetaConstraint, PostconditionOverGrid) {
  int checked = 0;
  for (long a = 55; a <= 95; a += 5) {
    for (long c = 1; c < 20; ++c) {
      const Rational alpha = R(a, 100), gamma = R(c, 20);
      Rational beta;
      try {
        beta = beta_constraint(alpha, gamma);
      } catch (const InvalidEffectError&) {
        continue;  // gamma outside the admissible range for this alpha
      }
      const auto one = exact_predictive(qubit_diagonal_posterior({DiagonalEffect(alpha)}));
      const auto two = exact_predictive(qubit_diagonal_posterior({DiagonalEffect(beta), DiagonalEffect(gamma)}));
      EXPECT_NEAR(to_double(one.p0), to_double(two.p0), 1e-12);
      if (beta > 0 && beta < 1) {
        EXPECT_NEAR(beta_constraint(to_double(alpha), to_double(gamma)), to_double(beta), 1e-12);
      }
      ++checked;
    }
  }
  EXPECT_GT(checked, 30);
}

TEST(Ensemble, PosteriorUpdateExamples) {
  WeightedStateEnsemble ens{2, ComplexMatrix(2, 3), RealVector::Ones(3)};
  ens.amplitudes.col(0) = basis_ket(2, 0);
  ens.amplitudes.col(1) = basis_ket(2, 1);
  ens.amplitudes.col(2) = plus_ket();
  EXPECT_LT((posterior_update(ens, Effect::identity(2)).weights - ens.weights).cwiseAbs().maxCoeff(), 1e-15);
  const auto z = posterior_update(ens, Effect::projector(basis_ket(2, 0)));
  EXPECT_EQ(z.weights(1), 0.0);
  EXPECT_NEAR(z.weights(2), 0.5, 1e-15);
  const auto a = posterior_update(ens, Effect(diag({0.8, 0.4})));
  EXPECT_NEAR(a.weights(2), 0.6, 1e-15);
  WeightedStateEnsemble only_zero{2, ComplexMatrix(basis_ket(2, 0)), RealVector::Ones(1)};
  EXPECT_THROW(posterior_update(only_zero, Effect::projector(basis_ket(2, 1))), ImpossibleOutcomeError);
  EXPECT_NEAR(ens.sample(2).probs[1], 0.5, 1e-15);
}

TEST(Ensemble, PredictiveStateExamples) {
  const auto flat = sample_flat_ensemble(2, 200000, 3);
  EXPECT_LT(max_abs(predictive_state(flat).matrix() - diag({0.5, 0.5})), 5e-3);
  WeightedStateEnsemble one{2, ComplexMatrix(plus_ket()), RealVector::Ones(1)};
  EXPECT_LT(max_abs(predictive_state(one).matrix() - outer(plus_ket())), 1e-15);
  const auto half = posterior_update(flat, DiagonalEffect(R(1, 2)).effect());
  EXPECT_LT(max_abs(predictive_state(half).matrix() - predictive_state(flat).matrix()), 1e-12);
}

TEST(Ensemble, DeterministicInSeed) {
  EXPECT_EQ(sample_flat_ensemble(3, 20000, 5).amplitudes, sample_flat_ensemble(3, 20000, 5).amplitudes);
  EXPECT_NE(sample_flat_ensemble(3, 100, 5).amplitudes, sample_flat_ensemble(3, 100, 6).amplitudes);
}

TEST(Ensemble, MonteCarloMatchesExactPath) {
  Gen g(43);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  const auto prior = sample_flat_ensemble(2, 200000, 44);
  for (int t = 0; t < 5; ++t) {
    std::vector<double> xs(1 + static_cast<std::size_t>(t % 4));
    for (auto& x : xs) x = u(g);
    auto ens = prior;
    for (const auto& e : effects_of(xs)) ens = posterior_update(ens, e.effect());
    const auto exact = polynomial_predictive(qubit_diagonal_posterior(effects_of(xs)));
    EXPECT_LT(max_abs(predictive_state(ens).matrix() - exact.matrix()), 5e-3);
  }
}

TEST(DeFinetti, Examples) {
  EXPECT_EQ(definetti_state(2, 0, 10, 1).matrix(), ComplexMatrix::Identity(1, 1));
  EXPECT_LT(max_abs(definetti_state(2, 1, 200000, 2).matrix() - diag({0.5, 0.5})), 5e-3);
  const ComplexMatrix two = definetti_state(2, 2, 200000, 3).matrix();
  const ComplexMatrix oracle = qubit_two_copy_oracle();
  EXPECT_LT(max_abs(oracle - qubit_symmetric_projector() / 3.0), 1e-6);
  EXPECT_LT(max_abs(two - oracle), 5e-3);
  EXPECT_THROW(definetti_state(2, 13, 10, 1), DimensionGuardError);
}

TEST(DeFinetti, PosteriorEnsembleIsUsed) {
  auto ens = sample_flat_ensemble(2, 50000, 4);
  ens = posterior_update(ens, Effect::projector(basis_ket(2, 0)));
  const ComplexMatrix one = definetti_state(2, 1, 0, 0, &ens).matrix();
  EXPECT_LT(max_abs(one - predictive_state(ens).matrix()), 1e-12);
}

TEST(Audit, PublishedParameters) {
  const auto rep = reproduce_paper_example();
  EXPECT_EQ(rep.published.beta, R(3, 4));
  EXPECT_EQ(rep.published.rho_a.p0, R(1, 2));
  EXPECT_EQ(rep.published.rho_a_prime.p0, R(1, 2));
  EXPECT_EQ(rep.published.sigma.p0, R(1, 2));
  EXPECT_EQ(rep.published.sigma_prime.p0, R(1, 2));
  const AuditRow* sigma_prime = nullptr;
  for (const auto& row : rep.rows) {
    if (row.quantity.rfind("sigma'[0,0] at", 0) == 0) sigma_prime = &row;
  }
  ASSERT_NE(sigma_prime, nullptr);
  EXPECT_EQ(sigma_prime->printed, "299/406");
  EXPECT_EQ(sigma_prime->status, AuditStatus::Discrepancy);
  EXPECT_NE(rep.symmetry_argument.find("symmetric"), std::string::npos);
}

TEST(Audit, AlternativeParametersFrozenValues) {
  const auto rep = reproduce_paper_example();
  const auto& a = rep.alternative;
  EXPECT_EQ(a.beta, R(59, 64));
  EXPECT_EQ(a.rho_a.p0, R(7, 12));
  EXPECT_EQ(a.rho_a_prime.p0, R(7, 12));
  EXPECT_EQ(a.sigma.p0, R(17, 26));
  EXPECT_EQ(a.sigma_prime.p0, R(422149, 663106));
  EXPECT_EQ(a.pooled_gap(), R(74232, 4310189));
  EXPECT_NEAR(to_double(a.sigma_prime.p0), quadrature_p0({59.0 / 64, 0.3}, 2), 1e-11);
  EXPECT_TRUE(rep.conclusion_preserved);
}

TEST(Audit, StatusesFollowComparison) {
  for (const auto& row : reproduce_paper_example().rows) {
    if (row.printed.empty()) {
      EXPECT_EQ(row.status, AuditStatus::Derived) << row.quantity;
    } else {
      EXPECT_EQ(row.status == AuditStatus::Match, Rational(row.printed) == row.computed) << row.quantity;
    }
  }
}

}  // namespace
