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

// Audit of the two-strategy state-estimation counterexample.
//
// Strategy 1: Alice and Bob each measure one copy and see A(alpha).
// Strategy 2: each measures two copies and sees A(beta), A(gamma), with beta
// tied to (alpha, gamma) so both strategies leave the same single-observer
// state. The pooled states sigma (strategy 1) and sigma' (strategy 2) are
// then compared. Published parameters are (1/2, 3/4, 1/4); a second,
// independently derived instance (3/4, 59/64, 3/10) is also evaluated.

#pragma once

#include <string>
#include <vector>

#include "qpool/estimation.hpp"

namespace qpool {

enum class AuditStatus { Match, Discrepancy, Derived };

inline const char* to_string(AuditStatus s) {
  switch (s) {
    case AuditStatus::Match: return "MATCH";
    case AuditStatus::Discrepancy: return "DISCREPANCY";
    case AuditStatus::Derived: return "DERIVED";
  }
  return "?";
}

struct AuditRow {
  std::string quantity;
  std::string printed;     // value as published, empty when none
  Rational computed;       // exact
  std::string prediction;  // independent prediction (symmetry etc.), may be empty
  AuditStatus status;
  std::string note;
};

struct StrategyComparison {
  Rational alpha, beta, gamma;
  ExactQubitState rho_a;        // after A(alpha)
  ExactQubitState rho_a_prime;  // after A(beta), A(gamma)
  ExactQubitState sigma;        // pooled, strategy 1
  ExactQubitState sigma_prime;  // pooled, strategy 2

  Rational pooled_gap() const {
    Rational g = sigma.p0 - sigma_prime.p0;
    return g < 0 ? Rational(-g) : g;
  }
};

inline StrategyComparison compare_strategies(const Rational& alpha, const Rational& gamma) {
  const Rational beta = beta_constraint(alpha, gamma);
  const auto q1 = qubit_diagonal_posterior({DiagonalEffect(alpha)});
  const auto q2 = qubit_diagonal_posterior({DiagonalEffect(beta), DiagonalEffect(gamma)});
  return {alpha, beta, gamma, exact_predictive(q1), exact_predictive(q2), exact_pooled(q1, q1),
          exact_pooled(q2, q2)};
}

struct AuditReport {
  StrategyComparison published;
  StrategyComparison alternative;
  std::vector<AuditRow> rows;
  std::string symmetry_argument;
  bool conclusion_preserved;  // alternative instance has rho_A = rho'_A and sigma != sigma'
};

inline constexpr double kMinimumPooledGap = 0.015;

inline AuditReport reproduce_paper_example() {
  const Rational half(1, 2);
  AuditReport rep{compare_strategies(half, Rational(1, 4)), compare_strategies(Rational(3, 4), Rational(3, 10)),
                  {}, {}, false};
  const auto& p = rep.published;
  const auto& a = rep.alternative;

  auto add = [&](std::string q, std::string printed, Rational computed, std::string prediction, std::string note) {
    AuditStatus st = AuditStatus::Derived;
    if (!printed.empty()) st = (Rational(printed) == computed) ? AuditStatus::Match : AuditStatus::Discrepancy;
    rep.rows.push_back({std::move(q), std::move(printed), std::move(computed), std::move(prediction), st,
                        std::move(note)});
  };

  add("beta(alpha=1/2, gamma=1/4)", "3/4", p.beta, "1 - gamma = 3/4", "constraint evaluated exactly");
  add("rho_A[0,0] at alpha=1/2", "1/2", p.rho_a.p0, "(alpha+1)/3 = 1/2", "rho_A = I/2");
  add("rho'_A[0,0] at (beta,gamma)=(3/4,1/4)", "1/2", p.rho_a_prime.p0, "1/2", "rho'_A = rho_A");
  add("sigma[0,0] at alpha=1/2", "1/2", p.sigma.p0, "1/2", "A(1/2) = I/2 carries no information");
  add("sigma'[0,0] at (beta,gamma)=(3/4,1/4)", "299/406", p.sigma_prime.p0, "1/2",
      "printed value not reproducible; q(r) is symmetric under r -> 1-r");
  add("rho_A[1,1] at alpha=1/2 (printed (1/3)(1/3)(2-alpha))", "1/6", p.rho_a.p1, "(2-alpha)/3 = 1/2",
      "printed entry has a stray 1/3 and breaks unit trace");
  {
    // Linear coefficient of Tr[A(beta) rho] Tr[A(gamma) rho] at the published
    // point; the printed form uses alpha where gamma belongs.
    const Rational al = p.alpha, be = p.beta, ga = p.gamma;
    const auto q = qubit_diagonal_posterior({DiagonalEffect(be), DiagonalEffect(ga)});
    const Rational printed_lin = -((1 - 2 * be) * (1 - 2 * ga) + (1 - al - be));
    const Rational printed_const = (1 - al) * (1 - be);
    add("P(rho|k2,k3) coefficient of r", printed_lin.str(), q.coefficients().at(1),
        "3beta+3gamma-4beta*gamma-2", "printed coefficient uses alpha in place of gamma");
    add("P(rho|k2,k3) constant term", printed_const.str(), q.coefficients().at(0), "(1-beta)(1-gamma)",
        "printed coefficient uses alpha in place of gamma");
  }
  add("alt beta(alpha=3/4, gamma=3/10)", "", a.beta, "59/64", "derived instance");
  add("alt rho_A[0,0]", "", a.rho_a.p0, "7/12", "derived instance");
  add("alt rho'_A[0,0]", "", a.rho_a_prime.p0, "7/12", "equal to rho_A by construction");
  add("alt sigma[0,0]", "", a.sigma.p0, "17/26", "derived instance");
  add("alt sigma'[0,0]", "", a.sigma_prime.p0, "", "approximately 0.636624");
  add("alt |sigma[0,0] - sigma'[0,0]|", "", a.pooled_gap(), "", "nonzero: pooled state not fixed by rho_A, rho_B");

  rep.symmetry_argument =
      "At alpha = 1/2 the constraint gives beta = 1 - gamma. Then Tr[A(beta) rho] = (1 - 2 gamma) r + gamma, "
      "which maps to Tr[A(gamma) rho] = (2 gamma - 1) r + (1 - gamma) under r -> 1 - r and vice versa, so "
      "q(r) = (Tr[A(beta) rho] Tr[A(gamma) rho])^2 is symmetric about r = 1/2. The uniform prior on r is "
      "symmetric too, hence m1/m0 = 1/2 and sigma' = I/2 = sigma at the published parameters.";
  rep.conclusion_preserved = a.rho_a == a.rho_a_prime && to_double(a.pooled_gap()) >= kMinimumPooledGap;
  return rep;
}

}  // namespace qpool
