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

// Consistency and fusion of two observers' density matrices.
//
// Two states rho_A, rho_B are consistent iff their supports intersect. Any
// state sigma supported in that intersection admits common-term expansions
//
//   rho_A = alpha sigma + sum_k pA_k |phiA_k><phiA_k|
//   rho_B = beta  sigma + sum_l pB_l |phiB_l><phiB_l|
//
// and from those a tripartite pure state on S (x) S_A (x) S_B can be built
// such that Alice (measuring S_A), Bob (measuring S_B) and Charlie (knowing
// both results) end up holding rho_A, rho_B and sigma. Since sigma can be
// any state in the intersection, Charlie's state is not fixed by rho_A and
// rho_B alone.

#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qpool/haar.hpp"
#include "qpool/linalg.hpp"
#include "qpool/random.hpp"

namespace qpool {

struct ConsistencyResult {
  bool consistent;
  Subspace intersection;
};

inline ConsistencyResult check_consistency(const DensityMatrix& a, const DensityMatrix& b,
                                           double tol = 1e-9) {
  if (a.dim() != b.dim()) throw ShapeError("check_consistency: dimension mismatch");
  Subspace meet = subspace_intersection(support(a, tol), support(b, tol), tol);
  const bool ok = meet.dim() >= 1;
  return {ok, std::move(meet)};
}

/// Largest alpha in [0, 1] with rho - alpha sigma PSD; 0 when the support of
/// sigma is not contained in the support of rho. Closed form: with rho
/// restricted to its support, alpha = 1 / lambda_max(rho^{-1/2} sigma rho^{-1/2}).
inline double max_common_weight(const DensityMatrix& rho, const DensityMatrix& sigma, double tol = 1e-9) {
  if (rho.dim() != sigma.dim()) throw ShapeError("max_common_weight: dimension mismatch");
  const auto eig = hermitian_eig(rho.matrix());
  const double cut = tol * std::max(eig.values(0), 0.0);
  Eigen::Index k = 0;
  while (k < eig.values.size() && eig.values(k) > cut) ++k;
  const ComplexMatrix v = eig.vectors.leftCols(k);

  const ComplexMatrix outside = ComplexMatrix::Identity(rho.dim(), rho.dim()) - v * v.adjoint();
  const double leak = (outside * sigma.matrix()).trace().real();
  if (leak > tol) return 0.0;

  const RealVector inv_root = eig.values.head(k).cwiseSqrt().cwiseInverse();
  const ComplexMatrix whitened =
      inv_root.asDiagonal() * (v.adjoint() * sigma.matrix() * v) * inv_root.asDiagonal();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(whitened), Eigen::EigenvaluesOnly);
  const double top = solver.eigenvalues().maxCoeff();
  if (!(top > 0.0)) return 0.0;
  return std::min(1.0, 1.0 / top);
}

struct WeightedKet {
  double weight;
  ComplexVector ket;
};

struct CommonTermDecomposition {
  DensityMatrix sigma;
  double alpha;
  double beta;
  std::vector<WeightedKet> remainder_a;
  std::vector<WeightedKet> remainder_b;

  ComplexMatrix reconstruct_a() const { return rebuild(alpha, remainder_a); }
  ComplexMatrix reconstruct_b() const { return rebuild(beta, remainder_b); }

 private:
  ComplexMatrix rebuild(double w, const std::vector<WeightedKet>& rest) const {
    ComplexMatrix m = w * sigma.matrix();
    for (const auto& t : rest) m += t.weight * outer(t.ket);
    return m;
  }
};

namespace detail {

/// Eigen-expansion of rho - w sigma, keeping every strictly positive weight.
inline std::vector<WeightedKet> remainder_terms(const DensityMatrix& rho, const DensityMatrix& sigma,
                                                double w, double tol, const char* who) {
  const ComplexMatrix rest = rho.matrix() - w * sigma.matrix();
  const auto eig = hermitian_eig(rest);
  const double lowest = eig.values(eig.values.size() - 1);
  if (lowest < -tol) {
    throw PositivityError(std::string("decompose_common: ") + who + " - weight * sigma has eigenvalue " +
                          std::to_string(lowest));
  }
  std::vector<WeightedKet> terms;
  for (Eigen::Index k = 0; k < eig.values.size(); ++k) {
    if (eig.values(k) > 0.0) terms.push_back({eig.values(k), eig.vectors.col(k)});
  }
  return terms;
}

}  // namespace detail

inline CommonTermDecomposition decompose_common(const DensityMatrix& rho_a, const DensityMatrix& rho_b,
                                                const DensityMatrix& sigma, double alpha, double beta,
                                                double tol = 1e-9) {
  if (rho_a.dim() != rho_b.dim() || rho_a.dim() != sigma.dim()) {
    throw ShapeError("decompose_common: dimension mismatch");
  }
  if (!(alpha > 0.0 && alpha <= 1.0) || !(beta > 0.0 && beta <= 1.0)) {
    throw DegenerateConstructionError("decompose_common: alpha and beta must lie in (0, 1]");
  }
  auto rest_a = detail::remainder_terms(rho_a, sigma, alpha, tol, "rho_A");
  auto rest_b = detail::remainder_terms(rho_b, sigma, beta, tol, "rho_B");
  return {sigma, alpha, beta, std::move(rest_a), std::move(rest_b)};
}

/// Relative eigenvalue cutoff for the spectral expansion of sigma.
inline constexpr double kSigmaRankCut = 1e-14;

/// Pure state on S (x) S_A (x) S_B, stored with index (s * d_A + a) * d_B + b.
struct TripartiteScenario {
  CommonTermDecomposition decomposition;
  Eigen::Index d_s = 0, d_a = 0, d_b = 0;
  std::size_t n = 0;  // rank of sigma
  std::size_t k = 0;  // Alice remainder terms
  std::size_t l = 0;  // Bob remainder terms
  RealVector lambdas;
  ComplexMatrix phis;  // eigenvectors of sigma, columns
  ComplexVector psi;   // unnormalized

  Complex amplitude(Eigen::Index s, Eigen::Index a, Eigen::Index b) const {
    return psi((s * d_a + a) * d_b + b);
  }
};

inline TripartiteScenario brun_construct(const CommonTermDecomposition& dec) {
  if (!(dec.alpha > 0.0) || !(dec.beta > 0.0)) {
    throw DegenerateConstructionError("brun_construct: alpha and beta must be positive");
  }
  TripartiteScenario sc{dec};
  const auto eig = hermitian_eig(dec.sigma.matrix());
  const double cut = kSigmaRankCut * eig.values(0);
  Eigen::Index rank = 0;
  while (rank < eig.values.size() && eig.values(rank) > cut) ++rank;
  if (rank == 0) throw DegenerateConstructionError("brun_construct: sigma has rank zero");

  sc.n = static_cast<std::size_t>(rank);
  sc.k = dec.remainder_a.size();
  sc.l = dec.remainder_b.size();
  sc.lambdas = eig.values.head(rank);
  sc.phis = eig.vectors.leftCols(rank);
  sc.d_s = dec.sigma.dim();
  sc.d_a = rank + static_cast<Eigen::Index>(sc.l);
  sc.d_b = rank + static_cast<Eigen::Index>(sc.k);

  // Uniform superposition over the first N basis states of an ancilla.
  auto uniform = [rank](Eigen::Index dim) {
    ComplexVector v = ComplexVector::Zero(dim);
    v.head(rank).setConstant(1.0 / std::sqrt(static_cast<double>(rank)));
    return v;
  };
  const ComplexVector psi_a = uniform(sc.d_a);
  const ComplexVector psi_b = uniform(sc.d_b);

  sc.psi = ComplexVector::Zero(sc.d_s * sc.d_a * sc.d_b);
  for (Eigen::Index i = 0; i < rank; ++i) {
    sc.psi += std::sqrt(sc.lambdas(i)) *
              tensor(tensor(ComplexVector(sc.phis.col(i)), basis_ket(sc.d_a, i)), basis_ket(sc.d_b, i));
  }
  for (std::size_t t = 0; t < sc.k; ++t) {
    const auto& term = dec.remainder_a[t];
    sc.psi += std::sqrt(term.weight / dec.alpha) *
              tensor(tensor(term.ket, psi_a), basis_ket(sc.d_b, rank + static_cast<Eigen::Index>(t)));
  }
  for (std::size_t t = 0; t < sc.l; ++t) {
    const auto& term = dec.remainder_b[t];
    sc.psi += std::sqrt(term.weight / dec.beta) *
              tensor(tensor(term.ket, basis_ket(sc.d_a, rank + static_cast<Eigen::Index>(t))), psi_b);
  }
  return sc;
}

struct ObserverOutcomes {
  std::vector<double> probability;          // P(n) = <Psi|Pi_n|Psi> / <Psi|Psi>, n < N
  std::vector<double> probability_formula;  // (lambda_n + (1-w)/(w N)) / <Psi|Psi>
  std::vector<DensityMatrix> states;        // state of S after outcome n
  DensityMatrix recovered;                  // post-selected average over n < N
};

struct ConstructionReport {
  double norm_sq;
  ObserverOutcomes alice;
  ObserverOutcomes bob;
  DensityMatrix charlie;       // matched branches n = m < N, averaged
  double charlie_probability;  // probability that both outcomes fall in 1..N
};

/// Simulates Alice's projection of S_A onto {|A_n>} and Bob's of S_B onto
/// {|B_m>}, each tracing out the other ancilla and discarding outcomes
/// beyond N (post-selection).
inline ConstructionReport simulate_construction(const TripartiteScenario& sc) {
  const double norm_sq = sc.psi.squaredNorm();
  const auto n_terms = static_cast<Eigen::Index>(sc.n);

  auto observe = [&](bool alice) {
    const double w = alice ? sc.decomposition.alpha : sc.decomposition.beta;
    const Eigen::Index other = alice ? sc.d_b : sc.d_a;
    std::vector<double> prob, formula;
    std::vector<DensityMatrix> states;
    ComplexMatrix total = ComplexMatrix::Zero(sc.d_s, sc.d_s);
    for (Eigen::Index outcome = 0; outcome < n_terms; ++outcome) {
      // Conditional (unnormalized) pure components of S (x) other ancilla.
      ComplexMatrix block(sc.d_s, other);
      for (Eigen::Index s = 0; s < sc.d_s; ++s) {
        for (Eigen::Index o = 0; o < other; ++o) {
          block(s, o) = alice ? sc.amplitude(s, outcome, o) : sc.amplitude(s, o, outcome);
        }
      }
      const ComplexMatrix unnorm = block * block.adjoint();
      const double weight = unnorm.trace().real();
      prob.push_back(weight / norm_sq);
      formula.push_back((sc.lambdas(outcome) + (1.0 - w) / (w * static_cast<double>(sc.n))) / norm_sq);
      states.push_back(DensityMatrix::normalized(unnorm));
      total += unnorm;
    }
    return ObserverOutcomes{std::move(prob), std::move(formula), std::move(states),
                            DensityMatrix::normalized(total)};
  };

  ComplexMatrix charlie = ComplexMatrix::Zero(sc.d_s, sc.d_s);
  for (Eigen::Index a = 0; a < n_terms; ++a) {
    for (Eigen::Index b = 0; b < n_terms; ++b) {
      ComplexVector v(sc.d_s);
      for (Eigen::Index s = 0; s < sc.d_s; ++s) v(s) = sc.amplitude(s, a, b);
      charlie += outer(v);
    }
  }
  const double charlie_weight = charlie.trace().real();
  return {norm_sq, observe(true), observe(false), DensityMatrix::normalized(charlie),
          charlie_weight / norm_sq};
}

/// Full max-weight -> decompose -> construct -> simulate pipeline for one
/// common term sigma. alpha/beta default to half their maximum admissible
/// value.
struct Realization {
  double alpha_max;
  double beta_max;
  TripartiteScenario scenario;
  ConstructionReport simulation;
  double charlie_error;  // ||charlie - sigma||, max entry
};

inline Realization realize(const DensityMatrix& rho_a, const DensityMatrix& rho_b, const DensityMatrix& sigma,
                           std::optional<double> alpha = std::nullopt,
                           std::optional<double> beta = std::nullopt, double tol = 1e-9) {
  const double a_max = max_common_weight(rho_a, sigma, tol);
  const double b_max = max_common_weight(rho_b, sigma, tol);
  if (!(a_max > 0.0) || !(b_max > 0.0)) {
    throw DegenerateConstructionError("realize: sigma is not a common term of rho_A and rho_B");
  }
  auto dec = decompose_common(rho_a, rho_b, sigma, alpha.value_or(a_max / 2.0), beta.value_or(b_max / 2.0),
                              tol);
  auto sc = brun_construct(dec);
  auto sim = simulate_construction(sc);
  const double err = max_abs(sim.charlie.matrix() - sigma.matrix());
  return {a_max, b_max, std::move(sc), std::move(sim), err};
}

struct AmbiguityReport {
  std::vector<Realization> runs;
  double charlie_distance;  // trace distance between the two Charlie states
  Subspace intersection;
};

inline constexpr double kCharlieTol = 1e-10;

/// Builds two measurement realizations of the same (rho_A, rho_B) whose
/// Charlie states are sigma1 and sigma2 respectively.
inline AmbiguityReport demonstrate_ambiguity(const DensityMatrix& rho_a, const DensityMatrix& rho_b,
                                             const DensityMatrix& sigma1, const DensityMatrix& sigma2,
                                             double tol = 1e-9) {
  auto consistency = check_consistency(rho_a, rho_b, tol);
  if (!consistency.consistent) {
    throw LemmaPreconditionError("demonstrate_ambiguity: rho_A and rho_B are inconsistent");
  }
  std::vector<Realization> runs;
  for (const DensityMatrix* s : {&sigma1, &sigma2}) {
    if (s->dim() != rho_a.dim()) throw ShapeError("demonstrate_ambiguity: dimension mismatch");
    if (projection_residual(support(*s, tol), consistency.intersection) > 1e-8) {
      throw LemmaPreconditionError("demonstrate_ambiguity: sigma is not supported in the intersection");
    }
    if (!(max_common_weight(rho_a, *s, tol) > 0.0) || !(max_common_weight(rho_b, *s, tol) > 0.0)) {
      throw LemmaPreconditionError("demonstrate_ambiguity: sigma has zero admissible weight");
    }
    runs.push_back(realize(rho_a, rho_b, *s, std::nullopt, std::nullopt, tol));
    if (runs.back().charlie_error > kCharlieTol) {
      throw DegenerateConstructionError("demonstrate_ambiguity: Charlie state does not reproduce sigma");
    }
  }
  const double dist = trace_distance(runs[0].simulation.charlie, runs[1].simulation.charlie);
  return {std::move(runs), dist, std::move(consistency.intersection)};
}

enum class HistoryFamily { HaarIntersection, HaarIntersectionUnweighted };

inline std::string_view to_string(HistoryFamily f) {
  return f == HistoryFamily::HaarIntersection ? "haar-intersection" : "haar-intersection-unweighted";
}

inline std::optional<HistoryFamily> history_family_from_string(std::string_view s) {
  if (s == "haar-intersection") return HistoryFamily::HaarIntersection;
  if (s == "haar-intersection-unweighted") return HistoryFamily::HaarIntersectionUnweighted;
  return std::nullopt;
}

/// Exploratory measure over measurement histories. No canonical choice
/// exists; each family is one candidate.
struct HistoryMeasureConfig {
  HistoryFamily family = HistoryFamily::HaarIntersection;
  std::size_t samples = 100000;
  std::uint64_t seed = 0;
  double weight_exponent = 1.0;
};

/// Monte-Carlo average of Charlie states over sampled histories. Each sample
/// draws a pure common term sigma uniformly (invariant measure) inside the
/// support intersection; in the weighted family its weight is the
/// probability of Charlie's matched branch in the realization of sigma.
inline DensityMatrix averaged_fusion(const DensityMatrix& rho_a, const DensityMatrix& rho_b,
                                     const HistoryMeasureConfig& cfg, double tol = 1e-9) {
  if (cfg.samples == 0) throw ShapeError("averaged_fusion: sample count must be at least 1");
  auto consistency = check_consistency(rho_a, rho_b, tol);
  if (!consistency.consistent) throw InconsistentStatesError("averaged_fusion: supports do not intersect");
  const Subspace& meet = consistency.intersection;
  const Eigen::Index d = rho_a.dim();

  const ComplexMatrix zero = ComplexMatrix::Zero(d, d);
  auto body = [&](Rng& rng, std::size_t b, std::size_t e, ComplexMatrix& acc) {
    for (std::size_t k = b; k < e; ++k) {
      const ComplexVector v = sample_in_subspace(meet, rng);
      double w = 1.0;
      if (cfg.family == HistoryFamily::HaarIntersection) {
        const auto sigma = DensityMatrix::pure(v);
        const double a_max = max_common_weight(rho_a, sigma, tol);
        const double b_max = max_common_weight(rho_b, sigma, tol);
        const auto dec = decompose_common(rho_a, rho_b, sigma, a_max / 2.0, b_max / 2.0, tol);
        const auto sc = brun_construct(dec);
        // Matched-branch probability sum_n lambda_n / <Psi|Psi>.
        w = std::pow(sc.lambdas.sum() / sc.psi.squaredNorm(), cfg.weight_exponent);
      }
      acc.noalias() += w * (v * v.adjoint());
    }
  };
  ComplexMatrix total = chunked_reduce(cfg.samples, cfg.seed, zero, body);
  return DensityMatrix::normalized(total);
}

}  // namespace qpool
