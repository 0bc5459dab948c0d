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

// Classical states of knowledge over a finite hypothesis set: Bayes updates,
// pooling by multiply-and-renormalize, and the diagonal-matrix form of both.

#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qpool/errors.hpp"
#include "qpool/linalg.hpp"
#include "qpool/operators.hpp"

namespace qpool {

inline constexpr double kProbSumTol = 1e-12;

/// Probability vector over hypotheses n = 0 .. n_max-1.
class ProbDist {
 public:
  explicit ProbDist(std::vector<double> probs) : p_(std::move(probs)) {
    if (p_.empty()) throw ShapeError("ProbDist: empty");
    double sum = 0.0;
    for (double v : p_) {
      if (!std::isfinite(v) || v < 0.0) {
        throw PositivityError("ProbDist: entries must be finite and non-negative");
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > kProbSumTol) {
      throw NormalizationError("ProbDist: entries sum to " + std::to_string(sum));
    }
  }

  /// Maximum-entropy state: the canonical "no information" prior.
  static ProbDist flat(std::size_t n) {
    if (n == 0) throw ShapeError("ProbDist::flat: n must be positive");
    return ProbDist(std::vector<double>(n, 1.0 / static_cast<double>(n)));
  }

  /// Divides by the sum. Throws IncompatibleKnowledgeError on a zero vector.
  static ProbDist normalized(std::vector<double> weights) {
    const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (!(sum > 0.0)) throw IncompatibleKnowledgeError("ProbDist::normalized: zero total weight");
    for (double& w : weights) w /= sum;
    return ProbDist(std::move(weights));
  }

  std::size_t size() const noexcept { return p_.size(); }
  double operator[](std::size_t n) const { return p_.at(n); }
  const std::vector<double>& values() const noexcept { return p_; }

 private:
  std::vector<double> p_;
};

/// Conditional probabilities P(m|n): rows are outcomes m, columns are
/// hypotheses n. Each column sums to one (the outcome set is complete); rows
/// need not sum to anything in particular.
class LikelihoodModel {
 public:
  explicit LikelihoodModel(Eigen::MatrixXd cond) : cond_(std::move(cond)) {
    if (cond_.rows() == 0 || cond_.cols() == 0) throw ShapeError("LikelihoodModel: empty");
    if ((cond_.array() < 0.0).any() || (cond_.array() > 1.0).any() || !cond_.allFinite()) {
      throw PositivityError("LikelihoodModel: entries must lie in [0, 1]");
    }
    for (Eigen::Index n = 0; n < cond_.cols(); ++n) {
      if (std::abs(cond_.col(n).sum() - 1.0) > kProbSumTol) {
        throw NormalizationError("LikelihoodModel: column " + std::to_string(n) +
                                 " does not sum to 1");
      }
    }
  }

  std::size_t outcomes() const noexcept { return static_cast<std::size_t>(cond_.rows()); }
  std::size_t hypotheses() const noexcept { return static_cast<std::size_t>(cond_.cols()); }
  double operator()(std::size_t m, std::size_t n) const { return cond_(m, n); }
  const Eigen::MatrixXd& matrix() const noexcept { return cond_; }

 private:
  Eigen::MatrixXd cond_;
};

struct Evidence {
  LikelihoodModel model;
  std::size_t outcome;
};

/// Shannon entropy in bits, with 0 log 0 = 0.
inline double shannon_entropy(const ProbDist& p) {
  double s = 0.0;
  for (double v : p.values()) {
    if (v > 0.0) s -= v * std::log2(v);
  }
  return s;
}

namespace detail {

inline void check_outcome(const LikelihoodModel& model, std::size_t outcome, std::size_t n) {
  if (model.hypotheses() != n) throw ShapeError("likelihood model size does not match prior");
  if (outcome >= model.outcomes()) {
    throw IndexError("outcome " + std::to_string(outcome) + " out of range");
  }
}

}  // namespace detail

inline ProbDist bayes_update(const ProbDist& prior, const LikelihoodModel& model, std::size_t outcome) {
  detail::check_outcome(model, outcome, prior.size());
  std::vector<double> post(prior.size());
  double evidence = 0.0;
  for (std::size_t n = 0; n < prior.size(); ++n) {
    post[n] = model(outcome, n) * prior[n];
    evidence += post[n];
  }
  if (!(evidence > 0.0)) throw ImpossibleOutcomeError("bayes_update: P(m) = 0");
  for (double& v : post) v /= evidence;
  return ProbDist(std::move(post));
}

/// Posterior after independent outcomes: prior times the product of the
/// likelihood rows, normalized once. Rescaled by the running maximum to stay
/// clear of underflow on long evidence lists.
inline ProbDist sequential_update(const ProbDist& prior, std::span<const Evidence> evidence) {
  std::vector<double> acc = prior.values();
  for (const auto& ev : evidence) {
    detail::check_outcome(ev.model, ev.outcome, prior.size());
    double top = 0.0;
    for (std::size_t n = 0; n < acc.size(); ++n) {
      acc[n] *= ev.model(ev.outcome, n);
      top = std::max(top, acc[n]);
    }
    if (!(top > 0.0)) throw ImpossibleOutcomeError("sequential_update: zero joint normalizer");
    for (double& v : acc) v /= top;
  }
  return ProbDist::normalized(std::move(acc));
}

/// Combined state of two observers with independent information:
/// P(n) Q(n) renormalized.
inline ProbDist pool_classical(const ProbDist& p, const ProbDist& q) {
  if (p.size() != q.size()) throw ShapeError("pool_classical: size mismatch");
  std::vector<double> prod(p.size());
  double z = 0.0;
  for (std::size_t n = 0; n < p.size(); ++n) {
    prod[n] = p[n] * q[n];
    z += prod[n];
  }
  if (!(z > 0.0)) {
    throw IncompatibleKnowledgeError("pool_classical: distributions have disjoint supports");
  }
  for (double& v : prod) v /= z;
  return ProbDist(std::move(prod));
}

struct MatrixUpdate {
  DensityMatrix state;
  double probability;
};

/// sqrt(E) rho sqrt(E) / Tr[E rho] for co-diagonal rho and E: Bayes' rule in
/// matrix form.
inline MatrixUpdate matrix_bayes_update(const DensityMatrix& rho, const Effect& effect) {
  if (rho.dim() != effect.dim()) throw ShapeError("matrix_bayes_update: dimension mismatch");
  if (!is_diagonal(rho.matrix()) || !is_diagonal(effect.matrix())) {
    throw ShapeError("matrix_bayes_update: rho and effect must be diagonal in the same basis");
  }
  const double prob = effect.probability(rho);
  if (!(prob > 0.0)) throw ImpossibleOutcomeError("matrix_bayes_update: Tr[E rho] = 0");
  const ComplexMatrix root = matrix_sqrt_psd(effect.matrix());
  ComplexMatrix post = root * rho.matrix() * root / prob;
  return {DensityMatrix(hermitian_part(post)), prob};
}

/// Bijection n -> perm[n] on hypotheses; the matrix T has T(perm[n], n) = 1.
class PermutationTransform {
 public:
  explicit PermutationTransform(std::vector<std::size_t> perm) : perm_(std::move(perm)) {
    std::vector<bool> seen(perm_.size(), false);
    for (auto target : perm_) {
      if (target >= perm_.size() || seen[target]) {
        throw ShapeError("PermutationTransform: not a bijection");
      }
      seen[target] = true;
    }
  }

  static PermutationTransform identity(std::size_t n) {
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), 0);
    return PermutationTransform(std::move(p));
  }

  std::size_t size() const noexcept { return perm_.size(); }
  std::size_t operator()(std::size_t n) const { return perm_.at(n); }

  Eigen::MatrixXd matrix() const {
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(size()),
                                              static_cast<Eigen::Index>(size()));
    for (std::size_t n = 0; n < size(); ++n) t(perm_[n], n) = 1.0;
    return t;
  }

 private:
  std::vector<std::size_t> perm_;
};

inline ProbDist apply_transform(const ProbDist& p, const PermutationTransform& t) {
  if (p.size() != t.size()) throw ShapeError("apply_transform: size mismatch");
  std::vector<double> out(p.size());
  for (std::size_t n = 0; n < p.size(); ++n) out[t(n)] = p[n];
  return ProbDist(std::move(out));
}

/// T rho T^T
inline DensityMatrix apply_transform(const DensityMatrix& rho, const PermutationTransform& t) {
  if (static_cast<std::size_t>(rho.dim()) != t.size()) throw ShapeError("apply_transform: size mismatch");
  const ComplexMatrix tm = t.matrix().cast<Complex>();
  return DensityMatrix(tm * rho.matrix() * tm.transpose());
}

inline constexpr double kCommutatorTol = 1e-9;
inline constexpr double kZeroOverlap = 1e-14;

/// rho_A rho_B / Tr[rho_A rho_B], defined only for commuting states.
inline DensityMatrix pool_commuting_density(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) throw ShapeError("pool_commuting_density: dimension mismatch");
  const double comm = commutator_norm(a.matrix(), b.matrix());
  if (comm >= kCommutatorTol) {
    throw NoncommutingError("pool_commuting_density: ||[rho_A, rho_B]|| = " + std::to_string(comm));
  }
  const ComplexMatrix prod = a.matrix() * b.matrix();
  const double overlap = prod.trace().real();
  if (overlap <= kZeroOverlap) {
    throw IncompatibleKnowledgeError("pool_commuting_density: Tr[rho_A rho_B] = 0");
  }
  return DensityMatrix(hermitian_part(prod) / overlap);
}

}  // namespace qpool
