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

// Bayesian state estimation over the invariant pure-state prior.
//
// Two routes to the same predictive states:
//  - Monte Carlo: a weighted ensemble of sampled pure states, reweighted by
//    Tr[E rho] for every observed effect.
//  - Exact, for qubits and diagonal effects A(x) = diag(x, 1 - x): the
//    population r = rho_11 of an invariant random qubit state is uniform on
//    [0, 1], Tr[A(x) rho] = (2x - 1) r + (1 - x), and the posterior density
//    is a polynomial q(r). The predictive state is diag(m1/m0, 1 - m1/m0)
//    with m_k = int_0^1 r^k q(r) dr; off-diagonal moments vanish under the
//    phase integral. Moments are computed in exact rational arithmetic.

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qpool/haar.hpp"
#include "qpool/linalg.hpp"
#include "qpool/operators.hpp"
#include "qpool/random.hpp"

namespace qpool {

using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Effect A(x) = diag(x, 1 - x) on a qubit.
class DiagonalEffect {
 public:
  explicit DiagonalEffect(Rational x) : x_(std::move(x)) {
    if (x_ < 0 || x_ > 1) throw InvalidEffectError("DiagonalEffect: x = " + x_.str() + " outside [0, 1]");
  }
  /// Exact: every finite double is a dyadic rational.
  static DiagonalEffect from_double(double x) {
    if (!std::isfinite(x)) throw InvalidEffectError("DiagonalEffect: non-finite x");
    return DiagonalEffect(Rational(x));
  }
  static DiagonalEffect from_fraction(std::int64_t num, std::int64_t den) {
    if (den == 0) throw InvalidEffectError("DiagonalEffect: zero denominator");
    return DiagonalEffect(Rational(num) / Rational(den));
  }

  const Rational& x() const noexcept { return x_; }
  Effect effect() const {
    const double v = to_double(x_);
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 0) = v;
    m(1, 1) = 1.0 - v;
    return Effect(m);
  }

 private:
  Rational x_;
};

/// Unnormalized posterior density of r on [0, 1], ascending coefficients.
class PolynomialDensity {
 public:
  PolynomialDensity() : c_{Rational(1)} {}

  explicit PolynomialDensity(std::vector<Rational> coeffs) : c_(std::move(coeffs)) {
    if (c_.empty()) c_.push_back(Rational(0));
    for (int g = 0; g <= 1000; ++g) {
      if (evaluate(g / 1000.0) < -1e-12) {
        throw PositivityError("PolynomialDensity: negative on [0, 1]");
      }
    }
  }

  const std::vector<Rational>& coefficients() const noexcept { return c_; }
  std::size_t degree() const noexcept { return c_.size() - 1; }

  double evaluate(double r) const {
    double acc = 0.0;
    for (std::size_t k = c_.size(); k-- > 0;) acc = acc * r + to_double(c_[k]);
    return acc;
  }

  /// int_0^1 r^k q(r) dr, exact.
  Rational moment(unsigned k) const {
    Rational m = 0;
    for (std::size_t j = 0; j < c_.size(); ++j) m += c_[j] / Rational(j + k + 1);
    return m;
  }

  friend PolynomialDensity operator*(const PolynomialDensity& a, const PolynomialDensity& b) {
    std::vector<Rational> out(a.c_.size() + b.c_.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
    }
    PolynomialDensity p;
    p.c_ = std::move(out);
    return p;
  }

  friend bool operator==(const PolynomialDensity&, const PolynomialDensity&) = default;

 private:
  std::vector<Rational> c_;
};

/// q(r) = prod over effects of Tr[A(x) rho] = (2x - 1) r + (1 - x).
inline PolynomialDensity qubit_diagonal_posterior(std::span<const DiagonalEffect> effects) {
  PolynomialDensity q;
  for (const auto& e : effects) {
    q = q * PolynomialDensity(std::vector<Rational>{1 - e.x(), 2 * e.x() - 1});
  }
  return q;
}

inline PolynomialDensity qubit_diagonal_posterior(std::initializer_list<DiagonalEffect> effects) {
  return qubit_diagonal_posterior(std::span<const DiagonalEffect>(effects.begin(), effects.size()));
}

/// Exactly known diagonal qubit state diag(p0, p1).
struct ExactQubitState {
  Rational p0;
  Rational p1;

  DensityMatrix density() const { return DensityMatrix::diagonal({to_double(p0), to_double(p1)}); }
  friend bool operator==(const ExactQubitState&, const ExactQubitState&) = default;
};

inline ExactQubitState exact_predictive(const PolynomialDensity& q) {
  const Rational m0 = q.moment(0);
  if (m0 <= 0) throw ImpossibleOutcomeError("polynomial_predictive: zero normalizer");
  const Rational p0 = q.moment(1) / m0;
  return {p0, 1 - p0};
}

inline DensityMatrix polynomial_predictive(const PolynomialDensity& q) { return exact_predictive(q).density(); }

/// Predictive state of an observer holding both observers' data.
inline ExactQubitState exact_pooled(const PolynomialDensity& a, const PolynomialDensity& b) {
  return exact_predictive(a * b);
}

inline DensityMatrix pooled_predictive(const PolynomialDensity& a, const PolynomialDensity& b) {
  return exact_pooled(a, b).density();
}

/// beta such that the predictive state after A(beta), A(gamma) equals the
/// one after A(alpha) alone.
inline Rational beta_constraint(const Rational& alpha, const Rational& gamma) {
  const Rational third(1, 3);
  const Rational num = third * (gamma - 2) * (alpha + 1) + Rational(1, 2);
  const Rational den = third * (2 * gamma - 1) * (alpha + 1) - gamma;
  if (den == 0) throw SingularConstraintError("beta_constraint: singular denominator");
  const Rational beta = num / den;
  if (beta < 0 || beta > 1) {
    throw InvalidEffectError("beta_constraint: beta = " + beta.str() + " outside [0, 1]");
  }
  const DiagonalEffect a(alpha), b(beta), g(gamma);
  if (exact_predictive(qubit_diagonal_posterior({b, g})) != exact_predictive(qubit_diagonal_posterior({a}))) {
    throw SingularConstraintError("beta_constraint: postcondition failed");
  }
  return beta;
}

inline double beta_constraint(double alpha, double gamma) {
  return to_double(beta_constraint(Rational(alpha), Rational(gamma)));
}

// ---------------------------------------------------------------------------
// Monte-Carlo route

/// Pure-state samples (columns of `amplitudes`) with non-negative weights.
struct WeightedStateEnsemble {
  Eigen::Index dim = 0;
  ComplexMatrix amplitudes;  // dim x n
  RealVector weights;        // n

  std::size_t size() const noexcept { return static_cast<std::size_t>(weights.size()); }

  PureStateSample sample(std::size_t k) const {
    PureStateSample s;
    s.amplitudes = amplitudes.col(static_cast<Eigen::Index>(k));
    for (Eigen::Index i = 0; i < dim; ++i) {
      s.probs.push_back(std::norm(s.amplitudes(i)));
      double phase = std::arg(s.amplitudes(i));
      if (phase < 0.0) phase += 2.0 * std::numbers::pi;
      s.phases.push_back(phase);
    }
    return s;
  }
};

/// n invariant samples with unit weights. Column k is drawn from the chunk
/// stream that owns k, so the ensemble depends only on (d, n, seed).
inline WeightedStateEnsemble sample_flat_ensemble(Eigen::Index d, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw ShapeError("sample_flat_ensemble: need at least one sample");
  WeightedStateEnsemble ens{d, ComplexMatrix(d, static_cast<Eigen::Index>(n)),
                            RealVector::Ones(static_cast<Eigen::Index>(n))};
  const std::size_t chunks = (n + kChunkSize - 1) / kChunkSize;
  for (std::size_t c = 0; c < chunks; ++c) {
    Rng rng = make_stream(seed, c);
    for (std::size_t k = c * kChunkSize; k < std::min(n, (c + 1) * kChunkSize); ++k) {
      ens.amplitudes.col(static_cast<Eigen::Index>(k)) = sample_pure_state(d, rng).amplitudes;
    }
  }
  return ens;
}

/// Bayes' rule on the sampled prior: each weight times Tr[E rho_k].
inline WeightedStateEnsemble posterior_update(const WeightedStateEnsemble& ens, const Effect& effect) {
  if (effect.dim() != ens.dim) throw ShapeError("posterior_update: dimension mismatch");
  WeightedStateEnsemble out = ens;
  const ComplexMatrix applied = effect.matrix() * ens.amplitudes;
  double total = 0.0;
  for (Eigen::Index k = 0; k < out.weights.size(); ++k) {
    const double like = std::max(0.0, ens.amplitudes.col(k).dot(applied.col(k)).real());
    out.weights(k) *= like;
    total += out.weights(k);
  }
  if (!(total > 0.0)) throw ImpossibleOutcomeError("posterior_update: all weights vanish");
  return out;
}

/// Weighted mean projector of a single remaining copy.
inline DensityMatrix predictive_state(const WeightedStateEnsemble& ens) {
  const double total = ens.weights.sum();
  if (!(total > 0.0)) throw ImpossibleOutcomeError("predictive_state: zero total weight");
  const ComplexMatrix m = ens.amplitudes * ens.weights.asDiagonal() * ens.amplitudes.adjoint();
  return DensityMatrix::normalized(m);
}

inline constexpr std::size_t kDefinettiDimGuard = 4096;

/// Monte-Carlo estimate of int P(rho) rho^{(x)N} d rho. With `posterior`,
/// its samples and weights replace the flat prior and `n_samples`/`seed` are
/// ignored. N = 0 gives the 1x1 matrix [1].
inline DensityMatrix definetti_state(Eigen::Index d, unsigned copies, std::size_t n_samples, std::uint64_t seed,
                                     const WeightedStateEnsemble* posterior = nullptr) {
  if (copies == 0) return DensityMatrix(ComplexMatrix::Identity(1, 1));
  std::size_t big = 1;
  for (unsigned c = 0; c < copies; ++c) {
    big *= static_cast<std::size_t>(d);
    if (big > kDefinettiDimGuard) {
      throw DimensionGuardError("definetti_state: d^N exceeds " + std::to_string(kDefinettiDimGuard));
    }
  }
  WeightedStateEnsemble local;
  if (!posterior) local = sample_flat_ensemble(d, n_samples, seed);
  const WeightedStateEnsemble& ens = posterior ? *posterior : local;
  if (ens.dim != d) throw ShapeError("definetti_state: ensemble dimension mismatch");

  const auto dim = static_cast<Eigen::Index>(big);
  ComplexMatrix acc = ComplexMatrix::Zero(dim, dim);
  constexpr Eigen::Index kBlock = 256;
  const auto n = static_cast<Eigen::Index>(ens.size());
  for (Eigen::Index start = 0; start < n; start += kBlock) {
    const Eigen::Index len = std::min(kBlock, n - start);
    ComplexMatrix powers(dim, len);
    for (Eigen::Index k = 0; k < len; ++k) {
      const ComplexVector psi = ens.amplitudes.col(start + k);
      ComplexVector v = psi;
      for (unsigned c = 1; c < copies; ++c) v = tensor(v, psi);
      powers.col(k) = v;
    }
    acc.noalias() += powers * ens.weights.segment(start, len).asDiagonal() * powers.adjoint();
  }
  return DensityMatrix::normalized(acc);
}

}  // namespace qpool
