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

// Unitarily invariant measure over pure states.
//
// In coordinates c_k = sqrt(P_k) e^{i theta_k} the invariant measure is flat
// in the probabilities P on the (d-1)-simplex and in each phase theta_k on
// [0, 2 pi). Sampling draws P as normalized exponential spacings (a uniform
// Dirichlet) and the phases independently. The global phase is sampled too.

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "qpool/linalg.hpp"
#include "qpool/random.hpp"

namespace qpool {

struct PureStateSample {
  std::vector<double> probs;   // P_k, on the simplex
  std::vector<double> phases;  // theta_k in [0, 2 pi)
  ComplexVector amplitudes;    // sqrt(P_k) e^{i theta_k}

  Eigen::Index dim() const noexcept { return amplitudes.size(); }
  ComplexMatrix projector() const { return outer(amplitudes); }
};

template <class UniformRng>
PureStateSample sample_pure_state(Eigen::Index d, UniformRng& rng) {
  if (d < 1) throw ShapeError("sample_pure_state: dimension must be at least 1");
  std::exponential_distribution<double> expo(1.0);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  PureStateSample s;
  s.probs.resize(static_cast<std::size_t>(d));
  s.phases.resize(static_cast<std::size_t>(d));
  double total = 0.0;
  for (auto& p : s.probs) {
    p = expo(rng);
    total += p;
  }
  s.amplitudes.resize(d);
  for (Eigen::Index k = 0; k < d; ++k) {
    auto uk = static_cast<std::size_t>(k);
    s.probs[uk] /= total;
    s.phases[uk] = angle(rng);
    s.amplitudes(k) = std::polar(std::sqrt(s.probs[uk]), s.phases[uk]);
  }
  return s;
}

/// Invariant-measure sample restricted to a subspace, returned in ambient
/// coordinates.
template <class UniformRng>
ComplexVector sample_in_subspace(const Subspace& sub, UniformRng& rng) {
  if (sub.empty()) throw ShapeError("sample_in_subspace: empty subspace");
  return sub.basis() * sample_pure_state(sub.dim(), rng).amplitudes;
}

/// Total volume 2 pi^d / (d-1)! of the measure in Cartesian coordinates.
inline double measure_normalization(int d) {
  if (d < 1) throw ShapeError("measure_normalization: dimension must be at least 1");
  return 2.0 * std::pow(std::numbers::pi, d) / std::tgamma(static_cast<double>(d));
}

/// (1/n) sum |psi><psi| over n invariant samples.
inline ComplexMatrix average_projector(Eigen::Index d, std::size_t n_samples, std::uint64_t seed) {
  if (n_samples == 0) throw ShapeError("average_projector: need at least one sample");
  const ComplexMatrix zero = ComplexMatrix::Zero(d, d);
  ComplexMatrix sum = chunked_reduce(n_samples, seed, zero,
                                     [d](Rng& rng, std::size_t b, std::size_t e, ComplexMatrix& acc) {
                                       for (std::size_t k = b; k < e; ++k) {
                                         const auto s = sample_pure_state(d, rng);
                                         acc.noalias() += s.amplitudes * s.amplitudes.adjoint();
                                       }
                                     });
  return sum / static_cast<double>(n_samples);
}

}  // namespace qpool
