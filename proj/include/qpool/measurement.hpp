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

// Generalized measurements and multi-observer measurement histories.
//
// A history is a chronological list of steps, each owned by Alice, Bob or
// Eve. Flattening multiplies the chosen Kraus operators newest-on-the-left,
// A_{ije} = M_last ... M_first, and packs each owner's outcomes into one
// composite index in mixed radix with the owner's earliest step as the most
// significant digit. An owner without steps has a single composite outcome 0.

#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qpool/classical_bayes.hpp"
#include "qpool/linalg.hpp"
#include "qpool/operators.hpp"

namespace qpool {

enum class Owner { Alice, Bob, Eve };

inline std::string_view to_string(Owner o) {
  switch (o) {
    case Owner::Alice: return "alice";
    case Owner::Bob: return "bob";
    case Owner::Eve: return "eve";
  }
  return "?";
}

inline std::optional<Owner> owner_from_string(std::string_view s) {
  if (s == "alice") return Owner::Alice;
  if (s == "bob") return Owner::Bob;
  if (s == "eve") return Owner::Eve;
  return std::nullopt;
}

/// M rho M^dagger / Tr[M^dagger M rho].
inline MatrixUpdate measurement_update(const DensityMatrix& rho, const KrausPovm& op, std::size_t outcome) {
  if (op.dim() != rho.dim()) throw ShapeError("measurement_update: dimension mismatch");
  if (outcome >= op.size()) throw IndexError("measurement_update: outcome out of range");
  const ComplexMatrix& m = op[outcome];
  const ComplexMatrix unnorm = m * rho.matrix() * m.adjoint();
  const double prob = unnorm.trace().real();
  if (prob <= kZeroOverlap) throw ImpossibleOutcomeError("measurement_update: zero-probability outcome");
  return {DensityMatrix(hermitian_part(unnorm) / prob), prob};
}

struct HistoryStep {
  Owner owner;
  KrausPovm povm;
};

class MeasurementHistory {
 public:
  explicit MeasurementHistory(std::vector<HistoryStep> steps) : steps_(std::move(steps)) {
    if (steps_.empty()) throw ShapeError("MeasurementHistory: no steps");
    const auto d = steps_.front().povm.dim();
    for (const auto& s : steps_) {
      if (s.povm.dim() != d) throw ShapeError("MeasurementHistory: steps act on different dimensions");
    }
  }

  const std::vector<HistoryStep>& steps() const noexcept { return steps_; }
  Eigen::Index dim() const noexcept { return steps_.front().povm.dim(); }

  /// Outcome counts of the given owner's steps, chronological.
  std::vector<std::size_t> radices(Owner o) const {
    std::vector<std::size_t> r;
    for (const auto& s : steps_) {
      if (s.owner == o) r.push_back(s.povm.size());
    }
    return r;
  }

 private:
  std::vector<HistoryStep> steps_;
};

/// Partial assignment of the composite outcome indices.
struct KnownOutcomes {
  std::optional<std::size_t> i;  // Alice
  std::optional<std::size_t> j;  // Bob
  std::optional<std::size_t> e;  // Eve
};

/// Two-index (plus Eve) form of a whole measurement history.
class FlatPovm {
 public:
  FlatPovm(Eigen::Index dim, std::size_t i_max, std::size_t j_max, std::size_t e_max,
           std::vector<ComplexMatrix> ops)
      : dim_(dim), i_max_(i_max), j_max_(j_max), e_max_(e_max), ops_(std::move(ops)) {
    if (ops_.size() != i_max_ * j_max_ * e_max_) throw ShapeError("FlatPovm: operator count mismatch");
  }

  Eigen::Index dim() const noexcept { return dim_; }
  std::size_t i_max() const noexcept { return i_max_; }
  std::size_t j_max() const noexcept { return j_max_; }
  std::size_t e_max() const noexcept { return e_max_; }
  std::size_t size() const noexcept { return ops_.size(); }

  const ComplexMatrix& op(std::size_t i, std::size_t j, std::size_t e = 0) const {
    if (i >= i_max_ || j >= j_max_ || e >= e_max_) throw IndexError("FlatPovm: index out of range");
    return ops_[(i * j_max_ + j) * e_max_ + e];
  }

  const std::vector<ComplexMatrix>& ops() const noexcept { return ops_; }

  /// ||sum A^dagger A - I||, spectral norm.
  double completeness_residual() const { return validate_kraus(ops_).completeness_residual; }

 private:
  Eigen::Index dim_;
  std::size_t i_max_, j_max_, e_max_;
  std::vector<ComplexMatrix> ops_;
};

inline FlatPovm flatten_history(const MeasurementHistory& h) {
  auto count = [](const std::vector<std::size_t>& r) {
    std::size_t n = 1;
    for (auto v : r) n *= v;
    return n;
  };
  const std::size_t i_max = count(h.radices(Owner::Alice));
  const std::size_t j_max = count(h.radices(Owner::Bob));
  const std::size_t e_max = count(h.radices(Owner::Eve));
  const Eigen::Index d = h.dim();
  std::vector<ComplexMatrix> ops(i_max * j_max * e_max);

  const auto& steps = h.steps();
  // Depth-first over steps, extending the operator product on the left.
  auto descend = [&](auto&& self, std::size_t s, const ComplexMatrix& prod, std::size_t i,
                     std::size_t j, std::size_t e) -> void {
    if (s == steps.size()) {
      ops[(i * j_max + j) * e_max + e] = prod;
      return;
    }
    const auto& step = steps[s];
    const std::size_t r = step.povm.size();
    for (std::size_t k = 0; k < r; ++k) {
      const ComplexMatrix next = step.povm[k] * prod;
      switch (step.owner) {
        case Owner::Alice: self(self, s + 1, next, i * r + k, j, e); break;
        case Owner::Bob: self(self, s + 1, next, i, j * r + k, e); break;
        case Owner::Eve: self(self, s + 1, next, i, j, e * r + k); break;
      }
    }
  };
  descend(descend, 0, ComplexMatrix::Identity(d, d), 0, 0, 0);
  return FlatPovm(d, i_max, j_max, e_max, std::move(ops));
}

struct ConditionedState {
  DensityMatrix state;
  double probability;  // total probability of the known assignment
};

/// Normalized sum of A rho0 A^dagger over every index not fixed in `known`.
/// The default initial state is I/d: the observers share no prior
/// information. Passing `initial` selects a general starting state.
inline ConditionedState conditional_state(const FlatPovm& f, const KnownOutcomes& known,
                                          const std::optional<DensityMatrix>& initial = std::nullopt) {
  if (known.i && *known.i >= f.i_max()) throw IndexError("conditional_state: i out of range");
  if (known.j && *known.j >= f.j_max()) throw IndexError("conditional_state: j out of range");
  if (known.e && *known.e >= f.e_max()) throw IndexError("conditional_state: e out of range");
  if (initial && initial->dim() != f.dim()) throw ShapeError("conditional_state: initial state dimension");

  const Eigen::Index d = f.dim();
  ComplexMatrix acc = ComplexMatrix::Zero(d, d);
  for (std::size_t i = 0; i < f.i_max(); ++i) {
    if (known.i && *known.i != i) continue;
    for (std::size_t j = 0; j < f.j_max(); ++j) {
      if (known.j && *known.j != j) continue;
      for (std::size_t e = 0; e < f.e_max(); ++e) {
        if (known.e && *known.e != e) continue;
        const ComplexMatrix& a = f.op(i, j, e);
        if (initial) {
          acc += a * initial->matrix() * a.adjoint();
        } else {
          acc += a * a.adjoint();
        }
      }
    }
  }
  if (!initial) acc /= static_cast<double>(d);
  const double prob = acc.trace().real();
  if (prob <= kZeroOverlap) throw ImpossibleOutcomeError("conditional_state: zero-probability assignment");
  return {DensityMatrix(hermitian_part(acc) / prob), prob};
}

inline ConditionedState alice_state(const FlatPovm& f, std::size_t i) { return conditional_state(f, {i, {}, {}}); }
inline ConditionedState bob_state(const FlatPovm& f, std::size_t j) { return conditional_state(f, {{}, j, {}}); }
inline ConditionedState charlie_state(const FlatPovm& f, std::size_t i, std::size_t j) {
  return conditional_state(f, {i, j, {}});
}

}  // namespace qpool
