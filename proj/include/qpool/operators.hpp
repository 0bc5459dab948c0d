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

// Effects, POVMs and Kraus decompositions.

#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qpool/linalg.hpp"

namespace qpool {

inline constexpr double kCompletenessTol = 1e-9;

/// Hermitian operator with spectrum in [0, 1].
class Effect {
 public:
  explicit Effect(ComplexMatrix m, double tol = kDefaultTol.psd) : mat_(std::move(m)) {
    require_hermitian(mat_, "Effect");
    mat_ = hermitian_part(mat_);
    const auto eig = hermitian_eig(mat_);
    if (eig.values(eig.values.size() - 1) < -tol) {
      throw PositivityError("Effect: negative eigenvalue " +
                            std::to_string(eig.values(eig.values.size() - 1)));
    }
    if (eig.values(0) > 1.0 + tol) {
      throw InvalidEffectError("Effect: eigenvalue " + std::to_string(eig.values(0)) +
                               " exceeds 1");
    }
  }

  static Effect identity(Eigen::Index dim) { return Effect(ComplexMatrix::Identity(dim, dim)); }
  static Effect projector(const ComplexVector& v) { return Effect(outer(v.normalized())); }

  const ComplexMatrix& matrix() const noexcept { return mat_; }
  Eigen::Index dim() const noexcept { return mat_.rows(); }

  /// Tr[E rho]
  double probability(const DensityMatrix& rho) const {
    if (rho.dim() != dim()) throw ShapeError("Effect::probability: dimension mismatch");
    return (mat_ * rho.matrix()).trace().real();
  }

 private:
  ComplexMatrix mat_;
};

struct PovmReport {
  bool ok = true;
  double completeness_residual = 0.0;  // spectral norm of sum(E) - I
  std::vector<double> psd_margins;     // smallest eigenvalue of each effect
  std::vector<std::string> failures;
};

/// Checks completeness and positivity of a candidate effect list. Failures
/// are collected in the report, never thrown.
inline PovmReport validate_povm(std::span<const ComplexMatrix> effects,
                                double tol = kCompletenessTol) {
  PovmReport report;
  if (effects.empty()) {
    report.ok = false;
    report.failures.emplace_back("empty effect list");
    return report;
  }
  const Eigen::Index d = effects.front().rows();
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  for (std::size_t k = 0; k < effects.size(); ++k) {
    const auto& e = effects[k];
    if (e.rows() != d || e.cols() != d) {
      report.ok = false;
      report.failures.push_back("effect " + std::to_string(k) + ": shape mismatch");
      report.psd_margins.push_back(0.0);
      continue;
    }
    if (!is_hermitian(e)) {
      report.ok = false;
      report.failures.push_back("effect " + std::to_string(k) + ": not Hermitian");
      report.psd_margins.push_back(0.0);
      sum += e;
      continue;
    }
    const auto eig = hermitian_eig(e);
    const double margin = eig.values(eig.values.size() - 1);
    report.psd_margins.push_back(margin);
    if (margin < -tol) {
      report.ok = false;
      report.failures.push_back("effect " + std::to_string(k) + ": negative eigenvalue " +
                                std::to_string(margin));
    }
    sum += e;
  }
  const ComplexMatrix residual = hermitian_part(sum - ComplexMatrix::Identity(d, d));
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(residual, Eigen::EigenvaluesOnly);
  report.completeness_residual = solver.eigenvalues().cwiseAbs().maxCoeff();
  if (report.completeness_residual > tol) {
    report.ok = false;
    report.failures.push_back("completeness: ||sum E - I|| = " +
                              std::to_string(report.completeness_residual));
  }
  return report;
}

/// Same checks applied to the effects M^dagger M of a Kraus list.
inline PovmReport validate_kraus(std::span<const ComplexMatrix> ops,
                                 double tol = kCompletenessTol) {
  std::vector<ComplexMatrix> effects;
  effects.reserve(ops.size());
  for (const auto& m : ops) effects.push_back(hermitian_part(m.adjoint() * m));
  return validate_povm(effects, tol);
}

class Povm {
 public:
  explicit Povm(std::vector<Effect> effects) : effects_(std::move(effects)) {
    std::vector<ComplexMatrix> mats;
    for (const auto& e : effects_) mats.push_back(e.matrix());
    const auto report = validate_povm(mats);
    if (!report.ok) throw NormalizationError("Povm: " + report.failures.front());
  }

  static Povm from_matrices(const std::vector<ComplexMatrix>& mats) {
    std::vector<Effect> effects;
    for (const auto& m : mats) effects.emplace_back(m);
    return Povm(std::move(effects));
  }

  /// Rank-one projective measurement onto the columns of a unitary.
  static Povm projective(const ComplexMatrix& basis) {
    std::vector<Effect> effects;
    for (Eigen::Index k = 0; k < basis.cols(); ++k) effects.push_back(Effect::projector(basis.col(k)));
    return Povm(std::move(effects));
  }

  std::size_t size() const noexcept { return effects_.size(); }
  Eigen::Index dim() const noexcept { return effects_.front().dim(); }
  const Effect& operator[](std::size_t k) const { return effects_.at(k); }
  const std::vector<Effect>& effects() const noexcept { return effects_; }

 private:
  std::vector<Effect> effects_;
};

/// Measurement operators M_i with sum M_i^dagger M_i = I.
class KrausPovm {
 public:
  explicit KrausPovm(std::vector<ComplexMatrix> ops) : ops_(std::move(ops)) {
    if (ops_.empty()) throw ShapeError("KrausPovm: empty operator list");
    const Eigen::Index d = ops_.front().rows();
    for (const auto& m : ops_) {
      if (m.rows() != d || m.cols() != d) throw ShapeError("KrausPovm: operators differ in shape");
    }
    const auto report = validate_kraus(ops_);
    if (!report.ok) throw NormalizationError("KrausPovm: " + report.failures.front());
  }

  /// M_i = U_i sqrt(E_i); unitaries default to the identity.
  static KrausPovm from_povm(const Povm& povm,
                             const std::optional<std::vector<ComplexMatrix>>& unitaries = std::nullopt) {
    if (unitaries && unitaries->size() != povm.size()) {
      throw ShapeError("KrausPovm::from_povm: one unitary per effect required");
    }
    std::vector<ComplexMatrix> ops;
    ops.reserve(povm.size());
    for (std::size_t k = 0; k < povm.size(); ++k) {
      ComplexMatrix root = matrix_sqrt_psd(povm[k].matrix());
      if (unitaries) {
        const auto& u = (*unitaries)[k];
        if (u.rows() != root.rows() || !u.isUnitary(1e-9)) {
          throw ShapeError("KrausPovm::from_povm: unitary " + std::to_string(k) + " is invalid");
        }
        root = u * root;
      }
      ops.push_back(std::move(root));
    }
    return KrausPovm(std::move(ops));
  }

  std::size_t size() const noexcept { return ops_.size(); }
  Eigen::Index dim() const noexcept { return ops_.front().rows(); }
  const ComplexMatrix& operator[](std::size_t k) const { return ops_.at(k); }
  const std::vector<ComplexMatrix>& ops() const noexcept { return ops_; }
  ComplexMatrix effect(std::size_t k) const { return hermitian_part(ops_.at(k).adjoint() * ops_.at(k)); }

 private:
  std::vector<ComplexMatrix> ops_;
};

}  // namespace qpool
