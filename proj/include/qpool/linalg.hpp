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

// Dense complex linear algebra for small quantum systems: Hermitian
// eigendecomposition, positivity tests, square roots, tensor products,
// partial traces, supports and subspace intersections.
//
// Tensor index convention: subsystem 0 is the most significant factor, so
// for dims (d0, d1, ..., dk) the basis state |i0 i1 ... ik> has linear index
// ((i0 * d1 + i1) * d2 + i2) ... . tensor(A, B) follows the same rule.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qpool/errors.hpp"

namespace qpool {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Numerical cutoffs. Hermiticity and orthonormality are measured relative
/// to the largest entry magnitude; positivity relative to max(1, lambda_max).
struct Tolerances {
  double herm = 1e-9;
  double trace = 1e-9;
  double psd = 1e-9;
  double orth = 1e-10;
};

inline constexpr Tolerances kDefaultTol{};

inline double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline bool is_square(const ComplexMatrix& m) { return m.rows() == m.cols(); }

inline void require_square(const ComplexMatrix& m, const char* what) {
  if (!is_square(m) || m.rows() == 0) {
    throw ShapeError(std::string(what) + ": expected a non-empty square matrix, got " +
                     std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

inline bool is_hermitian(const ComplexMatrix& m, double tol = kDefaultTol.herm) {
  if (!is_square(m)) return false;
  return max_abs(m - m.adjoint()) <= tol * std::max(max_abs(m), 1e-300);
}

inline void require_hermitian(const ComplexMatrix& m, const char* what,
                              double tol = kDefaultTol.herm) {
  require_square(m, what);
  if (!is_hermitian(m, tol)) {
    throw HermiticityError(std::string(what) + ": matrix is not Hermitian (residual " +
                           std::to_string(max_abs(m - m.adjoint())) + ")");
  }
}

/// (H + H^dagger) / 2; removes round-off asymmetry.
inline ComplexMatrix hermitian_part(const ComplexMatrix& m) {
  return (m + m.adjoint()) * 0.5;
}

struct HermitianEig {
  RealVector values;     // descending
  ComplexMatrix vectors; // columns, unitary
};

inline HermitianEig hermitian_eig(const ComplexMatrix& h, double tol = kDefaultTol.herm) {
  require_hermitian(h, "hermitian_eig", tol);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(h));
  const Eigen::Index n = h.rows();
  HermitianEig out{RealVector(n), ComplexMatrix(n, n)};
  // Eigen sorts ascending.
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = solver.eigenvalues()(n - 1 - k);
    out.vectors.col(k) = solver.eigenvectors().col(n - 1 - k);
  }
  return out;
}

inline double psd_threshold(const RealVector& eigenvalues, double tol) {
  return -tol * std::max(1.0, eigenvalues.size() ? eigenvalues(0) : 0.0);
}

inline bool is_psd(const ComplexMatrix& h, double tol = kDefaultTol.psd) {
  const auto eig = hermitian_eig(h);
  return eig.values(eig.values.size() - 1) >= psd_threshold(eig.values, tol);
}

inline ComplexMatrix matrix_sqrt_psd(const ComplexMatrix& h, double tol = kDefaultTol.psd) {
  auto eig = hermitian_eig(h);
  const Eigen::Index n = eig.values.size();
  if (eig.values(n - 1) < psd_threshold(eig.values, tol)) {
    throw PositivityError("matrix_sqrt_psd: smallest eigenvalue " +
                          std::to_string(eig.values(n - 1)) + " is negative");
  }
  RealVector roots = eig.values.cwiseMax(0.0).cwiseSqrt();
  return hermitian_part(eig.vectors * roots.asDiagonal() * eig.vectors.adjoint());
}

/// Kronecker product, first factor most significant.
inline ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline ComplexVector tensor(const ComplexVector& a, const ComplexVector& b) {
  ComplexVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    out.segment(i * b.size(), b.size()) = a(i) * b;
  }
  return out;
}

/// Traces out every subsystem not listed in `keep`. Kept subsystems appear
/// in ascending order in the result.
inline ComplexMatrix partial_trace(const ComplexMatrix& m, std::span<const std::size_t> dims,
                                   std::span<const std::size_t> keep) {
  require_square(m, "partial_trace");
  if (dims.empty()) throw ShapeError("partial_trace: empty dimension list");
  std::size_t total = 1;
  for (auto d : dims) {
    if (d == 0) throw ShapeError("partial_trace: zero subsystem dimension");
    total *= d;
  }
  if (total != static_cast<std::size_t>(m.rows())) {
    throw ShapeError("partial_trace: subsystem dimensions multiply to " + std::to_string(total) +
                     " but matrix has dimension " + std::to_string(m.rows()));
  }
  std::vector<bool> kept(dims.size(), false);
  for (auto k : keep) {
    if (k >= dims.size()) {
      throw IndexError("partial_trace: subsystem " + std::to_string(k) + " out of range");
    }
    if (kept[k]) throw IndexError("partial_trace: subsystem listed twice");
    kept[k] = true;
  }

  std::vector<std::size_t> stride(dims.size());
  std::size_t s = 1;
  for (std::size_t q = dims.size(); q-- > 0;) {
    stride[q] = s;
    s *= dims[q];
  }

  // Linear offsets of every multi-index over a subset of subsystems.
  auto offsets = [&](bool want_kept) {
    std::vector<std::size_t> offs{0};
    for (std::size_t q = 0; q < dims.size(); ++q) {
      if (kept[q] != want_kept) continue;
      std::vector<std::size_t> next;
      next.reserve(offs.size() * dims[q]);
      for (auto o : offs) {
        for (std::size_t digit = 0; digit < dims[q]; ++digit) next.push_back(o + digit * stride[q]);
      }
      offs = std::move(next);
    }
    return offs;
  };
  const auto keep_off = offsets(true);
  const auto trace_off = offsets(false);

  const auto n = static_cast<Eigen::Index>(keep_off.size());
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) {
      Complex acc = 0.0;
      for (auto t : trace_off) {
        acc += m(static_cast<Eigen::Index>(keep_off[r] + t),
                 static_cast<Eigen::Index>(keep_off[c] + t));
      }
      out(r, c) = acc;
    }
  }
  return out;
}

inline ComplexMatrix partial_trace(const ComplexMatrix& m, std::initializer_list<std::size_t> dims,
                                   std::initializer_list<std::size_t> keep) {
  return partial_trace(m, std::span<const std::size_t>(dims.begin(), dims.size()),
                       std::span<const std::size_t>(keep.begin(), keep.size()));
}

inline ComplexVector basis_ket(Eigen::Index dim, Eigen::Index index) {
  ComplexVector v = ComplexVector::Zero(dim);
  v(index) = 1.0;
  return v;
}

inline ComplexMatrix outer(const ComplexVector& v) { return v * v.adjoint(); }

/// Hermitian, PSD, unit-trace matrix.
class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMatrix m, const Tolerances& tol = kDefaultTol) : mat_(std::move(m)) {
    require_hermitian(mat_, "DensityMatrix", tol.herm);
    mat_ = hermitian_part(mat_);
    const Complex tr = mat_.trace();
    if (std::abs(tr - Complex(1.0)) > tol.trace) {
      throw NormalizationError("DensityMatrix: trace is " + std::to_string(tr.real()) + ", not 1");
    }
    const auto eig = hermitian_eig(mat_);
    if (eig.values(eig.values.size() - 1) < psd_threshold(eig.values, tol.psd)) {
      throw PositivityError("DensityMatrix: negative eigenvalue " +
                            std::to_string(eig.values(eig.values.size() - 1)));
    }
  }

  /// Hermitizes and divides by the trace before validating.
  static DensityMatrix normalized(const ComplexMatrix& m) {
    require_square(m, "DensityMatrix::normalized");
    const double tr = m.trace().real();
    if (!(tr > 0.0)) throw NormalizationError("DensityMatrix::normalized: non-positive trace");
    return DensityMatrix(hermitian_part(m) / tr);
  }

  static DensityMatrix maximally_mixed(Eigen::Index dim) {
    return DensityMatrix(ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim));
  }

  static DensityMatrix pure(const ComplexVector& v) {
    const double n = v.squaredNorm();
    if (!(n > 0.0)) throw NormalizationError("DensityMatrix::pure: zero vector");
    return DensityMatrix(outer(v) / n);
  }

  static DensityMatrix diagonal(std::span<const double> probs) {
    ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(probs.size()),
                                          static_cast<Eigen::Index>(probs.size()));
    for (std::size_t k = 0; k < probs.size(); ++k) m(k, k) = probs[k];
    return DensityMatrix(std::move(m));
  }

  static DensityMatrix diagonal(std::initializer_list<double> probs) {
    return diagonal(std::span<const double>(probs.begin(), probs.size()));
  }

  const ComplexMatrix& matrix() const noexcept { return mat_; }
  Eigen::Index dim() const noexcept { return mat_.rows(); }

 private:
  ComplexMatrix mat_;
};

/// Subspace of C^d described by an orthonormal basis (columns).
class Subspace {
 public:
  explicit Subspace(Eigen::Index ambient_dim)
      : ambient_(ambient_dim), basis_(ComplexMatrix::Zero(ambient_dim, 0)) {}

  Subspace(Eigen::Index ambient_dim, ComplexMatrix basis, double tol_orth = kDefaultTol.orth)
      : ambient_(ambient_dim), basis_(std::move(basis)) {
    if (basis_.rows() != ambient_ || basis_.cols() > ambient_) {
      throw ShapeError("Subspace: basis shape does not match ambient dimension");
    }
    if (basis_.cols() > 0) {
      const ComplexMatrix gram = basis_.adjoint() * basis_;
      const ComplexMatrix id = ComplexMatrix::Identity(basis_.cols(), basis_.cols());
      if (max_abs(gram - id) > tol_orth) throw ShapeError("Subspace: basis is not orthonormal");
    }
  }

  /// Orthonormal basis for the span of arbitrary vectors (columns).
  static Subspace span(const ComplexMatrix& vectors, double rank_tol = 1e-10) {
    Eigen::JacobiSVD<ComplexMatrix> svd(vectors, Eigen::ComputeFullU);
    const RealVector& sv = svd.singularValues();
    const double top = sv.size() ? sv(0) : 0.0;
    Eigen::Index rank = 0;
    while (rank < sv.size() && sv(rank) > rank_tol * std::max(top, 1e-300)) ++rank;
    return Subspace(vectors.rows(), svd.matrixU().leftCols(rank));
  }

  Eigen::Index ambient_dim() const noexcept { return ambient_; }
  Eigen::Index dim() const noexcept { return basis_.cols(); }
  bool empty() const noexcept { return basis_.cols() == 0; }
  const ComplexMatrix& basis() const noexcept { return basis_; }
  ComplexMatrix projector() const { return basis_ * basis_.adjoint(); }

  /// Norm of the component of `v` orthogonal to this subspace.
  double residual(const ComplexVector& v) const { return (v - projector() * v).norm(); }

 private:
  Eigen::Index ambient_;
  ComplexMatrix basis_;
};

/// Span of the eigenvectors whose eigenvalue exceeds tol * lambda_max.
inline Subspace support(const DensityMatrix& rho, double tol = 1e-9) {
  const auto eig = hermitian_eig(rho.matrix());
  const double cut = tol * std::max(eig.values(0), 0.0);
  Eigen::Index k = 0;
  while (k < eig.values.size() && eig.values(k) > cut) ++k;
  return Subspace(rho.dim(), eig.vectors.leftCols(k));
}

/// Directions whose principal-angle cosine between the two subspaces
/// exceeds 1 - tol.
inline Subspace subspace_intersection(const Subspace& u, const Subspace& v, double tol = 1e-9) {
  if (u.ambient_dim() != v.ambient_dim()) {
    throw ShapeError("subspace_intersection: ambient dimensions differ");
  }
  if (u.empty() || v.empty()) return Subspace(u.ambient_dim());
  const ComplexMatrix overlap = u.basis().adjoint() * v.basis();
  Eigen::JacobiSVD<ComplexMatrix> svd(overlap, Eigen::ComputeFullU);
  Eigen::Index k = 0;
  const RealVector& sv = svd.singularValues();
  while (k < sv.size() && sv(k) > 1.0 - tol) ++k;
  ComplexMatrix basis = u.basis() * svd.matrixU().leftCols(k);
  // Re-orthonormalize against round-off accumulated through the product.
  if (k > 0) {
    Eigen::HouseholderQR<ComplexMatrix> qr(basis);
    ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(basis.rows(), k);
    basis = q;
  }
  return Subspace(u.ambient_dim(), std::move(basis));
}

/// Residual of projecting every basis vector of `a` onto `b`, max over vectors.
inline double projection_residual(const Subspace& a, const Subspace& b) {
  const ComplexMatrix pb = b.projector();
  double worst = 0.0;
  for (Eigen::Index k = 0; k < a.dim(); ++k) {
    worst = std::max(worst, (a.basis().col(k) - pb * a.basis().col(k)).norm());
  }
  return worst;
}

/// (1/2) || rho - sigma ||_1
inline double trace_distance(const ComplexMatrix& rho, const ComplexMatrix& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) {
    throw ShapeError("trace_distance: shape mismatch");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(rho - sigma),
                                                      Eigen::EigenvaluesOnly);
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

inline double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  return trace_distance(a.matrix(), b.matrix());
}

inline double commutator_norm(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a * b - b * a).norm();
}

inline bool is_diagonal(const ComplexMatrix& m, double tol = 1e-12) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (i != j && std::abs(m(i, j)) > tol) return false;
    }
  }
  return true;
}

}  // namespace qpool
