// Copyright 2026 The qswap Authors
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

#pragma once

// Dense linear algebra and quantum-information primitives for systems of
// one to five qubits. Every operator is an Eigen::MatrixXcd whose dimension
// is a power of two; qubit 0 is the most significant bit of a basis index.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qswap {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

namespace tol {
inline constexpr double kHermitian = 1e-10;
inline constexpr double kTrace = 1e-10;
inline constexpr double kPsd = 1e-10;
inline constexpr double kOperator = 1e-9;
}  // namespace tol

inline constexpr int kMaxQubits = 5;

class QuantumError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public QuantumError {
 public:
  using QuantumError::QuantumError;
};

class NotHermitianError : public QuantumError {
 public:
  using QuantumError::QuantumError;
};

class NotPhysicalError : public QuantumError {
 public:
  using QuantumError::QuantumError;
};

/// Raised when supp(rho) is not contained in supp(sigma); D[rho||sigma]
/// diverges and no finite value is returned.
class SupportError : public QuantumError {
 public:
  using QuantumError::QuantumError;
};

inline bool is_supported_dim(Eigen::Index n) {
  if (n < 2 || n > (Eigen::Index{1} << kMaxQubits)) return false;
  return (n & (n - 1)) == 0;
}

inline int qubit_count(Eigen::Index dim) {
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  return n;
}

inline void require_square_dim(const Matrix& m, const char* what) {
  if (m.rows() != m.cols() || !is_supported_dim(m.rows())) {
    throw DimensionError(std::string(what) + ": unsupported dimension " +
                         std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()));
  }
  if (!m.allFinite()) {
    throw DimensionError(std::string(what) + ": non-finite entries");
  }
}

inline double hermiticity_defect(const Matrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

inline bool is_hermitian(const Matrix& m, double tolerance = tol::kHermitian) {
  return m.rows() == m.cols() && hermiticity_defect(m) <= tolerance;
}

inline bool is_unitary(const Matrix& u, double tolerance = 1e-12) {
  if (u.rows() != u.cols()) return false;
  const Matrix id = Matrix::Identity(u.rows(), u.cols());
  return (u.adjoint() * u - id).cwiseAbs().maxCoeff() <= tolerance;
}

// --- Pauli and single-qubit constants -------------------------------------

inline Matrix identity(int dim) { return Matrix::Identity(dim, dim); }

inline Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

inline Matrix pauli_y() {
  Matrix m(2, 2);
  m << 0, cplx(0, -1), cplx(0, 1), 0;
  return m;
}

inline Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

// --- Spectrum ---------------------------------------------------------------

struct Spectrum {
  RVector eigenvalues;  // descending
  Matrix eigenvectors;  // column k belongs to eigenvalues[k]

  Matrix reconstruct() const {
    return eigenvectors * eigenvalues.cast<cplx>().asDiagonal() *
           eigenvectors.adjoint();
  }
};

inline Spectrum hermitian_eig(const Matrix& m) {
  require_square_dim(m, "hermitian_eig");
  if (!is_hermitian(m)) {
    throw NotHermitianError("hermitian_eig: matrix is not Hermitian (defect " +
                            std::to_string(hermiticity_defect(m)) + ")");
  }
  const Matrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  if (solver.info() != Eigen::Success) {
    throw QuantumError("hermitian_eig: eigensolver did not converge");
  }
  const auto n = h.rows();
  Spectrum s;
  s.eigenvalues.resize(n);
  s.eigenvectors.resize(n, n);
  // Eigen sorts ascending.
  for (Eigen::Index k = 0; k < n; ++k) {
    s.eigenvalues(k) = solver.eigenvalues()(n - 1 - k);
    s.eigenvectors.col(k) = solver.eigenvectors().col(n - 1 - k);
  }
  return s;
}

// --- DensityOperator --------------------------------------------------------

/// Hermitian, unit-trace, positive semidefinite operator. Construction
/// validates the invariants; instances are immutable afterwards.
class DensityOperator {
 public:
  explicit DensityOperator(Matrix m) : m_(std::move(m)) {
    require_square_dim(m_, "DensityOperator");
    if (!is_hermitian(m_)) {
      throw NotPhysicalError("DensityOperator: not Hermitian (defect " +
                             std::to_string(hermiticity_defect(m_)) + ")");
    }
    const double tr = m_.trace().real();
    if (std::abs(tr - 1.0) > tol::kTrace) {
      throw NotPhysicalError("DensityOperator: trace " + std::to_string(tr) +
                             " differs from 1");
    }
    m_ = 0.5 * (m_ + m_.adjoint());
    const double min_eig = hermitian_eig(m_).eigenvalues.minCoeff();
    if (min_eig < -tol::kPsd) {
      throw NotPhysicalError("DensityOperator: negative eigenvalue " +
                             std::to_string(min_eig));
    }
  }

  const Matrix& matrix() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }
  int qubits() const { return qubit_count(m_.rows()); }

  /// Computational-basis populations.
  RVector diagonal() const { return m_.diagonal().real(); }

 private:
  Matrix m_;
};

inline bool is_physical(const Matrix& m) {
  try {
    DensityOperator{m};
    return true;
  } catch (const QuantumError&) {
    return false;
  }
}

// --- Products and partial traces --------------------------------------------

inline Matrix tensor_product(const Matrix& a, const Matrix& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols() ||
      !is_supported_dim(a.rows() * b.rows())) {
    throw DimensionError("tensor_product: unsupported resulting dimension " +
                         std::to_string(a.rows() * b.rows()));
  }
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline DensityOperator tensor_product(const DensityOperator& a,
                                      const DensityOperator& b) {
  return DensityOperator(tensor_product(a.matrix(), b.matrix()));
}

/// Reduced state on `keep` (ascending or not; output ordering follows
/// `keep`). Works for any qubit count up to kMaxQubits.
inline Matrix reduced_matrix(const Matrix& rho, std::span<const int> keep) {
  require_square_dim(rho, "reduced_state");
  const int n = qubit_count(rho.rows());
  if (keep.empty() || static_cast<int>(keep.size()) > n) {
    throw DimensionError("reduced_state: invalid subsystem selection");
  }
  std::vector<bool> kept(n, false);
  for (int q : keep) {
    if (q < 0 || q >= n || kept[q]) {
      throw DimensionError("reduced_state: invalid subsystem id " +
                           std::to_string(q));
    }
    kept[q] = true;
  }
  std::vector<int> traced;
  for (int q = 0; q < n; ++q) {
    if (!kept[q]) traced.push_back(q);
  }
  const int k = static_cast<int>(keep.size());
  const Eigen::Index dk = Eigen::Index{1} << k;
  const Eigen::Index dt = Eigen::Index{1} << traced.size();
  auto compose = [&](Eigen::Index kept_bits, Eigen::Index traced_bits) {
    Eigen::Index idx = 0;
    for (int j = 0; j < k; ++j) {
      idx |= ((kept_bits >> (k - 1 - j)) & 1) << (n - 1 - keep[j]);
    }
    const int t = static_cast<int>(traced.size());
    for (int j = 0; j < t; ++j) {
      idx |= ((traced_bits >> (t - 1 - j)) & 1) << (n - 1 - traced[j]);
    }
    return idx;
  };
  Matrix out = Matrix::Zero(dk, dk);
  for (Eigen::Index i = 0; i < dk; ++i) {
    for (Eigen::Index j = 0; j < dk; ++j) {
      cplx acc = 0;
      for (Eigen::Index t = 0; t < dt; ++t) {
        acc += rho(compose(i, t), compose(j, t));
      }
      out(i, j) = acc;
    }
  }
  return out;
}

inline DensityOperator reduced_state(const DensityOperator& rho,
                                     std::span<const int> keep) {
  return DensityOperator(reduced_matrix(rho.matrix(), keep));
}

enum class Subsystem { A = 0, B = 1 };

/// Two-qubit partial trace; `keep` names the surviving qubit.
inline DensityOperator partial_trace(const DensityOperator& rho,
                                     Subsystem keep) {
  if (rho.dim() != 4) {
    throw DimensionError("partial_trace: expected a two-qubit state");
  }
  const int id = static_cast<int>(keep);
  if (id != 0 && id != 1) {
    throw DimensionError("partial_trace: invalid subsystem id " +
                         std::to_string(id));
  }
  const int q[1] = {id};
  return reduced_state(rho, q);
}

// --- Entropies --------------------------------------------------------------

inline double xlogx(double x) { return x <= 0.0 ? 0.0 : x * std::log(x); }

/// S(rho) = -Tr rho ln rho in nats; eigenvalues inside the PSD slack count
/// as zero.
inline double von_neumann_entropy(const DensityOperator& rho) {
  const RVector ev = hermitian_eig(rho.matrix()).eigenvalues;
  double s = 0.0;
  for (double v : ev) s -= xlogx(v);
  return std::max(s, 0.0);
}

/// D[rho||sigma] = Tr rho (ln rho - ln sigma), nats.
inline double relative_entropy(const DensityOperator& rho,
                               const DensityOperator& sigma) {
  if (rho.dim() != sigma.dim()) {
    throw DimensionError("relative_entropy: dimension mismatch");
  }
  const Spectrum ss = hermitian_eig(sigma.matrix());
  double cross = 0.0;  // Tr rho ln sigma
  for (Eigen::Index k = 0; k < ss.eigenvalues.size(); ++k) {
    const auto v = ss.eigenvectors.col(k);
    const double weight = (v.adjoint() * rho.matrix() * v)(0, 0).real();
    const double s = ss.eigenvalues(k);
    if (s <= tol::kPsd) {
      if (weight > tol::kPsd) {
        throw SupportError(
            "relative_entropy: support of rho exceeds support of sigma");
      }
      continue;
    }
    cross += weight * std::log(s);
  }
  double self = 0.0;  // Tr rho ln rho
  for (double v : hermitian_eig(rho.matrix()).eigenvalues) self += xlogx(v);
  return std::max(self - cross, 0.0);
}

/// I(A:B) = S_A + S_B - S_AB for a two-qubit state.
inline double mutual_information(const DensityOperator& rho) {
  return von_neumann_entropy(partial_trace(rho, Subsystem::A)) +
         von_neumann_entropy(partial_trace(rho, Subsystem::B)) -
         von_neumann_entropy(rho);
}

inline double trace_distance(const Matrix& a, const Matrix& b) {
  const Matrix d = a - b;
  const RVector ev = hermitian_eig(0.5 * (d + d.adjoint())).eigenvalues;
  return 0.5 * ev.cwiseAbs().sum();
}

inline double trace_distance(const DensityOperator& a,
                             const DensityOperator& b) {
  return trace_distance(a.matrix(), b.matrix());
}

// --- Projection onto physical states ----------------------------------------

/// Clips negative eigenvalues and renormalises. Idempotent on physical input.
inline DensityOperator nearest_physical(const Matrix& m) {
  const Spectrum s = hermitian_eig(m);
  RVector clipped = s.eigenvalues.cwiseMax(0.0);
  const double total = clipped.sum();
  if (total <= 0.0) {
    throw NotPhysicalError("nearest_physical: trace vanishes after clipping");
  }
  clipped /= total;
  Matrix out = s.eigenvectors * clipped.cast<cplx>().asDiagonal() *
               s.eigenvectors.adjoint();
  out = 0.5 * (out + out.adjoint());
  return DensityOperator(out);
}

inline Matrix pure_state(const CVector& psi) {
  const CVector n = psi / psi.norm();
  return n * n.adjoint();
}

}  // namespace qswap
