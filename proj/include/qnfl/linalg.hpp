// Copyright 2026 The qnfl Authors
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

#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace qnfl {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Frobenius-norm tolerance for the unitarity certificate.
inline constexpr double kUnitarityTol = 1e-10;
/// Tolerance on | <psi|psi> - 1 | for pure states.
inline constexpr double kStateNormTol = 1e-12;
/// Hermiticity tolerance accepted by expm_hermitian.
inline constexpr double kHermiticityTol = 1e-10;
/// Default residual threshold below which orthonormalize drops a vector.
inline constexpr double kOrthoTol = 1e-10;

inline bool all_finite(const Matrix& a) { return a.allFinite(); }
inline bool all_finite(const Vector& v) { return v.allFinite(); }

/// Checked matrix product. Throws std::invalid_argument on a shape mismatch.
inline Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw std::invalid_argument("matmul: inner dimensions disagree (" +
                                std::to_string(a.cols()) + " vs " +
                                std::to_string(b.rows()) + ")");
  }
  return a * b;
}

/// Conjugate transpose.
inline Matrix adjoint(const Matrix& a) { return a.adjoint(); }

/// Trace of a square matrix. Throws std::invalid_argument otherwise.
inline Complex trace(const Matrix& a) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("trace: matrix is not square");
  }
  return a.trace();
}

inline Matrix identity(Index d) { return Matrix::Identity(d, d); }

inline double unitarity_defect(const Matrix& m) {
  return (m.adjoint() * m - Matrix::Identity(m.cols(), m.cols())).norm();
}

/// A square matrix certified unitary at construction:
/// ||U^dag U - 1||_F <= kUnitarityTol.
class UnitaryOperator {
 public:
  explicit UnitaryOperator(Matrix m) : mat_(std::move(m)) {
    if (mat_.rows() != mat_.cols()) {
      throw std::invalid_argument("UnitaryOperator: matrix is not square");
    }
    if (!all_finite(mat_)) {
      throw std::invalid_argument("UnitaryOperator: non-finite entries");
    }
    if (unitarity_defect(mat_) > kUnitarityTol) {
      throw std::invalid_argument("UnitaryOperator: unitarity check failed");
    }
  }

  Index dim() const { return mat_.rows(); }
  const Matrix& matrix() const { return mat_; }

 private:
  Matrix mat_;
};

/// A unit-norm amplitude vector: | <psi|psi> - 1 | <= kStateNormTol.
class PureState {
 public:
  explicit PureState(Vector v) : amp_(std::move(v)) {
    if (amp_.size() == 0) {
      throw std::invalid_argument("PureState: empty amplitude vector");
    }
    if (!all_finite(amp_)) {
      throw std::invalid_argument("PureState: non-finite amplitudes");
    }
    if (std::abs(amp_.squaredNorm() - 1.0) > kStateNormTol) {
      throw std::invalid_argument("PureState: state is not normalized");
    }
  }

  /// Normalizes v and wraps it. Throws on a (near-)zero vector.
  static PureState normalized(const Vector& v) {
    const double n = v.norm();
    if (!(n > 0.0) || !std::isfinite(n)) {
      throw std::invalid_argument("PureState: cannot normalize zero vector");
    }
    return PureState(Vector(v / n));
  }

  Index dim() const { return amp_.size(); }
  const Vector& amplitudes() const { return amp_; }

 private:
  Vector amp_;
};

inline Complex inner(const PureState& a, const PureState& b) {
  return a.amplitudes().dot(b.amplitudes());  // Eigen dot conjugates the lhs
}

/// d^2 Hermitian matrices, orthonormal under the Hilbert-Schmidt inner
/// product: tr(e_a e_b) = delta_ab.
struct HermitianBasis {
  Index dim = 0;
  std::vector<Matrix> elements;
};

/// exp(i h) for Hermitian h, via the eigendecomposition h = Q diag(w) Q^dag.
/// Throws std::domain_error if ||h - h^dag||_F > kHermiticityTol.
inline UnitaryOperator expm_hermitian(const Matrix& h) {
  if (h.rows() != h.cols()) {
    throw std::domain_error("expm_hermitian: matrix is not square");
  }
  if ((h - h.adjoint()).norm() > kHermiticityTol) {
    throw std::domain_error("expm_hermitian: matrix is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("expm_hermitian: eigendecomposition failed");
  }
  const auto& w = es.eigenvalues();
  Vector phases(w.size());
  for (Index k = 0; k < w.size(); ++k) {
    phases[k] = std::polar(1.0, w[k]);
  }
  Matrix u = es.eigenvectors() * phases.asDiagonal() *
             es.eigenvectors().adjoint();
  return UnitaryOperator(std::move(u));
}

/// Orthonormal basis of span(vectors) by modified Gram-Schmidt with a
/// re-orthogonalization pass. Vectors whose residual after projection falls
/// below tol are dropped. Returns (basis, rank).
inline std::pair<std::vector<PureState>, int> orthonormalize(
    const std::vector<PureState>& vectors, double tol = kOrthoTol) {
  if (!(tol > 0.0 && tol < 1.0)) {
    throw std::invalid_argument("orthonormalize: tol must be in (0, 1)");
  }
  std::vector<PureState> basis;
  if (vectors.empty()) return {basis, 0};
  const Index d = vectors.front().dim();
  for (const auto& v : vectors) {
    if (v.dim() != d) {
      throw std::invalid_argument("orthonormalize: mixed dimensions");
    }
    Vector w = v.amplitudes();
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) {
        w -= b.amplitudes().dot(w) * b.amplitudes();
      }
    }
    const double r = w.norm();
    if (r >= tol) {
      basis.emplace_back(PureState::normalized(w));
    }
  }
  return {basis, static_cast<int>(basis.size())};
}

/// Completes an orthonormal family to a full orthonormal basis of C^d by
/// orthonormalizing standard basis vectors against it. The first
/// basis.size() entries of the result are the inputs, unchanged.
inline std::vector<PureState> extend_to_full_basis(
    const std::vector<PureState>& basis, Index d) {
  if (static_cast<Index>(basis.size()) > d) {
    throw std::domain_error("extend_to_full_basis: basis larger than d");
  }
  std::vector<PureState> full = basis;
  for (const auto& b : basis) {
    if (b.dim() != d) {
      throw std::invalid_argument("extend_to_full_basis: dimension mismatch");
    }
  }
  // Residual threshold well below 1/sqrt(d) so a single sweep always
  // completes the basis.
  const double accept = 1e-6;
  for (Index j = 0; j < d && static_cast<Index>(full.size()) < d; ++j) {
    Vector w = Vector::Zero(d);
    w[j] = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : full) {
        w -= b.amplitudes().dot(w) * b.amplitudes();
      }
    }
    if (w.norm() >= accept) {
      full.emplace_back(PureState::normalized(w));
    }
  }
  if (static_cast<Index>(full.size()) != d) {
    throw std::runtime_error("extend_to_full_basis: completion failed");
  }
  return full;
}

/// Columns of the returned matrix are the given states, in order.
inline Matrix basis_matrix(const std::vector<PureState>& states) {
  if (states.empty()) return Matrix(0, 0);
  Matrix m(states.front().dim(), static_cast<Index>(states.size()));
  for (Index j = 0; j < m.cols(); ++j) {
    m.col(j) = states[static_cast<std::size_t>(j)].amplitudes();
  }
  return m;
}

/// Generalized Gell-Mann basis of d x d Hermitian matrices: the normalized
/// identity, the symmetric and antisymmetric off-diagonal pairs, and the
/// diagonal traceless generators. Hilbert-Schmidt orthonormal.
inline HermitianBasis gell_mann_basis(Index d) {
  if (d < 2) {
    throw std::domain_error("gell_mann_basis: d must be >= 2");
  }
  HermitianBasis basis;
  basis.dim = d;
  basis.elements.reserve(static_cast<std::size_t>(d * d));
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

  basis.elements.push_back(Matrix::Identity(d, d) / std::sqrt(double(d)));
  for (Index j = 0; j < d; ++j) {
    for (Index k = j + 1; k < d; ++k) {
      Matrix sym = Matrix::Zero(d, d);
      sym(j, k) = inv_sqrt2;
      sym(k, j) = inv_sqrt2;
      basis.elements.push_back(std::move(sym));
      Matrix asym = Matrix::Zero(d, d);
      asym(j, k) = Complex(0.0, -inv_sqrt2);
      asym(k, j) = Complex(0.0, inv_sqrt2);
      basis.elements.push_back(std::move(asym));
    }
  }
  for (Index l = 1; l < d; ++l) {
    Matrix diag = Matrix::Zero(d, d);
    const double scale = 1.0 / std::sqrt(double(l) * double(l + 1));
    for (Index j = 0; j < l; ++j) diag(j, j) = scale;
    diag(l, l) = -scale * double(l);
    basis.elements.push_back(std::move(diag));
  }
  return basis;
}

/// The operator exchanging the two tensor factors of C^d (x) C^d.
inline Matrix swap_operator(Index d) {
  Matrix s = Matrix::Zero(d * d, d * d);
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) {
      s(i * d + j, j * d + i) = 1.0;
    }
  }
  return s;
}

}  // namespace qnfl
