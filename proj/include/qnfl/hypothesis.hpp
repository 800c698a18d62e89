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

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qnfl/haar.hpp"
#include "qnfl/linalg.hpp"
#include "qnfl/rng.hpp"

namespace qnfl {

/// Inner-product preservation tolerance certifying that a training set is
/// realizable by some unitary.
inline constexpr double kRealizabilityTol = 1e-10;
/// Residual below which a sampled training input counts as linearly
/// dependent on the earlier inputs and gets resampled.
inline constexpr double kRankResidualTol = 1e-8;
/// Reproduction tolerance for block-constructed hypotheses.
inline constexpr double kBlockReproductionTol = 1e-8;

/// Ordered input/output pure-state pairs, certified realizable at
/// construction: <phi_i|phi_j> = <psi_i|psi_j> for all i, j, which holds
/// iff some unitary maps every input to its output. rank() is the
/// dimension of the input span.
class TrainingSet {
 public:
  using Pair = std::pair<PureState, PureState>;

  explicit TrainingSet(std::vector<Pair> pairs) : pairs_(std::move(pairs)) {
    if (pairs_.empty()) {
      throw std::invalid_argument("TrainingSet: no pairs");
    }
    const Index d = pairs_.front().first.dim();
    if (static_cast<Index>(pairs_.size()) > d) {
      throw std::invalid_argument("TrainingSet: more pairs than dimensions");
    }
    for (const auto& [in, out] : pairs_) {
      if (in.dim() != d || out.dim() != d) {
        throw std::invalid_argument("TrainingSet: mixed dimensions");
      }
    }
    for (std::size_t i = 0; i < pairs_.size(); ++i) {
      for (std::size_t j = 0; j < pairs_.size(); ++j) {
        const Complex gin = inner(pairs_[i].first, pairs_[j].first);
        const Complex gout = inner(pairs_[i].second, pairs_[j].second);
        if (std::abs(gin - gout) > kRealizabilityTol) {
          throw std::invalid_argument(
              "TrainingSet: pairs are not realizable by any unitary "
              "(inner products differ)");
        }
      }
    }
    rank_ = orthonormalize(inputs()).second;
  }

  Index dim() const { return pairs_.front().first.dim(); }
  int size() const { return static_cast<int>(pairs_.size()); }
  int rank() const { return rank_; }
  const std::vector<Pair>& pairs() const { return pairs_; }
  const PureState& input(int j) const { return pairs_[std::size_t(j)].first; }
  const PureState& output(int j) const { return pairs_[std::size_t(j)].second; }

  std::vector<PureState> inputs() const {
    std::vector<PureState> v;
    v.reserve(pairs_.size());
    for (const auto& p : pairs_) v.push_back(p.first);
    return v;
  }

 private:
  std::vector<Pair> pairs_;
  int rank_ = 0;
};

/// n Haar-random inputs with their exact images under u. Inputs whose
/// residual against the span of the earlier ones falls below
/// kRankResidualTol are resampled, so rank == n on return.
inline TrainingSet realize_training_set(const UnitaryOperator& u, int n,
                                        RngStream& rng) {
  const Index d = u.dim();
  if (n < 1 || static_cast<Index>(n) > d) {
    throw std::domain_error("realize_training_set: need 1 <= n <= d");
  }
  std::vector<TrainingSet::Pair> pairs;
  std::vector<PureState> ortho;
  while (static_cast<int>(pairs.size()) < n) {
    const PureState candidate = sample_haar_state(d, rng);
    Vector w = candidate.amplitudes();
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : ortho) {
        w -= b.amplitudes().dot(w) * b.amplitudes();
      }
    }
    if (w.norm() < kRankResidualTol) continue;
    ortho.emplace_back(PureState::normalized(w));
    PureState image(Vector(u.matrix() * candidate.amplitudes()));
    pairs.emplace_back(candidate, std::move(image));
  }
  return TrainingSet(std::move(pairs));
}

enum class HypothesisKind { optimal_block, variational };

/// Training diagnostics; all-zero for block-constructed hypotheses.
struct TrainingDiagnostics {
  double final_cost = 0.0;
  long iterations = 0;
  int restarts_used = 0;
  bool below_target = false;
  double reproduction_error = 0.0;
};

struct Hypothesis {
  HypothesisKind kind;
  UnitaryOperator unitary;
  TrainingDiagnostics diagnostics;
};

/// Largest training-pair reproduction error max_j || V phi_j - psi_j ||.
inline double training_reproduction_error(const Matrix& v,
                                          const TrainingSet& training) {
  double worst = 0.0;
  for (const auto& [in, out] : training.pairs()) {
    worst = std::max(worst,
                     (v * in.amplitudes() - out.amplitudes()).norm());
  }
  return worst;
}

/// Removes the global phase freedom of a hypothesis that reproduces the
/// training pairs up to a common phase: rotates v so the summed training
/// overlap sum_j <psi_j| v |phi_j> becomes real positive.
inline Matrix align_training_phase(const Matrix& v,
                                   const TrainingSet& training) {
  Complex overlap{0.0, 0.0};
  for (const auto& [in, out] : training.pairs()) {
    overlap += out.amplitudes().dot(v * in.amplitudes());
  }
  const double mag = std::abs(overlap);
  if (mag == 0.0) return v;
  return v * (std::conj(overlap) / mag);
}

/// V = U (1_m (+) W) expressed through the given full orthonormal basis:
/// columns 0..m-1 of full_basis span the training inputs and are mapped
/// exactly as U maps them; w acts on the remaining columns.
inline UnitaryOperator assemble_block_hypothesis(
    const UnitaryOperator& u, const std::vector<PureState>& full_basis,
    Index m, const Matrix& w) {
  const Index d = u.dim();
  if (static_cast<Index>(full_basis.size()) != d) {
    throw std::invalid_argument("assemble_block_hypothesis: basis size != d");
  }
  if (w.rows() != d - m || w.cols() != d - m) {
    throw std::invalid_argument(
        "assemble_block_hypothesis: residual block has wrong shape");
  }
  const Matrix e = basis_matrix(full_basis);
  Matrix g = Matrix::Identity(d, d);
  g.block(m, m, d - m, d - m) = w;
  return UnitaryOperator(u.matrix() * e * g * e.adjoint());
}

/// Optimal block hypothesis plus its construction internals.
struct BlockConstruction {
  Hypothesis hypothesis;
  Matrix basis;           // columns e_1..e_d; first rank span the inputs
  Index rank = 0;
  Matrix residual_block;  // the Haar-guessed W, (d-rank) x (d-rank)
};

/// Best-possible hypothesis for a known reference: agrees with u_reference
/// on the training span and guesses Haar-randomly on the complement,
/// V = U (1_m (+) W). Throws std::domain_error if u_reference does not
/// map the training inputs to the outputs.
inline BlockConstruction optimal_hypothesis_detailed(
    const TrainingSet& training, const UnitaryOperator& u_reference,
    RngStream& rng) {
  const Index d = u_reference.dim();
  if (training.dim() != d) {
    throw std::invalid_argument("optimal_hypothesis: dimension mismatch");
  }
  if (training_reproduction_error(u_reference.matrix(), training) > 1e-10) {
    throw std::domain_error(
        "optimal_hypothesis: reference unitary is inconsistent with the "
        "training set");
  }
  auto [span_basis, rank] = orthonormalize(training.inputs());
  const std::vector<PureState> full = extend_to_full_basis(span_basis, d);
  const Index m = rank;
  Matrix w(0, 0);
  if (m < d) {
    w = sample_haar_unitary(d - m, rng).matrix();
  }
  UnitaryOperator v = assemble_block_hypothesis(u_reference, full, m, w);

  BlockConstruction out{
      Hypothesis{HypothesisKind::optimal_block, std::move(v), {}},
      basis_matrix(full), m, std::move(w)};
  out.hypothesis.diagnostics.reproduction_error =
      training_reproduction_error(out.hypothesis.unitary.matrix(), training);
  if (out.hypothesis.diagnostics.reproduction_error > kBlockReproductionTol) {
    throw std::runtime_error(
        "optimal_hypothesis: construction failed to reproduce training");
  }
  return out;
}

inline Hypothesis optimal_hypothesis(const TrainingSet& training,
                                     const UnitaryOperator& u_reference,
                                     RngStream& rng) {
  return optimal_hypothesis_detailed(training, u_reference, rng).hypothesis;
}

/// Residuals of the block law U^dag V = 1_m (+) W in the basis extended
/// from the training span: Frobenius norms of (top-left block - 1_m) and of
/// the two off-diagonal blocks combined.
inline std::pair<double, double> block_residuals(const UnitaryOperator& u,
                                                 const UnitaryOperator& v,
                                                 const TrainingSet& training) {
  const Index d = u.dim();
  auto [span_basis, rank] = orthonormalize(training.inputs());
  const Matrix e = basis_matrix(extend_to_full_basis(span_basis, d));
  const Matrix m = e.adjoint() * (u.matrix().adjoint() * v.matrix()) * e;
  const Index k = rank;
  const double identity_residual =
      (m.topLeftCorner(k, k) - Matrix::Identity(k, k)).norm();
  const double offdiag_residual =
      std::sqrt(m.topRightCorner(k, d - k).squaredNorm() +
                m.bottomLeftCorner(d - k, k).squaredNorm());
  return {identity_residual, offdiag_residual};
}

}  // namespace qnfl
