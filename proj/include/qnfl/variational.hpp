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
#include <random>
#include <stdexcept>

#include "qnfl/hypothesis.hpp"
#include "qnfl/linalg.hpp"
#include "qnfl/rng.hpp"

namespace qnfl {

/// Gradient norm below which an ascent run counts as plateaued.
inline constexpr double kPlateauGradientNorm = 1e-9;

/// Coefficients of a Hermitian generator in an orthonormal Hermitian basis.
/// The hypothesis class V(theta) = exp(i sum_a theta_a e_a) covers all of
/// U(d) as theta ranges over R^{d^2}.
struct VariationalParams {
  Index dim = 0;
  RealVector theta;
};

struct TrainConfig {
  double learning_rate = 0.1;
  long max_iters = 50000;  // per restart
  double target_cost = 1.0 - 1e-6;
  double fd_step = 1e-5;
  int restarts = 5;
  double init_scale = 0.1;
};

namespace detail {

inline void check_fd_step(double step) {
  if (!(step >= 1e-8 && step <= 1e-3)) {
    throw std::invalid_argument("fd_step must lie in [1e-8, 1e-3]");
  }
}

inline void check_train_config(const TrainConfig& c) {
  if (!(c.learning_rate > 0.0)) {
    throw std::invalid_argument("learning_rate must be positive");
  }
  if (c.max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
  if (!(c.target_cost > 0.0 && c.target_cost <= 1.0)) {
    throw std::invalid_argument("target_cost must lie in (0, 1]");
  }
  check_fd_step(c.fd_step);
  if (c.restarts < 1) throw std::invalid_argument("restarts must be >= 1");
  if (c.init_scale < 0.0) {
    throw std::invalid_argument("init_scale must be >= 0");
  }
}

inline Matrix generator_from(const VariationalParams& p,
                             const HermitianBasis& basis) {
  Matrix h = Matrix::Zero(p.dim, p.dim);
  for (Index a = 0; a < p.theta.size(); ++a) {
    h += p.theta[a] * basis.elements[std::size_t(a)];
  }
  return h;
}

}  // namespace detail

inline UnitaryOperator params_to_unitary(const VariationalParams& p,
                                         const HermitianBasis& basis) {
  if (basis.dim != p.dim) {
    throw std::invalid_argument("params_to_unitary: basis dimension mismatch");
  }
  if (p.theta.size() != p.dim * p.dim) {
    throw std::invalid_argument("params_to_unitary: theta must have d^2 entries");
  }
  if (!p.theta.allFinite()) {
    throw std::invalid_argument("params_to_unitary: non-finite parameters");
  }
  return expm_hermitian(detail::generator_from(p, basis));
}

/// Training-pair-averaged squared output fidelity,
/// C = (1/n) sum_j |<psi_j| V |phi_j>|^2. Equals 1 iff V maps every input
/// to its output up to per-pair phases; invariant under output phases.
inline double cost(const UnitaryOperator& v, const TrainingSet& training) {
  if (v.dim() != training.dim()) {
    throw std::invalid_argument("cost: dimension mismatch");
  }
  double total = 0.0;
  for (const auto& [in, out] : training.pairs()) {
    total += std::norm(out.amplitudes().dot(v.matrix() * in.amplitudes()));
  }
  return total / double(training.size());
}

/// Central finite-difference gradient of cost(params_to_unitary(theta)).
inline RealVector gradient_fd(const VariationalParams& p,
                              const TrainingSet& training,
                              const HermitianBasis& basis, double step) {
  detail::check_fd_step(step);
  RealVector grad(p.theta.size());
  VariationalParams probe = p;
  for (Index a = 0; a < p.theta.size(); ++a) {
    probe.theta[a] = p.theta[a] + step;
    const double up = cost(params_to_unitary(probe, basis), training);
    probe.theta[a] = p.theta[a] - step;
    const double down = cost(params_to_unitary(probe, basis), training);
    probe.theta[a] = p.theta[a];
    grad[a] = (up - down) / (2.0 * step);
  }
  return grad;
}

/// Fits a unitary to the training pairs with gradient ascent on the
/// fidelity cost: fixed learning rate, step halving whenever a step would
/// decrease the cost, and fresh Gaussian restarts on plateau. Never sees
/// the unitary behind the data. Returns the best hypothesis found; if no
/// restart reaches target_cost the below_target diagnostic is set instead
/// of raising.
inline Hypothesis train(const TrainingSet& training, const TrainConfig& config,
                        const HermitianBasis& basis, RngStream& rng) {
  detail::check_train_config(config);
  if (basis.dim != training.dim()) {
    throw std::invalid_argument("train: basis dimension mismatch");
  }
  const Index n_params = basis.dim * basis.dim;
  std::normal_distribution<double> init(0.0, 1.0);

  auto draw_theta = [&]() {
    RealVector theta(n_params);
    for (Index a = 0; a < n_params; ++a) {
      theta[a] = config.init_scale * init(rng.engine());
    }
    return theta;
  };

  VariationalParams best{training.dim(), RealVector::Zero(n_params)};
  double best_cost = -1.0;
  long total_iters = 0;
  int restarts_used = 0;
  bool reached = false;

  for (int r = 0; r < config.restarts && !reached; ++r) {
    ++restarts_used;
    VariationalParams p{training.dim(), draw_theta()};
    double c = cost(params_to_unitary(p, basis), training);
    if (c > best_cost) {
      best_cost = c;
      best = p;
    }
    for (long it = 0; it < config.max_iters; ++it) {
      const RealVector g = gradient_fd(p, training, basis, config.fd_step);
      if (g.norm() < kPlateauGradientNorm) break;
      double step = config.learning_rate;
      bool accepted = false;
      VariationalParams cand = p;
      double cand_cost = c;
      for (int halving = 0; halving < 60; ++halving) {
        cand.theta = p.theta + step * g;
        cand_cost = cost(params_to_unitary(cand, basis), training);
        if (cand_cost > c) {
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      ++total_iters;
      if (!accepted) break;  // no ascent direction left at any step size
      p = cand;
      c = cand_cost;
      if (c > best_cost) {
        best_cost = c;
        best = p;
      }
      if (c >= config.target_cost) {
        reached = true;
        break;
      }
    }
  }

  Hypothesis hyp{HypothesisKind::variational, params_to_unitary(best, basis),
                 {}};
  hyp.diagnostics.final_cost = best_cost;
  hyp.diagnostics.iterations = total_iters;
  hyp.diagnostics.restarts_used = restarts_used;
  hyp.diagnostics.below_target = !reached;
  hyp.diagnostics.reproduction_error = training_reproduction_error(
      align_training_phase(hyp.unitary.matrix(), training), training);
  return hyp;
}

}  // namespace qnfl
