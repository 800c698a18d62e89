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

#include <cassert>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "qnfl/haar.hpp"
#include "qnfl/linalg.hpp"
#include "qnfl/rng.hpp"

namespace qnfl {

enum class RiskMethod { closed_form, mc_fidelity, mc_tracenorm };

inline const char* to_string(RiskMethod m) {
  switch (m) {
    case RiskMethod::closed_form: return "closed_form";
    case RiskMethod::mc_fidelity: return "mc_fidelity";
    case RiskMethod::mc_tracenorm: return "mc_tracenorm";
  }
  return "?";
}

/// Risk of a hypothesis against a target, exact or Monte Carlo. A closed
/// form estimate has std_error 0 and samples 1.
struct RiskEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  long samples = 0;
  RiskMethod method = RiskMethod::closed_form;
};

/// Lower bound on the averaged risk of learning a d-dimensional unitary
/// from n training pairs: raw = 1 - (n^2 + d + 1)/(d(d+1)). The raw value
/// dips below zero at n = d; clamped reports max(0, raw).
struct BoundValue {
  int d = 0;
  int n = 0;
  double raw = 0.0;
  double clamped = 0.0;
};

inline BoundValue quantum_nfl_bound(int d, int n) {
  if (d < 1) throw std::domain_error("quantum_nfl_bound: d must be >= 1");
  if (n < 0 || n > d) {
    throw std::domain_error(
        "quantum_nfl_bound: n must satisfy 0 <= n <= d (training span "
        "cannot exceed the dimension)");
  }
  BoundValue b;
  b.d = d;
  b.n = n;
  b.raw = 1.0 - (double(n) * n + d + 1) / (double(d) * (d + 1));
  b.clamped = std::max(0.0, b.raw);
  return b;
}

namespace detail {

inline void check_same_dim(const UnitaryOperator& u, const UnitaryOperator& v) {
  if (u.dim() != v.dim()) {
    throw std::invalid_argument("risk: operators have different dimensions");
  }
}

inline RiskEstimate reduce_real_mean(const std::vector<double>& xs,
                                     RiskMethod method) {
  RiskEstimate est;
  est.method = method;
  est.samples = static_cast<long>(xs.size());
  double sum = 0.0;
  for (double x : xs) sum += x;
  est.mean = sum / double(xs.size());
  double var = 0.0;
  for (double x : xs) var += (x - est.mean) * (x - est.mean);
  var /= double(xs.size() - 1);
  est.std_error = std::sqrt(var / double(xs.size()));
  return est;
}

}  // namespace detail

/// Risk from the trace identity: 1 - (d + |tr(U^dag V)|^2) / (d(d+1)).
/// Exact, deterministic, and invariant under global phases of either
/// argument.
inline RiskEstimate risk_closed_form(const UnitaryOperator& u,
                                     const UnitaryOperator& v) {
  detail::check_same_dim(u, v);
  const double d = double(u.dim());
  const double t = std::norm((u.matrix().adjoint() * v.matrix()).trace());
  RiskEstimate est;
  est.method = RiskMethod::closed_form;
  est.samples = 1;
  est.std_error = 0.0;
  est.mean = 1.0 - (d + t) / (d * (d + 1.0));
  return est;
}

/// Risk as the Haar average of 1 - |<psi| U^dag V |psi>|^2 over sampled
/// input states. Returns the sample mean and its standard error.
inline RiskEstimate risk_mc_fidelity(const UnitaryOperator& u,
                                     const UnitaryOperator& v, long n_samples,
                                     RngStream& rng) {
  detail::check_same_dim(u, v);
  detail::check_sample_count(n_samples);
  const Matrix m = u.matrix().adjoint() * v.matrix();
  std::vector<double> xs;
  xs.reserve(static_cast<std::size_t>(n_samples));
  for (long s = 0; s < n_samples; ++s) {
    const PureState psi = sample_haar_state(u.dim(), rng);
    const Complex ov = psi.amplitudes().dot(m * psi.amplitudes());
    xs.push_back(1.0 - std::norm(ov));
  }
  return detail::reduce_real_mean(xs, RiskMethod::mc_fidelity);
}

/// Squared trace-norm distance (1/2 tr|.| convention) between the pure-state
/// projectors |a><a| and |b><b|. The difference has rank <= 2 with
/// eigenvalues +-sqrt(1 - |<a|b>|^2), so the squared distance is
/// 1 - |<a|b>|^2.
inline double trace_distance_sq_pure(const PureState& a, const PureState& b) {
  const double val = 1.0 - std::norm(inner(a, b));
  return std::max(0.0, val);
}

/// Reference route for the trace norm: eigenvalues of the full d x d
/// difference operator. Used as a cross-check on trace_distance_sq_pure.
inline double trace_distance_dense(const PureState& a, const PureState& b) {
  const Matrix diff = a.amplitudes() * a.amplitudes().adjoint() -
                      b.amplitudes() * b.amplitudes().adjoint();
  Eigen::SelfAdjointEigenSolver<Matrix> es(diff);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

/// Risk as the Haar average of the squared trace-norm distance between the
/// two output projectors. Per sample this equals 1 - |<psi|U^dag V|psi>|^2
/// identically; the state sequence matches risk_mc_fidelity on an equal
/// stream.
inline RiskEstimate risk_mc_tracenorm(const UnitaryOperator& u,
                                      const UnitaryOperator& v, long n_samples,
                                      RngStream& rng) {
  detail::check_same_dim(u, v);
  detail::check_sample_count(n_samples);
  std::vector<double> xs;
  xs.reserve(static_cast<std::size_t>(n_samples));
  for (long s = 0; s < n_samples; ++s) {
    const PureState psi = sample_haar_state(u.dim(), rng);
    const PureState out_u(Vector(u.matrix() * psi.amplitudes()));
    const PureState out_v(Vector(v.matrix() * psi.amplitudes()));
    const double dist_sq = trace_distance_sq_pure(out_u, out_v);
    assert(std::abs(std::sqrt(dist_sq) - trace_distance_dense(out_u, out_v)) <
           1e-10);
    xs.push_back(dist_sq);
  }
  return detail::reduce_real_mean(xs, RiskMethod::mc_tracenorm);
}

}  // namespace qnfl
