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
#include <complex>
#include <random>
#include <stdexcept>
#include <vector>

#include <unsupported/Eigen/KroneckerProduct>

#include "qnfl/linalg.hpp"
#include "qnfl/rng.hpp"

namespace qnfl {

/// Monte Carlo estimate of a (possibly complex) moment.
struct MomentEstimate {
  Complex value{0.0, 0.0};
  double std_error = 0.0;
  long samples = 0;
};

/// d x d matrix of i.i.d. standard complex Gaussians.
inline Matrix sample_ginibre(Index d, RngStream& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Matrix g(d, d);
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) {
      const double re = dist(rng.engine());
      const double im = dist(rng.engine());
      g(i, j) = Complex(re, im);
    }
  }
  return g;
}

/// Haar-distributed d x d unitary: QR of a Ginibre matrix with each column
/// of Q rescaled by the phase of the matching diagonal entry of R. Plain QR
/// of a Gaussian matrix is not Haar; the phase fix removes the bias.
inline UnitaryOperator sample_haar_unitary(Index d, RngStream& rng) {
  if (d < 1) throw std::domain_error("sample_haar_unitary: d must be >= 1");
  const Matrix g = sample_ginibre(d, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < d; ++j) {
    const Complex rjj = r(j, j);
    const double mag = std::abs(rjj);
    q.col(j) *= (mag > 0.0) ? rjj / mag : Complex(1.0, 0.0);
  }
  return UnitaryOperator(std::move(q));
}

/// Haar-random pure state: a normalized complex Gaussian vector, equal in
/// distribution to W|0> for Haar W.
inline PureState sample_haar_state(Index d, RngStream& rng) {
  if (d < 1) throw std::domain_error("sample_haar_state: d must be >= 1");
  std::normal_distribution<double> dist(0.0, 1.0);
  Vector v(d);
  for (Index i = 0; i < d; ++i) {
    v[i] = Complex(dist(rng.engine()), dist(rng.engine()));
  }
  return PureState::normalized(v);
}

namespace detail {

inline void check_sample_count(long n_samples) {
  if (n_samples < 100) {
    throw std::invalid_argument("moment estimate needs n_samples >= 100");
  }
}

inline MomentEstimate reduce_complex_mean(const std::vector<Complex>& xs) {
  MomentEstimate est;
  est.samples = static_cast<long>(xs.size());
  Complex sum{0.0, 0.0};
  for (const Complex& x : xs) sum += x;
  est.value = sum / double(xs.size());
  double var = 0.0;
  for (const Complex& x : xs) var += std::norm(x - est.value);
  var /= double(xs.size() - 1);
  est.std_error = std::sqrt(var / double(xs.size()));
  return est;
}

}  // namespace detail

/// Empirical mean of tr(U) over Haar draws.
inline MomentEstimate estimate_trace_mean(Index d, long n_samples,
                                          RngStream& rng) {
  detail::check_sample_count(n_samples);
  std::vector<Complex> xs;
  xs.reserve(static_cast<std::size_t>(n_samples));
  for (long s = 0; s < n_samples; ++s) {
    xs.push_back(sample_haar_unitary(d, rng).matrix().trace());
  }
  return detail::reduce_complex_mean(xs);
}

/// Empirical mean of |tr(U)|^power over Haar draws (power = 2 or 4 in use).
inline MomentEstimate estimate_abs_trace_moment(Index d, int power,
                                                long n_samples,
                                                RngStream& rng) {
  detail::check_sample_count(n_samples);
  std::vector<Complex> xs;
  xs.reserve(static_cast<std::size_t>(n_samples));
  for (long s = 0; s < n_samples; ++s) {
    const double t = std::abs(sample_haar_unitary(d, rng).matrix().trace());
    xs.emplace_back(std::pow(t, power), 0.0);
  }
  return detail::reduce_complex_mean(xs);
}

/// Empirical mean of U^dag (x) U, a d^2 x d^2 matrix. Converges to SWAP/d.
inline Matrix estimate_S2(Index d, long n_samples, RngStream& rng) {
  if (d < 1) throw std::domain_error("estimate_S2: d must be >= 1");
  detail::check_sample_count(n_samples);
  Matrix acc = Matrix::Zero(d * d, d * d);
  for (long s = 0; s < n_samples; ++s) {
    const Matrix u = sample_haar_unitary(d, rng).matrix();
    acc += Eigen::kroneckerProduct(u.adjoint(), u).eval();
  }
  return acc / double(n_samples);
}

/// Closed form of S4 = int dU U^dag (x) U^dag (x) U (x) U as a combination
/// of four index pairings: the two straight pairings of adjoint slots with
/// plain slots carry weight 1/(d^2-1), the two crossed pairings carry
/// -1/(d(d^2-1)). Legs are ordered (out1..out4 | in1..in4) with slots
/// (1,2) adjoint and (3,4) plain, flattened row-major.
inline Matrix analytic_S4(Index d) {
  if (d < 2) throw std::domain_error("analytic_S4: d must be >= 2");
  if (d > 6) throw std::length_error("analytic_S4: dense d^4 storage capped at d <= 6");
  const Index dd = d * d * d * d;
  const double c1 = 1.0 / (double(d) * double(d) - 1.0);
  const double c2 = c1 / double(d);
  Matrix s4 = Matrix::Zero(dd, dd);
  auto flat = [d](Index a, Index b, Index c, Index e) {
    return ((a * d + b) * d + c) * d + e;
  };
  for (Index i1 = 0; i1 < d; ++i1) {
    for (Index i2 = 0; i2 < d; ++i2) {
      for (Index i3 = 0; i3 < d; ++i3) {
        for (Index i4 = 0; i4 < d; ++i4) {
          const Index row = flat(i1, i2, i3, i4);
          s4(row, flat(i3, i4, i1, i2)) += c1;  // 1<->3, 2<->4 straight
          s4(row, flat(i4, i3, i2, i1)) += c1;  // 1<->4, 2<->3 straight
          s4(row, flat(i3, i4, i2, i1)) -= c2;  // crossed, trace wiring
          s4(row, flat(i4, i3, i1, i2)) -= c2;  // crossed, trace wiring
        }
      }
    }
  }
  return s4;
}

/// Empirical mean of U^dag (x) U^dag (x) U (x) U over Haar draws.
inline Matrix estimate_S4(Index d, long n_samples, RngStream& rng) {
  if (d < 2) throw std::domain_error("estimate_S4: d must be >= 2");
  if (d > 6) throw std::length_error("estimate_S4: dense d^4 storage capped at d <= 6");
  detail::check_sample_count(n_samples);
  const Index dd = d * d * d * d;
  Matrix acc = Matrix::Zero(dd, dd);
  for (long s = 0; s < n_samples; ++s) {
    const Matrix u = sample_haar_unitary(d, rng).matrix();
    const Matrix ud = u.adjoint();
    const Matrix pair_adj = Eigen::kroneckerProduct(ud, ud).eval();
    const Matrix pair_pl = Eigen::kroneckerProduct(u, u).eval();
    acc += Eigen::kroneckerProduct(pair_adj, pair_pl).eval();
  }
  return acc / double(n_samples);
}

/// Frobenius distance between the empirical means of (UV)^dag (x) (UV) and
/// U^dag (x) U over fresh draws. Small values certify right-invariance of
/// the sampler; a biased sampler (e.g. QR without the phase fix) fails.
inline double invariance_check(Index d, const UnitaryOperator& fixed_v,
                               long n_samples, RngStream& rng) {
  if (fixed_v.dim() != d) {
    throw std::invalid_argument("invariance_check: dimension mismatch");
  }
  detail::check_sample_count(n_samples);
  Matrix shifted = Matrix::Zero(d * d, d * d);
  for (long s = 0; s < n_samples; ++s) {
    const Matrix uv = sample_haar_unitary(d, rng).matrix() * fixed_v.matrix();
    shifted += Eigen::kroneckerProduct(uv.adjoint(), uv).eval();
  }
  shifted /= double(n_samples);
  const Matrix plain = estimate_S2(d, n_samples, rng);
  return (shifted - plain).norm();
}

}  // namespace qnfl
