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

#include <unordered_set>

#include <catch2/catch_amalgamated.hpp>

#include "qnfl/haar.hpp"
#include "qnfl/verify.hpp"
#include "test_util.hpp"

using namespace qnfl;
using namespace qnfl_test;

TEST_CASE("identical streams replay bit-identical samples", "[haar]") {
  RngStream a(123, 7);
  RngStream b(123, 7);
  const Matrix ua = sample_haar_unitary(4, a).matrix();
  const Matrix ub = sample_haar_unitary(4, b).matrix();
  REQUIRE(ua == ub);

  RngStream c(123, 8);
  REQUIRE(sample_haar_unitary(4, c).matrix() != ua);
}

TEST_CASE("every sample is unitary", "[haar]") {
  RngStream rng(42, 20);
  for (Index d = 1; d <= 8; ++d) {
    for (int rep = 0; rep < 20; ++rep) {
      const UnitaryOperator u = sample_haar_unitary(d, rng);
      REQUIRE(unitarity_defect(u.matrix()) <= 1e-10);
    }
  }
  REQUIRE_THROWS_AS(sample_haar_unitary(0, rng), std::domain_error);
}

TEST_CASE("d = 1 samples are uniform phases", "[haar]") {
  RngStream rng(42, 21);
  const long n = 10000;
  Complex mean{0.0, 0.0};
  for (long s = 0; s < n; ++s) {
    const Complex z = sample_haar_unitary(1, rng).matrix()(0, 0);
    REQUIRE(std::abs(std::abs(z) - 1.0) < 1e-12);
    mean += z;
  }
  mean /= double(n);
  REQUIRE(std::abs(mean) <= 3.0 / std::sqrt(double(n)));
}

TEST_CASE("haar states are normalized and average to the maximally mixed "
          "state", "[haar]") {
  RngStream rng(42, 22);
  const Complex z = sample_haar_state(1, rng).amplitudes()[0];
  REQUIRE(std::abs(std::abs(z) - 1.0) < 1e-12);

  const long n = 100000;
  const Index d = 4;
  Matrix acc = Matrix::Zero(d, d);
  for (long s = 0; s < n; ++s) {
    const PureState psi = sample_haar_state(d, rng);
    REQUIRE(std::abs(psi.amplitudes().norm() - 1.0) < 1e-12);
    acc += psi.amplitudes() * psi.amplitudes().adjoint();
  }
  acc /= double(n);
  const Matrix target = identity(d) / double(d);
  REQUIRE(((acc - target).cwiseAbs().maxCoeff()) <= 5.0 / std::sqrt(double(n)));
}

TEST_CASE("trace moments match the Haar values", "[haar]") {
  const long n = 100000;
  const double tol = 5.0 / std::sqrt(double(n));
  RngStream rng(42, 23);
  const MomentEstimate m2 = estimate_abs_trace_moment(2, 2, n, rng);
  REQUIRE(std::abs(m2.value.real() - 1.0) <= tol);
  REQUIRE(m2.std_error > 0.0);
  REQUIRE(m2.samples == n);

  RngStream rng2(42, 24);
  const MomentEstimate m1 = estimate_trace_mean(2, n, rng2);
  REQUIRE(std::abs(m1.value) <= tol);
}

TEST_CASE("S2 estimate converges to SWAP/d", "[haar]") {
  const long n = 100000;
  for (Index d : {2, 3}) {
    RngStream rng(42, 25 + std::uint64_t(d));
    const Matrix s2 = estimate_S2(d, n, rng);
    REQUIRE((s2 - swap_operator(d) / double(d)).norm() <= 0.05);
    REQUIRE(std::abs(s2.trace() - Complex(1.0, 0.0)) <=
            5.0 / std::sqrt(double(n)));
  }
}

TEST_CASE("S4 estimate matches the four-term closed form", "[haar]") {
  const long n = 100000;
  RngStream rng(42, 30);
  const Matrix s4 = estimate_S4(2, n, rng);
  const Matrix s4_exact = analytic_S4(2);
  REQUIRE((s4 - s4_exact).norm() <= 0.1);

  // exchanging the two adjoint slots and the two plain slots together
  // leaves the integrand invariant, sample by sample
  const Index d = 2;
  const Index dd = d * d * d * d;
  auto permuted_index = [d](Index flat) {
    const Index i4 = flat % d, i3 = (flat / d) % d, i2 = (flat / (d * d)) % d,
                i1 = flat / (d * d * d);
    return ((i2 * d + i1) * d + i4) * d + i3;
  };
  double defect = 0.0;
  for (Index r = 0; r < dd; ++r) {
    for (Index c = 0; c < dd; ++c) {
      defect = std::max(defect,
                        std::abs(s4(r, c) - s4(permuted_index(r),
                                               permuted_index(c))));
    }
  }
  REQUIRE(defect < 1e-12);

  REQUIRE_THROWS_AS(estimate_S4(7, 1000, rng), std::length_error);
  REQUIRE_THROWS_AS(analytic_S4(1), std::domain_error);
}

TEST_CASE("trace of S4 equals the fourth trace moment, which is 2", "[haar]") {
  const long n = 100000;
  for (Index d : {2, 3}) {
    RngStream rng(42, 40 + std::uint64_t(d));
    const MomentEstimate m4 = estimate_abs_trace_moment(d, 4, n, rng);
    REQUIRE(std::abs(m4.value.real() - 2.0) <= 3.0 * m4.std_error);
  }
  RngStream rng(42, 43);
  const Matrix s4 = estimate_S4(2, n, rng);
  REQUIRE(std::abs(s4.trace() - Complex(2.0, 0.0)) <= 0.05);
  REQUIRE(std::abs(analytic_S4(2).trace() - Complex(2.0, 0.0)) < 1e-12);
  REQUIRE(std::abs(analytic_S4(3).trace() - Complex(2.0, 0.0)) < 1e-12);
}

namespace {

// Contraction of S4 against <0|U^dag X^dag U|0><0|U^dag X U|0>.
double s4_fidelity_moment(const Matrix& s4, const Matrix& x) {
  const Index d = x.rows();
  auto flat = [d](Index a, Index b, Index c, Index e) {
    return ((a * d + b) * d + c) * d + e;
  };
  Complex acc{0.0, 0.0};
  const Matrix xd = x.adjoint();
  for (Index a = 0; a < d; ++a) {
    for (Index b = 0; b < d; ++b) {
      for (Index c = 0; c < d; ++c) {
        for (Index e = 0; e < d; ++e) {
          acc += s4(flat(0, 0, b, e), flat(a, c, 0, 0)) * xd(a, b) * x(c, e);
        }
      }
    }
  }
  return acc.real();
}

}  // namespace

TEST_CASE("S4 closed form reproduces the state-average fidelity moment",
          "[haar]") {
  for (Index d : {2, 3}) {
    RngStream xr(42, 50 + std::uint64_t(d));
    const Matrix x = sample_haar_unitary(d, xr).matrix();
    const double via_s4 = s4_fidelity_moment(analytic_S4(d), x);
    const double formula =
        (double(d) + std::norm(x.trace())) / (double(d) * double(d + 1));
    REQUIRE(std::abs(via_s4 - formula) < 1e-12);

    // Monte Carlo oracle for the same integral
    const long n = 100000;
    RngStream rng(42, 60 + std::uint64_t(d));
    double sum = 0.0, sumsq = 0.0;
    for (long s = 0; s < n; ++s) {
      const Matrix u = sample_haar_unitary(d, rng).matrix();
      const Complex amp = (u.adjoint() * x * u)(0, 0);
      const double v = std::norm(amp);
      sum += v;
      sumsq += v * v;
    }
    const double mean = sum / double(n);
    const double se =
        std::sqrt((sumsq / double(n) - mean * mean) / double(n - 1));
    REQUIRE(std::abs(mean - formula) <= 3.0 * se);
  }
}

TEST_CASE("sampler passes the right-invariance check", "[haar]") {
  const long n = 10000;
  const Index d = 2;
  RngStream rng(42, 70);
  // V = 1: the distance is pure sampling noise, at most twice the expected
  // Frobenius error sqrt((d^2-1)/N) of a single S2 estimate
  const double noise_budget = 2.0 * std::sqrt(double(d * d - 1) / double(n));
  REQUIRE(invariance_check(d, UnitaryOperator(identity(d)), n, rng) <=
          noise_budget);

  RngStream vr(42, 71);
  const UnitaryOperator v = sample_haar_unitary(d, vr);
  RngStream rng2(42, 72);
  REQUIRE(invariance_check(d, v, n, rng2) <= 0.1);

  Matrix zm(2, 2);
  zm << 1, 0, 0, -1;
  RngStream rng3(42, 73);
  REQUIRE(invariance_check(d, UnitaryOperator(zm), n, rng3) <= 0.1);
}

TEST_CASE("derived streams separate and do not collide", "[haar]") {
  RngStream a = derive_stream(42, {1, 2, 3, 4});
  RngStream b = derive_stream(42, {1, 2, 3, 4});
  RngStream c = derive_stream(42, {1, 2, 9, 4});

  bool any_difference = false;
  for (int k = 0; k < 100; ++k) {
    const double xa = a.gaussian();
    const double xb = b.gaussian();
    const double xc = c.gaussian();
    REQUIRE(xa == xb);
    if (xa != xc) any_difference = true;
  }
  REQUIRE(any_difference);

  std::unordered_set<std::uint64_t> seen;
  seen.reserve(1 << 21);
  for (std::uint64_t i = 0; i < 100; ++i) {
    for (std::uint64_t j = 0; j < 100; ++j) {
      for (std::uint64_t k = 0; k < 100; ++k) {
        seen.insert(derive_stream(42, {i, j, k}).stream_index());
      }
    }
  }
  REQUIRE(seen.size() == 1000000);
}

TEST_CASE("verify_haar_suite passes at modest sample counts", "[haar]") {
  for (Index d : {2, 3}) {
    const auto checks = verify_haar_suite(d, 20000, 42);
    for (const auto& c : checks) {
      INFO(c.name << ": " << c.observed << " vs tol " << c.tolerance);
      REQUIRE(c.pass);
    }
  }
}
