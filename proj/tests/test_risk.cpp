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

#include <catch2/catch_amalgamated.hpp>

#include "qnfl/haar.hpp"
#include "qnfl/risk.hpp"
#include "test_util.hpp"

using namespace qnfl;
using namespace qnfl_test;

TEST_CASE("closed-form risk basics", "[risk]") {
  RngStream rng(42, 100);
  const UnitaryOperator u = sample_haar_unitary(3, rng);
  const RiskEstimate self = risk_closed_form(u, u);
  REQUIRE(std::abs(self.mean) < 1e-12);
  REQUIRE(self.std_error == 0.0);
  REQUIRE(self.samples == 1);
  REQUIRE(self.method == RiskMethod::closed_form);

  // global phases never matter
  for (int k = 0; k < 8; ++k) {
    const double theta = 2.0 * M_PI * k / 8.0;
    const UnitaryOperator v(Matrix(std::polar(1.0, theta) * u.matrix()));
    REQUIRE(std::abs(risk_closed_form(u, v).mean) < 1e-12);
  }

  // d = 2, U = 1, V = X: tr(U^dag V) = 0, risk = 1 - 2/6 = 2/3
  const UnitaryOperator eye(identity(2));
  const UnitaryOperator x(pauli_x());
  REQUIRE(risk_closed_form(eye, x).mean ==
          Catch::Approx(2.0 / 3.0).margin(1e-14));

  const UnitaryOperator w = sample_haar_unitary(2, rng);
  REQUIRE_THROWS_AS(risk_closed_form(u, w), std::invalid_argument);
}

TEST_CASE("closed-form risk is left-invariant and ranged", "[risk]") {
  RngStream rng(42, 101);
  for (Index d : {2, 3, 4}) {
    for (int rep = 0; rep < 10; ++rep) {
      const UnitaryOperator u = sample_haar_unitary(d, rng);
      const UnitaryOperator v = sample_haar_unitary(d, rng);
      const UnitaryOperator w = sample_haar_unitary(d, rng);
      const double r = risk_closed_form(u, v).mean;
      const UnitaryOperator wu(Matrix(w.matrix() * u.matrix()));
      const UnitaryOperator wv(Matrix(w.matrix() * v.matrix()));
      REQUIRE(std::abs(risk_closed_form(wu, wv).mean - r) < 1e-12);
      REQUIRE(r >= -1e-12);
      REQUIRE(r <= double(d) / double(d + 1) + 1e-12);
    }
  }
}

TEST_CASE("Monte Carlo fidelity risk agrees with the closed form", "[risk]") {
  RngStream rng(42, 102);

  const UnitaryOperator u = sample_haar_unitary(3, rng);
  RngStream mc(42, 103);
  const RiskEstimate self = risk_mc_fidelity(u, u, 200, mc);
  REQUIRE(std::abs(self.mean) < 1e-12);

  // d = 2, U = 1, V = X against the exact 2/3
  const UnitaryOperator eye(identity(2));
  const UnitaryOperator x(pauli_x());
  RngStream mc2(42, 104);
  const RiskEstimate est = risk_mc_fidelity(eye, x, 100000, mc2);
  REQUIRE(std::abs(est.mean - 2.0 / 3.0) <= 3.0 * est.std_error);
  REQUIRE(est.std_error > 0.0);

  const UnitaryOperator u4 = sample_haar_unitary(4, rng);
  const UnitaryOperator v4 = sample_haar_unitary(4, rng);
  RngStream mc3(42, 105);
  const RiskEstimate est4 = risk_mc_fidelity(u4, v4, 100000, mc3);
  REQUIRE(std::abs(est4.mean - risk_closed_form(u4, v4).mean) <=
          3.0 * est4.std_error);

  RngStream mc4(42, 106);
  REQUIRE_THROWS_AS(risk_mc_fidelity(u4, v4, 10, mc4), std::invalid_argument);
}

TEST_CASE("trace-norm distance of pure states", "[risk]") {
  // orthogonal outputs sit at distance exactly 1
  Vector e0 = Vector::Zero(2), e1 = Vector::Zero(2);
  e0[0] = 1.0;
  e1[1] = 1.0;
  const PureState a(e0), b(e1);
  REQUIRE(trace_distance_sq_pure(a, b) == Catch::Approx(1.0).margin(1e-15));
  REQUIRE(trace_distance_dense(a, b) == Catch::Approx(1.0).margin(1e-12));
  REQUIRE(trace_distance_sq_pure(a, a) == 0.0);

  // closed 2x2 form against the dense eigenvalue route
  RngStream rng(42, 107);
  for (int rep = 0; rep < 200; ++rep) {
    const Index d = 2 + rep % 3;
    const PureState p = sample_haar_state(d, rng);
    const PureState q = sample_haar_state(d, rng);
    const double closed = std::sqrt(trace_distance_sq_pure(p, q));
    REQUIRE(std::abs(closed - trace_distance_dense(p, q)) < 1e-10);
  }
}

TEST_CASE("per-sample identity: trace-norm form equals fidelity form",
          "[risk]") {
  RngStream rng(42, 108);
  for (int rep = 0; rep < 200; ++rep) {
    const Index d = 2 + rep % 3;
    const UnitaryOperator u = sample_haar_unitary(d, rng);
    const UnitaryOperator v = sample_haar_unitary(d, rng);
    const PureState psi = sample_haar_state(d, rng);
    const PureState out_u(Vector(u.matrix() * psi.amplitudes()));
    const PureState out_v(Vector(v.matrix() * psi.amplitudes()));
    const Complex ov = psi.amplitudes().dot(u.matrix().adjoint() *
                                            v.matrix() * psi.amplitudes());
    REQUIRE(std::abs(trace_distance_sq_pure(out_u, out_v) -
                     (1.0 - std::norm(ov))) < 1e-10);
  }
}

TEST_CASE("the two Monte Carlo forms walk the same state sequence", "[risk]") {
  RngStream ur(42, 109);
  const UnitaryOperator u = sample_haar_unitary(3, ur);
  RngStream vr(42, 110);
  const UnitaryOperator v = sample_haar_unitary(3, vr);
  for (std::uint64_t k = 0; k < 50; ++k) {
    RngStream sa(7, k);
    RngStream sb(7, k);
    const RiskEstimate fa = risk_mc_fidelity(u, v, 100, sa);
    const RiskEstimate tb = risk_mc_tracenorm(u, v, 100, sb);
    REQUIRE(std::abs(fa.mean - tb.mean) < 1e-10);
  }
}

TEST_CASE("all three risk forms agree within three standard errors",
          "[risk]") {
  RngStream rng(42, 111);
  for (Index d : {2, 3, 4}) {
    for (int rep = 0; rep < 3; ++rep) {
      const UnitaryOperator u = sample_haar_unitary(d, rng);
      const UnitaryOperator v = sample_haar_unitary(d, rng);
      const double exact = risk_closed_form(u, v).mean;
      RngStream s1(9, std::uint64_t(d * 10 + rep));
      RngStream s2(17, std::uint64_t(d * 10 + rep));
      const RiskEstimate mf = risk_mc_fidelity(u, v, 10000, s1);
      const RiskEstimate mt = risk_mc_tracenorm(u, v, 10000, s2);
      REQUIRE(std::abs(mf.mean - exact) <= 3.0 * mf.std_error);
      REQUIRE(std::abs(mt.mean - exact) <= 3.0 * mt.std_error);
    }
  }
}

TEST_CASE("quantum NFL bound values", "[risk]") {
  const BoundValue b1 = quantum_nfl_bound(4, 1);
  REQUIRE(b1.raw == Catch::Approx(0.7).margin(1e-15));
  REQUIRE(quantum_nfl_bound(4, 2).raw == Catch::Approx(0.55).margin(1e-15));
  REQUIRE(quantum_nfl_bound(4, 3).raw == Catch::Approx(0.3).margin(1e-15));

  const BoundValue b4 = quantum_nfl_bound(4, 4);
  REQUIRE(b4.raw == Catch::Approx(-0.05).margin(1e-15));
  REQUIRE(b4.clamped == 0.0);

  REQUIRE_THROWS_AS(quantum_nfl_bound(4, 5), std::domain_error);
  REQUIRE_THROWS_AS(quantum_nfl_bound(0, 0), std::domain_error);
}
