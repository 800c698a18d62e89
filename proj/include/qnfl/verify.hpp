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
#include <cstdint>
#include <string>
#include <vector>

#include "qnfl/haar.hpp"
#include "qnfl/linalg.hpp"
#include "qnfl/rng.hpp"

namespace qnfl {

/// One line of the Haar identity suite: an observed deviation against its
/// tolerance.
struct HaarCheck {
  std::string name;
  double observed = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// Monte Carlo verification of the Haar integral identities at dimension d:
/// S2 against SWAP/d, the first two trace moments, right-invariance of the
/// sampler, and (at d = 2, where the dense operator is cheap) S4 against
/// its four-term closed form.
inline std::vector<HaarCheck> verify_haar_suite(Index d, long n_samples,
                                                std::uint64_t seed) {
  std::vector<HaarCheck> checks;
  const double scalar_tol = 5.0 / std::sqrt(double(n_samples));
  auto add = [&checks](std::string name, double observed, double tolerance) {
    checks.push_back(
        {std::move(name), observed, tolerance, observed <= tolerance});
  };

  {
    RngStream rng = derive_stream(seed, {std::uint64_t(d), 1});
    const Matrix s2 = estimate_S2(d, n_samples, rng);
    add("S2 vs SWAP/d (Frobenius)", (s2 - swap_operator(d) / double(d)).norm(),
        0.05);
  }
  {
    RngStream rng = derive_stream(seed, {std::uint64_t(d), 2});
    const MomentEstimate m = estimate_abs_trace_moment(d, 2, n_samples, rng);
    add("mean |tr U|^2 vs 1", std::abs(m.value.real() - 1.0), scalar_tol);
  }
  {
    RngStream rng = derive_stream(seed, {std::uint64_t(d), 3});
    const MomentEstimate m = estimate_trace_mean(d, n_samples, rng);
    add("mean tr U vs 0", std::abs(m.value), scalar_tol);
  }
  {
    RngStream v_rng = derive_stream(seed, {std::uint64_t(d), 4});
    const UnitaryOperator fixed_v = sample_haar_unitary(d, v_rng);
    RngStream rng = derive_stream(seed, {std::uint64_t(d), 5});
    add("right-invariance (Frobenius)",
        invariance_check(d, fixed_v, n_samples, rng), 0.1);
  }
  if (d == 2) {
    RngStream rng = derive_stream(seed, {std::uint64_t(d), 6});
    const Matrix s4 = estimate_S4(d, n_samples, rng);
    add("S4 vs closed form (Frobenius)", (s4 - analytic_S4(d)).norm(), 0.1);
  }
  return checks;
}

inline bool all_pass(const std::vector<HaarCheck>& checks) {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

}  // namespace qnfl
