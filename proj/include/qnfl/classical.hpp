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

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/rational.hpp>

namespace qnfl {

/// Exact arithmetic for the classical bounds; the enumerations are tiny,
/// so no floating point anywhere in this module.
using Rational = boost::rational<std::int64_t>;

inline double to_double(const Rational& r) {
  return boost::rational_cast<double>(r);
}

inline std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

/// A function f: X -> Y as a value table; bijections are permutations.
struct FunctionTable {
  int domain_size = 0;
  int codomain_size = 0;
  std::vector<int> table;
};

/// Classical bound (1 - 1/|Y|)(1 - n/|X|) on the expected risk.
inline Rational classical_bound(int x_size, int y_size, int n) {
  if (x_size < 1 || y_size < 1) {
    throw std::domain_error("classical_bound: set sizes must be positive");
  }
  if (n < 0 || n > x_size) {
    throw std::domain_error("classical_bound: need 0 <= n <= |X|");
  }
  return Rational(y_size - 1, y_size) * Rational(x_size - n, x_size);
}

/// Bound for invertible targets and hypotheses, 1 - (n+1)/|X|, before
/// clamping. Negative at n = |X|.
inline Rational invertible_bound_raw(int x_size, int n) {
  if (x_size < 1) {
    throw std::domain_error("invertible_bound: |X| must be positive");
  }
  if (n < 0 || n > x_size) {
    throw std::domain_error("invertible_bound: need 0 <= n <= |X|");
  }
  return Rational(1) - Rational(n + 1, x_size);
}

inline Rational invertible_bound(int x_size, int n) {
  return std::max(Rational(0), invertible_bound_raw(x_size, n));
}

/// Exact enumerated average risk together with the matching bound.
struct ClassicalExperimentResult {
  Rational expected_risk{0};
  Rational bound{0};
  long function_count = 0;
  long training_set_count = 0;
};

/// Deterministic answer for a point outside the training support, given
/// the support (ascending) and the training values observed on it.
using OffSupportRule = std::function<int(
    int x_point, const std::vector<int>& support,
    const std::vector<int>& values)>;

inline int constant_zero_rule(int, const std::vector<int>&,
                              const std::vector<int>&) {
  return 0;
}

namespace detail {

inline long checked_pow(int base, int expn, long limit) {
  long v = 1;
  for (int i = 0; i < expn; ++i) {
    v *= base;
    if (v > limit) {
      throw std::length_error("enumeration too large (|Y|^|X| over budget)");
    }
  }
  return v;
}

/// All n-element subsets of {0..x_size-1}, ascending within each subset.
inline std::vector<std::vector<int>> enumerate_supports(int x_size, int n) {
  std::vector<std::vector<int>> supports;
  std::vector<int> pick(static_cast<std::size_t>(n));
  std::iota(pick.begin(), pick.end(), 0);
  while (true) {
    supports.push_back(pick);
    int i = n - 1;
    while (i >= 0 && pick[std::size_t(i)] == x_size - n + i) --i;
    if (i < 0) break;
    ++pick[std::size_t(i)];
    for (int j = i + 1; j < n; ++j) {
      pick[std::size_t(j)] = pick[std::size_t(j - 1)] + 1;
    }
  }
  return supports;
}

}  // namespace detail

/// Enumerates every function f: X -> Y and every n-element training
/// support, scores the hypothesis that reproduces the training values and
/// answers off-support via the given fixed rule (a constant by default),
/// and returns the exact average risk under uniform inputs. By the uniform
/// symmetry over f this equals the classical bound exactly, whatever the
/// off-support rule.
inline ClassicalExperimentResult brute_force_expected_risk(
    int x_size, int y_size, int n,
    const OffSupportRule& rule = constant_zero_rule) {
  if (x_size < 1 || y_size < 1) {
    throw std::domain_error("brute_force_expected_risk: sizes must be positive");
  }
  if (n < 0 || n > x_size) {
    throw std::domain_error("brute_force_expected_risk: need 0 <= n <= |X|");
  }
  const long function_count = detail::checked_pow(y_size, x_size, 10'000'000L);
  const auto supports = detail::enumerate_supports(x_size, n);
  const long support_count = static_cast<long>(supports.size());
  if (function_count * support_count > 100'000'000L) {
    throw std::length_error("brute_force_expected_risk: grid over budget");
  }

  std::int64_t wrong = 0;
  FunctionTable f{x_size, y_size, std::vector<int>(static_cast<std::size_t>(x_size), 0)};
  std::vector<int> values(static_cast<std::size_t>(n));
  for (long fi = 0; fi < function_count; ++fi) {
    for (const auto& support : supports) {
      for (int j = 0; j < n; ++j) {
        values[std::size_t(j)] = f.table[std::size_t(support[std::size_t(j)])];
      }
      for (int x = 0; x < x_size; ++x) {
        if (std::binary_search(support.begin(), support.end(), x)) continue;
        if (rule(x, support, values) != f.table[std::size_t(x)]) ++wrong;
      }
    }
    // next function in base-|Y| odometer order
    for (int x = 0; x < x_size; ++x) {
      if (++f.table[std::size_t(x)] < y_size) break;
      f.table[std::size_t(x)] = 0;
    }
  }

  ClassicalExperimentResult result;
  result.function_count = function_count;
  result.training_set_count = support_count;
  result.expected_risk =
      Rational(wrong, std::int64_t(function_count) * support_count * x_size);
  result.bound = classical_bound(x_size, y_size, n);
  return result;
}

/// Invertible variant: enumerates every bijection on X and every support;
/// the hypothesis reproduces the training values and maps the remaining
/// points injectively into the unused outputs in lowest-unused order.
/// For n < |X| the exact average equals 1 - (n+1)/|X|.
inline ClassicalExperimentResult brute_force_invertible_expected_risk(
    int x_size, int n) {
  if (x_size < 1 || x_size > 7) {
    throw std::length_error(
        "brute_force_invertible_expected_risk: |X| must be in [1, 7]");
  }
  if (n < 0 || n > x_size) {
    throw std::domain_error(
        "brute_force_invertible_expected_risk: need 0 <= n <= |X|");
  }
  const auto supports = detail::enumerate_supports(x_size, n);

  std::int64_t wrong = 0;
  long function_count = 0;
  std::vector<int> perm(static_cast<std::size_t>(x_size));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<char> used(static_cast<std::size_t>(x_size));
  do {
    ++function_count;
    for (const auto& support : supports) {
      std::fill(used.begin(), used.end(), 0);
      for (int s : support) used[std::size_t(perm[std::size_t(s)])] = 1;
      int next_free = 0;
      for (int x = 0; x < x_size; ++x) {
        if (std::binary_search(support.begin(), support.end(), x)) continue;
        while (used[std::size_t(next_free)]) ++next_free;
        used[std::size_t(next_free)] = 1;
        if (next_free != perm[std::size_t(x)]) ++wrong;
      }
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  ClassicalExperimentResult result;
  result.function_count = function_count;
  result.training_set_count = static_cast<long>(supports.size());
  result.expected_risk = Rational(
      wrong, std::int64_t(function_count) * result.training_set_count * x_size);
  result.bound = invertible_bound(x_size, n);
  return result;
}

}  // namespace qnfl
