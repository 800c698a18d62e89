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

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "qnfl/classical.hpp"
#include "qnfl/hypothesis.hpp"
#include "qnfl/linalg.hpp"
#include "qnfl/risk.hpp"
#include "qnfl/rng.hpp"
#include "qnfl/variational.hpp"

namespace qnfl {

enum class HypothesisMode { optimal_block, variational };

/// Stream purpose tags; combined with (n, u_trial, s_trial) labels they
/// give every random decision of the experiment its own substream.
enum StreamPurpose : std::uint64_t {
  kStreamUnitary = 1,
  kStreamTraining = 2,
  kStreamResidualGuess = 3,
  kStreamTrainerInit = 4,
  kStreamRiskSamples = 5,
};

struct ExperimentConfig {
  int dim = 4;
  std::vector<int> n_values = {1, 2, 3, 4};
  int u_trials = 100;
  int s_trials_per_u = 10;
  RiskMethod risk_method = RiskMethod::closed_form;
  long risk_samples = 10000;  // only used by the Monte Carlo method
  HypothesisMode hypothesis_mode = HypothesisMode::optimal_block;
  TrainConfig train_config;
  std::uint64_t master_seed = 42;
  std::string output_path;  // empty: standard output
  int threads = 0;          // 0: all hardware threads
};

/// One aggregated line of the risk-versus-n table, with the three bounds
/// evaluated at |X| = |Y| = d.
struct ExperimentRow {
  int n = 0;
  double avg_risk = 0.0;
  double std_error = 0.0;
  long trials = 0;
  double bound_quantum_raw = 0.0;
  double bound_quantum = 0.0;
  double bound_classical = 0.0;
  double bound_classical_inv = 0.0;
  long below_target = 0;  // variational trials that missed target_cost
};

namespace detail {

inline void validate(const ExperimentConfig& c) {
  if (c.dim < 1) throw std::domain_error("experiment: dim must be >= 1");
  if (c.n_values.empty()) {
    throw std::domain_error("experiment: n_values must be nonempty");
  }
  for (int n : c.n_values) {
    if (n < 1 || n > c.dim) {
      throw std::domain_error("experiment: every n must satisfy 1 <= n <= dim");
    }
  }
  if (c.u_trials < 1 || c.s_trials_per_u < 1) {
    throw std::domain_error("experiment: trial counts must be >= 1");
  }
  if (c.risk_method == RiskMethod::mc_tracenorm) {
    throw std::domain_error(
        "experiment: risk method must be closed_form or mc_fidelity");
  }
  if (c.risk_method == RiskMethod::mc_fidelity && c.risk_samples < 100) {
    throw std::domain_error("experiment: risk_samples must be >= 100");
  }
  if (c.hypothesis_mode == HypothesisMode::variational && c.dim < 2) {
    throw std::domain_error("experiment: variational mode needs dim >= 2");
  }
  check_train_config(c.train_config);
}

/// Runs fn(0..total-1) across the given number of workers. Each index owns
/// its output slot, so the result is schedule-independent.
template <typename Fn>
void parallel_for(long total, int threads, Fn&& fn) {
  if (threads <= 0) {
    threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 1) threads = 1;
  }
  if (threads == 1 || total <= 1) {
    for (long i = 0; i < total; ++i) fn(i);
    return;
  }
  std::atomic<long> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&]() {
    while (true) {
      const long i = next.fetch_add(1);
      if (i >= total) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(std::size_t(threads));
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

struct TrialResult {
  double risk = 0.0;
  bool below_target = false;
};

}  // namespace detail

/// Nested Monte Carlo over hidden unitaries and training sets: for each n,
/// u_trials x s_trials_per_u independent problem instances, each solved by
/// the configured hypothesis and scored by the configured risk method.
/// Deterministic for a fixed master_seed at any thread count: every cell
/// derives its streams from (n, u_trial, s_trial, purpose) labels.
inline std::vector<ExperimentRow> run_experiment(const ExperimentConfig& config) {
  detail::validate(config);
  const int d = config.dim;
  const long cells_per_n = long(config.u_trials) * config.s_trials_per_u;
  const long total = cells_per_n * long(config.n_values.size());
  const HermitianBasis basis =
      config.hypothesis_mode == HypothesisMode::variational && d >= 2
          ? gell_mann_basis(d)
          : HermitianBasis{};

  std::vector<detail::TrialResult> results(static_cast<std::size_t>(total));
  detail::parallel_for(total, config.threads, [&](long cell) {
    const int ni = static_cast<int>(cell / cells_per_n);
    const long rem = cell % cells_per_n;
    const std::uint64_t n = std::uint64_t(config.n_values[std::size_t(ni)]);
    const std::uint64_t u_idx = std::uint64_t(rem / config.s_trials_per_u);
    const std::uint64_t s_idx = std::uint64_t(rem % config.s_trials_per_u);

    RngStream u_stream =
        derive_stream(config.master_seed, {n, u_idx, 0, kStreamUnitary});
    const UnitaryOperator u = sample_haar_unitary(d, u_stream);
    RngStream s_stream =
        derive_stream(config.master_seed, {n, u_idx, s_idx, kStreamTraining});
    const TrainingSet training =
        realize_training_set(u, static_cast<int>(n), s_stream);

    detail::TrialResult& out = results[std::size_t(cell)];
    UnitaryOperator v = u;
    if (config.hypothesis_mode == HypothesisMode::optimal_block) {
      RngStream w_stream = derive_stream(config.master_seed,
                                         {n, u_idx, s_idx, kStreamResidualGuess});
      const BlockConstruction built =
          optimal_hypothesis_detailed(training, u, w_stream);
      v = built.hypothesis.unitary;
      // tr(U^dag V) must decompose as rank + tr(W); anything else means the
      // block assembly is wrong.
      const Complex tr_uv = (u.matrix().adjoint() * v.matrix()).trace();
      const Complex tr_w =
          built.residual_block.rows() > 0 ? built.residual_block.trace()
                                          : Complex(0.0, 0.0);
      const double expected = std::norm(double(built.rank) + tr_w);
      if (std::abs(std::norm(tr_uv) - expected) > 1e-10) {
        throw std::logic_error("experiment: block trace decomposition violated");
      }
    } else {
      RngStream t_stream = derive_stream(config.master_seed,
                                         {n, u_idx, s_idx, kStreamTrainerInit});
      const Hypothesis trained =
          train(training, config.train_config, basis, t_stream);
      v = trained.unitary;
      out.below_target = trained.diagnostics.below_target;
    }

    if (config.risk_method == RiskMethod::closed_form) {
      out.risk = risk_closed_form(u, v).mean;
    } else {
      RngStream r_stream = derive_stream(config.master_seed,
                                         {n, u_idx, s_idx, kStreamRiskSamples});
      out.risk = risk_mc_fidelity(u, v, config.risk_samples, r_stream).mean;
    }
  });

  std::vector<ExperimentRow> rows;
  rows.reserve(config.n_values.size());
  for (std::size_t ni = 0; ni < config.n_values.size(); ++ni) {
    const int n = config.n_values[ni];
    ExperimentRow row;
    row.n = n;
    row.trials = cells_per_n;
    double sum = 0.0;
    for (long c = 0; c < cells_per_n; ++c) {
      const auto& r = results[std::size_t(long(ni) * cells_per_n + c)];
      sum += r.risk;
      row.below_target += r.below_target ? 1 : 0;
    }
    row.avg_risk = sum / double(cells_per_n);
    double var = 0.0;
    for (long c = 0; c < cells_per_n; ++c) {
      const double x = results[std::size_t(long(ni) * cells_per_n + c)].risk;
      var += (x - row.avg_risk) * (x - row.avg_risk);
    }
    row.std_error = cells_per_n > 1
                        ? std::sqrt(var / double(cells_per_n - 1) /
                                    double(cells_per_n))
                        : 0.0;
    const BoundValue qb = quantum_nfl_bound(d, n);
    row.bound_quantum_raw = qb.raw;
    row.bound_quantum = qb.clamped;
    row.bound_classical = to_double(classical_bound(d, d, n));
    row.bound_classical_inv = to_double(invertible_bound(d, n));
    rows.push_back(row);
  }
  return rows;
}

namespace detail {

inline std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

}  // namespace detail

inline constexpr const char* kCsvHeader =
    "n,avg_risk,std_error,trials,bound_quantum_raw,bound_quantum,"
    "bound_classical,bound_classical_inv";

inline void emit_csv(const std::vector<ExperimentRow>& rows, std::ostream& os) {
  if (rows.empty()) {
    throw std::invalid_argument("emit_csv: no rows to write");
  }
  os << kCsvHeader << '\n';
  for (const auto& r : rows) {
    os << r.n << ',' << detail::format_real(r.avg_risk) << ','
       << detail::format_real(r.std_error) << ',' << r.trials << ','
       << detail::format_real(r.bound_quantum_raw) << ','
       << detail::format_real(r.bound_quantum) << ','
       << detail::format_real(r.bound_classical) << ','
       << detail::format_real(r.bound_classical_inv) << '\n';
  }
}

inline std::string format_csv(const std::vector<ExperimentRow>& rows) {
  std::ostringstream os;
  emit_csv(rows, os);
  return os.str();
}

inline void emit_csv(const std::vector<ExperimentRow>& rows,
                     const std::string& path) {
  if (rows.empty()) {
    throw std::invalid_argument("emit_csv: no rows to write");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("emit_csv: cannot open '" + path + "' for writing");
  }
  emit_csv(rows, static_cast<std::ostream&>(out));
  out.flush();
  if (!out) {
    throw std::runtime_error("emit_csv: write to '" + path + "' failed");
  }
}

}  // namespace qnfl
