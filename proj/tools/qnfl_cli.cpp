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

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qnfl/qnfl.hpp"

namespace {

using namespace qnfl;

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Plain key=value defaults, keys identical to the long flag names. The
// resulting tokens are injected ahead of the real flags, which therefore
// override the file.
std::vector<std::string> load_config_tokens(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot read config file '" + path + "'");
  }
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("config line is not key=value: '" + line + "'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw std::runtime_error("config line has empty key: '" + line + "'");
    }
    tokens.push_back("--" + key + "=" + value);
  }
  return tokens;
}

// Accepts "1,2,3", "0..4", or a mix like "0..2,4".
std::vector<int> parse_count_list(const std::string& text) {
  std::vector<int> values;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    const std::string item = text.substr(pos, comma - pos);
    const std::size_t dots = item.find("..");
    if (dots != std::string::npos) {
      const int lo = std::stoi(item.substr(0, dots));
      const int hi = std::stoi(item.substr(dots + 2));
      if (hi < lo) throw std::invalid_argument("bad range '" + item + "'");
      for (int v = lo; v <= hi; ++v) values.push_back(v);
    } else if (!item.empty()) {
      values.push_back(std::stoi(item));
    }
    pos = comma + 1;
  }
  if (values.empty()) {
    throw std::invalid_argument("no counts given in '" + text + "'");
  }
  return values;
}

void print_row_table(const std::vector<ExperimentRow>& rows, bool variational,
                     std::ostream& os) {
  os << "  n    avg_risk    std_error   trials   q_bound(raw)   classical   "
        "invertible\n";
  char line[160];
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line,
                  "%3d    %.6f    %.6f   %6ld   %.4f(%+.4f)     %.6f     "
                  "%.6f\n",
                  r.n, r.avg_risk, r.std_error, r.trials, r.bound_quantum,
                  r.bound_quantum_raw, r.bound_classical,
                  r.bound_classical_inv);
    os << line;
    if (variational && r.below_target > 0) {
      os << "      (" << r.below_target
         << " trials finished below the target cost)\n";
    }
    if (r.bound_quantum_raw < 0.0) {
      os << "      (raw bound is negative at n = " << r.n
         << "; the clamped value 0 is reported in bound_quantum)\n";
    }
  }
}

int cmd_nfl_quantum(const ExperimentConfig& config) {
  const auto rows = run_experiment(config);
  const bool variational =
      config.hypothesis_mode == HypothesisMode::variational;
  if (config.output_path.empty() || config.output_path == "-") {
    print_row_table(rows, variational, std::cerr);
    emit_csv(rows, std::cout);
  } else {
    emit_csv(rows, config.output_path);
    print_row_table(rows, variational, std::cout);
    std::cout << "wrote " << config.output_path << "\n";
  }
  return 0;
}

// --out for the report-style subcommands: send standard output to a file.
void redirect_stdout(const std::string& path) {
  if (path.empty() || path == "-") return;
  if (!std::freopen(path.c_str(), "w", stdout)) {
    throw std::runtime_error("cannot open '" + path + "' for writing");
  }
}

int cmd_risk(int dim, std::uint64_t seed, long mc_samples) {
  RngStream ur = derive_stream(seed, {std::uint64_t(dim), 1});
  RngStream vr = derive_stream(seed, {std::uint64_t(dim), 2});
  const UnitaryOperator u = sample_haar_unitary(dim, ur);
  const UnitaryOperator v = sample_haar_unitary(dim, vr);

  const RiskEstimate exact = risk_closed_form(u, v);
  RngStream fr = derive_stream(seed, {std::uint64_t(dim), 3});
  const RiskEstimate fid = risk_mc_fidelity(u, v, mc_samples, fr);
  RngStream tr = derive_stream(seed, {std::uint64_t(dim), 3});
  const RiskEstimate trn = risk_mc_tracenorm(u, v, mc_samples, tr);

  std::printf("risk of a Haar pair at d = %d (seed %llu)\n", dim,
              static_cast<unsigned long long>(seed));
  std::printf("  closed form          : %.10f\n", exact.mean);
  std::printf("  Monte Carlo fidelity : %.10f +- %.10f  (N = %ld)\n", fid.mean,
              fid.std_error, fid.samples);
  std::printf("  Monte Carlo trace nrm: %.10f +- %.10f  (N = %ld)\n", trn.mean,
              trn.std_error, trn.samples);
  const double z_fid =
      fid.std_error > 0 ? (fid.mean - exact.mean) / fid.std_error : 0.0;
  const double z_trn =
      trn.std_error > 0 ? (trn.mean - exact.mean) / trn.std_error : 0.0;
  std::printf("  deviation from exact : %+.2f sigma (fidelity), %+.2f sigma "
              "(trace norm)\n",
              z_fid, z_trn);
  std::printf("  same-stream form gap : %.1e\n",
              std::abs(fid.mean - trn.mean));
  const bool ok = std::abs(z_fid) <= 3.0 && std::abs(z_trn) <= 3.0 &&
                  std::abs(fid.mean - trn.mean) < 1e-10;
  std::printf("  agreement: %s\n", ok ? "PASS" : "FAIL");
  return ok ? 0 : 1;
}

int cmd_verify_haar(int dim, long samples, std::uint64_t seed) {
  const auto checks = verify_haar_suite(dim, samples, seed);
  std::printf("Haar identity suite at d = %d, N = %ld, seed %llu\n", dim,
              samples, static_cast<unsigned long long>(seed));
  for (const auto& c : checks) {
    std::printf("  %-34s %.6f  (tolerance %.6f)  %s\n", c.name.c_str(),
                c.observed, c.tolerance, c.pass ? "PASS" : "FAIL");
  }
  return all_pass(checks) ? 0 : 1;
}

int cmd_nfl_classical(int x_size, int y_size, const std::string& pairs_spec,
                      bool invertible, bool brute) {
  for (int n : parse_count_list(pairs_spec)) {
    if (invertible) {
      const Rational raw = invertible_bound_raw(x_size, n);
      const Rational clamped = invertible_bound(x_size, n);
      std::printf("n = %d: invertible bound = %s", n,
                  to_string(clamped).c_str());
      if (raw < Rational(0)) {
        std::printf("  (raw %s, clamped)", to_string(raw).c_str());
      }
      if (brute) {
        const auto r = brute_force_invertible_expected_risk(x_size, n);
        std::printf("  enumerated = %s over %ld bijections x %ld supports%s",
                    to_string(r.expected_risk).c_str(), r.function_count,
                    r.training_set_count,
                    r.expected_risk == r.bound ? "  (equality)" : "");
      }
    } else {
      const Rational bound = classical_bound(x_size, y_size, n);
      std::printf("n = %d: classical bound = %s", n, to_string(bound).c_str());
      if (brute) {
        const auto r = brute_force_expected_risk(x_size, y_size, n);
        std::printf("  enumerated = %s over %ld functions x %ld supports%s",
                    to_string(r.expected_risk).c_str(), r.function_count,
                    r.training_set_count,
                    r.expected_risk == r.bound ? "  (equality)" : "");
      }
    }
    std::printf("\n");
  }
  return 0;
}

int cmd_train_qnn(int dim, int pairs, std::uint64_t seed,
                  const TrainConfig& cfg) {
  RngStream ur = derive_stream(seed, {std::uint64_t(dim), 1});
  const UnitaryOperator u = sample_haar_unitary(dim, ur);
  RngStream sr = derive_stream(seed, {std::uint64_t(dim), 2});
  const TrainingSet training = realize_training_set(u, pairs, sr);
  const HermitianBasis basis = gell_mann_basis(dim);
  RngStream tr = derive_stream(seed, {std::uint64_t(dim), 3});
  const Hypothesis h = train(training, cfg, basis, tr);

  const double risk = risk_closed_form(u, h.unitary).mean;
  const BoundValue bound = quantum_nfl_bound(dim, training.rank());
  std::printf("trained a d = %d hypothesis on %d pairs (seed %llu)\n", dim,
              pairs, static_cast<unsigned long long>(seed));
  std::printf("  final cost      : %.12f  (target %.12f)%s\n",
              h.diagnostics.final_cost, cfg.target_cost,
              h.diagnostics.below_target ? "  BELOW TARGET" : "");
  std::printf("  iterations      : %ld over %d restart(s)\n",
              h.diagnostics.iterations, h.diagnostics.restarts_used);
  std::printf("  reproduction err: %.3e (phase-aligned)\n",
              h.diagnostics.reproduction_error);
  std::printf("  risk vs target  : %.6f\n", risk);
  std::printf("  NFL bound       : %.6f (raw %.6f)\n", bound.clamped,
              bound.raw);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantum no-free-lunch simulator: Haar moment checks, exact "
               "and Monte Carlo risk, optimal and trained hypotheses, and "
               "classical bound enumeration"};
  app.require_subcommand(1);
  // config-file tokens are injected before the real flags; last value wins
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  int exit_code = 0;

  // nfl-quantum
  ExperimentConfig config;
  std::string pairs_spec = "1,2,3,4";
  std::string mode = "optimal";
  std::string risk_method = "closed";
  auto* quantum = app.add_subcommand(
      "nfl-quantum", "average risk over Haar problem instances, with bounds");
  quantum->add_option("--dim", config.dim, "Hilbert space dimension")
      ->capture_default_str();
  quantum
      ->add_option("--pairs", pairs_spec,
                   "training pair counts, e.g. 1,2,3 or 1..4")
      ->capture_default_str();
  quantum->add_option("--u-trials", config.u_trials, "hidden unitaries per n")
      ->capture_default_str();
  quantum
      ->add_option("--s-trials", config.s_trials_per_u,
                   "training sets per unitary")
      ->capture_default_str();
  quantum->add_option("--mode", mode, "hypothesis: optimal or variational")
      ->check(CLI::IsMember({"optimal", "variational"}))
      ->capture_default_str();
  quantum->add_option("--risk", risk_method, "risk evaluation: closed or mc")
      ->check(CLI::IsMember({"closed", "mc"}))
      ->capture_default_str();
  quantum
      ->add_option("--risk-samples", config.risk_samples,
                   "input states per Monte Carlo risk estimate")
      ->capture_default_str();
  quantum->add_option("--seed", config.master_seed, "master seed")
      ->capture_default_str();
  quantum->add_option("--out", config.output_path,
                      "CSV path ('-' or empty: stdout)");
  quantum->add_option("--threads", config.threads, "worker threads (0: all)")
      ->capture_default_str();
  quantum->add_option("--lr", config.train_config.learning_rate,
                      "trainer learning rate")
      ->capture_default_str();
  quantum
      ->add_option("--iters", config.train_config.max_iters,
                   "trainer iteration cap per restart")
      ->capture_default_str();
  quantum->add_option("--restarts", config.train_config.restarts,
                      "trainer restarts")
      ->capture_default_str();
  quantum->add_option("--target", config.train_config.target_cost,
                      "trainer target cost")
      ->capture_default_str();
  quantum->add_option("--fd-step", config.train_config.fd_step,
                      "finite-difference step")
      ->capture_default_str();
  quantum->add_option("--init-scale", config.train_config.init_scale,
                      "restart initialization scale")
      ->capture_default_str();
  std::string config_doc;
  quantum->add_option("--config", config_doc,
                      "plain key=value defaults (flags override)");
  quantum->callback([&]() {
    config.n_values = parse_count_list(pairs_spec);
    config.hypothesis_mode = mode == "variational"
                                 ? HypothesisMode::variational
                                 : HypothesisMode::optimal_block;
    config.risk_method = risk_method == "mc" ? RiskMethod::mc_fidelity
                                             : RiskMethod::closed_form;
    exit_code = cmd_nfl_quantum(config);
  });

  // the report-style subcommands share --out (stdout redirect) and accept
  // --threads for config-file compatibility
  std::string out_path;
  int threads_accepted = 0;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", out_path, "write output to a file ('-': stdout)");
    sub->add_option("--threads", threads_accepted, "worker threads (0: all)");
    sub->add_option("--config", config_doc,
                    "plain key=value defaults (flags override)");
  };

  // risk
  int risk_dim = 2;
  std::uint64_t risk_seed = 42;
  long risk_mc = 10000;
  auto* risk = app.add_subcommand(
      "risk", "evaluate one Haar pair through all three risk forms");
  risk->add_option("--dim", risk_dim)->capture_default_str();
  risk->add_option("--seed", risk_seed)->capture_default_str();
  risk->add_option("--mc", risk_mc, "Monte Carlo samples")
      ->capture_default_str();
  add_common(risk);
  risk->callback([&]() {
    redirect_stdout(out_path);
    exit_code = cmd_risk(risk_dim, risk_seed, risk_mc);
  });

  // verify-haar
  int vh_dim = 2;
  long vh_samples = 100000;
  std::uint64_t vh_seed = 42;
  auto* verify = app.add_subcommand(
      "verify-haar", "Monte Carlo check of the Haar moment identities");
  verify->add_option("--dim", vh_dim)->capture_default_str();
  verify->add_option("--samples", vh_samples)->capture_default_str();
  verify->add_option("--seed", vh_seed)->capture_default_str();
  add_common(verify);
  verify->callback([&]() {
    redirect_stdout(out_path);
    exit_code = cmd_verify_haar(vh_dim, vh_samples, vh_seed);
  });

  // nfl-classical
  int x_size = 4, y_size = 4;
  std::string classical_pairs = "0..4";
  bool invertible = false, brute = false;
  auto* classical = app.add_subcommand(
      "nfl-classical", "exact classical bounds and brute-force enumeration");
  classical->add_option("--x-size", x_size)->capture_default_str();
  classical->add_option("--y-size", y_size)->capture_default_str();
  classical->add_option("--pairs", classical_pairs)->capture_default_str();
  classical->add_flag("--invertible", invertible,
                      "bijective targets and hypotheses");
  classical->add_flag("--brute-force", brute,
                      "enumerate and certify equality");
  std::uint64_t classical_seed = 42;
  classical->add_option("--seed", classical_seed,
                        "accepted globally; enumeration is deterministic");
  add_common(classical);
  classical->callback([&]() {
    redirect_stdout(out_path);
    exit_code =
        cmd_nfl_classical(x_size, y_size, classical_pairs, invertible, brute);
  });

  // train-qnn
  int train_dim = 4, train_pairs = 2;
  std::uint64_t train_seed = 42;
  TrainConfig train_cfg;
  auto* train = app.add_subcommand(
      "train-qnn", "train one variational hypothesis and score it");
  train->add_option("--dim", train_dim)->capture_default_str();
  train->add_option("--pairs", train_pairs)->capture_default_str();
  train->add_option("--seed", train_seed)->capture_default_str();
  train->add_option("--lr", train_cfg.learning_rate)->capture_default_str();
  train->add_option("--iters", train_cfg.max_iters)->capture_default_str();
  train->add_option("--restarts", train_cfg.restarts)->capture_default_str();
  train->add_option("--target", train_cfg.target_cost)->capture_default_str();
  train->add_option("--fd-step", train_cfg.fd_step)->capture_default_str();
  train->add_option("--init-scale", train_cfg.init_scale)
      ->capture_default_str();
  add_common(train);
  train->callback([&]() {
    redirect_stdout(out_path);
    exit_code = cmd_train_qnn(train_dim, train_pairs, train_seed, train_cfg);
  });

  try {
    // pull --config out of the argument list, then splice its key=value
    // pairs in right after the subcommand so explicit flags take precedence
    std::vector<std::string> args;
    std::string config_path;
    for (int i = 1; i < argc; ++i) {
      const std::string token = argv[i];
      if (token == "--config" && i + 1 < argc) {
        config_path = argv[++i];
      } else if (token.rfind("--config=", 0) == 0) {
        config_path = token.substr(9);
      } else {
        args.push_back(token);
      }
    }
    if (!config_path.empty() && !args.empty()) {
      const auto tokens = load_config_tokens(config_path);
      args.insert(args.begin() + 1, tokens.begin(), tokens.end());
    }
    std::vector<const char*> argv2;
    argv2.push_back(argv[0]);
    for (const auto& a : args) argv2.push_back(a.c_str());
    app.parse(static_cast<int>(argv2.size()), argv2.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return exit_code;
}
