// Copyright 2026 The dtomo Authors
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

// dtomo: diamond norms, tomography sweeps, scaling reports and self-checks.
//
// Exit codes: 0 success, 1 validation error, 2 numerical failure,
// 3 property violation in `verify`.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "dtomo/applications.hpp"
#include "dtomo/bench.hpp"
#include "dtomo/diamond.hpp"
#include "dtomo/io.hpp"
#include "dtomo/report.hpp"
#include "dtomo/verify.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kValidation = 1;
constexpr int kNumerical = 2;
constexpr int kVerifyFailed = 3;

// --out wins over DTOMO_OUT, which wins over the config file.
std::optional<std::string> output_override(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("DTOMO_OUT"); env && *env) return std::string(env);
  return std::nullopt;
}

dtomo::SdpOptions sdp_options(double gap_tol) {
  dtomo::SdpOptions opt;
  opt.gap_tol = gap_tol;
  return opt;
}

int cmd_diamond(const std::string& file_a, const std::string& file_b, double gap_tol) {
  const dtomo::ChannelDocument a = dtomo::read_channel_file(file_a);
  const dtomo::ChannelDocument b = dtomo::read_channel_file(file_b);
  if (a.dims.d_in != b.dims.d_in || a.dims.d_out != b.dims.d_out) {
    std::cerr << "error: dimension mismatch (" << a.dims.d_out << "x" << a.dims.d_in << " vs "
              << b.dims.d_out << "x" << b.dims.d_in << ")\n";
    return kValidation;
  }
  const auto t0 = std::chrono::steady_clock::now();
  const dtomo::DiamondValue v = dtomo::diamond_norm(
      dtomo::ComplexMatrix(a.choi.matrix() - b.choi.matrix()), a.dims.d_in, sdp_options(gap_tol));
  const double ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  const nlohmann::json out{{"diamond_norm", v.value},
                           {"half_distance", 0.5 * v.value},
                           {"method", dtomo::to_string(v.method)},
                           {"gap", v.gap},
                           {"runtime_ms", ms}};
  std::cout << out.dump(2) << "\n";
  return kOk;
}

int cmd_simulate(const std::string& config, const std::optional<std::uint64_t>& seed, int jobs,
                 const std::string& out_flag, const std::optional<double>& gap_tol) {
  dtomo::ExperimentConfig cfg = dtomo::load_experiment_config(config);
  if (seed) cfg.seed = *seed;
  if (gap_tol) cfg.gap_tol = *gap_tol;
  if (auto out = output_override(out_flag)) cfg.out = *out;
  if (auto v = cfg.violations(); !v.empty()) throw dtomo::ConfigError(std::move(v));
  const dtomo::SimulationResult res = dtomo::simulate(cfg, jobs);
  dtomo::write_simulation(cfg, res);
  std::cout << res.summary.dump(2) << "\n";
  std::cerr << "wrote " << (std::filesystem::path(cfg.out) / "results.csv").string() << " ("
            << res.rows.size() << " rows)\n";
  return kOk;
}

int cmd_sweep_report(const std::string& csv, const std::string& out_flag) {
  const dtomo::ScalingReport r = dtomo::scaling_report(dtomo::read_error_samples(csv));
  std::filesystem::path dir = std::filesystem::path(csv).parent_path();
  if (auto out = output_override(out_flag)) dir = *out;
  if (!dir.empty()) std::filesystem::create_directories(dir);
  const std::string text = dtomo::format_report(r);
  std::ofstream(dir / "report.txt") << text;
  std::ofstream(dir / "report.svg") << dtomo::render_svg(r);
  std::cout << text;
  return kOk;
}

int cmd_povm(const std::string& file, std::int64_t n, double delta, double epsilon, int trials,
             std::uint64_t seed, const std::string& out_flag) {
  const dtomo::PovmDocument doc = dtomo::read_povm_file(file);
  dtomo::RngStream rng(seed, 0);
  nlohmann::json rows = nlohmann::json::array();
  int within = 0;
  if (doc.effects.size() == 1) {
    const dtomo::BinaryPovm e(doc.effects.front());
    for (int t = 0; t < trials; ++t) {
      const dtomo::BinaryPovmLearning r = dtomo::learn_binary_povm(e, n, delta, rng);
      within += r.opnorm_error <= epsilon;
      rows.push_back({{"trial", t},
                      {"opnorm_error", r.opnorm_error},
                      {"half_diamond_error", 0.5 * r.record.diamond_error_final},
                      {"estimate", dtomo::matrix_to_json(r.estimate.effect())}});
    }
  } else {
    const dtomo::MultiPovm m(doc.effects);
    for (int t = 0; t < trials; ++t) {
      const dtomo::MultiPovmLearning r = dtomo::learn_multi_povm(m, n, delta, rng);
      within += r.max_opnorm_error <= epsilon;
      nlohmann::json effects = nlohmann::json::array();
      for (int j = 0; j < r.estimate.outcomes(); ++j) {
        effects.push_back(dtomo::matrix_to_json(r.estimate.effect(j)));
      }
      rows.push_back({{"trial", t},
                      {"max_opnorm_error", r.max_opnorm_error},
                      {"element_errors", r.element_errors},
                      {"congruence_fallback", r.congruence_fallback},
                      {"estimate", effects}});
    }
  }
  const nlohmann::json report{{"dim", doc.dim},
                              {"outcomes", doc.effects.size() == 1 ? 2 : doc.effects.size()},
                              {"N", n},
                              {"delta", delta},
                              {"epsilon", epsilon},
                              {"seed", seed},
                              {"trials", trials},
                              {"within_epsilon", within},
                              {"frequency", static_cast<double>(within) / trials},
                              {"runs", rows}};
  if (auto out = output_override(out_flag)) {
    std::filesystem::create_directories(*out);
    dtomo::write_json_file((std::filesystem::path(*out) / "povm_report.json").string(), report);
  }
  nlohmann::json brief = report;
  brief.erase("runs");
  std::cout << brief.dump(2) << "\n";
  return kOk;
}

void print_result(const dtomo::PropertyResult& r) {
  std::cout << (r.passed ? "PASS " : "FAIL ") << "[" << r.suite << "] " << r.name << ": "
            << r.detail << " (" << r.seconds << " s)" << std::endl;
}

int cmd_verify(const std::string& suite) {
  int failed = 0;
  for (const dtomo::PropertyResult& r : dtomo::run_verify(suite, print_result)) {
    failed += !r.passed;
  }
  std::cout << (failed ? std::to_string(failed) + " propert" + (failed == 1 ? "y" : "ies") + " failed"
                       : std::string("all properties passed"))
            << "\n";
  return failed ? kVerifyFailed : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Diamond-norm channel tomography toolkit"};
  app.require_subcommand(1);

  std::string out_flag;
  double gap_tol = 1e-7;
  std::optional<double> gap_tol_override;
  std::optional<std::uint64_t> seed_override;
  std::uint64_t seed = 1;
  int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  std::string file_a, file_b;
  auto* diamond = app.add_subcommand("diamond", "Diamond norm of the difference of two channels");
  diamond->add_option("file_a", file_a, "First channel document")->required()->check(CLI::ExistingFile);
  diamond->add_option("file_b", file_b, "Second channel document")->required()->check(CLI::ExistingFile);
  diamond->add_option("--gap-tol", gap_tol, "Relative duality-gap tolerance")->check(CLI::PositiveNumber);

  std::string config;
  auto* sim = app.add_subcommand("simulate", "Run a seeded tomography sweep");
  sim->add_option("--config", config, "Experiment config document")->required()->check(CLI::ExistingFile);
  sim->add_option("--seed", seed_override, "Override the master seed");
  sim->add_option("--jobs", jobs, "Worker threads (default: available cores)")->check(CLI::PositiveNumber);
  sim->add_option("--out", out_flag, "Output directory");
  sim->add_option("--gap-tol", gap_tol_override, "Relative duality-gap tolerance")->check(CLI::PositiveNumber);

  std::string csv;
  auto* sweep = app.add_subcommand("sweep-report", "Scaling fit and plot from a results CSV");
  sweep->add_option("csv", csv, "results.csv")->required()->check(CLI::ExistingFile);
  sweep->add_option("--out", out_flag, "Output directory (default: next to the CSV)");

  std::string povm_file;
  std::int64_t povm_n = 100000;
  double povm_delta = 0.1, povm_eps = 0.1;
  int povm_trials = 10;
  auto* povm = app.add_subcommand("povm", "Learn a measurement from its document");
  povm->add_option("file", povm_file, "POVM document")->required()->check(CLI::ExistingFile);
  povm->add_option("--n", povm_n, "Copies per element")->check(CLI::PositiveNumber);
  povm->add_option("--delta", povm_delta, "Failure probability")->check(CLI::Range(0.0, 1.0));
  povm->add_option("--epsilon", povm_eps, "Operator-norm target")->check(CLI::PositiveNumber);
  povm->add_option("--trials", povm_trials, "Independent runs")->check(CLI::PositiveNumber);
  povm->add_option("--seed", seed, "Seed");
  povm->add_option("--out", out_flag, "Write povm_report.json here");

  std::string suite = "all";
  auto* verify = app.add_subcommand("verify", "Run fixed-seed property suites");
  verify->add_option("suite", suite, "sdp, distributions, lemmas, pipeline, povm or all");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (*diamond) return cmd_diamond(file_a, file_b, gap_tol);
    if (*sim) return cmd_simulate(config, seed_override, jobs, out_flag, gap_tol_override);
    if (*sweep) return cmd_sweep_report(csv, out_flag);
    if (*povm) return cmd_povm(povm_file, povm_n, povm_delta, povm_eps, povm_trials, seed, out_flag);
    if (*verify) return cmd_verify(suite);
  } catch (const dtomo::SdpSolveError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const dtomo::PipelineError& e) {
    std::cerr << (e.numerical() ? "numerical failure: " : "error: ") << e.what() << "\n";
    return e.numerical() ? kNumerical : kValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  }
  return kValidation;
}
