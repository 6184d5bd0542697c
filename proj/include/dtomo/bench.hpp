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

// Experiment configuration, the seeded trial harness and result persistence.

#ifndef DTOMO_BENCH_HPP_
#define DTOMO_BENCH_HPP_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "dtomo/tomography.hpp"

namespace dtomo {

/// Config file rejected; what() lists every violation, one per line.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

enum class Scenario { kChannel, kState, kIsometry, kBinaryPovm, kMultiPovm };

std::string to_string(Scenario s);

struct ExperimentConfig {
  Scenario scenario = Scenario::kChannel;
  int d_in = 2;
  int d_out = 2;
  int k = 1;          // Kraus rank; ignored for the POVM scenarios
  int outcomes = 3;   // multi-povm only
  std::vector<std::int64_t> n_grid;
  bool n_from_sample_complexity = false;  // "n_grid": "sample_complexity"
  int trials = 1;
  double delta = 0.1;
  double epsilon = 0.5;
  std::uint64_t seed = 1;
  std::string out = "out";
  double gap_tol = 1e-7;
  bool record_timing = false;
  std::optional<std::string> channel_file;
  std::optional<std::string> povm_file;

  /// Every violated invariant, empty when valid.
  std::vector<std::string> violations() const;

  /// Channel dimensions the pipeline runs on (d_out = 2 for POVMs).
  DimPair pipeline_dims() const;
  int pipeline_rank() const;
  /// Failure budget of a single pipeline run (delta / L for multi-povm).
  double pipeline_delta() const;
};

/// Parses and validates; throws ConfigError with all violations.
ExperimentConfig parse_experiment_config(const nlohmann::json& doc);
ExperimentConfig load_experiment_config(const std::string& path);

struct ResultRow {
  std::string scenario;
  int d_in = 0;
  int d_out = 0;
  int k = 0;
  std::int64_t n = 0;
  int trial = 0;
  std::uint64_t seed = 0;
  double eps_pure_realized = 0.0;
  double diamond_error_est = 0.0;
  double diamond_error_final = 0.0;
  double bound_total = 0.0;
  bool success = false;
  std::optional<StageTimes> wall_ms;
  // Not persisted to CSV; feed the summary.
  double projection_distance = 0.0;
  bool hayashi_event = false;
  bool bound_violated = false;
  bool factor2_violated = false;
};

/// Header of the results CSV; one column per ResultRow field, wall_ms split
/// by stage.
const std::vector<std::string>& result_columns();
std::string csv_header();
std::string to_csv(const ResultRow& r);

/// Seed of trial `trial` at grid point `n`.
std::uint64_t trial_seed(std::uint64_t master, std::int64_t n, int trial);
/// Worker owning (n, trial) among `jobs` workers.
int assign_worker(std::int64_t n, int trial, int jobs);

struct SimulationResult {
  std::vector<std::int64_t> n_grid;  // resolved grid
  std::vector<ResultRow> rows;        // ordered by (grid index, trial)
  nlohmann::json summary;
};

/// Runs trials x grid on `jobs` worker threads. Throws PipelineError from the
/// first failing trial in (grid index, trial) order.
SimulationResult simulate(const ExperimentConfig& cfg, int jobs);

/// Writes results.csv and summary.json into cfg.out (created if missing).
void write_simulation(const ExperimentConfig& cfg, const SimulationResult& res);

nlohmann::json trial_to_json(const TrialRecord& rec);

}  // namespace dtomo

#endif  // DTOMO_BENCH_HPP_
