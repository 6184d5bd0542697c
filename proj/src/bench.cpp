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

#include "dtomo/bench.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <variant>

#include "dtomo/applications.hpp"
#include "dtomo/io.hpp"
#include "dtomo/stats.hpp"

namespace dtomo {
namespace {

std::string join_lines(const std::vector<std::string>& v) {
  std::string s = "invalid experiment config:";
  for (const std::string& line : v) s += "\n  - " + line;
  return s;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t pair_hash(std::int64_t n, int trial) {
  return splitmix64(splitmix64(static_cast<std::uint64_t>(n)) ^ static_cast<std::uint64_t>(trial));
}

const std::map<std::string, Scenario>& scenario_names() {
  static const std::map<std::string, Scenario> names{
      {"channel", Scenario::kChannel},         {"state", Scenario::kState},
      {"isometry", Scenario::kIsometry},       {"binary-povm", Scenario::kBinaryPovm},
      {"multi-povm", Scenario::kMultiPovm}};
  return names;
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// The object each trial is run against, fixed once per simulation.
using Instance = std::variant<KrausChannel, BinaryPovm, MultiPovm>;

Instance make_instance(const ExperimentConfig& cfg) {
  RngStream rng(cfg.seed, 0);
  switch (cfg.scenario) {
    case Scenario::kChannel:
    case Scenario::kState:
    case Scenario::kIsometry: {
      const DimPair dims = cfg.pipeline_dims();
      if (cfg.channel_file) {
        ChannelDocument doc = read_channel_file(*cfg.channel_file);
        if (doc.dims.d_in != dims.d_in || doc.dims.d_out != dims.d_out) {
          throw ConfigError({"channel_file dimensions do not match d_in/d_out"});
        }
        KrausChannel c = doc.kraus ? std::move(*doc.kraus) : choi_to_kraus(doc.choi);
        if (c.size() > cfg.pipeline_rank()) {
          throw ConfigError({"channel_file Kraus rank " + std::to_string(c.size()) +
                             " exceeds k = " + std::to_string(cfg.pipeline_rank())});
        }
        return c;
      }
      return random_channel(dims, cfg.pipeline_rank(), rng);
    }
    case Scenario::kBinaryPovm:
    case Scenario::kMultiPovm: {
      std::vector<ComplexMatrix> effects;
      if (cfg.povm_file) {
        PovmDocument doc = read_povm_file(*cfg.povm_file);
        if (doc.dim != cfg.d_in) throw ConfigError({"povm_file dim does not match d_in"});
        effects = std::move(doc.effects);
      } else {
        const int l = cfg.scenario == Scenario::kBinaryPovm ? 2 : cfg.outcomes;
        const MultiPovm m = random_povm(cfg.d_in, l, rng);
        for (int j = 0; j < l; ++j) effects.push_back(m.effect(j));
      }
      if (cfg.scenario == Scenario::kBinaryPovm) return BinaryPovm(effects.front());
      if (effects.size() == 1) effects.push_back(identity(cfg.d_in) - effects.front());
      return MultiPovm(effects);
    }
  }
  throw std::logic_error("unreachable scenario");
}

void fill_from_record(ResultRow& row, const TrialRecord& rec, double gap_tol) {
  row.eps_pure_realized = std::max(row.eps_pure_realized, rec.epsilon_pure_realized);
  row.diamond_error_est = std::max(row.diamond_error_est, rec.diamond_error_est);
  row.diamond_error_final = std::max(row.diamond_error_final, rec.diamond_error_final);
  row.bound_total = std::max(row.bound_total, rec.bound.total);
  row.projection_distance = std::max(row.projection_distance, rec.projection_distance);
  row.bound_violated =
      row.bound_violated || (!rec.bound.degenerate && rec.diamond_error_est > rec.bound.total);
  row.factor2_violated =
      row.factor2_violated || rec.diamond_error_final > 2.0 * rec.diamond_error_est + 2.0 * gap_tol;
  if (row.wall_ms) {
    row.wall_ms->purify_ms += rec.times.purify_ms;
    row.wall_ms->tomography_ms += rec.times.tomography_ms;
    row.wall_ms->reconstruct_ms += rec.times.reconstruct_ms;
    row.wall_ms->project_ms += rec.times.project_ms;
    row.wall_ms->evaluate_ms += rec.times.evaluate_ms;
  }
}

ResultRow run_trial(const ExperimentConfig& cfg, const Instance& inst, std::int64_t n, int trial) {
  ResultRow row;
  row.scenario = to_string(cfg.scenario);
  const DimPair dims = cfg.pipeline_dims();
  row.d_in = dims.d_in;
  row.d_out = dims.d_out;
  row.k = cfg.pipeline_rank();
  row.n = n;
  row.trial = trial;
  row.seed = trial_seed(cfg.seed, n, trial);
  if (cfg.record_timing) row.wall_ms = StageTimes{};
  RngStream rng(row.seed, static_cast<std::uint64_t>(trial));

  if (const auto* channel = std::get_if<KrausChannel>(&inst)) {
    TomographyConfig tc;
    tc.dims = dims;
    tc.k = row.k;
    tc.n = n;
    tc.delta = cfg.delta;
    tc.gap_tol = cfg.gap_tol;
    tc.seed = row.seed;
    tc.stream_id = static_cast<std::uint64_t>(trial);
    const TrialRecord rec = run_algorithm1(*channel, tc);
    row.hayashi_event = rec.hayashi_event;
    fill_from_record(row, rec, cfg.gap_tol);
  } else if (const auto* e = std::get_if<BinaryPovm>(&inst)) {
    const BinaryPovmLearning res = learn_binary_povm(*e, n, cfg.delta, rng);
    row.hayashi_event = res.record.hayashi_event;
    fill_from_record(row, res.record, cfg.gap_tol);
  } else {
    const MultiPovmLearning res = learn_multi_povm(std::get<MultiPovm>(inst), n, cfg.delta, rng);
    row.hayashi_event = true;
    for (const TrialRecord& rec : res.records) {
      row.hayashi_event = row.hayashi_event && rec.hayashi_event;
      fill_from_record(row, rec, cfg.gap_tol);
    }
  }
  row.success = 0.5 * row.diamond_error_final <= cfg.epsilon;
  return row;
}

nlohmann::json matrix_or_null(const ComplexMatrix& m) {
  return m.size() == 0 ? nlohmann::json(nullptr) : matrix_to_json(m);
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> violations)
    : std::runtime_error(join_lines(violations)), violations_(std::move(violations)) {}

std::string to_string(Scenario s) {
  for (const auto& [name, value] : scenario_names()) {
    if (value == s) return name;
  }
  return "unknown";
}

DimPair ExperimentConfig::pipeline_dims() const {
  if (scenario == Scenario::kBinaryPovm || scenario == Scenario::kMultiPovm) return DimPair{2, d_in};
  return DimPair{d_out, d_in};
}

int ExperimentConfig::pipeline_rank() const {
  switch (scenario) {
    case Scenario::kBinaryPovm:
    case Scenario::kMultiPovm:
      return 2 * d_in;
    case Scenario::kIsometry:
      return 1;
    default:
      return k;
  }
}

double ExperimentConfig::pipeline_delta() const {
  return scenario == Scenario::kMultiPovm ? delta / outcomes : delta;
}

std::vector<std::string> ExperimentConfig::violations() const {
  std::vector<std::string> v;
  if (d_in < 1) v.push_back("d_in must be >= 1");
  if (d_out < 1) v.push_back("d_out must be >= 1");
  if (d_in >= 1 && d_out >= 1) {
    const DimPair dims = pipeline_dims();
    if (scenario == Scenario::kState && d_in != 1) v.push_back("scenario 'state' needs d_in = 1");
    if (scenario == Scenario::kIsometry && d_out < d_in) {
      v.push_back("scenario 'isometry' needs d_out >= d_in");
    }
    if ((scenario == Scenario::kChannel || scenario == Scenario::kState) &&
        !validate_rank_bounds(dims, k)) {
      v.push_back("k = " + std::to_string(k) + " outside [ceil(d_in/d_out), d_in d_out]");
    }
    if (dims.d_in * dims.d_out * pipeline_rank() > 64) {
      v.push_back("d_out d_in k exceeds 64; the diamond-norm SDP would be too large");
    }
    if (scenario == Scenario::kBinaryPovm || scenario == Scenario::kMultiPovm) {
      const double floor = 4.0 * std::exp(-4.0 * d_in * d_in);
      if (!(pipeline_delta() > floor)) {
        v.push_back("per-element delta must exceed 4 exp(-4 d^2) = " + std::to_string(floor));
      }
    }
  }
  if (scenario == Scenario::kMultiPovm && outcomes < 2) v.push_back("outcomes must be >= 2");
  if (!n_from_sample_complexity) {
    if (n_grid.empty()) v.push_back("n_grid must be non-empty");
    for (std::size_t i = 0; i < n_grid.size(); ++i) {
      if (n_grid[i] < 1) v.push_back("n_grid[" + std::to_string(i) + "] must be >= 1");
      if (i > 0 && n_grid[i] <= n_grid[i - 1]) {
        v.push_back("n_grid must be strictly increasing (entry " + std::to_string(i) + ")");
      }
    }
  }
  if (trials < 1) v.push_back("trials must be >= 1");
  if (!(delta > 0.0 && delta < 1.0)) v.push_back("delta must lie in (0, 1)");
  if (!(epsilon > 0.0 && epsilon <= 1.0)) v.push_back("epsilon must lie in (0, 1]");
  if (!(gap_tol > 0.0 && gap_tol < 1.0)) v.push_back("gap_tol must lie in (0, 1)");
  if (out.empty()) v.push_back("out must be a non-empty path");
  if (channel_file && (scenario == Scenario::kBinaryPovm || scenario == Scenario::kMultiPovm)) {
    v.push_back("channel_file is not used by POVM scenarios; use povm_file");
  }
  if (povm_file && scenario != Scenario::kBinaryPovm && scenario != Scenario::kMultiPovm) {
    v.push_back("povm_file is only used by POVM scenarios");
  }
  return v;
}

ExperimentConfig parse_experiment_config(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ConfigError({"config must be an object"});
  ExperimentConfig cfg;
  std::vector<std::string> v;
  static const std::vector<std::string> known{
      "scenario", "d_in", "d_out", "k", "outcomes", "n_grid", "trials", "delta", "epsilon",
      "seed", "out", "gap_tol", "record_timing", "channel_file", "povm_file"};
  for (const auto& [key, value] : doc.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      v.push_back("unknown field '" + key + "'");
    }
  }
  auto get_int = [&](const char* key, auto& dst) {
    if (!doc.contains(key)) return;
    if (!doc[key].is_number_integer()) {
      v.push_back(std::string("'") + key + "' must be an integer");
      return;
    }
    dst = doc[key].get<std::remove_reference_t<decltype(dst)>>();
  };
  auto get_double = [&](const char* key, double& dst) {
    if (!doc.contains(key)) return;
    if (!doc[key].is_number()) {
      v.push_back(std::string("'") + key + "' must be a number");
      return;
    }
    dst = doc[key].get<double>();
  };
  auto get_string = [&](const char* key) -> std::optional<std::string> {
    if (!doc.contains(key)) return std::nullopt;
    if (!doc[key].is_string()) {
      v.push_back(std::string("'") + key + "' must be a string");
      return std::nullopt;
    }
    return doc[key].get<std::string>();
  };

  if (auto s = get_string("scenario")) {
    const auto it = scenario_names().find(*s);
    if (it == scenario_names().end()) {
      v.push_back("unknown scenario '" + *s + "'");
    } else {
      cfg.scenario = it->second;
    }
  } else if (!doc.contains("scenario")) {
    v.push_back("missing field 'scenario'");
  }
  get_int("d_in", cfg.d_in);
  get_int("d_out", cfg.d_out);
  get_int("k", cfg.k);
  get_int("outcomes", cfg.outcomes);
  get_int("trials", cfg.trials);
  get_double("delta", cfg.delta);
  get_double("epsilon", cfg.epsilon);
  get_double("gap_tol", cfg.gap_tol);
  if (doc.contains("seed")) {
    if (doc["seed"].is_number_unsigned() ||
        (doc["seed"].is_number_integer() && doc["seed"].get<std::int64_t>() >= 0)) {
      cfg.seed = doc["seed"].get<std::uint64_t>();
    } else {
      v.push_back("'seed' must be a non-negative integer");
    }
  }
  if (auto s = get_string("out")) cfg.out = *s;
  cfg.channel_file = get_string("channel_file");
  cfg.povm_file = get_string("povm_file");
  if (doc.contains("record_timing")) {
    if (doc["record_timing"].is_boolean()) {
      cfg.record_timing = doc["record_timing"].get<bool>();
    } else {
      v.push_back("'record_timing' must be a boolean");
    }
  }
  if (!doc.contains("n_grid")) {
    v.push_back("missing field 'n_grid'");
  } else if (doc["n_grid"].is_string() && doc["n_grid"].get<std::string>() == "sample_complexity") {
    cfg.n_from_sample_complexity = true;
  } else if (doc["n_grid"].is_array()) {
    for (const auto& e : doc["n_grid"]) {
      if (!e.is_number_integer()) {
        v.push_back("n_grid entries must be integers");
        break;
      }
      cfg.n_grid.push_back(e.get<std::int64_t>());
    }
  } else {
    v.push_back("'n_grid' must be an array of integers or \"sample_complexity\"");
  }
  for (std::string& s : cfg.violations()) {
    if (std::find(v.begin(), v.end(), s) == v.end()) v.push_back(std::move(s));
  }
  if (!v.empty()) throw ConfigError(std::move(v));
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  nlohmann::json doc;
  try {
    doc = read_json_file(path);
  } catch (const ParseError& e) {
    throw ConfigError({e.what()});
  }
  return parse_experiment_config(doc);
}

const std::vector<std::string>& result_columns() {
  static const std::vector<std::string> cols{
      "scenario",          "d_in",
      "d_out",             "k",
      "N",                 "trial",
      "seed",              "eps_pure_realized",
      "diamond_error_est", "diamond_error_final",
      "bound_total",       "success",
      "wall_ms_purify",    "wall_ms_tomography",
      "wall_ms_reconstruct", "wall_ms_project",
      "wall_ms_evaluate"};
  return cols;
}

std::string csv_header() {
  std::string s;
  for (const std::string& c : result_columns()) s += (s.empty() ? "" : ",") + c;
  return s;
}

std::string to_csv(const ResultRow& r) {
  std::ostringstream os;
  os << r.scenario << ',' << r.d_in << ',' << r.d_out << ',' << r.k << ',' << r.n << ','
     << r.trial << ',' << r.seed << ',' << format_double(r.eps_pure_realized) << ','
     << format_double(r.diamond_error_est) << ',' << format_double(r.diamond_error_final) << ','
     << format_double(r.bound_total) << ',' << (r.success ? 1 : 0);
  if (r.wall_ms) {
    os << ',' << format_double(r.wall_ms->purify_ms) << ',' << format_double(r.wall_ms->tomography_ms)
       << ',' << format_double(r.wall_ms->reconstruct_ms) << ','
       << format_double(r.wall_ms->project_ms) << ',' << format_double(r.wall_ms->evaluate_ms);
  } else {
    os << ",,,,,";
  }
  return os.str();
}

std::uint64_t trial_seed(std::uint64_t master, std::int64_t n, int trial) {
  return splitmix64(master ^ pair_hash(n, trial));
}

int assign_worker(std::int64_t n, int trial, int jobs) {
  if (jobs <= 1) return 0;
  return static_cast<int>(pair_hash(n, trial) % static_cast<std::uint64_t>(jobs));
}

SimulationResult simulate(const ExperimentConfig& cfg, int jobs) {
  if (auto v = cfg.violations(); !v.empty()) throw ConfigError(std::move(v));
  jobs = std::max(1, jobs);
  SimulationResult res;
  if (cfg.n_from_sample_complexity) {
    try {
      res.n_grid = {sample_complexity(cfg.pipeline_dims(), cfg.pipeline_rank(), cfg.epsilon,
                                      cfg.pipeline_delta())
                        .exact};
    } catch (const std::exception& e) {
      throw ConfigError({std::string("n_grid = sample_complexity: ") + e.what()});
    }
  } else {
    res.n_grid = cfg.n_grid;
  }
  const Instance inst = make_instance(cfg);

  const std::size_t per_point = static_cast<std::size_t>(cfg.trials);
  const std::size_t total = res.n_grid.size() * per_point;
  std::vector<std::optional<ResultRow>> slots(total);
  std::vector<std::exception_ptr> errors(total);

  auto work = [&](int worker) {
    for (std::size_t g = 0; g < res.n_grid.size(); ++g) {
      for (int t = 0; t < cfg.trials; ++t) {
        if (assign_worker(res.n_grid[g], t, jobs) != worker) continue;
        const std::size_t idx = g * per_point + static_cast<std::size_t>(t);
        try {
          slots[idx] = run_trial(cfg, inst, res.n_grid[g], t);
        } catch (...) {
          errors[idx] = std::current_exception();
        }
      }
    }
  };
  if (jobs == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < jobs; ++w) pool.emplace_back(work, w);
    for (std::thread& th : pool) th.join();
  }
  for (std::size_t i = 0; i < total; ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    res.rows.push_back(std::move(*slots[i]));
  }

  nlohmann::json points = nlohmann::json::array();
  for (std::size_t g = 0; g < res.n_grid.size(); ++g) {
    int successes = 0, bound_violations = 0, factor2_violations = 0, hayashi = 0;
    std::vector<double> half_err;
    for (std::size_t t = 0; t < per_point; ++t) {
      const ResultRow& r = res.rows[g * per_point + t];
      successes += r.success;
      bound_violations += r.bound_violated;
      factor2_violations += r.factor2_violated;
      hayashi += r.hayashi_event;
      half_err.push_back(0.5 * r.diamond_error_final);
    }
    points.push_back({{"N", res.n_grid[g]},
                      {"trials", cfg.trials},
                      {"successes", successes},
                      {"success_frequency", static_cast<double>(successes) / cfg.trials},
                      {"binomial_p_value_vs_1_minus_delta",
                       binomial_lower_tail(successes, cfg.trials, 1.0 - cfg.delta)},
                      {"bound_violations", bound_violations},
                      {"factor2_violations", factor2_violations},
                      {"pure_state_events", hayashi},
                      {"median_half_diamond_error", median(half_err)},
                      {"max_half_diamond_error", *std::max_element(half_err.begin(), half_err.end())}});
  }
  res.summary = {{"scenario", to_string(cfg.scenario)},
                 {"d_in", cfg.pipeline_dims().d_in},
                 {"d_out", cfg.pipeline_dims().d_out},
                 {"k", cfg.pipeline_rank()},
                 {"delta", cfg.delta},
                 {"epsilon", cfg.epsilon},
                 {"seed", cfg.seed},
                 {"gap_tol", cfg.gap_tol},
                 {"points", points}};
  if (cfg.scenario == Scenario::kMultiPovm) res.summary["outcomes"] = cfg.outcomes;
  return res;
}

void write_simulation(const ExperimentConfig& cfg, const SimulationResult& res) {
  std::filesystem::create_directories(cfg.out);
  const std::filesystem::path dir(cfg.out);
  std::ofstream csv(dir / "results.csv", std::ios::binary);
  if (!csv) throw std::runtime_error("cannot write " + (dir / "results.csv").string());
  csv << csv_header() << "\n";
  for (const ResultRow& r : res.rows) csv << to_csv(r) << "\n";
  write_json_file((dir / "summary.json").string(), res.summary);
}

nlohmann::json trial_to_json(const TrialRecord& rec) {
  const TomographyConfig& c = rec.config;
  const BoundComponents& b = rec.bound;
  return {{"config",
           {{"d_in", c.dims.d_in}, {"d_out", c.dims.d_out}, {"k", c.k}, {"N", c.n},
            {"delta", c.delta}, {"gap_tol", c.gap_tol}, {"seed", c.seed}, {"stream_id", c.stream_id}}},
          {"true_overlap_sq", rec.true_overlap_sq},
          {"eps_pure_realized", rec.epsilon_pure_realized},
          {"diamond_error_est", rec.diamond_error_est},
          {"diamond_error_final", rec.diamond_error_final},
          {"projection_distance", rec.projection_distance},
          {"pure_state_event", rec.hayashi_event},
          {"bound",
           {{"d_tot", b.d_tot}, {"c_delta", b.c_delta}, {"eps_ov", b.eps_ov}, {"c_ov", b.c_ov},
            {"s_delta", b.s_delta}, {"eps_pure", b.eps_pure}, {"total", b.total},
            {"in_regime", b.in_regime}, {"degenerate", b.degenerate}}},
          {"wall_ms",
           {{"purify", rec.times.purify_ms}, {"tomography", rec.times.tomography_ms},
            {"reconstruct", rec.times.reconstruct_ms}, {"project", rec.times.project_ms},
            {"evaluate", rec.times.evaluate_ms}}},
          {"choi_raw", matrix_or_null(rec.choi_raw)},
          {"choi_final", matrix_or_null(rec.choi_final.matrix())}};
}

}  // namespace dtomo
