/*
  Copyright 2026 The Cortex Authors

  Licensed under the Apache License, Version 2.0 (the "License");
  you may not use this file except in compliance with the License.
  You may obtain a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0

  Unless required by applicable law or agreed to in writing, software
  distributed under the License is distributed on an "AS IS" BASIS,
  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
  See the License for the specific language governing permissions and
  limitations under the License.
*/
// Experiment configuration, the run protocols for every benchmark, and the
// files they leave behind.
//
// Config files are line oriented:
//
//   # comment
//   experiment = xor_evolving
//   seed = 1
//
// Unknown or repeated keys are rejected. Every error names the offending
// line. Outputs of one experiment, all written to output_dir:
//
//   runs.csv                  one row per run
//   run_<k>.csv               generation reports of run k
//   run_<k>_genotype.txt      the solution of run k, or its best genotype
//   run_<k>_generalization.csv  (dpb_generalize) full grid test of that genotype
//   recoverability.csv        (recoverability)
//   summary.txt, manifest.txt

#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "cortex/ecosystem.hpp"
#include "cortex/genotype.hpp"
#include "cortex/rng.hpp"
#include "cortex/tasks/cart_pole.hpp"
#include "cortex/tasks/xor.hpp"

namespace cortex {

enum class ExperimentKind { XorEvolving, XorFixed, DpbFixed, DpbGeneralize, Recoverability };

inline std::string to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::XorEvolving: return "xor_evolving";
    case ExperimentKind::XorFixed: return "xor_fixed";
    case ExperimentKind::DpbFixed: return "dpb_fixed";
    case ExperimentKind::DpbGeneralize: return "dpb_generalize";
    case ExperimentKind::Recoverability: return "recoverability";
  }
  return "unknown";
}

inline std::optional<ExperimentKind> parse_experiment_kind(std::string_view s) {
  for (ExperimentKind k : {ExperimentKind::XorEvolving, ExperimentKind::XorFixed, ExperimentKind::DpbFixed,
                           ExperimentKind::DpbGeneralize, ExperimentKind::Recoverability}) {
    if (s == to_string(k)) return k;
  }
  return std::nullopt;
}

inline bool is_xor(ExperimentKind k) { return k == ExperimentKind::XorEvolving || k == ExperimentKind::XorFixed; }

class ConfigError : public std::runtime_error {
 public:
  enum class Reason { Syntax, UnknownKey, Duplicate, Missing, Value, Range };

  ConfigError(Reason reason, std::size_t line, const std::string& what)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), reason_(reason), line_(line) {}

  Reason reason() const { return reason_; }
  // 0 when the error is not tied to a line (for example a missing key).
  std::size_t line() const { return line_; }

 private:
  Reason reason_;
  std::size_t line_;
};

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::XorEvolving;
  std::uint64_t seed = 0;
  std::size_t runs = 1;
  std::size_t initial_species = 1;
  std::size_t generation_cap = 100;
  std::string output_dir = "results";
  EvolutionConfig evolution;
  // dpb_fixed: balancing horizon and the half-width of the initial angle draw.
  std::size_t success_steps = 100000;
  double initial_angle_limit_deg = 6.0;
  // dpb_generalize: horizon while evolving and horizon of the final check.
  std::size_t training_steps = 1000;
  std::size_t test_steps = 20000;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

inline std::size_t default_generation_cap(ExperimentKind k) { return is_xor(k) ? 100 : 1000; }

namespace detail {

inline std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

template <typename T>
T parse_integer(const std::string& text, std::size_t line, const std::string& key) {
  T value{};
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError(ConfigError::Reason::Value, line, key + ": expected a non-negative integer, got '" + text + "'");
  }
  return value;
}

inline double parse_real(const std::string& text, std::size_t line, const std::string& key) {
  double value = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw ConfigError(ConfigError::Reason::Value, line, key + ": expected a number, got '" + text + "'");
  }
  return value;
}

inline std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void require(bool ok, std::size_t line, const std::string& message) {
  if (!ok) throw ConfigError(ConfigError::Reason::Range, line, message);
}

}  // namespace detail

/// Checks value ranges; `lines` maps keys to their source line for messages.
inline void validate(const ExperimentConfig& c, const std::map<std::string, std::size_t>& lines = {}) {
  auto at = [&lines](const char* key) {
    auto it = lines.find(key);
    return it == lines.end() ? std::size_t{0} : it->second;
  };
  using detail::require;
  const EvolutionConfig& e = c.evolution;
  require(c.runs >= 1, at("runs"), "runs must be at least 1");
  require(c.generation_cap >= 1, at("generation_cap"), "generation_cap must be at least 1");
  require(e.max_size >= 1, at("max_size"), "max_size must be at least 1");
  require(c.initial_species >= 1 && c.initial_species <= e.max_size, at("initial_species"),
          "initial_species must lie in [1, max_size]");
  require(e.quota_fraction > 0.0 && e.quota_fraction <= 1.0, at("quota_fraction"), "quota_fraction must lie in (0, 1]");
  require(e.crossover_probability >= 0.0 && e.crossover_probability <= 1.0, at("crossover_probability"),
          "crossover_probability must lie in [0, 1]");
  require(e.parenting_diversity_scale > 0.0, at("parenting_diversity_scale"),
          "parenting_diversity_scale must be positive");
  require(e.initial_sigma > 0.0, at("initial_sigma"), "initial_sigma must be positive");
  const MutationWeights& w = e.mutation_weights;
  require(w.weight >= 0.0, at("weight_mutation"), "weight_mutation must be non-negative");
  require(w.add_connection >= 0.0, at("add_connection"), "add_connection must be non-negative");
  require(w.delete_connection >= 0.0, at("delete_connection"), "delete_connection must be non-negative");
  require(w.add_neuron >= 0.0, at("add_neuron"), "add_neuron must be non-negative");
  require(w.delete_neuron >= 0.0, at("delete_neuron"), "delete_neuron must be non-negative");
  require(w.total() > 0.0, 0, "mutation weightings must not all be zero");
  require(c.success_steps >= 1, at("success_steps"), "success_steps must be at least 1");
  require(c.initial_angle_limit_deg >= 0.0 && c.initial_angle_limit_deg < 36.0, at("initial_angle_limit_deg"),
          "initial_angle_limit_deg must lie in [0, 36)");
  require(c.training_steps >= 1, at("training_steps"), "training_steps must be at least 1");
  require(c.test_steps >= 1, at("test_steps"), "test_steps must be at least 1");
}

inline ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig c;
  std::map<std::string, std::size_t> seen;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line = 0;

  using detail::parse_integer;
  using detail::parse_real;
  std::map<std::string, std::function<void(const std::string&, std::size_t)>> setters{
      {"experiment",
       [&c](const std::string& v, std::size_t n) {
         const auto kind = parse_experiment_kind(v);
         if (!kind) throw ConfigError(ConfigError::Reason::Value, n, "unknown experiment '" + v + "'");
         c.experiment = *kind;
       }},
      {"seed", [&c](const std::string& v, std::size_t n) { c.seed = parse_integer<std::uint64_t>(v, n, "seed"); }},
      {"runs", [&c](const std::string& v, std::size_t n) { c.runs = parse_integer<std::size_t>(v, n, "runs"); }},
      {"initial_species",
       [&c](const std::string& v, std::size_t n) {
         c.initial_species = parse_integer<std::size_t>(v, n, "initial_species");
       }},
      {"generation_cap",
       [&c](const std::string& v, std::size_t n) {
         c.generation_cap = parse_integer<std::size_t>(v, n, "generation_cap");
       }},
      {"output_dir",
       [&c](const std::string& v, std::size_t n) {
         if (v.empty()) throw ConfigError(ConfigError::Reason::Value, n, "output_dir must not be empty");
         c.output_dir = v;
       }},
      {"max_size",
       [&c](const std::string& v, std::size_t n) {
         c.evolution.max_size = parse_integer<std::size_t>(v, n, "max_size");
       }},
      {"quota_fraction",
       [&c](const std::string& v, std::size_t n) { c.evolution.quota_fraction = parse_real(v, n, "quota_fraction"); }},
      {"g_max",
       [&c](const std::string& v, std::size_t n) { c.evolution.g_max = parse_integer<std::size_t>(v, n, "g_max"); }},
      {"elite_per_species",
       [&c](const std::string& v, std::size_t n) {
         c.evolution.elite_per_species = parse_integer<std::size_t>(v, n, "elite_per_species");
       }},
      {"crossover_probability",
       [&c](const std::string& v, std::size_t n) {
         c.evolution.crossover_probability = parse_real(v, n, "crossover_probability");
       }},
      {"parenting_diversity_scale",
       [&c](const std::string& v, std::size_t n) {
         c.evolution.parenting_diversity_scale = parse_real(v, n, "parenting_diversity_scale");
       }},
      {"initial_sigma",
       [&c](const std::string& v, std::size_t n) { c.evolution.initial_sigma = parse_real(v, n, "initial_sigma"); }},
      {"weight_mutation",
       [&c](const std::string& v, std::size_t n) {
         c.evolution.mutation_weights.weight = parse_real(v, n, "weight_mutation");
       }},
      {"add_connection",
       [&c](const std::string& v, std::size_t n) {
         c.evolution.mutation_weights.add_connection = parse_real(v, n, "add_connection");
       }},
      {"delete_connection",
       [&c](const std::string& v, std::size_t n) {
         c.evolution.mutation_weights.delete_connection = parse_real(v, n, "delete_connection");
       }},
      {"add_neuron",
       [&c](const std::string& v, std::size_t n) {
         c.evolution.mutation_weights.add_neuron = parse_real(v, n, "add_neuron");
       }},
      {"delete_neuron",
       [&c](const std::string& v, std::size_t n) {
         c.evolution.mutation_weights.delete_neuron = parse_real(v, n, "delete_neuron");
       }},
      {"success_steps",
       [&c](const std::string& v, std::size_t n) {
         c.success_steps = parse_integer<std::size_t>(v, n, "success_steps");
       }},
      {"initial_angle_limit_deg",
       [&c](const std::string& v, std::size_t n) {
         c.initial_angle_limit_deg = parse_real(v, n, "initial_angle_limit_deg");
       }},
      {"training_steps",
       [&c](const std::string& v, std::size_t n) {
         c.training_steps = parse_integer<std::size_t>(v, n, "training_steps");
       }},
      {"test_steps",
       [&c](const std::string& v, std::size_t n) { c.test_steps = parse_integer<std::size_t>(v, n, "test_steps"); }},
  };

  while (std::getline(in, raw)) {
    ++line;
    const std::string body = detail::trim(raw);
    if (body.empty() || body.front() == '#') continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(ConfigError::Reason::Syntax, line, "expected 'key = value'");
    }
    const std::string key = detail::trim(std::string_view(body).substr(0, eq));
    const std::string value = detail::trim(std::string_view(body).substr(eq + 1));
    if (key.empty()) throw ConfigError(ConfigError::Reason::Syntax, line, "missing key before '='");
    auto setter = setters.find(key);
    if (setter == setters.end()) throw ConfigError(ConfigError::Reason::UnknownKey, line, "unknown key '" + key + "'");
    if (auto prev = seen.find(key); prev != seen.end()) {
      throw ConfigError(ConfigError::Reason::Duplicate, line,
                        "key '" + key + "' already set on line " + std::to_string(prev->second));
    }
    seen.emplace(key, line);
    setter->second(value, line);
  }

  for (const char* key : {"experiment", "seed"}) {
    if (!seen.count(key)) throw ConfigError(ConfigError::Reason::Missing, 0, std::string("missing required key '") + key + "'");
  }
  if (!seen.count("generation_cap")) c.generation_cap = default_generation_cap(c.experiment);
  c.evolution.seed = c.seed;
  validate(c, seen);
  return c;
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(ConfigError::Reason::Missing, 0, "cannot read config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

/// Every key, one per line, in a fixed order; parse_config reads it back
/// unchanged.
inline std::string emit_config(const ExperimentConfig& c) {
  using detail::format_real;
  const EvolutionConfig& e = c.evolution;
  const MutationWeights& w = e.mutation_weights;
  std::string out;
  auto put = [&out](const char* key, const std::string& value) { out += std::string(key) + " = " + value + "\n"; };
  put("experiment", to_string(c.experiment));
  put("seed", std::to_string(c.seed));
  put("runs", std::to_string(c.runs));
  put("initial_species", std::to_string(c.initial_species));
  put("generation_cap", std::to_string(c.generation_cap));
  put("output_dir", c.output_dir);
  put("max_size", std::to_string(e.max_size));
  put("quota_fraction", format_real(e.quota_fraction));
  put("g_max", std::to_string(e.g_max));
  put("elite_per_species", std::to_string(e.elite_per_species));
  put("crossover_probability", format_real(e.crossover_probability));
  put("parenting_diversity_scale", format_real(e.parenting_diversity_scale));
  put("initial_sigma", format_real(e.initial_sigma));
  put("weight_mutation", format_real(w.weight));
  put("add_connection", format_real(w.add_connection));
  put("delete_connection", format_real(w.delete_connection));
  put("add_neuron", format_real(w.add_neuron));
  put("delete_neuron", format_real(w.delete_neuron));
  put("success_steps", std::to_string(c.success_steps));
  put("initial_angle_limit_deg", format_real(c.initial_angle_limit_deg));
  put("training_steps", std::to_string(c.training_steps));
  put("test_steps", std::to_string(c.test_steps));
  return out;
}

/// Evolution settings a run actually uses: xor_fixed switches neuron
/// addition and deletion off whatever the file says.
inline EvolutionConfig effective_evolution(const ExperimentConfig& c) {
  EvolutionConfig e = c.evolution;
  if (c.experiment == ExperimentKind::XorFixed) {
    e.mutation_weights.add_neuron = 0.0;
    e.mutation_weights.delete_neuron = 0.0;
  }
  return e;
}

struct RunResult {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  bool solved = false;
  std::size_t generations = 0;  // epochs executed
  std::size_t evaluations = 0;  // at the solution, else at the end of the run
  std::size_t hidden_neurons = 0;  // of the solution, else of the best genotype
  double best_fitness = 0.0;
  double initial_theta_deg = 0.0;  // dpb_fixed only
  Genotype genotype{NeuronCounts{0, 1, 1, 0}};
  std::vector<GenerationReport> reports;
};

struct ExperimentSummary {
  ExperimentKind experiment = ExperimentKind::XorEvolving;
  std::size_t runs = 0;
  std::size_t successes = 0;
  double success_rate = 0.0;
  double mean_evaluations = 0.0;  // over successful runs, 0 if none
  double mean_hidden_neurons = 0.0;  // over solutions, 0 if none
  std::vector<RunResult> results;
  std::vector<RecoverabilityRow> recoverability;
};

/// Called after every generation of every run; useful for progress output.
using ProgressCallback = std::function<void(const RunResult& run, const GenerationReport& report)>;

template <FitnessTask Task>
void evolve(RunResult& run, const ExperimentConfig& cfg, const Task& task, Rng& rng, const ProgressCallback& progress) {
  EvolutionConfig e = effective_evolution(cfg);
  e.seed = run.seed;
  Ecosystem eco(e);
  eco.initialize(task.io_counts(), cfg.initial_species, rng);
  for (std::size_t g = 0; g < cfg.generation_cap; ++g) {
    run.reports.push_back(eco.epoch(task, rng));
    run.generations = g + 1;
    if (progress) progress(run, run.reports.back());
    if (eco.first_solution()) break;
  }
  if (const auto& s = eco.first_solution()) {
    run.solved = true;
    run.evaluations = s->evaluations;
    run.genotype = s->genotype;
    run.best_fitness = s->fitness;
  } else {
    run.evaluations = eco.evaluation_count();
    const Individual* best = eco.best_individual();
    if (!best) throw std::runtime_error("ecosystem is empty");
    run.genotype = best->genotype;
    run.best_fitness = best->fitness;
  }
  run.hidden_neurons = run.genotype.hidden_count();
}

inline RunResult execute_run(const ExperimentConfig& cfg, std::size_t index, const ProgressCallback& progress = {}) {
  RunResult run;
  run.index = index;
  run.seed = cfg.seed + index;
  Rng rng(run.seed);
  switch (cfg.experiment) {
    case ExperimentKind::XorEvolving:
    case ExperimentKind::XorFixed:
      evolve(run, cfg, XorTask{}, rng, progress);
      break;
    case ExperimentKind::DpbFixed: {
      DpbFixedTask task;
      run.initial_theta_deg = uniform_real(rng, -cfg.initial_angle_limit_deg, cfg.initial_angle_limit_deg);
      task.initial = initial_state(0.0, run.initial_theta_deg);
      task.success_steps = cfg.success_steps;
      evolve(run, cfg, task, rng, progress);
      break;
    }
    case ExperimentKind::DpbGeneralize: {
      DpbGeneralizationTask task;
      task.training_steps = cfg.training_steps;
      task.test_steps = cfg.test_steps;
      evolve(run, cfg, task, rng, progress);
      break;
    }
    case ExperimentKind::Recoverability:
      throw std::logic_error("the recoverability scan has no evolutionary runs");
  }
  return run;
}

inline ExperimentSummary summarize(ExperimentKind kind, std::vector<RunResult> results) {
  ExperimentSummary s;
  s.experiment = kind;
  s.runs = results.size();
  double evaluations = 0.0;
  double hidden = 0.0;
  for (const RunResult& r : results) {
    if (!r.solved) continue;
    ++s.successes;
    evaluations += static_cast<double>(r.evaluations);
    hidden += static_cast<double>(r.hidden_neurons);
  }
  if (s.runs) s.success_rate = static_cast<double>(s.successes) / static_cast<double>(s.runs);
  if (s.successes) {
    s.mean_evaluations = evaluations / static_cast<double>(s.successes);
    s.mean_hidden_neurons = hidden / static_cast<double>(s.successes);
  }
  s.results = std::move(results);
  return s;
}

inline std::string generation_csv(const std::vector<GenerationReport>& reports) {
  using detail::format_real;
  std::string out = "generation,best_fitness,evaluations,species_count,total_individuals,best_hidden_count\n";
  for (const GenerationReport& r : reports) {
    out += std::to_string(r.generation) + "," + format_real(r.best_fitness) + "," + std::to_string(r.evaluations) + "," +
           std::to_string(r.species_count) + "," + std::to_string(r.total_individuals) + "," +
           std::to_string(r.best_hidden_count) + "\n";
  }
  return out;
}

inline std::string runs_csv(const std::vector<RunResult>& results) {
  using detail::format_real;
  std::string out = "run,seed,solved,generations,evaluations,hidden_neurons,best_fitness,initial_theta_deg\n";
  for (const RunResult& r : results) {
    out += std::to_string(r.index) + "," + std::to_string(r.seed) + "," + (r.solved ? "1" : "0") + "," +
           std::to_string(r.generations) + "," + std::to_string(r.evaluations) + "," +
           std::to_string(r.hidden_neurons) + "," + format_real(r.best_fitness) + "," +
           format_real(r.initial_theta_deg) + "\n";
  }
  return out;
}

inline std::string recoverability_csv(const std::vector<RecoverabilityRow>& rows) {
  using detail::format_real;
  std::string out = "x0_m,max_recoverable_deg\n";
  for (const RecoverabilityRow& r : rows) out += format_real(r.x0_m) + "," + format_real(r.max_recoverable_deg) + "\n";
  return out;
}

inline std::string generalization_csv(const GeneralizationReport& report) {
  using detail::format_real;
  std::string out = "x0_m,theta0_deg,steps_survived,passed\n";
  for (const ConditionResult& c : report.results) {
    out += format_real(c.condition.x0_m) + "," + format_real(c.condition.theta0_deg) + "," +
           std::to_string(c.steps_survived) + "," + (c.passed ? "1" : "0") + "\n";
  }
  return out;
}

inline std::string summary_text(const ExperimentSummary& s) {
  using detail::format_real;
  std::string out;
  out += "experiment = " + to_string(s.experiment) + "\n";
  out += "runs = " + std::to_string(s.runs) + "\n";
  out += "successes = " + std::to_string(s.successes) + "\n";
  out += "success_rate = " + format_real(s.success_rate) + "\n";
  out += "mean_evaluations = " + format_real(s.mean_evaluations) + "\n";
  out += "mean_hidden_neurons = " + format_real(s.mean_hidden_neurons) + "\n";
  return out;
}

inline std::string manifest_text(const ExperimentConfig& cfg, const ExperimentSummary& s) {
  using detail::format_real;
  const MutationWeights w = effective_evolution(cfg).mutation_weights;
  std::string out = "# configuration\n" + emit_config(cfg);
  out += "# effective mutation weightings\n";
  out += "effective_add_neuron = " + format_real(w.add_neuron) + "\n";
  out += "effective_delete_neuron = " + format_real(w.delete_neuron) + "\n";
  out += "# run seeds\n";
  for (const RunResult& r : s.results) out += "run " + std::to_string(r.index) + " seed " + std::to_string(r.seed) + "\n";
  return out;
}

namespace detail {

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace detail

/// Runs the configured experiment and writes its files to cfg.output_dir.
inline ExperimentSummary run_experiment(const ExperimentConfig& cfg, const ProgressCallback& progress = {}) {
  validate(cfg);
  namespace fs = std::filesystem;
  const fs::path dir(cfg.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());

  ExperimentSummary summary;
  if (cfg.experiment == ExperimentKind::Recoverability) {
    summary = summarize(cfg.experiment, {});
    summary.recoverability = recoverability_scan(DpbParams{});
    detail::write_file(dir / "recoverability.csv", recoverability_csv(summary.recoverability));
  } else {
    std::vector<RunResult> results;
    for (std::size_t k = 0; k < cfg.runs; ++k) {
      RunResult run = execute_run(cfg, k, progress);
      const std::string stem = "run_" + std::to_string(k);
      detail::write_file(dir / (stem + ".csv"), generation_csv(run.reports));
      detail::write_file(dir / (stem + "_genotype.txt"), to_text(run.genotype));
      if (cfg.experiment == ExperimentKind::DpbGeneralize) {
        detail::write_file(dir / (stem + "_generalization.csv"),
                           generalization_csv(generalization_test(run.genotype, DpbParams{}, cfg.test_steps)));
      }
      results.push_back(std::move(run));
    }
    summary = summarize(cfg.experiment, std::move(results));
    detail::write_file(dir / "runs.csv", runs_csv(summary.results));
  }
  detail::write_file(dir / "summary.txt", summary_text(summary));
  detail::write_file(dir / "manifest.txt", manifest_text(cfg, summary));
  return summary;
}

}  // namespace cortex
