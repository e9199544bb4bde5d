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
// Command line front end: `cortex run <config> [--seed N] [--out DIR] [--runs N]`.
// Exit status is 0 on completion, 1 for configuration errors, 2 when a run
// fails.

#include <cstdint>
#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "cortex/experiment.hpp"

namespace {

constexpr int kConfigError = 1;
constexpr int kRuntimeError = 2;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cortex neuroevolution experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::uint64_t seed = 0;
  std::string out_dir;
  std::size_t runs = 0;
  bool quiet = false;

  CLI::App* run = app.add_subcommand("run", "Run the experiment described by a config file");
  run->add_option("config", config_path, "Config file (key = value lines)")->required();
  CLI::Option* seed_opt = run->add_option("--seed", seed, "Override the base seed");
  CLI::Option* out_opt = run->add_option("--out", out_dir, "Override the output directory");
  CLI::Option* runs_opt = run->add_option("--runs", runs, "Override the number of runs")->check(CLI::PositiveNumber);
  run->add_flag("-q,--quiet", quiet, "Only print the summary");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  cortex::ExperimentConfig cfg;
  try {
    cfg = cortex::load_config(config_path);
    if (*seed_opt) {
      cfg.seed = seed;
      cfg.evolution.seed = seed;
    }
    if (*out_opt) cfg.output_dir = out_dir;
    if (*runs_opt) cfg.runs = runs;
    cortex::validate(cfg);
  } catch (const cortex::ConfigError& e) {
    std::fprintf(stderr, "%s: %s\n", config_path.c_str(), e.what());
    return kConfigError;
  }

  cortex::ProgressCallback progress;
  if (!quiet) {
    progress = [](const cortex::RunResult& r, const cortex::GenerationReport& rep) {
      if (rep.solved || rep.generation % 10 == 0) {
        std::fprintf(stderr, "run %zu gen %zu best %.6f evals %zu species %zu%s\n", r.index, rep.generation,
                     rep.best_fitness, rep.evaluations, rep.species_count, rep.solved ? " solved" : "");
      }
    };
  }

  try {
    const cortex::ExperimentSummary s = cortex::run_experiment(cfg, progress);
    std::fputs(cortex::summary_text(s).c_str(), stdout);
    std::printf("output_dir = %s\n", cfg.output_dir.c_str());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "run failed: %s\n", e.what());
    return kRuntimeError;
  }
  return 0;
}
