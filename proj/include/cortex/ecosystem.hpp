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
#pragma once

// Species bookkeeping and the generation loop.
//
// Individuals are grouped by hidden-neuron count. Each generation:
//   1. evaluate anything not yet evaluated
//   2. update stagnancy, adjusted fitness and species statistics
//   3. split the global quota into per-species offspring and parent counts
//   4. rank each species; mark elites and parents
//   5. breed offspring (crossover or clone + mutate)
//   6. mutate every non-elite incumbent once
//   7. evaluate new/changed genotypes and move them to their species
//   8. eliminate by species roulette until the size limit holds
//   9. report

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cortex/genotype.hpp"
#include "cortex/mutation.hpp"
#include "cortex/rng.hpp"
#include "cortex/task.hpp"

namespace cortex {

struct EvolutionConfig {
  std::size_t max_size = 150;
  double quota_fraction = 0.25;
  std::size_t g_max = 15;
  std::size_t elite_per_species = 1;
  double crossover_probability = 0.75;
  MutationWeights mutation_weights;
  // Scales diversity into the logarithm's useful range for parenting quotas.
  double parenting_diversity_scale = 100.0;
  // Starting deviation of every connection's weight steps.
  double initial_sigma = kInitialSigma;
  std::uint64_t seed = 0;

  void validate() const {
    if (max_size < 1) throw std::invalid_argument("max_size must be at least 1");
    if (!(quota_fraction > 0.0 && quota_fraction <= 1.0)) {
      throw std::invalid_argument("quota_fraction must lie in (0, 1]");
    }
    if (!(crossover_probability >= 0.0 && crossover_probability <= 1.0)) {
      throw std::invalid_argument("crossover_probability must lie in [0, 1]");
    }
    if (!mutation_weights.valid()) {
      throw std::invalid_argument("mutation weightings must be non-negative and not all zero");
    }
    if (!(parenting_diversity_scale > 0.0)) throw std::invalid_argument("parenting_diversity_scale must be positive");
    if (!(initial_sigma > 0.0)) throw std::invalid_argument("initial_sigma must be positive");
  }

  // Global offspring / parenting quota.
  std::size_t quota() const {
    return static_cast<std::size_t>(std::floor(quota_fraction * static_cast<double>(max_size)));
  }

  friend bool operator==(const EvolutionConfig&, const EvolutionConfig&) = default;
};

struct Individual {
  Genotype genotype;
  double fitness = 0.0;
  double adjusted_fitness = 0.0;
  std::size_t stagnancy = 0;  // generations since best_fitness last rose
  double best_fitness = 0.0;
  bool evaluated = false;
  bool solved = false;
  bool fresh = true;  // no stagnancy update seen yet
  WeightMutationState weight_state;

  explicit Individual(Genotype g, double initial_sigma = kInitialSigma)
      : genotype(std::move(g)), weight_state(initial_sigma) {}
  std::size_t hidden_count() const { return genotype.hidden_count(); }
};

struct SpeciesStatistics {
  double fitness = 0.0;           // mean member fitness
  double adjusted_fitness = 0.0;  // sum of member adjusted fitness
  double diversity = 0.0;         // range-normalised variance
};

struct Species {
  std::size_t key = 0;  // hidden-neuron count
  std::vector<Individual> members;
  SpeciesStatistics stats;
  std::size_t stagnancy = 0;
};

/// 1 while g <= g_max, then decays towards 1 - 1/e.
inline double stagnancy_coefficient(std::size_t g, std::size_t g_max) {
  if (g <= g_max) return 1.0;
  const double t = 1.0 + 1.0 / static_cast<double>(g);
  return 1.0 - std::exp(-t * t);
}

inline SpeciesStatistics species_statistics(std::span<const Individual> members) {
  if (members.empty()) throw std::invalid_argument("species statistics of an empty species");
  SpeciesStatistics s;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const Individual& m : members) {
    s.fitness += m.fitness;
    s.adjusted_fitness += m.adjusted_fitness;
    lo = std::min(lo, m.fitness);
    hi = std::max(hi, m.fitness);
  }
  const double n = static_cast<double>(members.size());
  s.fitness /= n;
  if (hi > lo) {
    double sum = 0.0;
    for (const Individual& m : members) {
      const double z = (m.fitness - s.fitness) / (hi - lo);
      sum += z * z;
    }
    s.diversity = sum / n;
  }
  return s;
}

inline SpeciesStatistics species_statistics(const Species& sp) { return species_statistics(sp.members); }

/// o_i = floor(C * ln x_i), C = q / sum(1 + ln x_i), with each x_i clamped
/// to at least e so every logarithm is >= 1.
inline std::vector<std::size_t> distribute_quota(std::span<const double> shares, std::size_t q) {
  std::vector<double> logs;
  logs.reserve(shares.size());
  double denominator = 0.0;
  for (double x : shares) {
    const double guarded = std::max(x, std::numbers::e);
    logs.push_back(std::log(guarded));
    denominator += 1.0 + logs.back();
  }
  std::vector<std::size_t> out;
  out.reserve(shares.size());
  if (shares.empty()) return out;
  const double c = static_cast<double>(q) / denominator;
  for (double l : logs) out.push_back(static_cast<std::size_t>(std::floor(c * l)));
  return out;
}

inline constexpr double kDiversityEpsilon = 1e-6;

/// Roulette weight for elimination: (stagnancy + 1) * size / (diversity + eps).
inline double elimination_weight(std::size_t stagnancy, std::size_t population, double diversity) {
  return static_cast<double>(stagnancy + 1) * static_cast<double>(population) / (diversity + kDiversityEpsilon);
}

inline double elimination_weight(const Species& sp) {
  return elimination_weight(sp.stagnancy, sp.members.size(), sp.stats.diversity);
}

struct SpeciesCensus {
  std::size_t key = 0;
  std::size_t size = 0;
  friend bool operator==(const SpeciesCensus&, const SpeciesCensus&) = default;
};

struct GenerationReport {
  std::size_t generation = 0;
  double best_fitness = 0.0;
  std::size_t evaluations = 0;
  std::size_t species_count = 0;
  std::size_t total_individuals = 0;
  std::size_t best_hidden_count = 0;
  std::vector<SpeciesCensus> census;
  bool solved = false;

  friend bool operator==(const GenerationReport&, const GenerationReport&) = default;
};

struct Solution {
  Genotype genotype;
  double fitness = 0.0;
  std::size_t evaluations = 0;  // evaluation count when it was first scored
  std::size_t generation = 0;
};

class Ecosystem {
 public:
  explicit Ecosystem(EvolutionConfig config) : config_(std::move(config)) { config_.validate(); }

  const EvolutionConfig& config() const { return config_; }
  const std::map<std::size_t, Species>& species() const { return species_; }
  std::map<std::size_t, Species>& species() { return species_; }
  std::size_t generation() const { return generation_; }
  std::size_t evaluation_count() const { return evaluations_; }
  double f_max() const { return f_max_; }
  const std::optional<Solution>& first_solution() const { return solution_; }

  std::size_t total_size() const {
    std::size_t n = 0;
    for (const auto& [key, sp] : species_) n += sp.members.size();
    return n;
  }

  /// Fills the ecosystem with max_size minimal genotypes spread evenly over
  /// species 0..initial_species-1; the remainder goes to the smallest keys.
  void initialize(NeuronCounts io, std::size_t initial_species, Rng& rng) {
    if (initial_species < 1) throw std::invalid_argument("need at least one initial species");
    species_.clear();
    const std::size_t base = config_.max_size / initial_species;
    const std::size_t extra = config_.max_size % initial_species;
    for (std::size_t key = 0; key < initial_species; ++key) {
      const std::size_t count = base + (key < extra ? 1 : 0);
      for (std::size_t k = 0; k < count; ++k) {
        add(Individual(minimal_genotype({io.bias, io.input, io.output, key}, rng), config_.initial_sigma));
      }
    }
  }

  /// Places an individual in the species matching its hidden count,
  /// creating the species if needed.
  void add(Individual ind) {
    const std::size_t key = ind.hidden_count();
    auto [it, inserted] = species_.try_emplace(key);
    if (inserted) it->second.key = key;
    it->second.members.push_back(std::move(ind));
  }

  template <FitnessTask Task>
  void evaluate(Individual& ind, const Task& task) {
    const Evaluation e = task.evaluate(ind.genotype);
    ind.fitness = e.fitness;
    ind.solved = e.solved;
    if (!ind.evaluated && ind.fresh) ind.best_fitness = e.fitness;
    ind.evaluated = true;
    ++evaluations_;
    if (e.solved && !solution_) solution_ = Solution{ind.genotype, e.fitness, evaluations_, generation_};
  }

  template <FitnessTask Task>
  void evaluate_pending(const Task& task) {
    for (auto& [key, sp] : species_) {
      for (Individual& m : sp.members) {
        if (!m.evaluated) evaluate(m, task);
      }
    }
  }

  // Per-individual and per-species stagnancy. A member's first evaluation
  // does not count as progress.
  void update_stagnancy() {
    for (auto& [key, sp] : species_) {
      bool progressed = false;
      for (Individual& m : sp.members) {
        if (m.fresh) {
          m.fresh = false;
          m.stagnancy = 0;
          m.best_fitness = m.fitness;
        } else if (m.fitness > m.best_fitness) {
          m.best_fitness = m.fitness;
          m.stagnancy = 0;
          progressed = true;
        } else {
          ++m.stagnancy;
        }
      }
      sp.stagnancy = progressed ? 0 : sp.stagnancy + 1;
    }
  }

  void update_adjusted_fitness() {
    f_max_ = 0.0;
    for (const auto& [key, sp] : species_) {
      for (const Individual& m : sp.members) f_max_ = std::max(f_max_, m.fitness);
    }
    for (auto& [key, sp] : species_) {
      for (Individual& m : sp.members) {
        m.adjusted_fitness =
            f_max_ > 0.0 ? stagnancy_coefficient(m.stagnancy, config_.g_max) * m.fitness / f_max_ : 0.0;
      }
    }
  }

  void update_species_statistics() {
    for (auto& [key, sp] : species_) {
      if (!sp.members.empty()) sp.stats = species_statistics(sp);
    }
  }

  std::map<std::size_t, std::size_t> offspring_quota(std::size_t q) const {
    std::vector<double> shares;
    for (const auto& [key, sp] : species_) shares.push_back(sp.stats.adjusted_fitness);
    return keyed(distribute_quota(shares, q));
  }

  std::map<std::size_t, std::size_t> parenting_quota(std::size_t q) const {
    std::vector<double> shares;
    for (const auto& [key, sp] : species_) shares.push_back(sp.stats.diversity * config_.parenting_diversity_scale);
    auto quota = keyed(distribute_quota(shares, q));
    // Every populated species gets at least one parent while the total
    // stays within q.
    std::size_t total = 0;
    for (const auto& [key, n] : quota) total += n;
    for (auto& [key, n] : quota) {
      if (n == 0 && total < q && !species_.at(key).members.empty()) {
        n = 1;
        ++total;
      }
    }
    return quota;
  }

  /// Removes members until the ecosystem fits max_size. A species is drawn by
  /// roulette over elimination_weight and loses its lowest-ranked member.
  /// The top elite_per_species members of each species are shielded; species
  /// with nothing but shielded members are skipped unless no other species
  /// can give up a member.
  void eliminate_to_limit(Rng& rng) {
    const std::size_t shield = config_.elite_per_species;
    while (total_size() > config_.max_size) {
      std::vector<Species*> eligible;
      for (auto& [key, sp] : species_) {
        if (sp.members.size() > shield) eligible.push_back(&sp);
      }
      const bool shielded = !eligible.empty();
      if (!shielded) {
        for (auto& [key, sp] : species_) {
          if (!sp.members.empty()) eligible.push_back(&sp);
        }
      }
      std::vector<double> weights;
      double total = 0.0;
      for (const Species* sp : eligible) {
        weights.push_back(elimination_weight(*sp));
        total += weights.back();
      }
      const double u = uniform_real(rng, 0.0, total);
      std::size_t pick = eligible.size() - 1;
      double cumulative = 0.0;
      for (std::size_t i = 0; i < eligible.size(); ++i) {
        cumulative += weights[i];
        if (u < cumulative) {
          pick = i;
          break;
        }
      }
      Species& victim_species = *eligible[pick];
      remove_weakest(victim_species, shielded ? shield : 0);
      if (victim_species.members.empty()) {
        species_.erase(victim_species.key);
      } else {
        victim_species.stats = species_statistics(victim_species);
      }
    }
  }

  template <FitnessTask Task>
  GenerationReport epoch(const Task& task, Rng& rng) {
    evaluate_pending(task);

    update_stagnancy();
    update_adjusted_fitness();
    update_species_statistics();

    const std::size_t q = config_.quota();
    const auto offspring = offspring_quota(q);
    const auto parents = parenting_quota(q);

    for (auto& [key, sp] : species_) rank(sp);

    std::vector<Individual> newborn;
    for (auto& [key, sp] : species_) {
      const std::size_t n_parents = std::min(parents.at(key), sp.members.size());
      if (n_parents == 0) continue;
      for (std::size_t k = 0; k < offspring.at(key); ++k) newborn.push_back(breed(sp, n_parents, rng));
    }

    for (auto& [key, sp] : species_) {
      for (std::size_t i = config_.elite_per_species; i < sp.members.size(); ++i) {
        mutate_incumbent(sp.members[i], task, rng);
      }
    }

    evaluate_pending(task);
    for (Individual& child : newborn) evaluate(child, task);
    rehome();
    for (Individual& child : newborn) add(std::move(child));

    update_adjusted_fitness();
    update_species_statistics();
    eliminate_to_limit(rng);

    GenerationReport report = make_report();
    ++generation_;
    return report;
  }

  GenerationReport make_report() const {
    GenerationReport r;
    r.generation = generation_;
    r.evaluations = evaluations_;
    r.species_count = species_.size();
    r.total_individuals = total_size();
    r.solved = solution_.has_value();
    const Individual* best = best_individual();
    if (best) {
      r.best_fitness = best->fitness;
      r.best_hidden_count = best->hidden_count();
    }
    for (const auto& [key, sp] : species_) r.census.push_back({key, sp.members.size()});
    return r;
  }

  // Highest raw fitness; ties go to the lowest species key, then member index.
  const Individual* best_individual() const {
    const Individual* best = nullptr;
    for (const auto& [key, sp] : species_) {
      for (const Individual& m : sp.members) {
        if (!best || m.fitness > best->fitness) best = &m;
      }
    }
    return best;
  }

  /// Violations of the ecosystem invariants (empty when consistent).
  std::vector<std::string> check_invariants() const {
    std::vector<std::string> problems;
    for (const auto& [key, sp] : species_) {
      if (sp.key != key) problems.push_back("species stored under key " + std::to_string(key) + " has key " +
                                            std::to_string(sp.key));
      if (sp.members.empty()) problems.push_back("empty species " + std::to_string(key));
      for (const Individual& m : sp.members) {
        if (m.hidden_count() != key) {
          problems.push_back("member with " + std::to_string(m.hidden_count()) + " hidden neurons in species " +
                             std::to_string(key));
        }
        for (const std::string& v : validate(m.genotype)) problems.push_back("genotype: " + v);
      }
    }
    if (total_size() > config_.max_size) problems.push_back("ecosystem exceeds max_size");
    return problems;
  }

 private:
  std::map<std::size_t, std::size_t> keyed(const std::vector<std::size_t>& values) const {
    std::map<std::size_t, std::size_t> out;
    std::size_t i = 0;
    for (const auto& [key, sp] : species_) out[key] = values[i++];
    return out;
  }

  // Sorts members by adjusted fitness, best first; stable on ties.
  static void rank(Species& sp) {
    std::stable_sort(sp.members.begin(), sp.members.end(), [](const Individual& a, const Individual& b) {
      return a.adjusted_fitness > b.adjusted_fitness;
    });
  }

  static void remove_weakest(Species& sp, std::size_t shield) {
    // Members beyond the shield, lowest adjusted fitness; the later member
    // wins ties.
    std::vector<std::size_t> order(sp.members.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&sp](std::size_t a, std::size_t b) {
      return sp.members[a].adjusted_fitness > sp.members[b].adjusted_fitness;
    });
    const std::size_t start = std::min(shield, order.size() - 1);
    std::size_t victim = order[start];
    for (std::size_t k = start; k < order.size(); ++k) {
      const std::size_t i = order[k];
      if (sp.members[i].adjusted_fitness < sp.members[victim].adjusted_fitness ||
          (sp.members[i].adjusted_fitness == sp.members[victim].adjusted_fitness && i > victim)) {
        victim = i;
      }
    }
    sp.members.erase(sp.members.begin() + static_cast<std::ptrdiff_t>(victim));
  }

  // Best member of the species nearest `key` (ties: smaller key).
  const Individual* nearest_partner(std::size_t key) const {
    const Species* best = nullptr;
    std::size_t best_gap = 0;
    for (const auto& [k, sp] : species_) {
      if (k == key || sp.members.empty()) continue;
      const std::size_t gap = k > key ? k - key : key - k;
      if (!best || gap < best_gap) {
        best = &sp;
        best_gap = gap;
      }
    }
    return best ? &best->members.front() : nullptr;
  }

  Individual breed(const Species& sp, std::size_t n_parents, Rng& rng) {
    const Individual& first = sp.members[uniform_index(rng, n_parents)];
    if (bernoulli(rng, config_.crossover_probability)) {
      const Individual* second = nullptr;
      if (n_parents >= 2) {
        std::size_t j = uniform_index(rng, n_parents - 1);
        if (&sp.members[j] == &first) j = n_parents - 1;
        second = &sp.members[j];
      } else {
        second = nearest_partner(sp.key);
      }
      if (second) return Individual(crossover(first.genotype, second->genotype, rng), config_.initial_sigma);
    }
    Individual child(first.genotype, config_.initial_sigma);
    const MutationKind kind = select_mutation_kind(config_.mutation_weights, rng);
    if (kind == MutationKind::Weight) {
      if (const auto c = random_connection(child.genotype, rng)) {
        mutate_weight(child.genotype, child.weight_state, *c, std::nullopt, rng);
      }
    } else {
      apply_structural_mutation(child.genotype, kind, rng);
    }
    child.weight_state.clear();
    return child;
  }

  template <FitnessTask Task>
  void mutate_incumbent(Individual& ind, const Task& task, Rng& rng) {
    const MutationKind kind = select_mutation_kind(config_.mutation_weights, rng);
    if (kind == MutationKind::Weight) {
      const auto c = random_connection(ind.genotype, rng);
      if (!c) return;
      const double before = ind.fitness;
      mutate_weight(ind.genotype, ind.weight_state, *c, std::nullopt, rng);
      evaluate(ind, task);
      ind.weight_state.record_outcome(*c, ind.fitness > before);
      return;
    }
    if (apply_structural_mutation(ind.genotype, kind, rng, &ind.weight_state).applied) ind.evaluated = false;
  }

  // Moves members whose hidden count no longer matches their species.
  void rehome() {
    std::vector<Individual> moving;
    for (auto& [key, sp] : species_) {
      auto split = std::stable_partition(sp.members.begin(), sp.members.end(),
                                         [key](const Individual& m) { return m.hidden_count() == key; });
      for (auto it = split; it != sp.members.end(); ++it) moving.push_back(std::move(*it));
      sp.members.erase(split, sp.members.end());
    }
    std::erase_if(species_, [](const auto& kv) { return kv.second.members.empty(); });
    for (Individual& m : moving) add(std::move(m));
  }

  EvolutionConfig config_;
  std::map<std::size_t, Species> species_;
  std::size_t generation_ = 0;
  std::size_t evaluations_ = 0;
  double f_max_ = 0.0;
  std::optional<Solution> solution_;
};

}  // namespace cortex
