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

// Weight mutation (pattern search / Luus-Jaakola hybrid) and dispatch of
// structural mutations.
//
// Each connection carries its own search record. Its first mutation moves
// the weight in a random direction by |N(0, sigma)|. After re-evaluation the
// outcome is recorded: an improvement keeps the direction, anything else
// reverses it and shrinks sigma by a constant factor.

#include <algorithm>
#include <array>
#include <compare>
#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cortex/genotype.hpp"
#include "cortex/rng.hpp"

namespace cortex {

enum class MutationKind { Weight, AddConnection, DeleteConnection, AddNeuron, DeleteNeuron };

inline const char* to_string(MutationKind kind) {
  switch (kind) {
    case MutationKind::Weight: return "weight";
    case MutationKind::AddConnection: return "add_connection";
    case MutationKind::DeleteConnection: return "delete_connection";
    case MutationKind::AddNeuron: return "add_neuron";
    case MutationKind::DeleteNeuron: return "delete_neuron";
  }
  return "?";
}

inline constexpr std::array<MutationKind, 5> kMutationKinds{
    MutationKind::Weight, MutationKind::AddConnection, MutationKind::DeleteConnection, MutationKind::AddNeuron,
    MutationKind::DeleteNeuron};

// Relative probability weightings, unitless.
struct MutationWeights {
  double weight = 1000.0;
  double add_connection = 50.0;
  double delete_connection = 5.0;
  double add_neuron = 30.0;
  double delete_neuron = 5.0;

  double of(MutationKind kind) const {
    switch (kind) {
      case MutationKind::Weight: return weight;
      case MutationKind::AddConnection: return add_connection;
      case MutationKind::DeleteConnection: return delete_connection;
      case MutationKind::AddNeuron: return add_neuron;
      case MutationKind::DeleteNeuron: return delete_neuron;
    }
    return 0.0;
  }

  double total() const { return weight + add_connection + delete_connection + add_neuron + delete_neuron; }

  bool valid() const {
    for (MutationKind k : kMutationKinds) {
      if (!(of(k) >= 0.0) || !std::isfinite(of(k))) return false;
    }
    return total() > 0.0;
  }

  friend bool operator==(const MutationWeights&, const MutationWeights&) = default;
};

inline MutationKind select_mutation_kind(const MutationWeights& weights, Rng& rng) {
  if (!weights.valid()) throw std::invalid_argument("mutation weightings must be non-negative and not all zero");
  const double u = uniform_real(rng, 0.0, weights.total());
  double cumulative = 0.0;
  MutationKind last = MutationKind::Weight;
  for (MutationKind k : kMutationKinds) {
    if (weights.of(k) <= 0.0) continue;
    cumulative += weights.of(k);
    last = k;
    if (u < cumulative) return k;
  }
  return last;
}

struct ConnectionRef {
  NeuronId source = 0;
  NeuronId target = 0;
  Chromosome chromosome = Chromosome::Feedforward;

  friend auto operator<=>(const ConnectionRef&, const ConnectionRef&) = default;
};

// Default starting deviation for a connection's weight steps: the weight
// bound itself, so the first moves can cross most of the range.
inline constexpr double kInitialSigma = kWeightMax;
inline constexpr double kSigmaDecay = 0.95;

class WeightMutationState {
 public:
  struct Record {
    int direction = 0;  // 0 = not yet mutated, else +1 / -1
    double sigma = kInitialSigma;
    std::size_t failures = 0;
  };

  WeightMutationState() = default;
  explicit WeightMutationState(double initial_sigma) : initial_sigma_(initial_sigma) {
    if (!(initial_sigma > 0.0)) throw std::invalid_argument("initial sigma must be positive");
  }

  double initial_sigma() const { return initial_sigma_; }

  const Record* find(const ConnectionRef& c) const {
    auto it = records_.find(c);
    return it == records_.end() ? nullptr : &it->second;
  }

  Record& record(const ConnectionRef& c) {
    auto [it, inserted] = records_.try_emplace(c);
    if (inserted) it->second.sigma = initial_sigma_;
    return it->second;
  }

  // Called once per mutation, after the individual has been re-evaluated.
  void record_outcome(const ConnectionRef& c, bool improved) {
    auto it = records_.find(c);
    if (it == records_.end() || it->second.direction == 0) return;
    if (!improved) {
      it->second.direction = -it->second.direction;
      it->second.sigma *= kSigmaDecay;
      ++it->second.failures;
    }
  }

  void forget(const ConnectionRef& c) { records_.erase(c); }
  void clear() { records_.clear(); }
  std::size_t size() const { return records_.size(); }

  // Mirrors the ID shift performed when hidden neuron `victim` is deleted.
  void renumber_after_deletion(NeuronId victim) {
    std::map<ConnectionRef, Record> shifted;
    for (const auto& [c, r] : records_) {
      if (c.source == victim || c.target == victim) continue;
      ConnectionRef moved = c;
      if (moved.source > victim) --moved.source;
      if (moved.target > victim) --moved.target;
      shifted.emplace(moved, r);
    }
    records_ = std::move(shifted);
  }

  // Drops records for connections no longer present in `g`.
  void prune(const Genotype& g) {
    std::erase_if(records_, [&g](const auto& kv) {
      return !g.has_connection(kv.first.source, kv.first.target, kv.first.chromosome);
    });
  }

 private:
  double initial_sigma_ = kInitialSigma;
  std::map<ConnectionRef, Record> records_;
};

inline std::vector<ConnectionRef> all_connections(const Genotype& g) {
  std::vector<ConnectionRef> refs;
  refs.reserve(g.connection_count());
  for (Chromosome ch : {Chromosome::Feedforward, Chromosome::Recurrent}) {
    for (const Connection& c : g.connections(ch)) refs.push_back({c.source, c.target, ch});
  }
  return refs;
}

inline std::optional<ConnectionRef> random_connection(const Genotype& g, Rng& rng) {
  const auto refs = all_connections(g);
  if (refs.empty()) return std::nullopt;
  return refs[uniform_index(rng, refs.size())];
}

/// Mutates one connection's weight and returns the new value. When the
/// fitness change caused by this connection's previous mutation is supplied
/// it is recorded first (strictly positive counts as an improvement).
inline double mutate_weight(Genotype& g, WeightMutationState& state, const ConnectionRef& c,
                            std::optional<double> fitness_delta_from_previous, Rng& rng) {
  const std::optional<double> old = g.weight(c.source, c.target, c.chromosome);
  if (!old) {
    throw GenotypeError(GenotypeError::Reason::Missing,
                        "no connection " + std::to_string(c.source) + "->" + std::to_string(c.target));
  }
  if (fitness_delta_from_previous) state.record_outcome(c, *fitness_delta_from_previous > 0.0);
  WeightMutationState::Record& r = state.record(c);
  if (r.direction == 0) r.direction = bernoulli(rng, 0.5) ? 1 : -1;
  const double step = std::abs(normal(rng, 0.0, r.sigma)) * r.direction;
  const double updated = std::clamp(*old + step, kWeightMin, kWeightMax);
  g.set_weight(c.source, c.target, c.chromosome, updated);
  return updated;
}

struct MutationOutcome {
  MutationKind kind = MutationKind::Weight;
  bool applied = false;
  std::optional<ConnectionRef> connection;
  std::optional<NeuronId> neuron;
};

/// Connections add_connection may create: every absent (source, target)
/// whose target is output/hidden. Pairs that cannot go feedforward (loop,
/// self-connection, output source) are offered to the recurrent chromosome.
inline std::vector<ConnectionRef> addable_connections(const Genotype& g) {
  const std::size_t n = g.neuron_count();
  // reach[a][b]: b reachable from a over outward edges.
  std::vector<std::vector<char>> reach(n + 1, std::vector<char>(n + 1, 0));
  for (NeuronId a = 1; a <= n; ++a) {
    std::vector<NeuronId> stack{a};
    while (!stack.empty()) {
      const NeuronId x = stack.back();
      stack.pop_back();
      for (const Edge& e : g.outward(x)) {
        if (!reach[a][e.target]) {
          reach[a][e.target] = 1;
          stack.push_back(e.target);
        }
      }
    }
  }
  std::vector<ConnectionRef> out;
  const NeuronId first_target = g.range(NeuronRole::Output).first;
  for (NeuronId s = 1; s <= n; ++s) {
    for (NeuronId t = first_target; t <= n; ++t) {
      if (g.has_connection(s, t, Chromosome::Feedforward)) continue;
      const bool feedforward_ok = s != t && !reach[t][s] && g.role(s) != NeuronRole::Output;
      if (feedforward_ok) {
        out.push_back({s, t, Chromosome::Feedforward});
      } else if (!g.has_connection(s, t, Chromosome::Recurrent)) {
        out.push_back({s, t, Chromosome::Recurrent});
      }
    }
  }
  return out;
}

/// Applies one structural mutation. Impossible mutations leave the genotype
/// untouched and report applied = false. When `state` is given its records
/// follow the structural change.
inline MutationOutcome apply_structural_mutation(Genotype& g, MutationKind kind, Rng& rng,
                                                 WeightMutationState* state = nullptr) {
  MutationOutcome outcome;
  outcome.kind = kind;
  switch (kind) {
    case MutationKind::Weight:
      throw std::invalid_argument("weight mutation is not structural");
    case MutationKind::AddConnection: {
      const auto candidates = addable_connections(g);
      if (candidates.empty()) break;
      const ConnectionRef c = candidates[uniform_index(rng, candidates.size())];
      const double w = uniform_real(rng, -kInitialWeightRange, kInitialWeightRange);
      if (c.chromosome == Chromosome::Feedforward) {
        g.add_feedforward_connection(c.source, c.target, w);
      } else {
        g.add_recurrent_connection(c.source, c.target, w);
      }
      outcome.applied = true;
      outcome.connection = c;
      break;
    }
    case MutationKind::DeleteConnection: {
      const auto c = random_connection(g, rng);
      if (!c) break;
      g.delete_connection(c->source, c->target, c->chromosome);
      if (state) state->forget(*c);
      outcome.applied = true;
      outcome.connection = c;
      break;
    }
    case MutationKind::AddNeuron:
      outcome.neuron = add_neuron(g, rng);
      outcome.applied = true;
      break;
    case MutationKind::DeleteNeuron: {
      const IdRange hidden = g.range(NeuronRole::Hidden);
      if (hidden.empty()) break;
      const NeuronId victim = hidden.first + uniform_index(rng, hidden.size());
      delete_neuron(g, victim);
      if (state) state->renumber_after_deletion(victim);
      outcome.applied = true;
      outcome.neuron = victim;
      break;
    }
  }
  return outcome;
}

}  // namespace cortex
