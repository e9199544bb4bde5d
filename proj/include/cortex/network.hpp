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

// Stack-based evaluation of a genotype as a network.
//
// For each output neuron the evaluator walks backwards over the inward
// chromosome: a neuron is pushed, its unevaluated prerequisites are pushed
// above it, and it is evaluated once all of them are done. The whole network
// is evaluated at every step; recurrent edges read the activation their
// source had at the end of the previous step.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cortex/genotype.hpp"

namespace cortex {

class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Dense per-neuron state, index = ID - 1. recurrent_buffer is only ever
// non-zero at recurrent sources.
struct ActivationState {
  std::vector<double> activations;
  std::vector<double> recurrent_buffer;
  std::vector<char> evaluated;

  ActivationState() = default;
  explicit ActivationState(std::size_t neurons)
      : activations(neurons, 0.0), recurrent_buffer(neurons, 0.0), evaluated(neurons, 0) {}

  std::size_t size() const { return activations.size(); }
};

inline void reset_state(ActivationState& state) {
  std::fill(state.activations.begin(), state.activations.end(), 0.0);
  std::fill(state.recurrent_buffer.begin(), state.recurrent_buffer.end(), 0.0);
  std::fill(state.evaluated.begin(), state.evaluated.end(), 0);
}

namespace detail {

// Runs the stack procedure from `root`, appending neurons to `order` in the
// sequence they are evaluated. `done` is shared across calls so later roots
// reuse earlier work.
inline void stack_order(const Genotype& g, NeuronId root, std::vector<char>& done, std::vector<NeuronId>& order) {
  if (done[root - 1]) return;
  std::vector<NeuronId> stack{root};
  // Guards against corrupted (cyclic) input: a neuron may only be expanded once.
  std::vector<char> expanded(g.neuron_count(), 0);
  while (!stack.empty()) {
    const NeuronId top = stack.back();
    if (done[top - 1]) {
      stack.pop_back();
      continue;
    }
    const auto prerequisites = g.inward(top);
    const bool ready = std::all_of(prerequisites.begin(), prerequisites.end(),
                                   [&done](NeuronId p) { return done[p - 1] != 0; });
    if (ready) {
      stack.pop_back();
      done[top - 1] = 1;
      order.push_back(top);
      continue;
    }
    if (expanded[top - 1]) throw EvaluationError("cyclic feedforward chromosome at neuron " + std::to_string(top));
    expanded[top - 1] = 1;
    // Reverse push so the first prerequisite ends up on top.
    for (auto it = prerequisites.rbegin(); it != prerequisites.rend(); ++it) {
      if (!done[*it - 1]) stack.push_back(*it);
    }
  }
}

}  // namespace detail

/// Order in which neurons are evaluated to produce `output`.
inline std::vector<NeuronId> evaluation_order(const Genotype& g, NeuronId output) {
  if (g.role(output) != NeuronRole::Output) {
    throw EvaluationError("neuron " + std::to_string(output) + " is not an output neuron");
  }
  std::vector<char> done(g.neuron_count(), 0);
  std::vector<NeuronId> order;
  detail::stack_order(g, output, done, order);
  return order;
}

/// Full-network order: outputs in ascending ID, then every neuron not yet
/// reached (so recurrent sources off the output paths are still refreshed).
inline std::vector<NeuronId> network_evaluation_order(const Genotype& g) {
  std::vector<char> done(g.neuron_count(), 0);
  std::vector<NeuronId> order;
  order.reserve(g.neuron_count());
  const IdRange outputs = g.range(NeuronRole::Output);
  for (NeuronId o = outputs.first; o < outputs.last; ++o) detail::stack_order(g, o, done, order);
  for (NeuronId n = 1; n <= g.neuron_count(); ++n) detail::stack_order(g, n, done, order);
  return order;
}

// A genotype flattened for repeated evaluation: the evaluation order plus,
// per neuron, its feedforward and recurrent inputs sorted by source ID.
class CompiledNetwork {
 public:
  explicit CompiledNetwork(const Genotype& g)
      : counts_(g.counts()), order_(network_evaluation_order(g)), ff_begin_(g.neuron_count() + 1, 0),
        rec_begin_(g.neuron_count() + 1, 0) {
    const std::size_t n = g.neuron_count();
    std::vector<std::vector<Input>> ff(n), rec(n);
    for (NeuronId s = 1; s <= n; ++s) {
      for (const Edge& e : g.outward(s)) ff[e.target - 1].push_back({s - 1, e.weight});
      if (!g.recurrent(s).empty()) recurrent_sources_.push_back(s - 1);
      for (const Edge& e : g.recurrent(s)) rec[e.target - 1].push_back({s - 1, e.weight});
    }
    for (std::size_t i = 0; i < n; ++i) {
      ff_begin_[i] = ff_inputs_.size();
      ff_inputs_.insert(ff_inputs_.end(), ff[i].begin(), ff[i].end());
      rec_begin_[i] = rec_inputs_.size();
      rec_inputs_.insert(rec_inputs_.end(), rec[i].begin(), rec[i].end());
    }
    ff_begin_[n] = ff_inputs_.size();
    rec_begin_[n] = rec_inputs_.size();
  }

  const NeuronCounts& counts() const { return counts_; }
  std::size_t neuron_count() const { return counts_.total(); }
  const std::vector<NeuronId>& order() const { return order_; }
  bool has_recurrence() const { return !recurrent_sources_.empty(); }

  ActivationState make_state() const { return ActivationState(neuron_count()); }

  // Evaluates one timestep and writes output activations to `outputs`.
  void step(ActivationState& state, std::span<const double> inputs, std::span<double> outputs) const {
    if (inputs.size() != counts_.input) {
      throw EvaluationError("expected " + std::to_string(counts_.input) + " inputs, got " +
                            std::to_string(inputs.size()));
    }
    if (outputs.size() != counts_.output) {
      throw EvaluationError("expected room for " + std::to_string(counts_.output) + " outputs");
    }
    if (state.size() != neuron_count()) {
      throw EvaluationError("activation state sized for a different network");
    }
    const std::size_t first_input = counts_.bias;
    const std::size_t first_output = counts_.bias + counts_.input;
    std::fill(state.evaluated.begin(), state.evaluated.end(), 0);
    for (NeuronId id : order_) {
      const std::size_t i = id - 1;
      double value;
      if (i < first_input) {
        value = 1.0;
      } else if (i < first_output) {
        value = inputs[i - first_input];
      } else {
        double sum = 0.0;
        for (std::size_t k = ff_begin_[i]; k < ff_begin_[i + 1]; ++k) {
          sum += ff_inputs_[k].weight * state.activations[ff_inputs_[k].source];
        }
        for (std::size_t k = rec_begin_[i]; k < rec_begin_[i + 1]; ++k) {
          sum += rec_inputs_[k].weight * state.recurrent_buffer[rec_inputs_[k].source];
        }
        value = std::tanh(sum);
      }
      state.activations[i] = value;
      state.evaluated[i] = 1;
    }
    for (std::size_t s : recurrent_sources_) state.recurrent_buffer[s] = state.activations[s];
    for (std::size_t o = 0; o < counts_.output; ++o) outputs[o] = state.activations[first_output + o];
  }

  std::vector<double> step(ActivationState& state, std::span<const double> inputs) const {
    std::vector<double> outputs(counts_.output);
    step(state, inputs, outputs);
    return outputs;
  }

 private:
  struct Input {
    std::size_t source;  // zero-based
    double weight;
  };

  NeuronCounts counts_;
  std::vector<NeuronId> order_;
  std::vector<Input> ff_inputs_;
  std::vector<std::size_t> ff_begin_;
  std::vector<Input> rec_inputs_;
  std::vector<std::size_t> rec_begin_;
  std::vector<std::size_t> recurrent_sources_;
};

/// One evaluation step straight from the genotype. Tasks that evaluate many
/// steps should build a CompiledNetwork once instead.
inline std::vector<double> evaluate_step(const Genotype& g, ActivationState& state, std::span<const double> inputs) {
  if (state.size() == 0) state = ActivationState(g.neuron_count());
  return CompiledNetwork(g).step(state, inputs);
}

}  // namespace cortex
