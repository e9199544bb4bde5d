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

#include <concepts>

#include "cortex/genotype.hpp"

namespace cortex {

// Result of one fitness computation.
struct Evaluation {
  double fitness = 0.0;
  bool solved = false;
};

// A task scores a genotype and declares the neuron counts it expects (hidden
// is ignored). evaluate() must be a pure function of the genotype.
template <typename T>
concept FitnessTask = requires(const T& task, const Genotype& g) {
  { task.evaluate(g) } -> std::same_as<Evaluation>;
  { task.io_counts() } -> std::convertible_to<NeuronCounts>;
};

}  // namespace cortex
