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

#include <array>
#include <cmath>
#include <stdexcept>

#include "cortex/genotype.hpp"
#include "cortex/network.hpp"
#include "cortex/task.hpp"

namespace cortex {

struct XorCase {
  std::array<double, 2> inputs;
  double target;
};

inline constexpr std::array<XorCase, 4> kXorCases{{
    {{0.0, 0.0}, 0.0},
    {{0.0, 1.0}, 1.0},
    {{1.0, 0.0}, 1.0},
    {{1.0, 1.0}, 0.0},
}};

inline constexpr NeuronCounts kXorCounts{1, 2, 1, 0};

/// Fitness 4 - sum|target - (o + 1) / 2| over the four cases. A case counts
/// as correct when o > 0 encodes 1 and o <= 0 encodes 0. Recurrent state is
/// cleared before every case so each pattern is judged on its own.
inline Evaluation xor_fitness(const Genotype& g) {
  const NeuronCounts& c = g.counts();
  if (c.bias != 1 || c.input != 2 || c.output != 1) {
    throw std::invalid_argument("XOR needs 1 bias, 2 inputs and 1 output");
  }
  const CompiledNetwork net(g);
  ActivationState state = net.make_state();
  double error = 0.0;
  bool solved = true;
  double out = 0.0;
  for (const XorCase& xc : kXorCases) {
    reset_state(state);
    net.step(state, xc.inputs, std::span<double>(&out, 1));
    error += std::abs(xc.target - (out + 1.0) / 2.0);
    const double decoded = out > 0.0 ? 1.0 : 0.0;
    if (decoded != xc.target) solved = false;
  }
  return {4.0 - error, solved};
}

struct XorTask {
  NeuronCounts io_counts() const { return kXorCounts; }
  Evaluation evaluate(const Genotype& g) const { return xor_fitness(g); }
};

}  // namespace cortex
