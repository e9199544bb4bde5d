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
#include <array>
#include <cmath>
#include <map>

#include <gtest/gtest.h>

#include "cortex/genotype.hpp"
#include "cortex/mutation.hpp"
#include "cortex/rng.hpp"

namespace cortex {
namespace {

TEST(Mutation, DefaultWeightings) {
  const MutationWeights w;
  EXPECT_EQ(w.weight, 1000.0);
  EXPECT_EQ(w.add_connection, 50.0);
  EXPECT_EQ(w.delete_connection, 5.0);
  EXPECT_EQ(w.add_neuron, 30.0);
  EXPECT_EQ(w.delete_neuron, 5.0);
  EXPECT_NEAR(w.weight / w.total(), 1000.0 / 1090.0, 1e-15);
  EXPECT_NEAR(w.weight / w.total(), 0.9174, 1e-4);
}

TEST(Mutation, SingleNonZeroWeightingAlwaysWins) {
  MutationWeights w{0, 0, 0, 30, 0};
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(select_mutation_kind(w, rng), MutationKind::AddNeuron);
}

TEST(Mutation, AllZeroWeightingsAreRejected) {
  Rng rng(1);
  EXPECT_THROW(select_mutation_kind(MutationWeights{0, 0, 0, 0, 0}, rng), std::invalid_argument);
  EXPECT_THROW(select_mutation_kind(MutationWeights{-1, 5, 0, 0, 0}, rng), std::invalid_argument);
}

TEST(Mutation, KindFrequenciesMatchWeightings) {
  const MutationWeights w;
  Rng rng(1);
  std::map<MutationKind, int> hits;
  const int n = 100000;
  for (int i = 0; i < n; ++i) ++hits[select_mutation_kind(w, rng)];
  for (MutationKind k : kMutationKinds) {
    const double p = w.of(k) / w.total();
    const double sd = std::sqrt(n * p * (1 - p));
    EXPECT_NEAR(hits[k], n * p, 3 * sd) << to_string(k);
  }
}

TEST(Mutation, DefaultInitialSigmaIsTheWeightBound) {
  EXPECT_EQ(kInitialSigma, kWeightMax);
  EXPECT_EQ(WeightMutationState{}.initial_sigma(), kInitialSigma);
  EXPECT_THROW(WeightMutationState{0.0}, std::invalid_argument);
}

TEST(Mutation, SigmaDecaysGeometricallyOnFailure) {
  Genotype g({1, 1, 1, 0});
  g.add_feedforward_connection(2, 3, 0.0);
  const ConnectionRef c{2, 3, Chromosome::Feedforward};
  WeightMutationState state(0.5);
  Rng rng(5);
  mutate_weight(g, state, c, std::nullopt, rng);
  int direction = state.find(c)->direction;
  ASSERT_NE(direction, 0);
  for (int k = 1; k <= 10; ++k) {
    mutate_weight(g, state, c, -1.0, rng);
    EXPECT_EQ(state.find(c)->direction, -direction);
    direction = state.find(c)->direction;
    EXPECT_DOUBLE_EQ(state.find(c)->sigma, 0.5 * std::pow(0.95, k));
  }
  EXPECT_NEAR(state.find(c)->sigma, 0.29937, 1e-5);
  EXPECT_EQ(state.find(c)->failures, 10u);
}

TEST(Mutation, ImprovementKeepsDirectionAndSigma) {
  Genotype g({1, 1, 1, 0});
  g.add_feedforward_connection(2, 3, -4.0);
  const ConnectionRef c{2, 3, Chromosome::Feedforward};
  WeightMutationState state(0.5);
  Rng rng(9);
  double previous = mutate_weight(g, state, c, std::nullopt, rng);
  const int direction = state.find(c)->direction;
  for (int k = 0; k < 5; ++k) {
    const double w = mutate_weight(g, state, c, 0.25, rng);
    EXPECT_EQ(state.find(c)->direction, direction);
    EXPECT_EQ(state.find(c)->sigma, 0.5);
    if (direction > 0) EXPECT_GE(w, previous);
    else EXPECT_LE(w, previous);
    previous = w;
  }
}

TEST(Mutation, TiesCountAsFailures) {
  WeightMutationState state(1.0);
  const ConnectionRef c{1, 2, Chromosome::Feedforward};
  state.record(c).direction = 1;
  state.record_outcome(c, false);
  EXPECT_EQ(state.find(c)->direction, -1);
  EXPECT_DOUBLE_EQ(state.find(c)->sigma, 0.95);
}

TEST(Mutation, FirstStepsGoBothWaysAndStayInRange) {
  Rng rng(17);
  int up = 0, down = 0;
  for (int i = 0; i < 400; ++i) {
    Genotype g({1, 1, 1, 0});
    g.add_feedforward_connection(2, 3, 4.9);
    WeightMutationState state;
    const double w = mutate_weight(g, state, {2, 3, Chromosome::Feedforward}, std::nullopt, rng);
    EXPECT_LE(w, kWeightMax);
    EXPECT_GE(w, kWeightMin);
    (w > 4.9 ? up : down)++;
  }
  EXPECT_GT(up, 150);
  EXPECT_GT(down, 150);
}

TEST(Mutation, MissingConnectionThrows) {
  Genotype g({1, 1, 1, 0});
  WeightMutationState state;
  Rng rng(1);
  EXPECT_THROW(mutate_weight(g, state, {2, 3, Chromosome::Feedforward}, std::nullopt, rng), GenotypeError);
}

TEST(Mutation, DeleteNeuronWithoutHiddenIsSkipped) {
  Rng rng(3);
  Genotype g = minimal_genotype({1, 2, 1, 0}, rng);
  const Genotype before = g;
  const MutationOutcome out = apply_structural_mutation(g, MutationKind::DeleteNeuron, rng);
  EXPECT_FALSE(out.applied);
  EXPECT_EQ(g, before);
}

TEST(Mutation, AddNeuronAlwaysApplies) {
  Rng rng(3);
  Genotype g = minimal_genotype({1, 2, 1, 0}, rng);
  for (std::size_t k = 1; k <= 20; ++k) {
    EXPECT_TRUE(apply_structural_mutation(g, MutationKind::AddNeuron, rng).applied);
    EXPECT_EQ(g.hidden_count(), k);
  }
  EXPECT_TRUE(validate(g).empty());
}

TEST(Mutation, AddConnectionFallsBackToRecurrentWhenFeedforwardIsFull) {
  Rng rng(3);
  // The minimal genotype with one hidden neuron already holds every legal
  // feedforward edge.
  Genotype g = minimal_genotype({1, 2, 1, 1}, rng);
  for (const ConnectionRef& c : addable_connections(g)) EXPECT_EQ(c.chromosome, Chromosome::Recurrent);
  const std::size_t ff = g.connection_count(Chromosome::Feedforward);
  const MutationOutcome out = apply_structural_mutation(g, MutationKind::AddConnection, rng);
  ASSERT_TRUE(out.applied);
  EXPECT_EQ(out.connection->chromosome, Chromosome::Recurrent);
  EXPECT_EQ(g.connection_count(Chromosome::Feedforward), ff);
  EXPECT_EQ(g.connection_count(Chromosome::Recurrent), 1u);
  EXPECT_TRUE(validate(g).empty());
}

TEST(Mutation, AddConnectionSaturates) {
  Rng rng(3);
  Genotype g = minimal_genotype({1, 1, 1, 1}, rng);
  // Targets are output 3 and hidden 4; sources 1..4: at most 8 pairs, every
  // one either feedforward or recurrent.
  int added = 0;
  while (apply_structural_mutation(g, MutationKind::AddConnection, rng).applied) ++added;
  EXPECT_TRUE(addable_connections(g).empty());
  EXPECT_EQ(g.connection_count(), 8u);
  EXPECT_EQ(added, 8 - 3 - 2);
  EXPECT_TRUE(validate(g).empty());
}

TEST(Mutation, DeleteNeuronKeepsWeightStateAligned) {
  Rng rng(4);
  Genotype g = minimal_genotype({1, 1, 1, 2}, rng);  // bias 1, input 2, output 3, hidden 4, 5
  WeightMutationState state;
  state.record({5, 3, Chromosome::Feedforward}).direction = 1;
  state.record({4, 3, Chromosome::Feedforward}).direction = -1;
  state.renumber_after_deletion(4);
  EXPECT_EQ(state.size(), 1u);
  ASSERT_NE(state.find({4, 3, Chromosome::Feedforward}), nullptr);
  EXPECT_EQ(state.find({4, 3, Chromosome::Feedforward})->direction, 1);
}

}  // namespace
}  // namespace cortex
