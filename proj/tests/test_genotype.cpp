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
#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "cortex/genotype.hpp"
#include "cortex/mutation.hpp"
#include "cortex/rng.hpp"

namespace cortex {
namespace {

// Four inputs (1-4), outputs 5 and 6, hidden 7-9, plus the recurrent edge 6->9.
Genotype figure_one() {
  Genotype g({0, 4, 2, 3});
  const std::vector<std::pair<NeuronId, NeuronId>> ff{{1, 6}, {1, 7}, {1, 8}, {2, 7}, {2, 9}, {3, 6}, {3, 7},
                                                      {4, 7}, {4, 9}, {7, 5}, {8, 5}, {8, 6}, {9, 6}};
  double w = 0.1;
  for (auto [s, t] : ff) {
    g.add_feedforward_connection(s, t, w);
    w += 0.05;
  }
  g.add_recurrent_connection(6, 9, -0.3);
  return g;
}

std::vector<NeuronId> targets(const Genotype& g, NeuronId s) {
  std::vector<NeuronId> out;
  for (const Edge& e : g.outward(s)) out.push_back(e.target);
  return out;
}

std::vector<NeuronId> sources(const Genotype& g, NeuronId t) { return {g.inward(t).begin(), g.inward(t).end()}; }

using Ids = std::vector<NeuronId>;

TEST(Genotype, RolesFollowCountOrder) {
  const Genotype g = figure_one();
  EXPECT_EQ(g.role(1), NeuronRole::Input);
  EXPECT_EQ(g.role(4), NeuronRole::Input);
  EXPECT_EQ(g.role(5), NeuronRole::Output);
  EXPECT_EQ(g.role(6), NeuronRole::Output);
  EXPECT_EQ(g.role(7), NeuronRole::Hidden);
  EXPECT_EQ(g.role(9), NeuronRole::Hidden);
  EXPECT_EQ(g.neuron_count(), 9u);

  Genotype b({1, 2, 1, 1});
  EXPECT_EQ(b.role(1), NeuronRole::Bias);
  EXPECT_EQ(b.role(3), NeuronRole::Input);
  EXPECT_EQ(b.role(4), NeuronRole::Output);
  EXPECT_EQ(b.role(5), NeuronRole::Hidden);
}

TEST(Genotype, FigureOneTablesAreConsistent) {
  const Genotype g = figure_one();
  EXPECT_TRUE(validate(g).empty());
  EXPECT_EQ(targets(g, 1), (Ids{6, 7, 8}));
  EXPECT_EQ(targets(g, 8), (Ids{5, 6}));
  EXPECT_EQ(sources(g, 6), (Ids{1, 3, 8, 9}));
  EXPECT_EQ(sources(g, 7), (Ids{1, 2, 3, 4}));
  EXPECT_EQ(sources(g, 9), (Ids{2, 4}));
  ASSERT_EQ(g.recurrent(6).size(), 1u);
  EXPECT_EQ(g.recurrent(6)[0].target, 9u);
}

TEST(Genotype, MinimalGenotypeIsFullyConnected) {
  Rng rng(3);
  const Genotype g = minimal_genotype({1, 2, 1, 0}, rng);
  const auto c = g.connections(Chromosome::Feedforward);
  ASSERT_EQ(c.size(), 3u);
  EXPECT_EQ(c[0].source, 1u);
  EXPECT_EQ(c[1].source, 2u);
  EXPECT_EQ(c[2].source, 3u);
  for (const Connection& e : c) {
    EXPECT_EQ(e.target, 4u);
    EXPECT_GE(e.weight, -1.0);
    EXPECT_LE(e.weight, 1.0);
  }

  const Genotype h = minimal_genotype({0, 4, 2, 3}, rng);
  EXPECT_EQ(h.neuron_count(), 9u);
  EXPECT_EQ(h.connection_count(Chromosome::Feedforward), 4u * 5u + 3u * 2u);
  EXPECT_TRUE(validate(h).empty());

  Rng a(11), b(11);
  EXPECT_EQ(minimal_genotype({1, 1, 1, 0}, a), minimal_genotype({1, 1, 1, 0}, b));
}

TEST(Genotype, MinimalGenotypeRejectsMissingInputsOrOutputs) {
  Rng rng(1);
  EXPECT_THROW(minimal_genotype({1, 0, 1, 0}, rng), GenotypeError);
  EXPECT_THROW(minimal_genotype({1, 2, 0, 0}, rng), GenotypeError);
}

TEST(Genotype, ValidateReportsTransposeMismatch) {
  const Genotype g = figure_one();
  auto inward = g.inward_table();
  inward[5 - 1] = {8};  // drop 7 from inward of 5
  const Genotype broken = Genotype::from_tables(g.counts(), g.outward_table(), inward, g.recurrent_table());
  const auto problems = validate(broken);
  ASSERT_EQ(problems.size(), 1u);
  EXPECT_NE(problems[0].find("7->5"), std::string::npos);
}

TEST(Genotype, ValidateReportsTwoCycle) {
  Genotype g({0, 1, 1, 2});  // input 1, output 2, hidden 3 and 4
  auto out = g.outward_table();
  auto in = g.inward_table();
  out[3 - 1] = {{4, 0.5}};
  out[4 - 1] = {{3, 0.5}};
  in[4 - 1] = {3};
  in[3 - 1] = {4};
  const auto problems = validate(Genotype::from_tables(g.counts(), out, in, g.recurrent_table()));
  ASSERT_EQ(problems.size(), 1u);
  EXPECT_NE(problems[0].find("cycle"), std::string::npos);
}

TEST(Genotype, CycleDetection) {
  const Genotype g = figure_one();
  EXPECT_TRUE(g.would_create_cycle(5, 7));
  EXPECT_FALSE(g.would_create_cycle(2, 8));
  for (NeuronId k = 1; k <= 9; ++k) EXPECT_TRUE(g.would_create_cycle(k, k));
  EXPECT_THROW(static_cast<void>(g.would_create_cycle(0, 3)), GenotypeError);
  EXPECT_THROW(static_cast<void>(g.would_create_cycle(3, 10)), GenotypeError);
}

TEST(Genotype, AddFeedforwardConnection) {
  Genotype g = figure_one();
  g.add_feedforward_connection(2, 8, 0.25);
  EXPECT_EQ(targets(g, 2), (Ids{7, 8, 9}));
  EXPECT_EQ(sources(g, 8), (Ids{1, 2}));
  EXPECT_TRUE(validate(g).empty());

  Genotype h = figure_one();
  try {
    h.add_feedforward_connection(1, 6, 0.1);
    FAIL() << "duplicate accepted";
  } catch (const GenotypeError& e) {
    EXPECT_EQ(e.reason(), GenotypeError::Reason::Duplicate);
  }
  try {
    h.add_feedforward_connection(5, 7, 0.1);
    FAIL() << "cycle accepted";
  } catch (const GenotypeError& e) {
    EXPECT_EQ(e.reason(), GenotypeError::Reason::Cycle);
  }
  EXPECT_THROW(h.add_feedforward_connection(7, 1, 0.1), GenotypeError);   // target is an input
  EXPECT_THROW(h.add_feedforward_connection(2, 8, 6.0), GenotypeError);   // out of range
  EXPECT_EQ(h, figure_one());
}

TEST(Genotype, AddRecurrentConnection) {
  Genotype g = figure_one();
  g.add_recurrent_connection(9, 9, 0.5);
  ASSERT_EQ(g.recurrent(9).size(), 1u);
  EXPECT_EQ(g.recurrent(9)[0].target, 9u);
  try {
    g.add_recurrent_connection(6, 9, 0.1);
    FAIL() << "duplicate accepted";
  } catch (const GenotypeError& e) {
    EXPECT_EQ(e.reason(), GenotypeError::Reason::Duplicate);
  }
  EXPECT_THROW(g.add_recurrent_connection(6, 2, 0.1), GenotypeError);
  EXPECT_EQ(targets(g, 6), Ids{});
  EXPECT_TRUE(validate(g).empty());
}

TEST(Genotype, DeleteConnection) {
  Genotype g = figure_one();
  g.delete_connection(1, 8, Chromosome::Feedforward);
  EXPECT_EQ(targets(g, 1), (Ids{6, 7}));
  EXPECT_EQ(sources(g, 8), Ids{});
  g.delete_connection(6, 9, Chromosome::Recurrent);
  EXPECT_EQ(g.connection_count(Chromosome::Recurrent), 0u);
  try {
    g.delete_connection(2, 8, Chromosome::Feedforward);
    FAIL() << "missing edge deleted";
  } catch (const GenotypeError& e) {
    EXPECT_EQ(e.reason(), GenotypeError::Reason::Missing);
  }
  EXPECT_TRUE(validate(g).empty());
}

TEST(Genotype, AddNeuronBetweenInputAndOutput) {
  Genotype g = figure_one();
  const NeuronId added = add_neuron(g, 3, 5, 0.2, -0.4);
  EXPECT_EQ(added, 10u);
  EXPECT_EQ(g.hidden_count(), 4u);
  EXPECT_EQ(targets(g, 3), (Ids{6, 7, 10}));
  EXPECT_EQ(targets(g, 10), (Ids{5}));
  EXPECT_EQ(sources(g, 10), (Ids{3}));
  EXPECT_EQ(sources(g, 5), (Ids{7, 8, 10}));
  EXPECT_EQ(g.connection_count(Chromosome::Recurrent), 1u);
  EXPECT_TRUE(validate(g).empty());
  EXPECT_THROW(add_neuron(g, 7, 5, 0.1, 0.1), GenotypeError);
}

TEST(Genotype, RandomAddNeuronUsesBiasOrInputAndOutput) {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    Genotype g = minimal_genotype({1, 2, 1, 0}, rng);
    const NeuronId id = add_neuron(g, rng);
    ASSERT_EQ(g.inward(id).size(), 1u);
    EXPECT_LE(g.inward(id)[0], 3u);
    ASSERT_EQ(g.outward(id).size(), 1u);
    EXPECT_EQ(g.outward(id)[0].target, 4u);
  }
}

TEST(Genotype, DeleteNeuronTransfersAndRenumbers) {
  Genotype g = figure_one();
  const double out8 = *g.weight(8, 5, Chromosome::Feedforward);
  delete_neuron(g, 8);
  EXPECT_EQ(g.neuron_count(), 8u);
  EXPECT_EQ(g.hidden_count(), 2u);
  EXPECT_EQ(targets(g, 1), (Ids{5, 6, 7}));
  EXPECT_EQ(targets(g, 2), (Ids{7, 8}));
  EXPECT_EQ(targets(g, 3), (Ids{6, 7}));
  EXPECT_EQ(targets(g, 4), (Ids{7, 8}));
  EXPECT_EQ(targets(g, 7), (Ids{5}));
  EXPECT_EQ(targets(g, 8), (Ids{6}));
  EXPECT_DOUBLE_EQ(*g.weight(1, 5, Chromosome::Feedforward), out8);
  // The recurrent edge into old neuron 9 follows the shift.
  ASSERT_EQ(g.recurrent(6).size(), 1u);
  EXPECT_EQ(g.recurrent(6)[0].target, 8u);
  EXPECT_TRUE(validate(g).empty());
}

TEST(Genotype, DeleteOnlyHiddenNeuron) {
  Rng rng(2);
  Genotype g = minimal_genotype({1, 2, 1, 1}, rng);
  delete_neuron(g, 5);
  EXPECT_EQ(g.hidden_count(), 0u);
  EXPECT_EQ(g.neuron_count(), 4u);
  EXPECT_TRUE(validate(g).empty());
  EXPECT_THROW(delete_neuron(g, 4), GenotypeError);
}

TEST(Genotype, DeleteNeuronDropsLoopingTransfers) {
  // 3 -> 4 -> out, plus 4 -> 3 would be the transfer created by removing a
  // neuron sitting on the path 4 -> 5 -> 3; it closes a loop, so it is skipped.
  Genotype g({0, 1, 1, 3});  // input 1, output 2, hidden 3, 4, 5
  g.add_feedforward_connection(1, 3, 0.1);
  g.add_feedforward_connection(3, 4, 0.2);
  g.add_feedforward_connection(4, 2, 0.3);
  g.add_feedforward_connection(4, 5, 0.4);
  g.add_feedforward_connection(5, 2, 0.5);
  delete_neuron(g, 5);
  EXPECT_TRUE(validate(g).empty());
  EXPECT_EQ(targets(g, 4), (Ids{2}));
}

Genotype figure_two_second_parent() {
  Genotype g({0, 4, 2, 3});
  const std::vector<std::pair<NeuronId, NeuronId>> ff{{1, 7}, {1, 9}, {2, 8}, {2, 9}, {3, 7}, {3, 8},
                                                      {4, 7}, {4, 9}, {7, 5}, {8, 6}, {9, 6}};
  for (auto [s, t] : ff) g.add_feedforward_connection(s, t, -0.2);
  return g;
}

TEST(Genotype, CrossoverTakesTheUnion) {
  Rng rng(9);
  const Genotype child = crossover(figure_one(), figure_two_second_parent(), rng);
  EXPECT_EQ(targets(child, 1), (Ids{6, 7, 8, 9}));
  EXPECT_EQ(targets(child, 2), (Ids{7, 8, 9}));
  EXPECT_EQ(targets(child, 3), (Ids{6, 7, 8}));
  EXPECT_EQ(targets(child, 4), (Ids{7, 9}));
  EXPECT_EQ(targets(child, 8), (Ids{5, 6}));
  EXPECT_EQ(targets(child, 9), (Ids{6}));
  EXPECT_TRUE(child.has_connection(6, 9, Chromosome::Recurrent));
  EXPECT_TRUE(validate(child).empty());
}

TEST(Genotype, CrossoverWeightsComeFromAParent) {
  Rng rng(4);
  const Genotype a = figure_one();
  const Genotype b = figure_two_second_parent();
  int from_a = 0, from_b = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const Genotype child = crossover(a, b, rng);
    const double w = *child.weight(1, 7, Chromosome::Feedforward);
    if (w == *a.weight(1, 7, Chromosome::Feedforward)) ++from_a;
    else if (w == *b.weight(1, 7, Chromosome::Feedforward)) ++from_b;
    else FAIL() << "weight " << w << " from neither parent";
    EXPECT_EQ(*child.weight(1, 6, Chromosome::Feedforward), *a.weight(1, 6, Chromosome::Feedforward));
    EXPECT_EQ(*child.weight(2, 8, Chromosome::Feedforward), *b.weight(2, 8, Chromosome::Feedforward));
  }
  EXPECT_GT(from_a, 60);
  EXPECT_GT(from_b, 60);
}

TEST(Genotype, SelfCrossoverIsIdentity) {
  Rng rng(8);
  const Genotype g = figure_one();
  EXPECT_EQ(crossover(g, g, rng), g);
}

TEST(Genotype, CrossoverCopiesExcessNeuronsFromTheLongerParent) {
  Rng rng(12);
  Genotype shorter = minimal_genotype({1, 2, 1, 0}, rng);
  Genotype longer = minimal_genotype({1, 2, 1, 2}, rng);
  longer.add_feedforward_connection(5, 6, 0.7);
  const Genotype child = crossover(shorter, longer, rng);
  EXPECT_EQ(child.counts(), longer.counts());
  EXPECT_EQ(targets(child, 5), (Ids{4, 6}));
  EXPECT_EQ(*child.weight(5, 6, Chromosome::Feedforward), 0.7);
  EXPECT_TRUE(validate(child).empty());
  EXPECT_THROW(crossover(shorter, minimal_genotype({1, 3, 1, 0}, rng), rng), GenotypeError);
}

TEST(Genotype, CrossoverSkipsLoopClosingEdgesInScanOrder) {
  Genotype a({0, 1, 1, 2});  // input 1, output 2, hidden 3, 4
  Genotype b({0, 1, 1, 2});
  a.add_feedforward_connection(3, 4, 0.1);
  b.add_feedforward_connection(4, 3, 0.2);
  Rng rng(1);
  const Genotype child = crossover(a, b, rng);
  EXPECT_TRUE(child.has_connection(3, 4, Chromosome::Feedforward));
  EXPECT_FALSE(child.has_connection(4, 3, Chromosome::Feedforward));
  EXPECT_TRUE(validate(child).empty());
  // Parent order does not matter.
  EXPECT_EQ(crossover(b, a, rng).connections(Chromosome::Feedforward), child.connections(Chromosome::Feedforward));
}

TEST(Genotype, TextRoundTripIsExact) {
  Genotype g = figure_one();
  g.set_weight(1, 6, Chromosome::Feedforward, 0.1 + 0.2);
  g.add_recurrent_connection(9, 9, -1.0 / 3.0);
  const std::string text = to_text(g);
  EXPECT_EQ(text.substr(0, text.find('\n')), "counts 0 4 2 3");
  const Genotype back = from_text(text);
  EXPECT_EQ(back, g);
  EXPECT_EQ(to_text(back), text);
}

TEST(Genotype, TextParseErrorsNameTheLine) {
  try {
    from_text("counts 1 2 1 0\nff 1 4 0.5\nff 4 1 0.5\n");
    FAIL() << "accepted an edge into an input";
  } catch (const GenotypeError& e) {
    EXPECT_EQ(e.reason(), GenotypeError::Reason::Parse);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
  EXPECT_THROW(from_text("ff 1 4 0.5\n"), GenotypeError);
  EXPECT_THROW(from_text("counts 1 2 1 0\nrec 4 4 0.5\nff 1 4 0.5\n"), GenotypeError);
  EXPECT_THROW(from_text("counts 1 2 1\n"), GenotypeError);
  EXPECT_THROW(from_text(""), GenotypeError);
}

// Random operation sequences never break the invariants.
TEST(GenotypeProperty, InvariantsSurviveRandomOperations) {
  Rng rng(2024);
  std::vector<Genotype> pool;
  for (std::size_t h = 0; h < 4; ++h) pool.push_back(minimal_genotype({1, 3, 2, h}, rng));
  std::size_t checked = 0;
  for (int op = 0; op < 10000; ++op) {
    Genotype& g = pool[uniform_index(rng, pool.size())];
    const std::size_t kind = uniform_index(rng, 6);
    const std::size_t hidden_before = g.hidden_count();
    switch (kind) {
      case 0: apply_structural_mutation(g, MutationKind::AddConnection, rng); break;
      case 1: apply_structural_mutation(g, MutationKind::DeleteConnection, rng); break;
      case 2:
        if (g.hidden_count() < 12) {
          apply_structural_mutation(g, MutationKind::AddNeuron, rng);
          ASSERT_EQ(g.hidden_count(), hidden_before + 1);
        }
        break;
      case 3: {
        const bool applied = apply_structural_mutation(g, MutationKind::DeleteNeuron, rng).applied;
        ASSERT_EQ(g.hidden_count(), applied ? hidden_before - 1 : hidden_before);
        break;
      }
      case 4: {
        WeightMutationState state;
        if (const auto c = random_connection(g, rng)) mutate_weight(g, state, *c, std::nullopt, rng);
        break;
      }
      default: {
        const Genotype& other = pool[uniform_index(rng, pool.size())];
        g = crossover(g, other, rng);
        break;
      }
    }
    const auto problems = validate(g);
    ASSERT_TRUE(problems.empty()) << "after operation " << op << ": " << problems.front();
    const NeuronCounts& c = g.counts();
    ASSERT_EQ(g.outward_table().size(), c.total());
    ASSERT_EQ(transpose_of_outward(g), g.inward_table());
    ++checked;
  }
  EXPECT_EQ(checked, 10000u);
}

}  // namespace
}  // namespace cortex
