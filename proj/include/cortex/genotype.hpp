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

// Direct, redundancy-free network encoding.
//
// Neurons are numbered 1..N in the fixed role order bias, input, output,
// hidden. A genotype holds three connectivity chromosomes, each a table with
// one row per neuron:
//   outward   - feedforward edges keyed by source (targets + weights)
//   inward    - the transpose of outward (sources only), kept in sync
//   recurrent - edges carrying the previous step's activation, keyed by source
// Rows are kept sorted by neuron ID. The outward graph is always acyclic;
// anything that would close a loop belongs in the recurrent chromosome.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cortex/rng.hpp"

namespace cortex {

// 1-based neuron identifier.
using NeuronId = std::size_t;

inline constexpr double kWeightMin = -5.0;
inline constexpr double kWeightMax = 5.0;
inline constexpr double kInitialWeightRange = 1.0;

enum class NeuronRole { Bias, Input, Output, Hidden };
enum class Chromosome { Feedforward, Recurrent };

inline const char* to_string(NeuronRole role) {
  switch (role) {
    case NeuronRole::Bias: return "bias";
    case NeuronRole::Input: return "input";
    case NeuronRole::Output: return "output";
    case NeuronRole::Hidden: return "hidden";
  }
  return "?";
}

struct NeuronCounts {
  std::size_t bias = 0;
  std::size_t input = 0;
  std::size_t output = 0;
  std::size_t hidden = 0;

  std::size_t total() const { return bias + input + output + hidden; }
  friend bool operator==(const NeuronCounts&, const NeuronCounts&) = default;
};

// Half-open range of neuron IDs [first, last).
struct IdRange {
  NeuronId first = 1;
  NeuronId last = 1;

  std::size_t size() const { return last - first; }
  bool empty() const { return first == last; }
  bool contains(NeuronId id) const { return id >= first && id < last; }
};

struct Edge {
  NeuronId target = 0;
  double weight = 0.0;
  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Connection {
  NeuronId source = 0;
  NeuronId target = 0;
  double weight = 0.0;
  friend bool operator==(const Connection&, const Connection&) = default;
};

class GenotypeError : public std::runtime_error {
 public:
  enum class Reason {
    InvalidConfiguration,
    InvalidId,
    InvalidWeight,
    Duplicate,
    Cycle,
    Role,
    Missing,
    Mismatch,
    Parse,
  };

  GenotypeError(Reason reason, const std::string& what)
      : std::runtime_error(what), reason_(reason) {}

  Reason reason() const { return reason_; }

 private:
  Reason reason_;
};

class Genotype {
 public:
  using Row = std::vector<Edge>;
  using SourceRow = std::vector<NeuronId>;

  Genotype() = default;

  explicit Genotype(NeuronCounts counts)
      : counts_(counts),
        outward_(counts.total()),
        inward_(counts.total()),
        recurrent_(counts.total()) {}

  // Assembles a genotype from raw tables without any checking. Intended for
  // tests and tooling that need to inspect invalid encodings via validate().
  static Genotype from_tables(NeuronCounts counts, std::vector<Row> outward,
                              std::vector<SourceRow> inward,
                              std::vector<Row> recurrent) {
    Genotype g;
    g.counts_ = counts;
    g.outward_ = std::move(outward);
    g.inward_ = std::move(inward);
    g.recurrent_ = std::move(recurrent);
    return g;
  }

  const NeuronCounts& counts() const { return counts_; }
  std::size_t neuron_count() const { return counts_.total(); }
  std::size_t hidden_count() const { return counts_.hidden; }

  bool is_valid_id(NeuronId id) const { return id >= 1 && id <= neuron_count(); }

  IdRange range(NeuronRole role) const {
    const NeuronId b = 1;
    const NeuronId i = b + counts_.bias;
    const NeuronId o = i + counts_.input;
    const NeuronId h = o + counts_.output;
    switch (role) {
      case NeuronRole::Bias: return {b, i};
      case NeuronRole::Input: return {i, o};
      case NeuronRole::Output: return {o, h};
      case NeuronRole::Hidden: return {h, h + counts_.hidden};
    }
    return {};
  }

  NeuronRole role(NeuronId id) const {
    require_id(id);
    if (id <= counts_.bias) return NeuronRole::Bias;
    if (id <= counts_.bias + counts_.input) return NeuronRole::Input;
    if (id <= counts_.bias + counts_.input + counts_.output) return NeuronRole::Output;
    return NeuronRole::Hidden;
  }

  std::span<const Edge> outward(NeuronId id) const { return outward_.at(id - 1); }
  std::span<const NeuronId> inward(NeuronId id) const { return inward_.at(id - 1); }
  std::span<const Edge> recurrent(NeuronId id) const { return recurrent_.at(id - 1); }

  // Raw table views, one row per neuron (index = ID - 1).
  const std::vector<Row>& outward_table() const { return outward_; }
  const std::vector<SourceRow>& inward_table() const { return inward_; }
  const std::vector<Row>& recurrent_table() const { return recurrent_; }

  bool has_connection(NeuronId source, NeuronId target, Chromosome chromosome) const {
    if (!is_valid_id(source) || !is_valid_id(target)) return false;
    const Row& row = table(chromosome)[source - 1];
    return find_edge(row, target) != row.end();
  }

  std::optional<double> weight(NeuronId source, NeuronId target, Chromosome chromosome) const {
    if (!is_valid_id(source) || !is_valid_id(target)) return std::nullopt;
    const Row& row = table(chromosome)[source - 1];
    auto it = find_edge(row, target);
    if (it == row.end()) return std::nullopt;
    return it->weight;
  }

  void set_weight(NeuronId source, NeuronId target, Chromosome chromosome, double weight) {
    require_id(source);
    require_id(target);
    require_weight(weight);
    Row& row = table(chromosome)[source - 1];
    auto it = find_edge(row, target);
    if (it == row.end()) {
      throw GenotypeError(GenotypeError::Reason::Missing, "no connection " + edge_name(source, target));
    }
    it->weight = weight;
  }

  // All connections of one chromosome in ascending (source, target) order.
  std::vector<Connection> connections(Chromosome chromosome) const {
    std::vector<Connection> out;
    const auto& rows = table(chromosome);
    for (std::size_t s = 0; s < rows.size(); ++s) {
      for (const Edge& e : rows[s]) out.push_back({s + 1, e.target, e.weight});
    }
    return out;
  }

  std::size_t connection_count(Chromosome chromosome) const {
    std::size_t n = 0;
    for (const Row& row : table(chromosome)) n += row.size();
    return n;
  }

  std::size_t connection_count() const {
    return connection_count(Chromosome::Feedforward) + connection_count(Chromosome::Recurrent);
  }

  // True iff adding source->target to the outward chromosome closes a
  // directed cycle, i.e. source == target or target already reaches source.
  bool would_create_cycle(NeuronId source, NeuronId target) const {
    require_id(source);
    require_id(target);
    if (source == target) return true;
    std::vector<char> seen(neuron_count() + 1, 0);
    std::vector<NeuronId> stack{target};
    seen[target] = 1;
    while (!stack.empty()) {
      const NeuronId n = stack.back();
      stack.pop_back();
      for (const Edge& e : outward_[n - 1]) {
        if (e.target == source) return true;
        if (!seen[e.target]) {
          seen[e.target] = 1;
          stack.push_back(e.target);
        }
      }
    }
    return false;
  }

  void add_feedforward_connection(NeuronId source, NeuronId target, double weight) {
    require_id(source);
    require_id(target);
    require_weight(weight);
    if (has_connection(source, target, Chromosome::Feedforward)) {
      throw GenotypeError(GenotypeError::Reason::Duplicate,
                          "feedforward connection " + edge_name(source, target) + " already exists");
    }
    if (would_create_cycle(source, target)) {
      throw GenotypeError(GenotypeError::Reason::Cycle,
                          "feedforward connection " + edge_name(source, target) + " would create a cycle");
    }
    if (!accepts_input(target) || role(source) == NeuronRole::Output) {
      throw GenotypeError(GenotypeError::Reason::Role,
                          "feedforward connection " + edge_name(source, target) + " violates neuron roles");
    }
    insert_edge(outward_[source - 1], {target, weight});
    SourceRow& in = inward_[target - 1];
    in.insert(std::lower_bound(in.begin(), in.end(), source), source);
  }

  void add_recurrent_connection(NeuronId source, NeuronId target, double weight) {
    require_id(source);
    require_id(target);
    require_weight(weight);
    if (has_connection(source, target, Chromosome::Recurrent)) {
      throw GenotypeError(GenotypeError::Reason::Duplicate,
                          "recurrent connection " + edge_name(source, target) + " already exists");
    }
    if (!accepts_input(target)) {
      throw GenotypeError(GenotypeError::Reason::Role,
                          "recurrent connection " + edge_name(source, target) + " targets a bias/input neuron");
    }
    insert_edge(recurrent_[source - 1], {target, weight});
  }

  void delete_connection(NeuronId source, NeuronId target, Chromosome chromosome) {
    require_id(source);
    require_id(target);
    Row& row = table(chromosome)[source - 1];
    auto it = find_edge(row, target);
    if (it == row.end()) {
      throw GenotypeError(GenotypeError::Reason::Missing, "no connection " + edge_name(source, target));
    }
    row.erase(it);
    if (chromosome == Chromosome::Feedforward) {
      SourceRow& in = inward_[target - 1];
      in.erase(std::lower_bound(in.begin(), in.end(), source));
    }
  }

  // Appends an unconnected hidden neuron and returns its ID (N + 1).
  NeuronId append_hidden_neuron() {
    ++counts_.hidden;
    outward_.emplace_back();
    inward_.emplace_back();
    recurrent_.emplace_back();
    return neuron_count();
  }

  // Drops a hidden neuron with every edge touching it and shifts all higher
  // IDs down by one so numbering stays consecutive.
  void remove_hidden_neuron(NeuronId victim) {
    if (role(victim) != NeuronRole::Hidden) {
      throw GenotypeError(GenotypeError::Reason::Role,
                          "neuron " + std::to_string(victim) + " is not hidden");
    }
    const std::size_t index = victim - 1;
    outward_.erase(outward_.begin() + static_cast<std::ptrdiff_t>(index));
    inward_.erase(inward_.begin() + static_cast<std::ptrdiff_t>(index));
    recurrent_.erase(recurrent_.begin() + static_cast<std::ptrdiff_t>(index));
    --counts_.hidden;

    auto shift = [victim](NeuronId id) { return id > victim ? id - 1 : id; };
    for (auto* rows : {&outward_, &recurrent_}) {
      for (Row& row : *rows) {
        std::erase_if(row, [victim](const Edge& e) { return e.target == victim; });
        for (Edge& e : row) e.target = shift(e.target);
      }
    }
    for (SourceRow& row : inward_) {
      std::erase(row, victim);
      for (NeuronId& s : row) s = shift(s);
    }
  }

  friend bool operator==(const Genotype&, const Genotype&) = default;

 private:
  static Row::const_iterator find_edge(const Row& row, NeuronId target) {
    auto it = std::lower_bound(row.begin(), row.end(), target,
                               [](const Edge& e, NeuronId t) { return e.target < t; });
    return (it != row.end() && it->target == target) ? it : row.end();
  }

  static Row::iterator find_edge(Row& row, NeuronId target) {
    auto it = std::lower_bound(row.begin(), row.end(), target,
                               [](const Edge& e, NeuronId t) { return e.target < t; });
    return (it != row.end() && it->target == target) ? it : row.end();
  }

  static void insert_edge(Row& row, Edge edge) {
    auto it = std::lower_bound(row.begin(), row.end(), edge.target,
                               [](const Edge& e, NeuronId t) { return e.target < t; });
    row.insert(it, edge);
  }

  static std::string edge_name(NeuronId s, NeuronId t) {
    return std::to_string(s) + "->" + std::to_string(t);
  }

  bool accepts_input(NeuronId id) const {
    const NeuronRole r = role(id);
    return r == NeuronRole::Output || r == NeuronRole::Hidden;
  }

  void require_id(NeuronId id) const {
    if (!is_valid_id(id)) {
      throw GenotypeError(GenotypeError::Reason::InvalidId,
                          "neuron ID " + std::to_string(id) + " outside 1.." + std::to_string(neuron_count()));
    }
  }

  static void require_weight(double w) {
    if (!(w >= kWeightMin && w <= kWeightMax)) {
      throw GenotypeError(GenotypeError::Reason::InvalidWeight,
                          "weight " + std::to_string(w) + " outside allowed range");
    }
  }

  const std::vector<Row>& table(Chromosome c) const {
    return c == Chromosome::Feedforward ? outward_ : recurrent_;
  }
  std::vector<Row>& table(Chromosome c) { return c == Chromosome::Feedforward ? outward_ : recurrent_; }

  NeuronCounts counts_;
  std::vector<Row> outward_;
  std::vector<SourceRow> inward_;
  std::vector<Row> recurrent_;
};

/// Fully connected feedforward genotype: every bias/input neuron feeds every
/// output and hidden neuron, and every hidden neuron feeds every output.
/// Weights are uniform in [-1, 1].
inline Genotype minimal_genotype(NeuronCounts counts, Rng& rng) {
  if (counts.input < 1 || counts.output < 1 || counts.bias > 1) {
    throw GenotypeError(GenotypeError::Reason::InvalidConfiguration,
                        "need at least one input and one output neuron and at most one bias neuron");
  }
  Genotype g(counts);
  const IdRange sources{1, g.range(NeuronRole::Input).last};
  const IdRange targets{g.range(NeuronRole::Output).first, g.neuron_count() + 1};
  auto draw = [&rng] { return uniform_real(rng, -kInitialWeightRange, kInitialWeightRange); };
  for (NeuronId s = sources.first; s < sources.last; ++s) {
    for (NeuronId t = targets.first; t < targets.last; ++t) g.add_feedforward_connection(s, t, draw());
  }
  const IdRange hidden = g.range(NeuronRole::Hidden);
  const IdRange outputs = g.range(NeuronRole::Output);
  for (NeuronId h = hidden.first; h < hidden.last; ++h) {
    for (NeuronId o = outputs.first; o < outputs.last; ++o) g.add_feedforward_connection(h, o, draw());
  }
  return g;
}

/// Inward table recomputed from the outward chromosome.
inline std::vector<Genotype::SourceRow> transpose_of_outward(const Genotype& g) {
  std::vector<Genotype::SourceRow> inward(g.outward_table().size());
  for (std::size_t s = 0; s < g.outward_table().size(); ++s) {
    for (const Edge& e : g.outward_table()[s]) {
      if (e.target >= 1 && e.target <= inward.size()) inward[e.target - 1].push_back(s + 1);
    }
  }
  return inward;
}

/// Lists every invariant violation. An empty result means the genotype is
/// well formed. Never throws, so it can be pointed at corrupted tables.
inline std::vector<std::string> validate(const Genotype& g) {
  std::vector<std::string> problems;
  const std::size_t n = g.neuron_count();
  const auto& out = g.outward_table();
  const auto& in = g.inward_table();
  const auto& rec = g.recurrent_table();

  if (out.size() != n || in.size() != n || rec.size() != n) {
    problems.push_back("ID gap: tables have " + std::to_string(out.size()) + "/" + std::to_string(in.size()) +
                       "/" + std::to_string(rec.size()) + " rows but counts imply " + std::to_string(n));
    return problems;
  }

  auto valid = [n](NeuronId id) { return id >= 1 && id <= n; };
  auto receives = [&g](NeuronId id) {
    const NeuronRole r = g.role(id);
    return r == NeuronRole::Output || r == NeuronRole::Hidden;
  };
  auto edge = [](NeuronId s, NeuronId t) { return std::to_string(s) + "->" + std::to_string(t); };

  auto check_row = [&](const Genotype::Row& row, NeuronId s, bool feedforward) {
    const char* kind = feedforward ? "feedforward" : "recurrent";
    std::vector<NeuronId> seen;
    for (const Edge& e : row) {
      if (!valid(e.target)) {
        problems.push_back(std::string("invalid endpoint in ") + kind + " edge " + edge(s, e.target));
        continue;
      }
      seen.push_back(e.target);
      if (feedforward && e.target == s) problems.push_back("feedforward self-connection " + edge(s, s));
      if (!receives(e.target)) {
        problems.push_back(std::string("role breach: ") + kind + " edge " + edge(s, e.target) + " targets a " +
                           to_string(g.role(e.target)) + " neuron");
      }
      if (feedforward && g.role(s) == NeuronRole::Output) {
        problems.push_back("role breach: feedforward edge " + edge(s, e.target) + " leaves an output neuron");
      }
      if (!(e.weight >= kWeightMin && e.weight <= kWeightMax)) {
        problems.push_back(std::string("weight out of range on ") + kind + " edge " + edge(s, e.target));
      }
    }
    std::sort(seen.begin(), seen.end());
    for (std::size_t k = 1; k < seen.size(); ++k) {
      if (seen[k] == seen[k - 1]) {
        problems.push_back(std::string("duplicate ") + kind + " edge " + edge(s, seen[k]));
      }
    }
  };

  for (NeuronId s = 1; s <= n; ++s) {
    check_row(out[s - 1], s, true);
    check_row(rec[s - 1], s, false);
  }

  for (NeuronId t = 1; t <= n; ++t) {
    for (NeuronId s : in[t - 1]) {
      if (!valid(s)) {
        problems.push_back("invalid endpoint in inward entry " + edge(s, t));
        continue;
      }
      const auto& row = out[s - 1];
      if (std::none_of(row.begin(), row.end(), [t](const Edge& e) { return e.target == t; })) {
        problems.push_back("transpose mismatch on " + edge(s, t) + ": inward[" + std::to_string(t) + "] lists " + std::to_string(s) +
                           " but outward[" + std::to_string(s) + "] lacks " + std::to_string(t));
      }
    }
  }
  for (NeuronId s = 1; s <= n; ++s) {
    for (const Edge& e : out[s - 1]) {
      if (!valid(e.target)) continue;
      const auto& row = in[e.target - 1];
      if (std::find(row.begin(), row.end(), s) == row.end()) {
        problems.push_back("transpose mismatch on " + edge(s, e.target) + ": outward[" + std::to_string(s) + "] lists " +
                           std::to_string(e.target) + " but inward[" + std::to_string(e.target) + "] lacks " +
                           std::to_string(s));
      }
    }
  }

  // Kahn's algorithm over the outward chromosome.
  std::vector<std::size_t> indegree(n + 1, 0);
  for (NeuronId s = 1; s <= n; ++s) {
    for (const Edge& e : out[s - 1]) {
      if (valid(e.target)) ++indegree[e.target];
    }
  }
  std::vector<NeuronId> ready;
  for (NeuronId id = 1; id <= n; ++id) {
    if (indegree[id] == 0) ready.push_back(id);
  }
  std::size_t sorted = 0;
  while (!ready.empty()) {
    const NeuronId id = ready.back();
    ready.pop_back();
    ++sorted;
    for (const Edge& e : out[id - 1]) {
      if (valid(e.target) && --indegree[e.target] == 0) ready.push_back(e.target);
    }
  }
  if (sorted != n) {
    std::string members;
    for (NeuronId id = 1; id <= n; ++id) {
      if (indegree[id] > 0) members += (members.empty() ? "" : ",") + std::to_string(id);
    }
    problems.push_back("cycle in feedforward chromosome involving {" + members + "}");
  }
  return problems;
}

/// Appends hidden neuron N+1 wired source -> new -> target.
inline NeuronId add_neuron(Genotype& g, NeuronId source, NeuronId target, double weight_in, double weight_out) {
  const NeuronRole src_role = g.role(source);
  if ((src_role != NeuronRole::Bias && src_role != NeuronRole::Input) || g.role(target) != NeuronRole::Output) {
    throw GenotypeError(GenotypeError::Reason::Role, "new neuron must sit between a bias/input and an output");
  }
  const NeuronId id = g.append_hidden_neuron();
  g.add_feedforward_connection(source, id, weight_in);
  g.add_feedforward_connection(id, target, weight_out);
  return id;
}

/// Appends a hidden neuron fed by a random bias/input neuron and feeding a
/// random output neuron. Cannot create a loop.
inline NeuronId add_neuron(Genotype& g, Rng& rng) {
  const IdRange sources{1, g.range(NeuronRole::Input).last};
  const IdRange outputs = g.range(NeuronRole::Output);
  const NeuronId source = sources.first + uniform_index(rng, sources.size());
  const NeuronId target = outputs.first + uniform_index(rng, outputs.size());
  const double w_in = uniform_real(rng, -kInitialWeightRange, kInitialWeightRange);
  const double w_out = uniform_real(rng, -kInitialWeightRange, kInitialWeightRange);
  return add_neuron(g, source, target, w_in, w_out);
}

/// Removes a hidden neuron. Each of its sources is first wired to each of its
/// targets (skipping edges that exist or would loop), reusing the weight of
/// the victim's outgoing edge; then IDs above the victim shift down by one.
/// Recurrent edges touching the victim are dropped.
inline void delete_neuron(Genotype& g, NeuronId victim) {
  if (g.role(victim) != NeuronRole::Hidden) {
    throw GenotypeError(GenotypeError::Reason::Role, "neuron " + std::to_string(victim) + " is not hidden");
  }
  const std::vector<NeuronId> sources(g.inward(victim).begin(), g.inward(victim).end());
  const std::vector<Edge> targets(g.outward(victim).begin(), g.outward(victim).end());
  for (NeuronId p : sources) {
    for (const Edge& q : targets) {
      if (g.has_connection(p, q.target, Chromosome::Feedforward)) continue;
      if (g.would_create_cycle(p, q.target)) continue;
      g.add_feedforward_connection(p, q.target, q.weight);
    }
  }
  g.remove_hidden_neuron(victim);
}

/// Union crossover. Neurons are matched by ID; edges present in both parents
/// take the weight of a uniformly chosen parent, edges present in one take
/// that parent's weight. Neurons beyond the shorter parent come with the
/// longer parent's edges. Feedforward candidates are inserted in ascending
/// (source, target) order and any edge that would close a loop is skipped.
inline Genotype crossover(const Genotype& a, const Genotype& b, Rng& rng) {
  const NeuronCounts& ca = a.counts();
  const NeuronCounts& cb = b.counts();
  if (ca.bias != cb.bias || ca.input != cb.input || ca.output != cb.output) {
    throw GenotypeError(GenotypeError::Reason::Mismatch, "parents differ in bias/input/output counts");
  }
  const Genotype& longer = b.neuron_count() > a.neuron_count() ? b : a;
  Genotype child(longer.counts());

  for (Chromosome chromosome : {Chromosome::Feedforward, Chromosome::Recurrent}) {
    std::map<std::pair<NeuronId, NeuronId>, double> merged;
    const auto from_b = b.connections(chromosome);
    for (const Connection& c : a.connections(chromosome)) merged.emplace(std::pair{c.source, c.target}, c.weight);
    for (const Connection& c : from_b) {
      auto [it, inserted] = merged.emplace(std::pair{c.source, c.target}, c.weight);
      if (!inserted && bernoulli(rng, 0.5)) it->second = c.weight;
    }
    for (const auto& [key, weight] : merged) {
      const auto [s, t] = key;
      if (chromosome == Chromosome::Feedforward) {
        if (child.would_create_cycle(s, t)) continue;
        child.add_feedforward_connection(s, t, weight);
      } else {
        child.add_recurrent_connection(s, t, weight);
      }
    }
  }
  return child;
}

inline std::string format_weight(double w) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", w);
  return buf;
}

/// Line-oriented text form:
///   counts <bias> <input> <output> <hidden>
///   ff <source> <target> <weight>     (ascending)
///   rec <source> <target> <weight>    (ascending)
inline std::string to_text(const Genotype& g) {
  const NeuronCounts& c = g.counts();
  std::string text = "counts " + std::to_string(c.bias) + " " + std::to_string(c.input) + " " +
                     std::to_string(c.output) + " " + std::to_string(c.hidden) + "\n";
  for (const Connection& e : g.connections(Chromosome::Feedforward)) {
    text += "ff " + std::to_string(e.source) + " " + std::to_string(e.target) + " " + format_weight(e.weight) + "\n";
  }
  for (const Connection& e : g.connections(Chromosome::Recurrent)) {
    text += "rec " + std::to_string(e.source) + " " + std::to_string(e.target) + " " + format_weight(e.weight) + "\n";
  }
  return text;
}

namespace detail {

inline std::vector<std::string_view> split_words(std::string_view line) {
  std::vector<std::string_view> words;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' || line[pos] == '\r')) ++pos;
    std::size_t end = pos;
    while (end < line.size() && line[end] != ' ' && line[end] != '\t' && line[end] != '\r') ++end;
    if (end > pos) words.push_back(line.substr(pos, end - pos));
    pos = end;
  }
  return words;
}

template <typename T>
bool parse_number(std::string_view word, T& value) {
  const char* end = word.data() + word.size();
  auto [ptr, ec] = std::from_chars(word.data(), end, value);
  return ec == std::errc() && ptr == end;
}

}  // namespace detail

/// Parses the format written by to_text(). Every edge is inserted through
/// the checked mutators, so the result satisfies all invariants.
inline Genotype from_text(std::string_view text) {
  std::optional<Genotype> g;
  std::size_t line_no = 0;
  int section = 0;  // 0 = expecting counts, 1 = ff, 2 = rec
  auto fail = [&line_no](const std::string& msg) {
    throw GenotypeError(GenotypeError::Reason::Parse, "line " + std::to_string(line_no) + ": " + msg);
  };
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    const std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    const auto words = detail::split_words(line);
    if (words.empty()) continue;
    if (words[0] == "counts") {
      if (section != 0) fail("duplicate counts line");
      NeuronCounts c;
      if (words.size() != 5 || !detail::parse_number(words[1], c.bias) || !detail::parse_number(words[2], c.input) ||
          !detail::parse_number(words[3], c.output) || !detail::parse_number(words[4], c.hidden)) {
        fail("expected 'counts <bias> <input> <output> <hidden>'");
      }
      g.emplace(c);
      section = 1;
      continue;
    }
    if (section == 0) fail("first line must be 'counts'");
    const bool ff = words[0] == "ff";
    if (!ff && words[0] != "rec") fail("unknown record '" + std::string(words[0]) + "'");
    if (ff && section == 2) fail("feedforward edge after recurrent edges");
    NeuronId s = 0, t = 0;
    double w = 0.0;
    if (words.size() != 4 || !detail::parse_number(words[1], s) || !detail::parse_number(words[2], t) ||
        !detail::parse_number(words[3], w)) {
      fail("expected '" + std::string(words[0]) + " <source> <target> <weight>'");
    }
    try {
      if (ff) {
        g->add_feedforward_connection(s, t, w);
      } else {
        section = 2;
        g->add_recurrent_connection(s, t, w);
      }
    } catch (const GenotypeError& e) {
      fail(e.what());
    }
  }
  if (!g) {
    line_no = 0;
    fail("missing counts line");
  }
  return std::move(*g);
}

}  // namespace cortex
