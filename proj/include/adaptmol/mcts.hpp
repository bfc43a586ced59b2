// SPDX-FileCopyrightText: Copyright (c) 2026 The adaptmol authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

//! @file Rationale extraction by Monte Carlo tree search over deletion
//! sequences, with PUCT selection and visit/value backups.

#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "adaptmol/model.hpp"
#include "adaptmol/random.hpp"
#include "adaptmol/subgraph.hpp"

namespace adaptmol {

struct SearchConfig {
  int max_atoms = 20;  // N_s
  double delta = 0.5;
  double c_puct = 2.0;
  int iterations = 500;
  int min_atoms = 5;

  void validate() const;
};

struct SearchEdge {
  DeletionAction action;
  int child = -1;     // node index in the tree
  double prior = 0;   // R(s, a): the child's score
  long visits = 0;    // N(s, a)
  double value = 0;   // W(s, a)

  double mean_value() const { return visits > 0 ? value / static_cast<double>(visits) : 0.0; }
};

struct SearchNode {
  SubgraphState state;
  double score = 0;
  bool expanded = false;
  std::vector<SearchEdge> edges;
};

/// argmax_a Q(s,a) + c_puct R(s,a) sqrt(sum_b N(s,b) / (1 + N(s,a))), lowest
/// index on ties. Throws ContractError when the node has no edges.
std::size_t select_action(const SearchNode& node, const SearchConfig& cfg);

/// Maps a state to its positive-class probability.
using SubgraphScorer = std::function<double(const SubgraphState&)>;

struct RationaleEntry {
  std::string source_smiles;
  std::vector<int> atoms;  // kept atom indices of the source molecule
  MolGraph graph;
  double score = 0;
};

/// One rollout: the (node, edge) pairs descended and the leaf reward.
struct RolloutTrace {
  std::vector<std::pair<int, std::size_t>> path;
  int leaf = -1;
  double reward = 0;
};

/// Search tree over the states of one molecule. States reached along
/// different deletion orders share one node.
class RationaleSearch {
 public:
  RationaleSearch(std::shared_ptr<const MolGraph> mol, SubgraphScorer scorer, SearchConfig cfg);

  void rollout();
  void run(int iterations);

  const std::vector<SearchNode>& nodes() const { return nodes_; }
  const std::vector<RolloutTrace>& traces() const { return traces_; }

  /// Scored states inside [min_atoms, max_atoms] with score >= delta,
  /// by score descending (ties by atom count, then key).
  std::vector<RationaleEntry> vocabulary() const;

 private:
  int node_for(const SubgraphState& state);
  void expand(int node);
  bool is_leaf(const SearchNode& node) const;

  std::shared_ptr<const MolGraph> mol_;
  SubgraphScorer scorer_;
  SearchConfig cfg_;
  std::vector<SearchNode> nodes_;
  std::unordered_map<std::string, int> index_;
  std::vector<RolloutTrace> traces_;
};

/// Runs cfg.iterations rollouts from the full molecule. The search is
/// deterministic; `rng` is accepted for interface stability and left untouched.
/// A molecule with fewer than min_atoms atoms yields an empty result and a warning.
std::vector<RationaleEntry> run_search(const MolGraph& mol, const SubgraphScorer& scorer, const SearchConfig& cfg,
                                       Rng& rng, std::ostream* log = nullptr);

/// Scores states with a trained model against fixed prototypes. Subgraph
/// sequence features come from the parent's tokens restricted to the state.
class ModelScorer {
 public:
  ModelScorer(const Model& model, FixedPrototypes protos) : model_(&model), protos_(std::move(protos)) {}

  double operator()(const SubgraphState& state) const;

 private:
  const Model* model_;
  FixedPrototypes protos_;
};

/// `<smiles>\t<i,j,...>\t<score with 4 decimals>`
std::string format_rationale(const RationaleEntry& entry);

}  // namespace adaptmol
