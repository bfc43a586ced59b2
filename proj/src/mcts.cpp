// SPDX-FileCopyrightText: Copyright (c) 2026 The adaptmol authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "adaptmol/mcts.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <ostream>

#include "adaptmol/errors.hpp"

namespace adaptmol {

void SearchConfig::validate() const {
  if (min_atoms < 1) throw ConfigError("min_atoms must be >= 1");
  if (max_atoms < min_atoms) throw ConfigError("max_atoms must be >= min_atoms");
  if (iterations < 1) throw ConfigError("iterations must be >= 1");
  if (!(c_puct > 0)) throw ConfigError("c_puct must be positive");
  if (!(delta > 0 && delta < 1)) throw ConfigError("delta must lie in (0, 1)");
}

std::size_t select_action(const SearchNode& node, const SearchConfig& cfg) {
  if (node.edges.empty()) {
    throw ContractError("select_action on a node without legal actions");
  }
  long total = 0;
  for (const auto& e : node.edges) total += e.visits;
  std::size_t best = 0;
  double best_value = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < node.edges.size(); ++i) {
    const auto& e = node.edges[i];
    const double u = cfg.c_puct * e.prior * std::sqrt(static_cast<double>(total) / (1.0 + static_cast<double>(e.visits)));
    const double v = e.mean_value() + u;
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  return best;
}

RationaleSearch::RationaleSearch(std::shared_ptr<const MolGraph> mol, SubgraphScorer scorer, SearchConfig cfg)
    : mol_(std::move(mol)), scorer_(std::move(scorer)), cfg_(cfg) {
  cfg_.validate();
  if (!mol_ || mol_->num_atoms() == 0) {
    throw ContractError("rationale search needs a non-empty molecule");
  }
  node_for(SubgraphState::full(mol_));
}

int RationaleSearch::node_for(const SubgraphState& state) {
  const std::string key = state.key();
  const auto it = index_.find(key);
  if (it != index_.end()) return it->second;
  SearchNode node;
  node.state = state;
  node.score = scorer_(state);
  nodes_.push_back(std::move(node));
  const int id = static_cast<int>(nodes_.size()) - 1;
  index_.emplace(key, id);
  return id;
}

void RationaleSearch::expand(int node) {
  const auto actions = candidate_deletions(nodes_[static_cast<std::size_t>(node)].state);
  std::vector<SearchEdge> edges;
  for (const auto& action : actions) {
    SearchEdge edge;
    edge.action = action;
    edge.child = node_for(apply_deletion(nodes_[static_cast<std::size_t>(node)].state, action));
    edge.prior = nodes_[static_cast<std::size_t>(edge.child)].score;
    edges.push_back(std::move(edge));
  }
  auto& n = nodes_[static_cast<std::size_t>(node)];
  n.edges = std::move(edges);
  n.expanded = true;
}

bool RationaleSearch::is_leaf(const SearchNode& node) const {
  return node.state.atom_count() <= cfg_.max_atoms || (node.expanded && node.edges.empty());
}

void RationaleSearch::rollout() {
  RolloutTrace trace;
  int current = 0;
  while (true) {
    if (is_leaf(nodes_[static_cast<std::size_t>(current)])) break;
    if (!nodes_[static_cast<std::size_t>(current)].expanded) {
      expand(current);
      if (nodes_[static_cast<std::size_t>(current)].edges.empty()) break;
    }
    const auto& node = nodes_[static_cast<std::size_t>(current)];
    const std::size_t a = select_action(node, cfg_);
    trace.path.emplace_back(current, a);
    current = node.edges[a].child;
  }
  trace.leaf = current;
  trace.reward = nodes_[static_cast<std::size_t>(current)].score;
  for (const auto& [n, a] : trace.path) {
    auto& edge = nodes_[static_cast<std::size_t>(n)].edges[a];
    edge.visits += 1;
    edge.value += trace.reward;
  }
  traces_.push_back(std::move(trace));
}

void RationaleSearch::run(int iterations) {
  for (int i = 0; i < iterations; ++i) rollout();
}

std::vector<RationaleEntry> RationaleSearch::vocabulary() const {
  // Best-scoring state per kept-atom set.
  std::map<std::vector<int>, const SearchNode*> best;
  for (const auto& node : nodes_) {
    const int atoms = node.state.atom_count();
    if (atoms < cfg_.min_atoms || atoms > cfg_.max_atoms || node.score < cfg_.delta) continue;
    auto& slot = best[node.state.kept_atoms()];
    if (slot == nullptr || node.score > slot->score) slot = &node;
  }
  std::vector<RationaleEntry> out;
  for (const auto& [atoms, node] : best) {
    out.push_back({mol_->source_smiles(), atoms, extract_subgraph(node->state), node->score});
  }
  std::stable_sort(out.begin(), out.end(), [](const RationaleEntry& a, const RationaleEntry& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.atoms.size() < b.atoms.size();
  });
  return out;
}

std::vector<RationaleEntry> run_search(const MolGraph& mol, const SubgraphScorer& scorer, const SearchConfig& cfg,
                                       Rng& /*rng*/, std::ostream* log) {
  cfg.validate();
  if (mol.num_atoms() < cfg.min_atoms) {
    if (log) {
      *log << "warning: '" << mol.source_smiles() << "' has " << mol.num_atoms() << " atoms, fewer than min_atoms "
           << cfg.min_atoms << "; no rationale searched\n";
    }
    return {};
  }
  RationaleSearch search(std::make_shared<const MolGraph>(mol), scorer, cfg);
  search.run(cfg.iterations);
  return search.vocabulary();
}

double ModelScorer::operator()(const SubgraphState& state) const {
  if (state.atom_count() == 0) {
    throw ContractError("cannot score an empty subgraph");
  }
  const MolGraph& parent = state.parent();
  const MolGraph sub = extract_subgraph(state);
  const auto tokens = masked_tokens(state);
  const bool whole = state.atom_count() == parent.num_atoms() && state.bond_count() == parent.num_bonds();
  const EncodedMolecule inputs =
      model_->encode_inputs(sub, tokens, whole ? std::string_view(parent.source_smiles()) : std::string_view());
  return predict_probability(*model_, protos_, inputs);
}

std::string format_rationale(const RationaleEntry& entry) {
  std::string atoms;
  for (std::size_t i = 0; i < entry.atoms.size(); ++i) {
    if (i) atoms += ',';
    atoms += std::to_string(entry.atoms[i]);
  }
  char score[32];
  std::snprintf(score, sizeof score, "%.4f", entry.score);
  return entry.source_smiles + '\t' + atoms + '\t' + score;
}

}  // namespace adaptmol
