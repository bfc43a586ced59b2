// SPDX-FileCopyrightText: Copyright (c) 2026 The adaptmol authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "adaptmol/subgraph.hpp"

#include <algorithm>
#include <deque>
#include <utility>

#include "adaptmol/errors.hpp"

namespace adaptmol {

namespace {

// Atoms reachable from `start` over kept bonds.
std::vector<bool> reachable(const MolGraph& mol, const std::vector<bool>& atoms, const std::vector<bool>& bonds,
                            int start) {
  std::vector<bool> seen(atoms.size(), false);
  std::deque<int> queue{start};
  seen[start] = true;
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (int b : mol.incident_bonds(u)) {
      if (!bonds[b]) continue;
      const int w = mol.bonds()[b].other(u);
      if (atoms[w] && !seen[w]) {
        seen[w] = true;
        queue.push_back(w);
      }
    }
  }
  return seen;
}

bool connected_nonempty(const MolGraph& mol, const std::vector<bool>& atoms, const std::vector<bool>& bonds) {
  const auto first = std::find(atoms.begin(), atoms.end(), true);
  if (first == atoms.end()) return false;
  const auto seen = reachable(mol, atoms, bonds, static_cast<int>(first - atoms.begin()));
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (atoms[i] && !seen[i]) return false;
  }
  return true;
}

}  // namespace

SubgraphState::SubgraphState(std::shared_ptr<const MolGraph> parent, std::vector<bool> atom_mask,
                             std::vector<bool> bond_mask)
    : parent_(std::move(parent)), atom_mask_(std::move(atom_mask)), bond_mask_(std::move(bond_mask)) {
  if (!parent_) {
    throw ContractError("subgraph state needs a parent molecule");
  }
  if (static_cast<int>(atom_mask_.size()) != parent_->num_atoms() ||
      static_cast<int>(bond_mask_.size()) != parent_->num_bonds()) {
    throw DimensionError("subgraph masks do not match the parent molecule");
  }
}

SubgraphState SubgraphState::full(std::shared_ptr<const MolGraph> parent) {
  const auto atoms = static_cast<std::size_t>(parent->num_atoms());
  const auto bonds = static_cast<std::size_t>(parent->num_bonds());
  return SubgraphState(std::move(parent), std::vector<bool>(atoms, true), std::vector<bool>(bonds, true));
}

int SubgraphState::atom_count() const {
  return static_cast<int>(std::count(atom_mask_.begin(), atom_mask_.end(), true));
}

int SubgraphState::bond_count() const {
  return static_cast<int>(std::count(bond_mask_.begin(), bond_mask_.end(), true));
}

std::vector<int> SubgraphState::kept_atoms() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < atom_mask_.size(); ++i) {
    if (atom_mask_[i]) out.push_back(static_cast<int>(i));
  }
  return out;
}

std::string SubgraphState::key() const {
  std::string k;
  k.reserve(atom_mask_.size() + bond_mask_.size() + 1);
  for (bool b : atom_mask_) k.push_back(b ? '1' : '0');
  k.push_back('|');
  for (bool b : bond_mask_) k.push_back(b ? '1' : '0');
  return k;
}

bool SubgraphState::is_valid() const {
  const MolGraph& mol = *parent_;
  for (int b = 0; b < mol.num_bonds(); ++b) {
    if (bond_mask_[b] && !(atom_mask_[mol.bonds()[b].begin] && atom_mask_[mol.bonds()[b].end])) {
      return false;
    }
  }
  return connected_nonempty(mol, atom_mask_, bond_mask_);
}

std::vector<DeletionAction> candidate_deletions(const SubgraphState& state) {
  const MolGraph& mol = state.parent();
  const auto& atoms = state.atom_mask();
  const auto& bonds = state.bond_mask();
  const auto kept = state.kept_atoms();
  const int anchor = kept.empty() ? -1 : kept.front();
  const int total = static_cast<int>(kept.size());
  std::vector<DeletionAction> actions;

  auto push_unique = [&actions](DeletionAction action) {
    for (const auto& existing : actions) {
      if (existing.removed_atoms == action.removed_atoms && existing.removed_bonds == action.removed_bonds) return;
    }
    actions.push_back(std::move(action));
  };

  for (int b = 0; b < mol.num_bonds(); ++b) {
    const Bond& bond = mol.bonds()[b];
    if (!bonds[b] || bond.aromatic || bond.in_ring) continue;
    std::vector<bool> without = bonds;
    without[b] = false;
    const auto side = reachable(mol, atoms, without, bond.begin);
    if (side[bond.end]) continue;  // not a split of the current subgraph
    int side_size = 0;
    for (int a : kept) side_size += side[a] ? 1 : 0;
    const int other_size = total - side_size;
    bool remove_begin_side;
    if (side_size != other_size) {
      remove_begin_side = side_size < other_size;
    } else {
      remove_begin_side = !side[anchor];
    }
    DeletionAction action;
    action.kind = DeletionAction::Kind::Bond;
    action.index = b;
    action.removed_atoms.assign(atoms.size(), false);
    action.removed_bonds.assign(bonds.size(), false);
    for (int a : kept) {
      if (side[a] == remove_begin_side) action.removed_atoms[a] = true;
    }
    for (int e = 0; e < mol.num_bonds(); ++e) {
      if (!bonds[e]) continue;
      const Bond& other = mol.bonds()[e];
      if (e == b || action.removed_atoms[other.begin] || action.removed_atoms[other.end]) {
        action.removed_bonds[e] = true;
      }
    }
    push_unique(std::move(action));
  }

  const auto& rings = mol.rings();
  for (int r = 0; r < static_cast<int>(rings.size()); ++r) {
    const Ring& ring = rings[r];
    const bool ring_kept =
        std::all_of(ring.atoms.begin(), ring.atoms.end(), [&](int a) { return atoms[a]; }) &&
        std::all_of(ring.bonds.begin(), ring.bonds.end(), [&](int b) { return bonds[b]; });
    if (!ring_kept) continue;

    std::vector<bool> in_this_ring(bonds.size(), false);
    for (int b : ring.bonds) in_this_ring[b] = true;
    // Bonds of this ring that another fully kept ring also uses stay.
    std::vector<bool> shared(bonds.size(), false);
    for (int o = 0; o < static_cast<int>(rings.size()); ++o) {
      if (o == r) continue;
      const Ring& other = rings[o];
      const bool other_kept =
          std::all_of(other.atoms.begin(), other.atoms.end(), [&](int a) { return atoms[a]; }) &&
          std::all_of(other.bonds.begin(), other.bonds.end(), [&](int b) { return bonds[b]; });
      if (!other_kept) continue;
      for (int b : other.bonds) shared[b] = shared[b] || in_this_ring[b];
    }

    DeletionAction action;
    action.kind = DeletionAction::Kind::Ring;
    action.index = r;
    action.removed_atoms.assign(atoms.size(), false);
    action.removed_bonds.assign(bonds.size(), false);
    bool any_exclusive = false;
    for (int a : ring.atoms) {
      const bool junction = std::any_of(mol.incident_bonds(a).begin(), mol.incident_bonds(a).end(),
                                        [&](int b) { return bonds[b] && (!in_this_ring[b] || shared[b]); });
      if (!junction) {
        action.removed_atoms[a] = true;
        any_exclusive = true;
      }
    }
    if (!any_exclusive) continue;
    for (int b : ring.bonds) {
      if (!shared[b]) action.removed_bonds[b] = true;
    }
    std::vector<bool> rest_atoms = atoms;
    std::vector<bool> rest_bonds = bonds;
    for (std::size_t i = 0; i < atoms.size(); ++i) rest_atoms[i] = atoms[i] && !action.removed_atoms[i];
    for (std::size_t i = 0; i < bonds.size(); ++i) rest_bonds[i] = bonds[i] && !action.removed_bonds[i];
    if (!connected_nonempty(mol, rest_atoms, rest_bonds)) continue;
    push_unique(std::move(action));
  }
  return actions;
}

SubgraphState apply_deletion(const SubgraphState& state, const DeletionAction& action) {
  const auto legal = candidate_deletions(state);
  if (std::find(legal.begin(), legal.end(), action) == legal.end()) {
    throw ContractError("deletion is not legal in this state");
  }
  std::vector<bool> atoms = state.atom_mask();
  std::vector<bool> bonds = state.bond_mask();
  for (std::size_t i = 0; i < atoms.size(); ++i) atoms[i] = atoms[i] && !action.removed_atoms[i];
  for (std::size_t i = 0; i < bonds.size(); ++i) bonds[i] = bonds[i] && !action.removed_bonds[i];
  return SubgraphState(state.parent_ptr(), std::move(atoms), std::move(bonds));
}

std::vector<std::string> masked_tokens(const SubgraphState& state) {
  const MolGraph& mol = state.parent();
  const auto& tokens = mol.tokens();
  const auto& atoms = state.atom_mask();
  const auto& bonds = state.bond_mask();

  std::vector<bool> keep(tokens.size(), false);
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    const auto& tok = tokens[t];
    switch (tok.kind) {
      case TokenKind::Atom: keep[t] = atoms[tok.atom]; break;
      case TokenKind::Bond:
      case TokenKind::RingClosure: keep[t] = tok.bond >= 0 && bonds[tok.bond]; break;
      default: break;
    }
  }
  // A branch survives when it still holds a kept atom.
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    if (tokens[t].kind != TokenKind::BranchOpen) continue;
    const auto close = static_cast<std::size_t>(tokens[t].partner);
    bool any = false;
    for (std::size_t u = t + 1; u < close && !any; ++u) {
      any = tokens[u].kind == TokenKind::Atom && atoms[tokens[u].atom];
    }
    keep[t] = any;
    keep[close] = any;
  }
  std::vector<std::string> out;
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    if (keep[t]) out.push_back(tokens[t].text);
  }
  return out;
}

MolGraph extract_subgraph(const SubgraphState& state) {
  const MolGraph& mol = state.parent();
  const auto& atom_mask = state.atom_mask();
  const auto& bond_mask = state.bond_mask();
  std::vector<int> remap(atom_mask.size(), -1);
  std::vector<Atom> atoms;
  for (int i = 0; i < mol.num_atoms(); ++i) {
    if (!atom_mask[i]) continue;
    remap[i] = static_cast<int>(atoms.size());
    atoms.push_back(mol.atoms()[i]);
  }
  std::vector<int> bond_remap(bond_mask.size(), -1);
  std::vector<Bond> bonds;
  for (int b = 0; b < mol.num_bonds(); ++b) {
    if (!bond_mask[b]) continue;
    Bond bond = mol.bonds()[b];
    bond.begin = remap[bond.begin];
    bond.end = remap[bond.end];
    bond_remap[b] = static_cast<int>(bonds.size());
    bonds.push_back(bond);
  }

  // Same filtering as masked_tokens, keeping the token metadata.
  std::vector<SmilesToken> tokens;
  std::vector<int> token_remap(mol.tokens().size(), -1);
  for (std::size_t t = 0; t < mol.tokens().size(); ++t) {
    SmilesToken tok = mol.tokens()[t];
    bool kept = false;
    switch (tok.kind) {
      case TokenKind::Atom: kept = atom_mask[tok.atom]; break;
      case TokenKind::Bond:
      case TokenKind::RingClosure: kept = tok.bond >= 0 && bond_mask[tok.bond]; break;
      default: {
        const std::size_t open = tok.kind == TokenKind::BranchOpen ? t : static_cast<std::size_t>(tok.partner);
        const std::size_t close = static_cast<std::size_t>(mol.tokens()[open].partner);
        for (std::size_t u = open + 1; u < close && !kept; ++u) {
          kept = mol.tokens()[u].kind == TokenKind::Atom && atom_mask[mol.tokens()[u].atom];
        }
      }
    }
    if (!kept) continue;
    if (tok.atom >= 0) tok.atom = remap[tok.atom];
    if (tok.bond >= 0) tok.bond = bond_remap[tok.bond];
    token_remap[t] = static_cast<int>(tokens.size());
    tokens.push_back(std::move(tok));
  }
  for (auto& tok : tokens) {
    if (tok.partner >= 0) tok.partner = token_remap[tok.partner];
  }
  return MolGraph(std::move(atoms), std::move(bonds), mol.source_smiles(), std::move(tokens));
}

}  // namespace adaptmol
