// SPDX-FileCopyrightText: Copyright (c) 2026 The adaptmol authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

//! @file Connected subgraphs of a molecule and the deletions that shrink them.

#pragma once

#include <memory>
#include <string>
#include <vector>

#include "adaptmol/smiles.hpp"

namespace adaptmol {

/// A connected, non-empty subgraph of a parent molecule, stored as masks.
class SubgraphState {
 public:
  SubgraphState() = default;
  SubgraphState(std::shared_ptr<const MolGraph> parent, std::vector<bool> atom_mask, std::vector<bool> bond_mask);

  /// The whole molecule.
  static SubgraphState full(std::shared_ptr<const MolGraph> parent);

  const MolGraph& parent() const { return *parent_; }
  const std::shared_ptr<const MolGraph>& parent_ptr() const { return parent_; }
  const std::vector<bool>& atom_mask() const { return atom_mask_; }
  const std::vector<bool>& bond_mask() const { return bond_mask_; }

  int atom_count() const;
  int bond_count() const;
  std::vector<int> kept_atoms() const;

  /// Identifies the state within one parent; equal keys mean equal masks.
  std::string key() const;

  /// True when masked-in bonds touch only masked-in atoms and the kept part
  /// is non-empty and connected.
  bool is_valid() const;

  friend bool operator==(const SubgraphState& a, const SubgraphState& b) {
    return a.parent_ == b.parent_ && a.atom_mask_ == b.atom_mask_ && a.bond_mask_ == b.bond_mask_;
  }

 private:
  std::shared_ptr<const MolGraph> parent_;
  std::vector<bool> atom_mask_;
  std::vector<bool> bond_mask_;
};

struct DeletionAction {
  enum class Kind { Bond, Ring };

  Kind kind = Kind::Bond;
  int index = -1;  // bond index or index into MolGraph::rings()
  std::vector<bool> removed_atoms;
  std::vector<bool> removed_bonds;

  friend bool operator==(const DeletionAction&, const DeletionAction&) = default;
};

/// All legal deletions, bond deletions first (by bond index) then ring
/// deletions (by ring index). Bond deletion: a kept non-aromatic, non-ring
/// bond; the smaller side is removed, ties remove the side without the
/// lowest-index kept atom. Ring deletion: a fully kept ring; its bonds not
/// shared with another fully kept ring are removed together with the ring atoms
/// left without a kept bond, provided the rest stays connected and non-empty.
std::vector<DeletionAction> candidate_deletions(const SubgraphState& state);

/// Throws ContractError unless `action` is one of candidate_deletions(state).
SubgraphState apply_deletion(const SubgraphState& state, const DeletionAction& action);

/// Standalone graph of the kept atoms and bonds, atoms in parent order.
/// Its tokens are the parent's SMILES tokens restricted to kept elements.
MolGraph extract_subgraph(const SubgraphState& state);

/// The parent's token texts with removed atoms, bonds, ring digits and emptied
/// branches dropped. Equals the full token list for the full state.
std::vector<std::string> masked_tokens(const SubgraphState& state);

}  // namespace adaptmol
