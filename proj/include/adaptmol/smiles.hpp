// SPDX-FileCopyrightText: Copyright (c) 2026 The adaptmol authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

//! @file SMILES subset parser and the molecular graph it produces.
//!
//! Supported: organic-subset atoms (B C N O P S F Cl Br I), aromatic b c n o p s,
//! bracket atoms with element, H count and charge, bonds - = # :, branches,
//! ring closures (digits and %nn). Stereo marks, isotopes, atom classes,
//! wildcards and '.' disconnections are rejected.

#pragma once

#include "adaptmol/types.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace adaptmol {

struct Atom {
  std::string element;  // capitalized symbol, e.g. "C", "Cl", "Se"
  bool aromatic = false;
  int formal_charge = 0;
  int explicit_hydrogens = 0;
  bool in_ring = false;
};

struct Bond {
  int begin = 0;  // begin < end
  int end = 0;
  int order = 1;  // 1, 2 or 3; aromatic bonds carry order 1
  bool aromatic = false;
  bool in_ring = false;

  int other(int atom) const { return atom == begin ? end : begin; }
};

enum class TokenKind { Atom, Bond, RingClosure, BranchOpen, BranchClose };

/// One lexical SMILES token and the graph element it belongs to.
struct SmilesToken {
  std::string text;
  TokenKind kind = TokenKind::Atom;
  int atom = -1;     // Atom tokens
  int bond = -1;     // Bond and RingClosure tokens
  int partner = -1;  // matching parenthesis token index
};

/// A smallest cycle through some ring bond. Atom and bond lists are sorted.
struct Ring {
  std::vector<int> atoms;
  std::vector<int> bonds;
};

class MolGraph {
 public:
  MolGraph() = default;

  /// Takes atoms and bonds, then computes ring membership and the ring list.
  MolGraph(std::vector<Atom> atoms, std::vector<Bond> bonds, std::string source_smiles,
           std::vector<SmilesToken> tokens);

  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::vector<Bond>& bonds() const { return bonds_; }
  const std::vector<Ring>& rings() const { return rings_; }
  const std::string& source_smiles() const { return source_smiles_; }
  const std::vector<SmilesToken>& tokens() const { return tokens_; }

  int num_atoms() const { return static_cast<int>(atoms_.size()); }
  int num_bonds() const { return static_cast<int>(bonds_.size()); }

  /// Indices of bonds incident to `atom`, ascending.
  const std::vector<int>& incident_bonds(int atom) const { return incident_.at(atom); }
  int degree(int atom) const { return static_cast<int>(incident_.at(atom).size()); }
  std::optional<int> bond_between(int a, int b) const;

  /// Token texts in order; the sequence input of the featurizer.
  std::vector<std::string> token_texts() const;

 private:
  std::vector<Atom> atoms_;
  std::vector<Bond> bonds_;
  std::vector<Ring> rings_;
  std::vector<std::vector<int>> incident_;
  std::string source_smiles_;
  std::vector<SmilesToken> tokens_;
};

/// Throws ParseError carrying the character offset of the problem.
MolGraph parse_smiles(std::string_view text);

/// Lexical tokens of a SMILES string (bracket atoms whole, Cl/Br as one token).
std::vector<std::string> tokenize(std::string_view text);

/// Bonds lying on at least one simple cycle, via DFS low-link bridge finding.
std::vector<bool> ring_bonds(int num_atoms, const std::vector<Bond>& bonds);

inline constexpr int kElementSlots = 16;
inline constexpr int kDegreeSlots = 6;
inline constexpr int kChargeSlots = 5;
inline constexpr int kHydrogenSlots = 5;
inline constexpr int kAtomFeatureDim = kElementSlots + kDegreeSlots + 1 + 1 + kChargeSlots + kHydrogenSlots;

/// Slot of `element` in the fixed element table; the last slot means "other".
int element_slot(std::string_view element);

/// One row per atom: element | degree 0..5 | aromatic | in ring | charge -2..2 | H 0..4.
RowMatrix atom_feature_matrix(const MolGraph& mol);

}  // namespace adaptmol
