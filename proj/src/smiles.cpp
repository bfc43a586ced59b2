// SPDX-FileCopyrightText: Copyright (c) 2026 The adaptmol authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "adaptmol/smiles.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <deque>
#include <map>
#include <set>
#include <utility>

#include "adaptmol/errors.hpp"

namespace adaptmol {

namespace {

constexpr std::array<std::string_view, 118> kPeriodicTable = {
    "H",  "He", "Li", "Be", "B",  "C",  "N",  "O",  "F",  "Ne", "Na", "Mg", "Al", "Si", "P",  "S",  "Cl",
    "Ar", "K",  "Ca", "Sc", "Ti", "V",  "Cr", "Mn", "Fe", "Co", "Ni", "Cu", "Zn", "Ga", "Ge", "As", "Se",
    "Br", "Kr", "Rb", "Sr", "Y",  "Zr", "Nb", "Mo", "Tc", "Ru", "Rh", "Pd", "Ag", "Cd", "In", "Sn", "Sb",
    "Te", "I",  "Xe", "Cs", "Ba", "La", "Ce", "Pr", "Nd", "Pm", "Sm", "Eu", "Gd", "Tb", "Dy", "Ho", "Er",
    "Tm", "Yb", "Lu", "Hf", "Ta", "W",  "Re", "Os", "Ir", "Pt", "Au", "Hg", "Tl", "Pb", "Bi", "Po", "At",
    "Rn", "Fr", "Ra", "Ac", "Th", "Pa", "U",  "Np", "Pu", "Am", "Cm", "Bk", "Cf", "Es", "Fm", "Md", "No",
    "Lr", "Rf", "Db", "Sg", "Bh", "Hs", "Mt", "Ds", "Rg", "Cn", "Nh", "Fl", "Mc", "Lv", "Ts", "Og"};

constexpr std::array<std::string_view, kElementSlots - 1> kElementTable = {
    "C", "N", "O", "S", "F", "Cl", "Br", "I", "P", "B", "Si", "Se", "Na", "K", "H"};

bool is_element(std::string_view symbol) {
  return std::find(kPeriodicTable.begin(), kPeriodicTable.end(), symbol) != kPeriodicTable.end();
}

bool is_bond_symbol(char c) { return c == '-' || c == '=' || c == '#' || c == ':'; }

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  MolGraph run() {
    if (s_.empty()) {
      throw ParseError(0, "empty input");
    }
    while (pos_ < s_.size()) {
      const char c = s_[pos_];
      if (c == '(') {
        open_branch();
      } else if (c == ')') {
        close_branch();
      } else if (is_bond_symbol(c)) {
        bond_symbol();
      } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '%') {
        ring_closure();
      } else if (c == '[') {
        bracket_atom();
      } else if (c == '.') {
        throw ParseError(pos_, "disconnected structures ('.') are not supported");
      } else if (c == '/' || c == '\\' || c == '@') {
        throw ParseError(pos_, "stereochemistry is not supported");
      } else if (c == '*') {
        throw ParseError(pos_, "wildcard atoms are not supported");
      } else {
        organic_atom();
      }
    }
    finish();
    return MolGraph(std::move(atoms_), std::move(bonds_), std::string(s_), std::move(tokens_));
  }

 private:
  enum class Last { Start, Atom, Bond, Ring, Open, Close };

  struct Pending {
    char symbol;
    std::size_t pos;
    int token;
  };

  struct OpenRing {
    int atom;
    std::optional<Pending> bond;
    std::size_t pos;
    int token;
  };

  struct Branch {
    int atom;
    std::size_t pos;
    int token;
  };

  bool after_atom_like() const { return last_ == Last::Atom || last_ == Last::Ring || last_ == Last::Close; }

  int push_token(std::string text, TokenKind kind) {
    SmilesToken t;
    t.text = std::move(text);
    t.kind = kind;
    tokens_.push_back(std::move(t));
    return static_cast<int>(tokens_.size()) - 1;
  }

  void open_branch() {
    if (!after_atom_like()) {
      throw ParseError(pos_, "branch must follow an atom");
    }
    const int tok = push_token("(", TokenKind::BranchOpen);
    branches_.push_back({prev_atom_, pos_, tok});
    last_ = Last::Open;
    ++pos_;
  }

  void close_branch() {
    if (branches_.empty()) {
      throw ParseError(pos_, "unbalanced ')'");
    }
    if (!after_atom_like()) {
      throw ParseError(pos_, "empty or unterminated branch");
    }
    const Branch b = branches_.back();
    branches_.pop_back();
    const int tok = push_token(")", TokenKind::BranchClose);
    tokens_[tok].partner = b.token;
    tokens_[b.token].partner = tok;
    prev_atom_ = b.atom;
    last_ = Last::Close;
    ++pos_;
  }

  void bond_symbol() {
    if (!(after_atom_like() || last_ == Last::Open)) {
      throw ParseError(pos_, "bond symbol must follow an atom");
    }
    bond_follows_ = last_;
    const int tok = push_token(std::string(1, s_[pos_]), TokenKind::Bond);
    pending_ = Pending{s_[pos_], pos_, tok};
    last_ = Last::Bond;
    ++pos_;
  }

  void ring_closure() {
    const std::size_t start = pos_;
    int digit = 0;
    if (s_[pos_] == '%') {
      if (pos_ + 2 >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_ + 1])) ||
          !std::isdigit(static_cast<unsigned char>(s_[pos_ + 2]))) {
        throw ParseError(pos_, "'%' must be followed by two digits");
      }
      digit = (s_[pos_ + 1] - '0') * 10 + (s_[pos_ + 2] - '0');
      pos_ += 3;
    } else {
      digit = s_[pos_] - '0';
      pos_ += 1;
    }
    const bool ok = last_ == Last::Atom || last_ == Last::Ring ||
                    (last_ == Last::Bond && (bond_follows_ == Last::Atom || bond_follows_ == Last::Ring));
    if (!ok) {
      throw ParseError(start, "ring closure must follow an atom");
    }
    const int tok = push_token(std::string(s_.substr(start, pos_ - start)), TokenKind::RingClosure);
    auto it = open_rings_.find(digit);
    if (it == open_rings_.end()) {
      open_rings_[digit] = OpenRing{prev_atom_, pending_, start, tok};
    } else {
      const OpenRing open = it->second;
      open_rings_.erase(it);
      std::optional<Pending> symbol = pending_;
      if (open.bond && pending_ && open.bond->symbol != pending_->symbol) {
        throw ParseError(start, "conflicting bond symbols on ring closure");
      }
      if (!symbol) symbol = open.bond;
      const int bond = add_bond(open.atom, prev_atom_, symbol ? symbol->symbol : '\0', start);
      tokens_[open.token].bond = bond;
      tokens_[tok].bond = bond;
      if (open.bond) tokens_[open.bond->token].bond = bond;
      if (pending_) tokens_[pending_->token].bond = bond;
    }
    pending_.reset();
    last_ = Last::Ring;
  }

  void organic_atom() {
    const std::size_t start = pos_;
    const char c = s_[pos_];
    Atom atom;
    std::size_t len = 1;
    if (c == 'C' && pos_ + 1 < s_.size() && s_[pos_ + 1] == 'l') {
      atom.element = "Cl";
      len = 2;
    } else if (c == 'B' && pos_ + 1 < s_.size() && s_[pos_ + 1] == 'r') {
      atom.element = "Br";
      len = 2;
    } else if (std::string_view("BCNOPSFI").find(c) != std::string_view::npos) {
      atom.element = std::string(1, c);
    } else if (std::string_view("bcnops").find(c) != std::string_view::npos) {
      atom.element = std::string(1, static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
      atom.aromatic = true;
    } else {
      throw ParseError(start, std::string("unknown atom symbol '") + c + "'");
    }
    pos_ += len;
    add_atom(std::move(atom), start);
  }

  void bracket_atom() {
    const std::size_t start = pos_;
    std::size_t i = pos_ + 1;
    auto at = [&](std::size_t k) -> char { return k < s_.size() ? s_[k] : '\0'; };
    if (std::isdigit(static_cast<unsigned char>(at(i)))) {
      throw ParseError(i, "isotopes are not supported");
    }
    Atom atom;
    const char c = at(i);
    if (std::isupper(static_cast<unsigned char>(c))) {
      const char next = at(i + 1);
      std::string two{c, next};
      if (std::islower(static_cast<unsigned char>(next)) && is_element(two)) {
        atom.element = two;
        i += 2;
      } else if (is_element(std::string(1, c))) {
        atom.element = std::string(1, c);
        i += 1;
      } else {
        throw ParseError(i, "unknown atom symbol");
      }
    } else if (std::islower(static_cast<unsigned char>(c))) {
      const char next = at(i + 1);
      if ((c == 's' && next == 'e') || (c == 'a' && next == 's')) {
        atom.element = std::string{static_cast<char>(std::toupper(static_cast<unsigned char>(c))), next};
        i += 2;
      } else if (std::string_view("bcnops").find(c) != std::string_view::npos) {
        atom.element = std::string(1, static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
        i += 1;
      } else {
        throw ParseError(i, "unknown aromatic atom symbol");
      }
      atom.aromatic = true;
    } else {
      throw ParseError(i, "expected element symbol in bracket atom");
    }
    if (at(i) == '@') {
      throw ParseError(i, "stereochemistry is not supported");
    }
    if (at(i) == 'H') {
      ++i;
      atom.explicit_hydrogens = 1;
      if (std::isdigit(static_cast<unsigned char>(at(i)))) {
        atom.explicit_hydrogens = at(i) - '0';
        ++i;
      }
    }
    if (at(i) == '+' || at(i) == '-') {
      const char sign = at(i);
      int magnitude = 1;
      ++i;
      if (std::isdigit(static_cast<unsigned char>(at(i)))) {
        magnitude = at(i) - '0';
        ++i;
        if (std::isdigit(static_cast<unsigned char>(at(i)))) {
          magnitude = magnitude * 10 + (at(i) - '0');
          ++i;
        }
      } else {
        while (at(i) == sign) {
          ++magnitude;
          ++i;
        }
      }
      if (magnitude > 15) {
        throw ParseError(i, "charge magnitude above 15");
      }
      atom.formal_charge = sign == '+' ? magnitude : -magnitude;
    }
    if (at(i) == ':') {
      throw ParseError(i, "atom classes are not supported");
    }
    if (i >= s_.size()) {
      throw ParseError(start, "unclosed bracket atom");
    }
    if (at(i) != ']') {
      throw ParseError(i, "unexpected character in bracket atom");
    }
    pos_ = i + 1;
    add_atom(std::move(atom), start);
  }

  void add_atom(Atom atom, std::size_t start) {
    atoms_.push_back(std::move(atom));
    const int idx = static_cast<int>(atoms_.size()) - 1;
    const int tok = push_token(std::string(s_.substr(start, pos_ - start)), TokenKind::Atom);
    tokens_[tok].atom = idx;
    if (prev_atom_ >= 0) {
      const int bond = add_bond(prev_atom_, idx, pending_ ? pending_->symbol : '\0', start);
      if (pending_) tokens_[pending_->token].bond = bond;
    }
    pending_.reset();
    prev_atom_ = idx;
    last_ = Last::Atom;
  }

  int add_bond(int a, int b, char symbol, std::size_t where) {
    if (a == b) {
      throw ParseError(where, "ring closure onto the same atom");
    }
    Bond bond;
    bond.begin = std::min(a, b);
    bond.end = std::max(a, b);
    for (const auto& existing : bonds_) {
      if (existing.begin == bond.begin && existing.end == bond.end) {
        throw ParseError(where, "duplicate bond between the same atoms");
      }
    }
    switch (symbol) {
      case '=': bond.order = 2; break;
      case '#': bond.order = 3; break;
      case ':': bond.aromatic = true; break;
      case '-': break;
      default: bond.aromatic = atoms_[a].aromatic && atoms_[b].aromatic; break;
    }
    bonds_.push_back(bond);
    return static_cast<int>(bonds_.size()) - 1;
  }

  void finish() {
    if (last_ == Last::Bond) {
      throw ParseError(pending_ ? pending_->pos : s_.size(), "dangling bond symbol");
    }
    if (!branches_.empty()) {
      throw ParseError(branches_.back().pos, "unbalanced '('");
    }
    if (!open_rings_.empty()) {
      std::size_t first = s_.size();
      for (const auto& [digit, ring] : open_rings_) first = std::min(first, ring.pos);
      throw ParseError(first, "unmatched ring-closure digit");
    }
    if (atoms_.empty()) {
      throw ParseError(0, "no atoms");
    }
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  std::vector<Atom> atoms_;
  std::vector<Bond> bonds_;
  std::vector<SmilesToken> tokens_;
  int prev_atom_ = -1;
  Last last_ = Last::Start;
  Last bond_follows_ = Last::Start;
  std::optional<Pending> pending_;
  std::vector<Branch> branches_;
  std::map<int, OpenRing> open_rings_;
};

// Shortest cycle through each ring bond, restricted to ring bonds.
std::vector<Ring> smallest_rings(int num_atoms, const std::vector<Bond>& bonds,
                                 const std::vector<std::vector<int>>& incident) {
  std::vector<Ring> rings;
  std::set<std::vector<int>> seen;
  for (int e = 0; e < static_cast<int>(bonds.size()); ++e) {
    if (!bonds[e].in_ring) continue;
    const int source = bonds[e].begin;
    const int target = bonds[e].end;
    std::vector<int> via(num_atoms, -1);
    std::vector<bool> visited(num_atoms, false);
    std::deque<int> queue{source};
    visited[source] = true;
    while (!queue.empty() && !visited[target]) {
      const int u = queue.front();
      queue.pop_front();
      for (int b : incident[u]) {
        if (b == e || !bonds[b].in_ring) continue;
        const int w = bonds[b].other(u);
        if (visited[w]) continue;
        visited[w] = true;
        via[w] = b;
        queue.push_back(w);
      }
    }
    if (!visited[target]) continue;
    Ring ring;
    ring.bonds.push_back(e);
    for (int v = target; v != source;) {
      ring.atoms.push_back(v);
      ring.bonds.push_back(via[v]);
      v = bonds[via[v]].other(v);
    }
    ring.atoms.push_back(source);
    std::sort(ring.atoms.begin(), ring.atoms.end());
    std::sort(ring.bonds.begin(), ring.bonds.end());
    if (seen.insert(ring.bonds).second) {
      rings.push_back(std::move(ring));
    }
  }
  std::sort(rings.begin(), rings.end(), [](const Ring& a, const Ring& b) {
    if (a.atoms.size() != b.atoms.size()) return a.atoms.size() < b.atoms.size();
    return a.bonds < b.bonds;
  });
  return rings;
}

}  // namespace

std::vector<bool> ring_bonds(int num_atoms, const std::vector<Bond>& bonds) {
  std::vector<std::vector<int>> incident(num_atoms);
  for (int b = 0; b < static_cast<int>(bonds.size()); ++b) {
    incident[bonds[b].begin].push_back(b);
    incident[bonds[b].end].push_back(b);
  }
  // Iterative DFS; a tree edge (p, v) is a bridge iff low[v] > disc[p].
  std::vector<int> disc(num_atoms, -1), low(num_atoms, 0);
  std::vector<bool> bridge(bonds.size(), false);
  int clock = 0;
  struct Frame {
    int atom;
    int via;
    std::size_t next;
  };
  for (int root = 0; root < num_atoms; ++root) {
    if (disc[root] >= 0) continue;
    std::vector<Frame> stack{{root, -1, 0}};
    disc[root] = low[root] = clock++;
    while (!stack.empty()) {
      Frame& f = stack.back();
      if (f.next < incident[f.atom].size()) {
        const int b = incident[f.atom][f.next++];
        if (b == f.via) continue;
        const int w = bonds[b].other(f.atom);
        if (disc[w] < 0) {
          disc[w] = low[w] = clock++;
          stack.push_back({w, b, 0});
        } else {
          low[f.atom] = std::min(low[f.atom], disc[w]);
        }
      } else {
        const Frame done = f;
        stack.pop_back();
        if (!stack.empty()) {
          const int parent = stack.back().atom;
          low[parent] = std::min(low[parent], low[done.atom]);
          if (low[done.atom] > disc[parent]) bridge[done.via] = true;
        }
      }
    }
  }
  std::vector<bool> in_ring(bonds.size());
  for (std::size_t b = 0; b < bonds.size(); ++b) in_ring[b] = !bridge[b];
  return in_ring;
}

MolGraph::MolGraph(std::vector<Atom> atoms, std::vector<Bond> bonds, std::string source_smiles,
                   std::vector<SmilesToken> tokens)
    : atoms_(std::move(atoms)),
      bonds_(std::move(bonds)),
      incident_(atoms_.size()),
      source_smiles_(std::move(source_smiles)),
      tokens_(std::move(tokens)) {
  for (int b = 0; b < num_bonds(); ++b) {
    incident_[bonds_[b].begin].push_back(b);
    incident_[bonds_[b].end].push_back(b);
  }
  const auto in_ring = ring_bonds(num_atoms(), bonds_);
  for (auto& a : atoms_) a.in_ring = false;
  for (int b = 0; b < num_bonds(); ++b) {
    bonds_[b].in_ring = in_ring[b];
    if (in_ring[b]) {
      atoms_[bonds_[b].begin].in_ring = true;
      atoms_[bonds_[b].end].in_ring = true;
    }
  }
  rings_ = smallest_rings(num_atoms(), bonds_, incident_);
}

std::optional<int> MolGraph::bond_between(int a, int b) const {
  for (int bond : incident_.at(a)) {
    if (bonds_[bond].other(a) == b) return bond;
  }
  return std::nullopt;
}

std::vector<std::string> MolGraph::token_texts() const {
  std::vector<std::string> out;
  out.reserve(tokens_.size());
  for (const auto& t : tokens_) out.push_back(t.text);
  return out;
}

MolGraph parse_smiles(std::string_view text) {
  for (std::size_t i = 0; i < text.size(); ++i) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (c < 0x21 || c > 0x7e) {
      throw ParseError(i, "non-printable or non-ASCII character");
    }
  }
  return Parser(text).run();
}

std::vector<std::string> tokenize(std::string_view text) { return parse_smiles(text).token_texts(); }

int element_slot(std::string_view element) {
  const auto it = std::find(kElementTable.begin(), kElementTable.end(), element);
  return it == kElementTable.end() ? kElementSlots - 1 : static_cast<int>(it - kElementTable.begin());
}

RowMatrix atom_feature_matrix(const MolGraph& mol) {
  RowMatrix x = RowMatrix::Zero(mol.num_atoms(), kAtomFeatureDim);
  for (int i = 0; i < mol.num_atoms(); ++i) {
    const Atom& a = mol.atoms()[i];
    int col = 0;
    x(i, col + element_slot(a.element)) = 1;
    col += kElementSlots;
    x(i, col + std::min(mol.degree(i), kDegreeSlots - 1)) = 1;
    col += kDegreeSlots;
    x(i, col++) = a.aromatic ? 1 : 0;
    x(i, col++) = a.in_ring ? 1 : 0;
    x(i, col + std::clamp(a.formal_charge, -2, 2) + 2) = 1;
    col += kChargeSlots;
    x(i, col + std::clamp(a.explicit_hydrogens, 0, kHydrogenSlots - 1)) = 1;
  }
  return x;
}

}  // namespace adaptmol
