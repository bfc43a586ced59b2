// SPDX-FileCopyrightText: Copyright (c) 2026 The adaptmol authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "adaptmol/synthetic.hpp"

#include <array>
#include <set>

#include "adaptmol/errors.hpp"

namespace adaptmol {

namespace {

// Each fragment bonds to the previous one through its first atom and offers
// its last written atom to the next one.
constexpr std::array kNeutral = {"C",          "CC",          "C(C)",       "C(CC)",     "c1ccccc1",
                                 "C1CCCCC1",   "c1ccc(F)cc1", "c1ccc(Cl)cc1", "C(F)(F)", "S",
                                 "c1ccncc1",   "C1CCOCC1",    "C=C",        "CC(C)C",    "c1ccc(C)cc1",
                                 "C1CCNCC1",   "Cc1ccsc1",    "C(Br)"};
constexpr std::array kDecoy = {"C(=O)C", "C(=O)OC", "NC", "N(C)C", "CC(=O)C", "OC(=O)C", "CS(=O)(=O)C", "C(O)C",
                               "CN"};
constexpr std::array kMotif = {"C(=O)N", "NC(=O)", "C(=O)NC", "NC(=O)C", "C(=O)N(C)", "NC(=O)c1ccccc1"};
constexpr std::array kEnds = {"C", "F", "Cl", "O", "CC", "C(=O)O", "C#N"};

template <std::size_t N>
const char* pick(const std::array<const char*, N>& items, Rng& rng) {
  return items[rng.below(N)];
}

}  // namespace

std::vector<std::vector<int>> amide_motifs(const MolGraph& mol) {
  std::vector<std::vector<int>> out;
  for (const auto& b : mol.bonds()) {
    for (const int n : {b.begin, b.end}) {
      const int c = b.other(n);
      if (mol.atoms()[static_cast<std::size_t>(n)].element != "N" ||
          mol.atoms()[static_cast<std::size_t>(c)].element != "C") {
        continue;
      }
      for (int bi : mol.incident_bonds(c)) {
        const auto& cb = mol.bonds()[static_cast<std::size_t>(bi)];
        const int o = cb.other(c);
        if (cb.order == 2 && !cb.aromatic && mol.atoms()[static_cast<std::size_t>(o)].element == "O") {
          out.push_back({n, c, o});
        }
      }
    }
  }
  return out;
}

bool has_amide_motif(const MolGraph& mol) { return !amide_motifs(mol).empty(); }

bool has_motif_lookalike(const MolGraph& mol) {
  for (int n = 0; n < mol.num_atoms(); ++n) {
    if (mol.atoms()[static_cast<std::size_t>(n)].element != "N") continue;
    for (int nb : mol.incident_bonds(n)) {
      const int c = mol.bonds()[static_cast<std::size_t>(nb)].other(n);
      if (mol.atoms()[static_cast<std::size_t>(c)].element != "C") continue;
      for (int cb : mol.incident_bonds(c)) {
        const int o = mol.bonds()[static_cast<std::size_t>(cb)].other(c);
        if (mol.atoms()[static_cast<std::size_t>(o)].element == "O" && mol.degree(o) == 1) return true;
      }
    }
  }
  return false;
}

std::string random_motif_smiles(bool positive, const SyntheticConfig& cfg, Rng& rng) {
  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::vector<std::string> parts;
    const std::size_t middle = 3 + rng.below(5);
    for (std::size_t i = 0; i < middle; ++i) {
      parts.emplace_back(rng.bernoulli(0.3) ? pick(kDecoy, rng) : pick(kNeutral, rng));
    }
    if (positive) {
      parts.insert(parts.begin() + static_cast<std::ptrdiff_t>(rng.below(parts.size() + 1)), pick(kMotif, rng));
    }
    std::string smiles = pick(kNeutral, rng);
    for (const auto& p : parts) smiles += p;
    smiles += pick(kEnds, rng);

    const MolGraph mol = parse_smiles(smiles);
    if (mol.num_atoms() < cfg.min_atoms || mol.num_atoms() > cfg.max_atoms) continue;
    if (has_amide_motif(mol) != positive) continue;
    if (!positive && has_motif_lookalike(mol)) continue;
    return smiles;
  }
  throw SamplingError("could not generate a synthetic molecule within the atom-count window");
}

SyntheticData make_synthetic(const SyntheticConfig& cfg) {
  if (cfg.molecules < 1 || cfg.train_tasks < 1 || cfg.test_tasks < 1) {
    throw ConfigError("synthetic data needs molecules and at least one train and one test task");
  }
  if (cfg.min_atoms < 1 || cfg.max_atoms < cfg.min_atoms) {
    throw ConfigError("invalid synthetic atom-count window");
  }
  Rng rng(derive_seed(cfg.seed, 0x73796e7468ULL, 0));
  const int tasks = cfg.train_tasks + cfg.test_tasks;
  SyntheticData out;
  out.csv = "smiles";
  for (int t = 0; t < tasks; ++t) out.csv += ",task_t" + std::to_string(t);
  out.csv += '\n';

  std::set<std::string> seen;
  while (static_cast<int>(out.truth.size()) < cfg.molecules) {
    const bool positive = rng.bernoulli(0.5);
    const std::string smiles = random_motif_smiles(positive, cfg, rng);
    if (!seen.insert(smiles).second) continue;
    out.truth.push_back(positive ? 1 : 0);
    out.csv += smiles;
    for (int t = 0; t < tasks; ++t) {
      out.csv += ',';
      if (!rng.bernoulli(cfg.label_rate)) continue;
      int label = positive ? 1 : 0;
      if (t < cfg.train_tasks && rng.bernoulli(cfg.train_noise)) label = 1 - label;
      out.csv += static_cast<char>('0' + label);
    }
    out.csv += '\n';
  }

  out.split = "train: ";
  for (int t = 0; t < cfg.train_tasks; ++t) out.split += (t ? ",t" : "t") + std::to_string(t);
  out.split += "\ntest: ";
  for (int t = cfg.train_tasks; t < tasks; ++t) out.split += (t > cfg.train_tasks ? ",t" : "t") + std::to_string(t);
  out.split += '\n';
  return out;
}

}  // namespace adaptmol
