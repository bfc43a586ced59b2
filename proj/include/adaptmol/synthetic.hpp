// SPDX-FileCopyrightText: Copyright (c) 2026 The adaptmol authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

//! @file A generated multi-task dataset whose label is the presence of an
//! amide-like N-C(=O) motif, with the motif planted by construction.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "adaptmol/dataset.hpp"

namespace adaptmol {

/// Atoms (N, C, O) of every N bonded to a C that carries a double bond to O.
std::vector<std::vector<int>> amide_motifs(const MolGraph& mol);
bool has_amide_motif(const MolGraph& mol);

/// True when an N neighbors a C that has a one-neighbor O, whatever the bond
/// orders. Negatives with this pattern would differ from positives only in
/// bond order, which atom features do not see, so the generator avoids them.
bool has_motif_lookalike(const MolGraph& mol);

struct SyntheticConfig {
  int molecules = 500;
  int train_tasks = 8;
  int test_tasks = 2;
  double label_rate = 0.7;    // chance a (molecule, task) cell is labeled
  double train_noise = 0.05;  // label flip probability on train tasks
  int min_atoms = 12;
  int max_atoms = 30;
  std::uint64_t seed = 0;
};

/// A random chain-of-fragments SMILES with or without the motif.
std::string random_motif_smiles(bool positive, const SyntheticConfig& cfg, Rng& rng);

struct SyntheticData {
  std::string csv;         // dataset file contents
  std::string split;       // split file contents
  std::vector<int> truth;  // motif presence per molecule row
};

SyntheticData make_synthetic(const SyntheticConfig& cfg);

}  // namespace adaptmol
