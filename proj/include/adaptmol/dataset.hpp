// SPDX-FileCopyrightText: Copyright (c) 2026 The adaptmol authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

//! @file Multi-task binary datasets, task splits and 2-way K-shot episodes.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "adaptmol/random.hpp"
#include "adaptmol/smiles.hpp"

namespace adaptmol {

inline constexpr std::int8_t kMissingLabel = -1;

struct Dataset {
  std::vector<std::shared_ptr<const MolGraph>> molecules;
  std::vector<std::string> task_names;
  std::vector<std::vector<std::int8_t>> labels;  // [molecule][task]: 0, 1 or kMissingLabel
  std::size_t dropped = 0;                        // rows whose SMILES failed to parse

  std::size_t num_molecules() const { return molecules.size(); }
  std::size_t num_tasks() const { return task_names.size(); }
  const std::string& smiles(std::size_t molecule) const { return molecules.at(molecule)->source_smiles(); }

  /// Throws ConfigError for an unknown name.
  int task_index(const std::string& name) const;

  /// Molecules with the given label for `task`, ascending.
  std::vector<int> molecules_with_label(int task, int label) const;
};

/// CSV with header `smiles,task_<name>,...`; an empty cell is a missing label.
/// Unparsable SMILES are dropped, counted in Dataset::dropped and reported to `log`.
Dataset read_dataset(std::istream& in, std::ostream* log = nullptr);
Dataset load_dataset(const std::string& path, std::ostream* log = nullptr);

struct TaskSplit {
  std::vector<int> train;
  std::vector<int> test;
};

/// Two lines `train: a,b` and `test: c` naming tasks of `dataset`.
TaskSplit read_split(std::istream& in, const Dataset& dataset);
TaskSplit load_split(const std::string& path, const Dataset& dataset);

struct Episode {
  int task = -1;
  std::vector<int> support;  // molecule indices, K positives then K negatives
  std::vector<int> support_labels;
  std::vector<int> query;
  std::vector<int> query_labels;
};

/// True when `task` has at least K molecules per class and one more labeled molecule.
bool can_sample(const Dataset& dataset, int task, int shots);

/// Support: K per class drawn uniformly without replacement. Query: up to M of
/// the remaining labeled molecules, as class-balanced as availability allows,
/// in shuffled order. Throws SamplingError naming the task when infeasible.
Episode sample_episode(const Dataset& dataset, int task, int shots, int query_size, Rng& rng);

}  // namespace adaptmol
