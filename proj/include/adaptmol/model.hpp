// SPDX-FileCopyrightText: Copyright (c) 2026 The adaptmol authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

//! @file The full molecule encoder (GIN + frozen sequence pathway + AMA) and
//! the episode forward pass built on it.

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "adaptmol/ama.hpp"
#include "adaptmol/encoders.hpp"
#include "adaptmol/protonet.hpp"

namespace adaptmol {

struct ModelConfig {
  int graph_dim = 64;
  int gin_layers = 3;
  int hash_dim = 2048;
  int seq_dim = 32;
  std::uint64_t hash_seed = kDefaultHashSeed;
  AmaConfig ama;

  /// Throws ConfigError on non-positive sizes or an invalid AMA setting.
  void validate() const;
};

/// Constant inputs of one molecule: graph tensors and its sequence vector.
struct EncodedMolecule {
  GraphInputs graph;
  RowMatrix sequence;  // 1 x seq_dim
};

class Model {
 public:
  ModelConfig config;
  GinParams gin;
  AmaParams ama;
  SeqFeaturizer featurizer;

  /// Fresh parameters drawn from `seed`; the featurizer is left unfitted.
  static Model initialize(const ModelConfig& config, std::uint64_t seed);

  template <typename F>
  void for_each_parameter(F&& f) {
    gin.for_each(f);
    ama.for_each(f);
  }
  template <typename F>
  void for_each_parameter(F&& f) const {
    const_cast<Model*>(this)->for_each_parameter([&](const std::string& name, RowMatrix& p) {
      f(name, static_cast<const RowMatrix&>(p));
    });
  }

  /// Inputs of a whole molecule (external sequence features apply here).
  EncodedMolecule encode_inputs(const MolGraph& mol) const;

  /// Inputs of a graph whose sequence features come from `tokens`.
  EncodedMolecule encode_inputs(const MolGraph& mol, std::span<const std::string> tokens,
                                std::string_view smiles = {}) const;

  /// Molecule representation z (1 x graph_dim) on the binder's tape.
  Tensor embed(ParamBinder& bind, const EncodedMolecule& inputs) const;
};

/// Positive-class probability of every query molecule given a labeled support set.
std::vector<Tensor> episode_probabilities(ParamBinder& bind, const Model& model,
                                          std::span<const EncodedMolecule* const> support,
                                          std::span<const int> support_labels,
                                          std::span<const EncodedMolecule* const> query);

/// Prototypes of a support set as plain values, for repeated scoring.
struct FixedPrototypes {
  RowMatrix positive;
  RowMatrix negative;
};

FixedPrototypes compute_prototypes(const Model& model, std::span<const EncodedMolecule* const> support,
                                   std::span<const int> support_labels);

/// Positive-class probability of one molecule against fixed prototypes.
double predict_probability(const Model& model, const FixedPrototypes& protos, const EncodedMolecule& query);

}  // namespace adaptmol
