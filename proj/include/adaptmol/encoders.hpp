// SPDX-FileCopyrightText: Copyright (c) 2026 The adaptmol authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

//! @file The two modality encoders: a GIN over the molecular graph and a
//! frozen hashed n-gram featurizer over SMILES tokens reduced by PCA.

#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "adaptmol/params.hpp"
#include "adaptmol/pca.hpp"
#include "adaptmol/smiles.hpp"

namespace adaptmol {

struct GinLayer {
  RowMatrix weight1, bias1, weight2, bias2;
  RowMatrix epsilon;  // 1 x 1
};

struct GinParams {
  RowMatrix input_weight;  // kAtomFeatureDim x graph_dim
  RowMatrix input_bias;    // 1 x graph_dim
  std::vector<GinLayer> layers;

  static GinParams initialize(int graph_dim, int num_layers, Rng& rng);

  int graph_dim() const { return static_cast<int>(input_weight.cols()); }

  template <typename F>
  void for_each(F&& f) {
    f("gin.input_weight", input_weight);
    f("gin.input_bias", input_bias);
    for (std::size_t l = 0; l < layers.size(); ++l) {
      const std::string p = "gin.layer" + std::to_string(l) + ".";
      f(p + "weight1", layers[l].weight1);
      f(p + "bias1", layers[l].bias1);
      f(p + "weight2", layers[l].weight2);
      f(p + "bias2", layers[l].bias2);
      f(p + "epsilon", layers[l].epsilon);
    }
  }
};

/// Constant per-molecule inputs of the graph encoder.
struct GraphInputs {
  RowMatrix features;   // N x kAtomFeatureDim
  RowMatrix adjacency;  // N x N, symmetric 0/1

  static GraphInputs from(const MolGraph& mol);
};

/// Node embeddings (N x graph_dim). Each layer computes
/// h <- MLP((1 + eps) h + sum of neighbor h), starting from projected atom features.
Tensor gin_encode(ParamBinder& bind, const GinParams& params, const GraphInputs& inputs);

/// FNV-1a 64 over the n-gram's tokens joined by 0x1f, prefixed by the order
/// digit; the offset basis is xored with `seed`.
std::uint64_t ngram_hash(std::span<const std::string> ngram, std::uint64_t seed);

inline constexpr std::uint64_t kDefaultHashSeed = 0x5eed0adaULL;

/// Counts of token 1-, 2- and 3-grams hashed into `dim` buckets, L2-normalized.
Vector raw_sequence_features(std::span<const std::string> tokens, int dim, std::uint64_t seed = kDefaultHashSeed);

/// Raw feature vectors keyed by SMILES, read from `<smiles>\t<v1,v2,...>` lines.
using ExternalFeatures = std::unordered_map<std::string, Vector>;
ExternalFeatures load_external_features(const std::string& path, int dim);

/// Frozen sequence pathway: raw features then a fitted PCA projection.
class SeqFeaturizer {
 public:
  SeqFeaturizer() = default;
  SeqFeaturizer(int hash_dim, int seq_dim, std::uint64_t seed = kDefaultHashSeed)
      : hash_dim_(hash_dim), seq_dim_(seq_dim), seed_(seed) {}

  int hash_dim() const { return hash_dim_; }
  int seq_dim() const { return seq_dim_; }
  std::uint64_t seed() const { return seed_; }
  const PcaModel<double>& pca() const { return pca_; }
  bool fitted() const { return pca_.fitted(); }

  void set_external(std::shared_ptr<const ExternalFeatures> external) { external_ = std::move(external); }
  void set_pca(PcaModel<double> pca) { pca_ = std::move(pca); }

  /// Raw vector for a token sequence. `smiles` names a whole molecule whose
  /// external vector, when supplied, replaces the hashed one.
  Vector raw(std::span<const std::string> tokens, std::string_view smiles = {}) const;

  /// Fits the PCA state on raw vectors of the given molecules.
  void fit(std::span<const MolGraph> molecules);
  void fit(std::span<const std::shared_ptr<const MolGraph>> molecules);

  /// a = projection^T (raw - mean), length seq_dim.
  Vector encode(std::span<const std::string> tokens, std::string_view smiles = {}) const;

 private:
  void fit_pointers(const std::vector<const MolGraph*>& molecules);

  int hash_dim_ = 2048;
  int seq_dim_ = 32;
  std::uint64_t seed_ = kDefaultHashSeed;
  PcaModel<double> pca_;
  std::shared_ptr<const ExternalFeatures> external_;
};

/// Sequence vector of a whole SMILES string.
Vector encode_sequence(std::string_view smiles, const SeqFeaturizer& featurizer);

}  // namespace adaptmol
