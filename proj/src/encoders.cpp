// SPDX-FileCopyrightText: Copyright (c) 2026 The adaptmol authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "adaptmol/encoders.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "adaptmol/errors.hpp"

namespace adaptmol {

GinParams GinParams::initialize(int graph_dim, int num_layers, Rng& rng) {
  GinParams p;
  p.input_weight = glorot_uniform(kAtomFeatureDim, graph_dim, rng);
  p.input_bias = RowMatrix::Zero(1, graph_dim);
  for (int l = 0; l < num_layers; ++l) {
    GinLayer layer;
    layer.weight1 = glorot_uniform(graph_dim, graph_dim, rng);
    layer.bias1 = RowMatrix::Zero(1, graph_dim);
    layer.weight2 = glorot_uniform(graph_dim, graph_dim, rng);
    layer.bias2 = RowMatrix::Zero(1, graph_dim);
    layer.epsilon = RowMatrix::Zero(1, 1);
    p.layers.push_back(std::move(layer));
  }
  return p;
}

GraphInputs GraphInputs::from(const MolGraph& mol) {
  GraphInputs in;
  in.features = atom_feature_matrix(mol);
  in.adjacency = RowMatrix::Zero(mol.num_atoms(), mol.num_atoms());
  for (const auto& b : mol.bonds()) {
    in.adjacency(b.begin, b.end) = 1;
    in.adjacency(b.end, b.begin) = 1;
  }
  return in;
}

Tensor gin_encode(ParamBinder& bind, const GinParams& params, const GraphInputs& inputs) {
  if (inputs.features.rows() < 1) {
    throw ContractError("graph encoder needs at least one atom");
  }
  Tape& tape = bind.tape();
  const Tensor adjacency = tape.constant(inputs.adjacency);
  Tensor h = affine(tape.constant(inputs.features), bind(params.input_weight), bind(params.input_bias));
  for (const auto& layer : params.layers) {
    const Tensor self = ad::add(h, ad::scale(bind(layer.epsilon), h));
    const Tensor aggregated = ad::add(self, ad::matmul(adjacency, h));
    const Tensor hidden = ad::relu(affine(aggregated, bind(layer.weight1), bind(layer.bias1)));
    h = affine(hidden, bind(layer.weight2), bind(layer.bias2));
  }
  return h;
}

std::uint64_t ngram_hash(std::span<const std::string> ngram, std::uint64_t seed) {
  constexpr std::uint64_t kPrime = 0x100000001b3ULL;
  std::uint64_t h = 0xcbf29ce484222325ULL ^ seed;
  auto feed = [&h](unsigned char byte) {
    h ^= byte;
    h *= kPrime;
  };
  feed(static_cast<unsigned char>('0' + ngram.size()));
  for (const auto& tok : ngram) {
    feed(0x1f);
    for (char c : tok) feed(static_cast<unsigned char>(c));
  }
  return h;
}

Vector raw_sequence_features(std::span<const std::string> tokens, int dim, std::uint64_t seed) {
  if (tokens.empty()) {
    throw ContractError("sequence features need at least one token");
  }
  Vector v = Vector::Zero(dim);
  for (std::size_t order = 1; order <= 3; ++order) {
    for (std::size_t i = 0; i + order <= tokens.size(); ++i) {
      v(static_cast<Eigen::Index>(ngram_hash(tokens.subspan(i, order), seed) % static_cast<std::uint64_t>(dim))) += 1;
    }
  }
  return v / v.norm();
}

ExternalFeatures load_external_features(const std::string& path, int dim) {
  std::ifstream in(path);
  if (!in) {
    throw FormatError(0, "cannot open external features file " + path);
  }
  ExternalFeatures out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw FormatError(lineno, "expected <smiles>\\t<values>");
    }
    Vector v(dim);
    std::stringstream values(line.substr(tab + 1));
    std::string cell;
    int k = 0;
    while (std::getline(values, cell, ',')) {
      if (k >= dim) throw FormatError(lineno, "more than " + std::to_string(dim) + " values");
      double x = 0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), x);
      if (ec != std::errc() || ptr != cell.data() + cell.size()) {
        throw FormatError(lineno, "not a number: '" + cell + "'");
      }
      v(k++) = x;
    }
    if (k != dim) throw FormatError(lineno, "expected " + std::to_string(dim) + " values, got " + std::to_string(k));
    out[line.substr(0, tab)] = std::move(v);
  }
  return out;
}

Vector SeqFeaturizer::raw(std::span<const std::string> tokens, std::string_view smiles) const {
  if (external_ && !smiles.empty()) {
    auto it = external_->find(std::string(smiles));
    if (it != external_->end()) return it->second;
  }
  return raw_sequence_features(tokens, hash_dim_, seed_);
}

void SeqFeaturizer::fit(std::span<const MolGraph> molecules) {
  std::vector<const MolGraph*> ptrs;
  for (const auto& m : molecules) ptrs.push_back(&m);
  fit_pointers(ptrs);
}

void SeqFeaturizer::fit(std::span<const std::shared_ptr<const MolGraph>> molecules) {
  std::vector<const MolGraph*> ptrs;
  for (const auto& m : molecules) ptrs.push_back(m.get());
  fit_pointers(ptrs);
}

void SeqFeaturizer::fit_pointers(const std::vector<const MolGraph*>& molecules) {
  Eigen::MatrixXd samples(static_cast<Eigen::Index>(molecules.size()), hash_dim_);
  for (std::size_t i = 0; i < molecules.size(); ++i) {
    const auto tokens = molecules[i]->token_texts();
    samples.row(static_cast<Eigen::Index>(i)) = raw(tokens, molecules[i]->source_smiles()).transpose();
  }
  pca_ = pca_fit(samples, seq_dim_);
}

Vector SeqFeaturizer::encode(std::span<const std::string> tokens, std::string_view smiles) const {
  if (!fitted()) {
    throw ContractError("sequence featurizer has no fitted PCA state");
  }
  return pca_.project(raw(tokens, smiles));
}

Vector encode_sequence(std::string_view smiles, const SeqFeaturizer& featurizer) {
  const auto tokens = tokenize(smiles);
  return featurizer.encode(tokens, smiles);
}

}  // namespace adaptmol
