// SPDX-FileCopyrightText: Copyright (c) 2026 The adaptmol authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "adaptmol/model.hpp"

#include "adaptmol/errors.hpp"

namespace adaptmol {

void ModelConfig::validate() const {
  if (graph_dim < 1 || gin_layers < 0 || hash_dim < 1 || seq_dim < 1) {
    throw ConfigError("model dimensions must be positive");
  }
  ama.validate(graph_dim);
}

Model Model::initialize(const ModelConfig& config, std::uint64_t seed) {
  config.validate();
  Rng rng(derive_seed(seed, 0x6d6f64656cULL, 0));
  Model m;
  m.config = config;
  m.gin = GinParams::initialize(config.graph_dim, config.gin_layers, rng);
  m.ama = AmaParams::initialize(config.graph_dim, config.seq_dim, rng);
  m.featurizer = SeqFeaturizer(config.hash_dim, config.seq_dim, config.hash_seed);
  return m;
}

EncodedMolecule Model::encode_inputs(const MolGraph& mol) const {
  const auto tokens = mol.token_texts();
  return encode_inputs(mol, tokens, mol.source_smiles());
}

EncodedMolecule Model::encode_inputs(const MolGraph& mol, std::span<const std::string> tokens,
                                     std::string_view smiles) const {
  EncodedMolecule e;
  e.graph = GraphInputs::from(mol);
  e.sequence = featurizer.encode(tokens, smiles).transpose();
  return e;
}

Tensor Model::embed(ParamBinder& bind, const EncodedMolecule& inputs) const {
  const Tensor nodes = gin_encode(bind, gin, inputs.graph);
  const Tensor seq = bind.tape().constant(inputs.sequence);
  return ama_forward(bind, nodes, seq, ama, config.ama);
}

namespace {

Prototypes support_prototypes(ParamBinder& bind, const Model& model, std::span<const EncodedMolecule* const> support,
                              std::span<const int> labels) {
  if (support.size() != labels.size()) {
    throw DimensionError("support molecules and labels differ in length");
  }
  std::vector<Tensor> pos, neg;
  for (std::size_t i = 0; i < support.size(); ++i) {
    (labels[i] == 1 ? pos : neg).push_back(model.embed(bind, *support[i]));
  }
  if (pos.empty() || neg.empty()) {
    throw ContractError("support set needs both classes");
  }
  return build_prototypes(pos, neg);
}

}  // namespace

std::vector<Tensor> episode_probabilities(ParamBinder& bind, const Model& model,
                                          std::span<const EncodedMolecule* const> support,
                                          std::span<const int> support_labels,
                                          std::span<const EncodedMolecule* const> query) {
  const Prototypes protos = support_prototypes(bind, model, support, support_labels);
  std::vector<Tensor> out;
  out.reserve(query.size());
  for (const auto* q : query) out.push_back(predict(model.embed(bind, *q), protos));
  return out;
}

FixedPrototypes compute_prototypes(const Model& model, std::span<const EncodedMolecule* const> support,
                                   std::span<const int> support_labels) {
  Tape tape;
  ParamBinder bind(tape, false);
  const Prototypes protos = support_prototypes(bind, model, support, support_labels);
  return {protos.positive.value(), protos.negative.value()};
}

double predict_probability(const Model& model, const FixedPrototypes& protos, const EncodedMolecule& query) {
  Tape tape;
  ParamBinder bind(tape, false);
  const Prototypes p{tape.constant(protos.positive), tape.constant(protos.negative)};
  return predict(model.embed(bind, query), p).item();
}

}  // namespace adaptmol
