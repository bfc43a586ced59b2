// SPDX-FileCopyrightText: Copyright (c) 2026 The adaptmol authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "adaptmol/protonet.hpp"

#include <limits>

#include "adaptmol/errors.hpp"

namespace adaptmol {

namespace {

Tape& tape_of(std::span<const Tensor> embeddings) {
  if (embeddings.empty()) {
    throw ContractError("prototype of an empty class");
  }
  return *embeddings.front().tape();
}

}  // namespace

Tensor prototype_weights(std::span<const Tensor> embeddings) {
  Tape& tape = tape_of(embeddings);
  const std::size_t k = embeddings.size();
  if (k == 1) {
    return tape.scalar(1.0);
  }
  std::vector<Tensor> weights;
  weights.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    Tensor distance = tape.scalar(0.0);
    for (std::size_t j = 0; j < k; ++j) {
      if (j == i) continue;  // the self term is zero
      const Tensor diff = ad::subtract(embeddings[i], embeddings[j]);
      distance = ad::add(distance, ad::sqrt(ad::dot(diff, diff)));
    }
    const Tensor floored = ad::clamp(distance, kDistanceFloor, std::numeric_limits<double>::infinity());
    weights.push_back(ad::reciprocal(floored));
  }
  const Tensor row = ad::concat_cols<double>(weights);
  return ad::scale(ad::reciprocal(ad::sum(row)), row);
}

Tensor prototype(std::span<const Tensor> embeddings) {
  if (embeddings.empty()) {
    throw ContractError("prototype of an empty class");
  }
  if (embeddings.size() == 1) {
    return embeddings.front();
  }
  return ad::matmul(prototype_weights(embeddings), ad::concat_rows(embeddings));
}

Prototypes build_prototypes(std::span<const Tensor> positives, std::span<const Tensor> negatives) {
  return Prototypes{prototype(positives), prototype(negatives)};
}

Tensor probability_from_scores(const Tensor& positive_score, const Tensor& negative_score) {
  const Tensor scores = ad::concat_cols(positive_score, negative_score);
  return ad::slice_cols(ad::softmax_rows(scores), 0, 1);
}

Tensor predict(const Tensor& query, const Prototypes& protos) {
  return probability_from_scores(ad::dot(query, protos.positive), ad::dot(query, protos.negative));
}

Tensor episode_loss(std::span<const Tensor> probabilities, std::span<const int> labels) {
  if (probabilities.empty()) {
    throw ContractError("episode loss needs at least one query");
  }
  if (probabilities.size() != labels.size()) {
    throw DimensionError("probabilities and labels differ in length");
  }
  Tape& tape = *probabilities.front().tape();
  Tensor total = tape.scalar(0.0);
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    const Tensor p = ad::clamp(probabilities[i], kProbabilityClamp, 1.0 - kProbabilityClamp);
    const Tensor term = labels[i] == 1 ? ad::log(p) : ad::log(ad::shift(ad::scale(p, -1.0), 1.0));
    total = ad::subtract(total, term);
  }
  return ad::scale(total, 1.0 / static_cast<double>(probabilities.size()));
}

}  // namespace adaptmol
