// SPDX-FileCopyrightText: Copyright (c) 2026 The adaptmol authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

//! @file Inverse-distance weighted prototypes, dot-product prediction and the
//! binary cross-entropy episode loss.

#pragma once

#include <span>
#include <vector>

#include "adaptmol/types.hpp"

namespace adaptmol {

inline constexpr double kDistanceFloor = 1e-9;
inline constexpr double kProbabilityClamp = 1e-12;

struct Prototypes {
  Tensor positive;
  Tensor negative;
};

/// Normalized weights avg_i (1 x K): weight_i = 1 / max(sum_j |z_i - z_j|, 1e-9).
/// A single embedding gets weight 1.
Tensor prototype_weights(std::span<const Tensor> embeddings);

/// sum_i avg_i z_i over 1 x d embeddings. Throws ContractError when empty.
Tensor prototype(std::span<const Tensor> embeddings);

Prototypes build_prototypes(std::span<const Tensor> positives, std::span<const Tensor> negatives);

/// exp(s+) / (exp(s+) + exp(s-)) with the max subtracted.
Tensor probability_from_scores(const Tensor& positive_score, const Tensor& negative_score);

/// Positive-class probability from dot-product similarity to each prototype.
Tensor predict(const Tensor& query, const Prototypes& protos);

/// Mean binary cross-entropy, probabilities clamped to [1e-12, 1 - 1e-12].
Tensor episode_loss(std::span<const Tensor> probabilities, std::span<const int> labels);

}  // namespace adaptmol
