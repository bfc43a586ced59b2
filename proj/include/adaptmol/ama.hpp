// SPDX-FileCopyrightText: Copyright (c) 2026 The adaptmol authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

//! @file Adaptive multi-level attention: gates node embeddings with a
//! multi-head self-attention over [graph ; sequence] rows, then gates the
//! pooled molecule vector with a fully connected layer over the same pairing.

#pragma once

#include <string>

#include "adaptmol/params.hpp"

namespace adaptmol {

enum class FusionLevel { Local, Global };
enum class Modality { Graph, Sequence };

struct AmaConfig {
  double beta_min = 0.9;
  double beta_max = 1.1;
  double k = 2.0;
  int heads = 2;

  double beta_mid() const { return 0.5 * (beta_min + beta_max); }

  /// Throws ConfigError on beta_min >= beta_max, heads < 1 or graph_dim % heads.
  void validate(int graph_dim) const;
  /// The head checks alone; the forward pass accepts beta_min == beta_max.
  void check_heads(int graph_dim) const;
};

/// Modality weight for a fusion level:
///   graph/local and sequence/global -> beta_min + (beta_max - beta_min) * k
///   graph/global and sequence/local -> beta_mid - (beta_mid - beta_min) * k
double beta(FusionLevel level, Modality modality, const AmaConfig& cfg);

struct AmaParams {
  RowMatrix query, key, value;  // (graph_dim + seq_dim) x graph_dim
  RowMatrix output;             // graph_dim x graph_dim
  RowMatrix global_weight;      // (graph_dim + seq_dim) x graph_dim
  RowMatrix global_bias;        // 1 x graph_dim

  static AmaParams initialize(int graph_dim, int seq_dim, Rng& rng);

  template <typename F>
  void for_each(F&& f) {
    f("ama.query", query);
    f("ama.key", key);
    f("ama.value", value);
    f("ama.output", output);
    f("ama.global_weight", global_weight);
    f("ama.global_bias", global_bias);
  }
};

/// sigmoid(MultiHead(X, X, X) W_o) with X = [G beta_g ; a beta_s] per row. N x graph_dim.
Tensor local_attention(ParamBinder& bind, const Tensor& nodes, const Tensor& seq, const AmaParams& params,
                       const AmaConfig& cfg);

/// local_attention(...) elementwise-times G.
Tensor local_fuse(ParamBinder& bind, const Tensor& nodes, const Tensor& seq, const AmaParams& params,
                  const AmaConfig& cfg);

/// sigmoid(f_global([mean(nodes) beta_g ; a beta_s])). 1 x graph_dim.
Tensor global_attention(ParamBinder& bind, const Tensor& nodes, const Tensor& seq, const AmaParams& params,
                        const AmaConfig& cfg);

/// global_attention(...) elementwise-times mean(nodes).
Tensor global_fuse(ParamBinder& bind, const Tensor& nodes, const Tensor& seq, const AmaParams& params,
                   const AmaConfig& cfg);

/// global_fuse(local_fuse(G, a), a): the molecule representation z (1 x graph_dim).
Tensor ama_forward(ParamBinder& bind, const Tensor& nodes, const Tensor& seq, const AmaParams& params,
                   const AmaConfig& cfg);

}  // namespace adaptmol
