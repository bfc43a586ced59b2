// SPDX-FileCopyrightText: Copyright (c) 2026 The adaptmol authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "adaptmol/ama.hpp"

#include <cmath>
#include <vector>

#include "adaptmol/errors.hpp"

namespace adaptmol {

void AmaConfig::validate(int graph_dim) const {
  if (!(beta_min < beta_max)) {
    throw ConfigError("beta_min must be below beta_max");
  }
  check_heads(graph_dim);
}

void AmaConfig::check_heads(int graph_dim) const {
  if (heads < 1) {
    throw ConfigError("attention needs at least one head");
  }
  if (graph_dim % heads != 0) {
    throw ConfigError("graph dimension " + std::to_string(graph_dim) + " is not divisible by " +
                      std::to_string(heads) + " heads");
  }
}

double beta(FusionLevel level, Modality modality, const AmaConfig& cfg) {
  const bool dominant = (level == FusionLevel::Local) == (modality == Modality::Graph);
  if (dominant) {
    return cfg.beta_min + (cfg.beta_max - cfg.beta_min) * cfg.k;
  }
  return cfg.beta_mid() - (cfg.beta_mid() - cfg.beta_min) * cfg.k;
}

AmaParams AmaParams::initialize(int graph_dim, int seq_dim, Rng& rng) {
  AmaParams p;
  const int width = graph_dim + seq_dim;
  p.query = glorot_uniform(width, graph_dim, rng);
  p.key = glorot_uniform(width, graph_dim, rng);
  p.value = glorot_uniform(width, graph_dim, rng);
  p.output = glorot_uniform(graph_dim, graph_dim, rng);
  p.global_weight = glorot_uniform(width, graph_dim, rng);
  p.global_bias = RowMatrix::Zero(1, graph_dim);
  return p;
}

namespace {

void check_shapes(const Tensor& nodes, const Tensor& seq, const AmaParams& params) {
  if (seq.rows() != 1) {
    throw DimensionError("sequence vector must be a single row");
  }
  if (nodes.rows() < 1) {
    throw ContractError("fusion needs at least one node");
  }
  if (nodes.cols() + seq.cols() != params.query.rows() || nodes.cols() != params.output.cols()) {
    throw DimensionError("fusion input widths (" + std::to_string(nodes.cols()) + " + " + std::to_string(seq.cols()) +
                         ") do not match attention parameters (" + std::to_string(params.query.rows()) + ")");
  }
}

// Rows [g_j * beta_g ; a * beta_s].
Tensor paired_rows(const Tensor& nodes, const Tensor& seq, FusionLevel level, const AmaConfig& cfg) {
  Tape& tape = *nodes.tape();
  const Tensor graph_part = ad::scale(nodes, beta(level, Modality::Graph, cfg));
  const Tensor repeated = ad::matmul(tape.constant(RowMatrix::Ones(nodes.rows(), 1)), seq);
  const Tensor seq_part = ad::scale(repeated, beta(level, Modality::Sequence, cfg));
  return ad::concat_cols(graph_part, seq_part);
}

}  // namespace

Tensor local_attention(ParamBinder& bind, const Tensor& nodes, const Tensor& seq, const AmaParams& params,
                       const AmaConfig& cfg) {
  check_shapes(nodes, seq, params);
  const auto dim = nodes.cols();
  cfg.check_heads(static_cast<int>(dim));
  const Tensor x = paired_rows(nodes, seq, FusionLevel::Local, cfg);
  const Tensor q = ad::matmul(x, bind(params.query));
  const Tensor k = ad::matmul(x, bind(params.key));
  const Tensor v = ad::matmul(x, bind(params.value));
  const auto head_dim = dim / cfg.heads;
  const double scale = 1.0 / std::sqrt(static_cast<double>(head_dim));
  std::vector<Tensor> heads;
  heads.reserve(static_cast<std::size_t>(cfg.heads));
  for (int h = 0; h < cfg.heads; ++h) {
    const auto start = h * head_dim;
    const Tensor qh = ad::slice_cols(q, start, head_dim);
    const Tensor kh = ad::slice_cols(k, start, head_dim);
    const Tensor vh = ad::slice_cols(v, start, head_dim);
    const Tensor weights = ad::softmax_rows(ad::scale(ad::matmul(qh, ad::transpose(kh)), scale));
    heads.push_back(ad::matmul(weights, vh));
  }
  const Tensor merged = ad::concat_cols<double>(heads);
  return ad::sigmoid(ad::matmul(merged, bind(params.output)));
}

Tensor local_fuse(ParamBinder& bind, const Tensor& nodes, const Tensor& seq, const AmaParams& params,
                  const AmaConfig& cfg) {
  return ad::multiply(local_attention(bind, nodes, seq, params, cfg), nodes);
}

Tensor global_attention(ParamBinder& bind, const Tensor& nodes, const Tensor& seq, const AmaParams& params,
                        const AmaConfig& cfg) {
  check_shapes(nodes, seq, params);
  const Tensor pooled = ad::mean_rows(nodes);
  const Tensor x = paired_rows(pooled, seq, FusionLevel::Global, cfg);
  return ad::sigmoid(affine(x, bind(params.global_weight), bind(params.global_bias)));
}

Tensor global_fuse(ParamBinder& bind, const Tensor& nodes, const Tensor& seq, const AmaParams& params,
                   const AmaConfig& cfg) {
  const Tensor attention = global_attention(bind, nodes, seq, params, cfg);
  return ad::multiply(attention, ad::mean_rows(nodes));
}

Tensor ama_forward(ParamBinder& bind, const Tensor& nodes, const Tensor& seq, const AmaParams& params,
                   const AmaConfig& cfg) {
  return global_fuse(bind, local_fuse(bind, nodes, seq, params, cfg), seq, params, cfg);
}

}  // namespace adaptmol
