// SPDX-FileCopyrightText: Copyright (c) 2026 The adaptmol authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <unordered_map>

#include "adaptmol/random.hpp"
#include "adaptmol/types.hpp"

namespace adaptmol {

/// Places parameter matrices on a tape, once per matrix per tape.
///
/// With `trainable` the leaves require gradients and gradient() reads them
/// back after Tape::backward; otherwise they are constants.
class ParamBinder {
 public:
  ParamBinder(Tape& tape, bool trainable) : tape_(&tape), trainable_(trainable) {}

  Tensor operator()(const RowMatrix& param) {
    auto it = bound_.find(&param);
    if (it != bound_.end()) return it->second;
    Tensor t = trainable_ ? tape_->variable(param) : tape_->constant(param);
    bound_.emplace(&param, t);
    return t;
  }

  Tape& tape() const { return *tape_; }
  bool trainable() const { return trainable_; }

  /// Zeros when `param` was never bound on this tape.
  RowMatrix gradient(const Gradients& grads, const RowMatrix& param) const {
    auto it = bound_.find(&param);
    if (it == bound_.end()) return RowMatrix::Zero(param.rows(), param.cols());
    return grads.of(it->second);
  }

 private:
  Tape* tape_;
  bool trainable_;
  std::unordered_map<const RowMatrix*, Tensor> bound_;
};

/// Uniform(-s, s) with s = sqrt(6 / (fan_in + fan_out)).
inline RowMatrix glorot_uniform(Eigen::Index fan_in, Eigen::Index fan_out, Rng& rng) {
  const double s = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  RowMatrix w(fan_in, fan_out);
  for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = rng.uniform(-s, s);
  return w;
}

/// x W + 1 b, the bias row repeated over the rows of x.
inline Tensor affine(const Tensor& x, const Tensor& weight, const Tensor& bias) {
  Tape& tape = *x.tape();
  const Tensor ones = tape.constant(RowMatrix::Ones(x.rows(), 1));
  return ad::add(ad::matmul(x, weight), ad::matmul(ones, bias));
}

}  // namespace adaptmol
