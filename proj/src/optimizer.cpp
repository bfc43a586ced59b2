// SPDX-FileCopyrightText: Copyright (c) 2026 The adaptmol authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "adaptmol/optimizer.hpp"

#include <cmath>

#include "adaptmol/errors.hpp"

namespace adaptmol {

namespace {

void check(const std::vector<RowMatrix*>& params, const std::vector<RowMatrix>& grads) {
  if (params.size() != grads.size()) {
    throw DimensionError("parameter and gradient lists differ in length");
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (params[i]->rows() != grads[i].rows() || params[i]->cols() != grads[i].cols()) {
      throw DimensionError("gradient shape does not match its parameter");
    }
  }
}

}  // namespace

void Sgd::step(const std::vector<RowMatrix*>& params, const std::vector<RowMatrix>& grads) {
  check(params, grads);
  for (std::size_t i = 0; i < params.size(); ++i) *params[i] -= lr_ * grads[i];
}

void Adam::step(const std::vector<RowMatrix*>& params, const std::vector<RowMatrix>& grads) {
  check(params, grads);
  if (m_.empty()) {
    for (const auto& g : grads) {
      m_.push_back(RowMatrix::Zero(g.rows(), g.cols()));
      v_.push_back(RowMatrix::Zero(g.rows(), g.cols()));
    }
  }
  ++steps_;
  const double c1 = 1 - std::pow(beta1_, static_cast<double>(steps_));
  const double c2 = 1 - std::pow(beta2_, static_cast<double>(steps_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    m_[i] = beta1_ * m_[i] + (1 - beta1_) * grads[i];
    v_[i] = beta2_ * v_[i] + (1 - beta2_) * grads[i].cwiseAbs2();
    const RowMatrix mhat = m_[i] / c1;
    const RowMatrix vhat = v_[i] / c2;
    *params[i] -= (lr_ * mhat.array() / (vhat.array().sqrt() + eps_)).matrix();
  }
}

std::unique_ptr<Optimizer> make_optimizer(const std::string& name, double learning_rate) {
  if (name == "sgd") return std::make_unique<Sgd>(learning_rate);
  if (name == "adam") return std::make_unique<Adam>(learning_rate);
  throw ConfigError("unknown optimizer '" + name + "' (expected sgd or adam)");
}

}  // namespace adaptmol
