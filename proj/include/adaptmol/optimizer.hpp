// SPDX-FileCopyrightText: Copyright (c) 2026 The adaptmol authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <string>
#include <vector>

#include "adaptmol/types.hpp"

namespace adaptmol {

/// Updates parameters in place from gradients given in the same order.
class Optimizer {
 public:
  virtual ~Optimizer() = default;
  virtual void step(const std::vector<RowMatrix*>& params, const std::vector<RowMatrix>& grads) = 0;
};

class Sgd final : public Optimizer {
 public:
  explicit Sgd(double learning_rate) : lr_(learning_rate) {}
  void step(const std::vector<RowMatrix*>& params, const std::vector<RowMatrix>& grads) override;

 private:
  double lr_;
};

class Adam final : public Optimizer {
 public:
  explicit Adam(double learning_rate, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8)
      : lr_(learning_rate), beta1_(beta1), beta2_(beta2), eps_(eps) {}
  void step(const std::vector<RowMatrix*>& params, const std::vector<RowMatrix>& grads) override;

 private:
  double lr_, beta1_, beta2_, eps_;
  long steps_ = 0;
  std::vector<RowMatrix> m_, v_;
};

/// "sgd" or "adam"; anything else is a ConfigError.
std::unique_ptr<Optimizer> make_optimizer(const std::string& name, double learning_rate);

}  // namespace adaptmol
