// SPDX-FileCopyrightText: Copyright (c) 2026 The adaptmol authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "adaptmol/autodiff.hpp"
#include "adaptmol/errors.hpp"

namespace adaptmol::ad {

/// Builds a scalar loss on `tape` from leaves bound to the given inputs.
template <typename Scalar>
using MultiFunction =
    std::function<Tensor<Scalar>(Tape<Scalar>& tape, std::span<const Tensor<Scalar>> inputs)>;

template <typename Scalar>
using UnaryFunction = std::function<Tensor<Scalar>(Tape<Scalar>& tape, const Tensor<Scalar>& x)>;

/// Max over every coordinate of every input of
/// |analytic - central difference| / max(1, |analytic|).
template <typename Scalar>
Scalar finite_difference_check(const MultiFunction<Scalar>& f, std::vector<Matrix<Scalar>> inputs, Scalar step) {
  if (!(step > Scalar(0))) {
    throw ContractError("finite difference step must be positive");
  }
  auto evaluate = [&f](const std::vector<Matrix<Scalar>>& values) {
    Tape<Scalar> tape;
    std::vector<Tensor<Scalar>> leaves;
    leaves.reserve(values.size());
    for (const auto& v : values) leaves.push_back(tape.constant(v));
    const Scalar out = f(tape, leaves).item();
    if (!std::isfinite(out)) {
      throw EvaluationError("function value is not finite");
    }
    return out;
  };

  std::vector<Matrix<Scalar>> analytic;
  {
    Tape<Scalar> tape;
    std::vector<Tensor<Scalar>> leaves;
    for (const auto& v : inputs) leaves.push_back(tape.variable(v));
    const auto loss = f(tape, leaves);
    if (!std::isfinite(loss.item())) {
      throw EvaluationError("function value is not finite");
    }
    const auto grads = tape.backward(loss);
    for (const auto& leaf : leaves) analytic.push_back(grads.of(leaf));
  }

  Scalar worst = 0;
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    for (Eigen::Index i = 0; i < inputs[k].size(); ++i) {
      Scalar& slot = inputs[k].data()[i];
      const Scalar saved = slot;
      slot = saved + step;
      const Scalar up = evaluate(inputs);
      slot = saved - step;
      const Scalar down = evaluate(inputs);
      slot = saved;
      const Scalar numeric = (up - down) / (Scalar(2) * step);
      const Scalar a = analytic[k].data()[i];
      worst = std::max(worst, std::abs(a - numeric) / std::max(Scalar(1), std::abs(a)));
    }
  }
  return worst;
}

template <typename Scalar>
Scalar finite_difference_check(const UnaryFunction<Scalar>& f, const Matrix<Scalar>& x, Scalar step) {
  MultiFunction<Scalar> wrapped = [&f](Tape<Scalar>& tape, std::span<const Tensor<Scalar>> in) {
    return f(tape, in[0]);
  };
  return finite_difference_check<Scalar>(wrapped, std::vector<Matrix<Scalar>>{x}, step);
}

}  // namespace adaptmol::ad
