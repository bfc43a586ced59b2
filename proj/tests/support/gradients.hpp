// SPDX-FileCopyrightText: Copyright (c) 2026 The adaptmol authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

//! Finite-difference checks over parameter matrices held outside the tape.

#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "adaptmol/params.hpp"

namespace adaptmol::testing {

/// Max over every parameter coordinate of |analytic - central difference| /
/// max(1, |analytic|). `visit(f)` calls f(name, RowMatrix&) per parameter and
/// `loss(bind)` builds a 1x1 tensor from parameters bound through `bind`.
template <typename Visit, typename Loss>
double parameter_gradient_error(Visit&& visit, Loss&& loss, double step = 1e-6) {
  std::vector<RowMatrix*> params;
  visit([&](const std::string&, RowMatrix& p) { params.push_back(&p); });

  Tape tape;
  ParamBinder bind(tape, true);
  const Tensor out = loss(bind);
  const Gradients grads = tape.backward(out);
  std::vector<RowMatrix> analytic;
  for (RowMatrix* p : params) analytic.push_back(bind.gradient(grads, *p));

  auto evaluate = [&] {
    Tape t;
    ParamBinder b(t, false);
    return loss(b).item();
  };
  double worst = 0.0;
  for (std::size_t k = 0; k < params.size(); ++k) {
    RowMatrix& p = *params[k];
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      const double original = p.data()[i];
      p.data()[i] = original + step;
      const double up = evaluate();
      p.data()[i] = original - step;
      const double down = evaluate();
      p.data()[i] = original;
      const double numeric = (up - down) / (2.0 * step);
      const double a = analytic[k].data()[i];
      worst = std::max(worst, std::abs(a - numeric) / std::max(1.0, std::abs(a)));
    }
  }
  return worst;
}

/// Reduces a tensor to a scalar through fixed weights drawn from `seed`.
inline Tensor probe(const Tensor& t, std::uint64_t seed) {
  Rng rng(seed);
  RowMatrix w(t.rows(), t.cols());
  for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = rng.uniform(-1, 1);
  return ad::dot(t, t.tape()->constant(w));
}

}  // namespace adaptmol::testing
