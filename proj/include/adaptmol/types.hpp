// SPDX-FileCopyrightText: Copyright (c) 2026 The adaptmol authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include "adaptmol/autodiff.hpp"

namespace adaptmol {

using RowMatrix = ad::Matrix<double>;
using RowVector = Eigen::Matrix<double, 1, Eigen::Dynamic>;
using Vector = Eigen::VectorXd;

using Tape = ad::Tape<double>;
using Tensor = ad::Tensor<double>;
using Gradients = ad::Gradients<double>;

}  // namespace adaptmol
