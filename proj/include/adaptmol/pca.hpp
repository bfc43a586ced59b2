// SPDX-FileCopyrightText: Copyright (c) 2026 The adaptmol authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

//! @file Principal components by power iteration with deflation.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <iostream>
#include <string>

#include "adaptmol/errors.hpp"

namespace adaptmol {

struct PowerIterationOptions {
  double tolerance = 1e-10;
  int max_iterations = 1000;
};

template <typename Scalar>
struct PcaModel {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Vector mean;                 // length d
  Matrix components;           // d x k, one principal axis per column
  Vector explained_variance;   // length k, sample covariance eigenvalues
  Eigen::Index rank = 0;       // columns with nonzero variance; the rest are zero padding

  bool fitted() const { return components.size() > 0; }
  Eigen::Index input_dim() const { return components.rows(); }
  Eigen::Index output_dim() const { return components.cols(); }

  /// components^T (x - mean)
  template <typename Derived>
  Vector project(const Eigen::MatrixBase<Derived>& x) const {
    if (!fitted()) {
      throw ContractError("PCA state is not fitted");
    }
    if (x.size() != mean.size()) {
      throw DimensionError("PCA input has length " + std::to_string(x.size()) + ", expected " +
                           std::to_string(mean.size()));
    }
    Vector centered = x;
    centered -= mean;
    return components.transpose() * centered;
  }
};

namespace detail {

/// Leading eigenpair of a symmetric PSD matrix. Vectors in `previous`
/// (orthonormal columns, first `count` used) are projected out every step.
template <typename Scalar>
Scalar power_iterate(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& m,
                     const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& previous, Eigen::Index count,
                     Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& v, const PowerIterationOptions& opts) {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const Eigen::Index n = m.rows();
  // Fixed, non-symmetric start vector so runs are reproducible.
  v.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    v(i) = Scalar(1) + Scalar(0.37) * std::sin(Scalar(1.3) * static_cast<Scalar>(i) + Scalar(0.5));
  }
  auto orthogonalize = [&](Vector& x) {
    for (Eigen::Index c = 0; c < count; ++c) {
      x -= previous.col(c).dot(x) * previous.col(c);
    }
  };
  orthogonalize(v);
  Scalar norm = v.norm();
  if (norm == Scalar(0)) return Scalar(0);
  v /= norm;

  for (int it = 0; it < opts.max_iterations; ++it) {
    Vector next = m * v;
    orthogonalize(next);
    norm = next.norm();
    if (norm == Scalar(0)) {
      return Scalar(0);
    }
    next /= norm;
    if (next.dot(v) < Scalar(0)) next = -next;
    const Scalar change = (next - v).norm();
    v = next;
    if (change < static_cast<Scalar>(opts.tolerance)) break;
  }
  return v.dot(m * v);
}

}  // namespace detail

/// Fits `components` principal axes of the rows of `samples` (n x d).
///
/// Works on the d x d covariance or on the n x n Gram matrix, whichever is
/// smaller; both share their nonzero spectrum. Each axis has its sign fixed so
/// the largest-magnitude coordinate is positive. Axes beyond the numerical
/// rank are returned as zero columns with a warning on stderr.
template <typename Derived>
PcaModel<typename Derived::Scalar> pca_fit(const Eigen::MatrixBase<Derived>& samples, Eigen::Index components,
                                           const PowerIterationOptions& opts = {}) {
  using Scalar = typename Derived::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  const Eigen::Index n = samples.rows();
  const Eigen::Index d = samples.cols();
  if (components < 1) {
    throw ConfigError("PCA needs at least one component");
  }
  if (n <= components) {
    throw ConfigError("PCA needs more samples (" + std::to_string(n) + ") than components (" +
                      std::to_string(components) + ")");
  }

  PcaModel<Scalar> model;
  model.mean = samples.colwise().mean().transpose();
  const Matrix centered = samples.rowwise() - model.mean.transpose();
  const Scalar denom = static_cast<Scalar>(n - 1);
  const bool use_gram = n < d;
  Matrix work = use_gram ? Matrix(centered * centered.transpose() / denom)
                         : Matrix(centered.transpose() * centered / denom);

  model.components = Matrix::Zero(d, components);
  model.explained_variance = Vector::Zero(components);
  Matrix basis = Matrix::Zero(work.rows(), components);
  Scalar leading = 0;
  Eigen::Index found = 0;
  for (Eigen::Index k = 0; k < components && k < work.rows(); ++k) {
    Vector v;
    const Scalar lambda = detail::power_iterate<Scalar>(work, basis, k, v, opts);
    if (k == 0) leading = lambda;
    const Scalar floor = Scalar(1e-12) * std::max(Scalar(1), leading);
    if (!(lambda > floor)) break;
    basis.col(k) = v;
    work -= lambda * v * v.transpose();

    Vector axis = use_gram ? Vector(centered.transpose() * v) : v;
    // Axes in input space stay orthonormal against earlier ones.
    for (Eigen::Index c = 0; c < k; ++c) {
      axis -= model.components.col(c).dot(axis) * model.components.col(c);
    }
    axis.normalize();
    Eigen::Index arg = 0;
    axis.cwiseAbs().maxCoeff(&arg);
    if (axis(arg) < Scalar(0)) axis = -axis;
    model.components.col(k) = axis;
    model.explained_variance(k) = lambda;
    found = k + 1;
  }
  model.rank = found;
  if (found < components) {
    std::cerr << "warning: PCA rank " << found << " is below the requested " << components
              << " components; padding with zero axes\n";
  }
  return model;
}

}  // namespace adaptmol
