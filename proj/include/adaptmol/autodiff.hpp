// SPDX-FileCopyrightText: Copyright (c) 2026 The adaptmol authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

//! @file Dense reverse-mode differentiation over row-major Eigen matrices.
//!
//! Every value is two dimensional; vectors are 1 x n rows and scalars 1 x 1.
//! A Tape owns all values recorded during one forward pass. Operations whose
//! inputs require a gradient record a local backward rule; Tape::backward
//! replays those rules in reverse recording order, which is a valid
//! topological order because inputs always exist before the op that uses them.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <functional>
#include <initializer_list>
#include <limits>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "adaptmol/errors.hpp"

namespace adaptmol::ad {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename Scalar>
class Tape;

/// Handle to a value on a Tape. Cheap to copy; valid while the tape lives.
template <typename Scalar>
class Tensor {
 public:
  Tensor() = default;

  const Matrix<Scalar>& value() const { return tape_->value(id_); }
  Eigen::Index rows() const { return value().rows(); }
  Eigen::Index cols() const { return value().cols(); }
  bool requires_grad() const { return tape_->requires_grad(id_); }
  std::size_t id() const { return id_; }
  Tape<Scalar>* tape() const { return tape_; }
  bool valid() const { return tape_ != nullptr; }

  Scalar item() const {
    if (rows() != 1 || cols() != 1) {
      throw DimensionError("item() on non-scalar tensor");
    }
    return value()(0, 0);
  }

 private:
  friend class Tape<Scalar>;
  Tensor(Tape<Scalar>* tape, std::size_t id) : tape_(tape), id_(id) {}

  Tape<Scalar>* tape_ = nullptr;
  std::size_t id_ = 0;
};

/// Gradients produced by one backward call, indexed by tensor.
template <typename Scalar>
class Gradients {
 public:
  Gradients() = default;
  Gradients(const Tape<Scalar>* tape, std::vector<Matrix<Scalar>> grads)
      : tape_(tape), grads_(std::move(grads)) {}

  /// Gradient of the loss with respect to `t`; zeros when `t` does not
  /// influence the loss.
  Matrix<Scalar> of(const Tensor<Scalar>& t) const {
    const auto& g = grads_.at(t.id());
    if (g.size() == 0) {
      return Matrix<Scalar>::Zero(t.rows(), t.cols());
    }
    return g;
  }

 private:
  const Tape<Scalar>* tape_ = nullptr;
  std::vector<Matrix<Scalar>> grads_;
};

template <typename Scalar>
class Tape {
 public:
  using Mat = Matrix<Scalar>;
  /// Receives the upstream gradient and accumulates into input gradients.
  using BackwardRule = std::function<void(const Mat& upstream, std::vector<Mat>& grads)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Tensor<Scalar> variable(Mat value) { return push(std::move(value), true, {}); }
  Tensor<Scalar> constant(Mat value) { return push(std::move(value), false, {}); }
  Tensor<Scalar> scalar(Scalar v) { return constant(Mat::Constant(1, 1, v)); }

  /// Records an op output. The rule is kept only if some input requires grad.
  Tensor<Scalar> record(Mat value, std::initializer_list<Tensor<Scalar>> inputs, BackwardRule rule) {
    return record(std::move(value), std::span<const Tensor<Scalar>>(inputs.begin(), inputs.size()),
                  std::move(rule));
  }

  Tensor<Scalar> record(Mat value, std::span<const Tensor<Scalar>> inputs, BackwardRule rule) {
    for (const auto& in : inputs) {
      if (in.tape() != this) {
        throw ContractError("tensor belongs to a different tape");
      }
    }
    if (!value.allFinite()) {
      bool inputs_finite = std::all_of(inputs.begin(), inputs.end(),
                                       [](const auto& t) { return t.value().allFinite(); });
      if (inputs_finite) {
        throw DomainError("operation produced a non-finite value from finite inputs");
      }
    }
    const bool needs = std::any_of(inputs.begin(), inputs.end(),
                                   [](const auto& t) { return t.requires_grad(); });
    return push(std::move(value), needs, needs ? std::move(rule) : BackwardRule{});
  }

  const Mat& value(std::size_t id) const { return nodes_.at(id).value; }
  bool requires_grad(std::size_t id) const { return nodes_.at(id).requires_grad; }
  std::size_t size() const { return nodes_.size(); }

  /// Reverse sweep from a scalar loss. Each call starts from fresh buffers.
  Gradients<Scalar> backward(const Tensor<Scalar>& loss) const {
    if (loss.tape() != this) {
      throw ContractError("loss belongs to a different tape");
    }
    if (loss.rows() != 1 || loss.cols() != 1) {
      std::ostringstream os;
      os << "backward requires a scalar loss, got shape (" << loss.rows() << ", " << loss.cols() << ")";
      throw ContractError(os.str());
    }
    std::vector<Mat> grads(nodes_.size());
    grads[loss.id()] = Mat::Ones(1, 1);
    for (std::size_t i = loss.id() + 1; i-- > 0;) {
      const auto& node = nodes_[i];
      if (grads[i].size() == 0 || !node.rule) {
        continue;
      }
      node.rule(grads[i], grads);
    }
    return Gradients<Scalar>(this, std::move(grads));
  }

  /// Adds `g` into the gradient slot of `id` when that node tracks gradients.
  void accumulate(std::vector<Mat>& grads, std::size_t id, const Mat& g) const {
    if (!nodes_[id].requires_grad) {
      return;
    }
    if (grads[id].size() == 0) {
      grads[id] = g;
    } else {
      grads[id] += g;
    }
  }

 private:
  struct Node {
    Mat value;
    bool requires_grad = false;
    BackwardRule rule;
  };

  Tensor<Scalar> push(Mat value, bool requires_grad, BackwardRule rule) {
    nodes_.push_back(Node{std::move(value), requires_grad, std::move(rule)});
    return Tensor<Scalar>(this, nodes_.size() - 1);
  }

  // deque keeps value references stable while recording.
  std::deque<Node> nodes_;
};

namespace detail {

inline std::string shape_str(Eigen::Index r, Eigen::Index c) {
  return "(" + std::to_string(r) + ", " + std::to_string(c) + ")";
}

template <typename Scalar>
void require_same_shape(const Tensor<Scalar>& a, const Tensor<Scalar>& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError(std::string(op) + ": shape mismatch " + shape_str(a.rows(), a.cols()) +
                         " vs " + shape_str(b.rows(), b.cols()));
  }
}

template <typename Scalar>
Tape<Scalar>& tape_of(const Tensor<Scalar>& t) {
  if (!t.valid()) {
    throw ContractError("tensor is not attached to a tape");
  }
  return *t.tape();
}

}  // namespace detail

template <typename Scalar>
Tensor<Scalar> matmul(const Tensor<Scalar>& a, const Tensor<Scalar>& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("matmul: shape mismatch " + detail::shape_str(a.rows(), a.cols()) + " vs " +
                         detail::shape_str(b.rows(), b.cols()));
  }
  auto& tape = detail::tape_of(a);
  Matrix<Scalar> out = a.value() * b.value();
  return tape.record(std::move(out), {a, b}, [tp = &tape, a, b](const auto& g, auto& grads) {
    if (a.requires_grad()) tp->accumulate(grads, a.id(), g * b.value().transpose());
    if (b.requires_grad()) tp->accumulate(grads, b.id(), a.value().transpose() * g);
  });
}

template <typename Scalar>
Tensor<Scalar> add(const Tensor<Scalar>& a, const Tensor<Scalar>& b) {
  detail::require_same_shape(a, b, "add");
  auto& tape = detail::tape_of(a);
  return tape.record(a.value() + b.value(), {a, b}, [tp = &tape, a, b](const auto& g, auto& grads) {
    tp->accumulate(grads, a.id(), g);
    tp->accumulate(grads, b.id(), g);
  });
}

template <typename Scalar>
Tensor<Scalar> subtract(const Tensor<Scalar>& a, const Tensor<Scalar>& b) {
  detail::require_same_shape(a, b, "subtract");
  auto& tape = detail::tape_of(a);
  return tape.record(a.value() - b.value(), {a, b}, [tp = &tape, a, b](const auto& g, auto& grads) {
    tp->accumulate(grads, a.id(), g);
    tp->accumulate(grads, b.id(), -g);
  });
}

template <typename Scalar>
Tensor<Scalar> multiply(const Tensor<Scalar>& a, const Tensor<Scalar>& b) {
  detail::require_same_shape(a, b, "multiply");
  auto& tape = detail::tape_of(a);
  Matrix<Scalar> out = a.value().cwiseProduct(b.value());
  return tape.record(std::move(out), {a, b}, [tp = &tape, a, b](const auto& g, auto& grads) {
    if (a.requires_grad()) tp->accumulate(grads, a.id(), g.cwiseProduct(b.value()));
    if (b.requires_grad()) tp->accumulate(grads, b.id(), g.cwiseProduct(a.value()));
  });
}

/// c * a for a fixed constant c.
template <typename Scalar>
Tensor<Scalar> scale(const Tensor<Scalar>& a, Scalar c) {
  auto& tape = detail::tape_of(a);
  return tape.record(a.value() * c, {a},
                     [tp = &tape, a, c](const auto& g, auto& grads) { tp->accumulate(grads, a.id(), g * c); });
}

/// s * a where s is a 1 x 1 tensor (the only broadcast the tape supports).
template <typename Scalar>
Tensor<Scalar> scale(const Tensor<Scalar>& s, const Tensor<Scalar>& a) {
  if (s.rows() != 1 || s.cols() != 1) {
    throw DimensionError("scale: factor must be (1, 1), got " + detail::shape_str(s.rows(), s.cols()));
  }
  auto& tape = detail::tape_of(a);
  return tape.record(a.value() * s.item(), {s, a}, [tp = &tape, s, a](const auto& g, auto& grads) {
    if (s.requires_grad()) tp->accumulate(grads, s.id(), Matrix<Scalar>::Constant(1, 1, g.cwiseProduct(a.value()).sum()));
    if (a.requires_grad()) tp->accumulate(grads, a.id(), g * s.item());
  });
}

/// a + c elementwise for a fixed constant c.
template <typename Scalar>
Tensor<Scalar> shift(const Tensor<Scalar>& a, Scalar c) {
  auto& tape = detail::tape_of(a);
  Matrix<Scalar> out = a.value().array() + c;
  return tape.record(std::move(out), {a},
                     [tp = &tape, a](const auto& g, auto& grads) { tp->accumulate(grads, a.id(), g); });
}

template <typename Scalar>
Tensor<Scalar> concat_cols(std::span<const Tensor<Scalar>> parts) {
  if (parts.empty()) {
    throw ContractError("concat_cols of nothing");
  }
  const auto rows = parts.front().rows();
  Eigen::Index cols = 0;
  for (const auto& p : parts) {
    if (p.rows() != rows) {
      throw DimensionError("concat_cols: row mismatch " + detail::shape_str(parts.front().rows(), parts.front().cols()) +
                           " vs " + detail::shape_str(p.rows(), p.cols()));
    }
    cols += p.cols();
  }
  Matrix<Scalar> out(rows, cols);
  Eigen::Index at = 0;
  for (const auto& p : parts) {
    out.middleCols(at, p.cols()) = p.value();
    at += p.cols();
  }
  auto& tape = detail::tape_of(parts.front());
  std::vector<Tensor<Scalar>> kept(parts.begin(), parts.end());
  return tape.record(std::move(out), parts, [tp = &tape, kept](const auto& g, auto& grads) {
    Eigen::Index offset = 0;
    for (const auto& p : kept) {
      if (p.requires_grad()) tp->accumulate(grads, p.id(), g.middleCols(offset, p.cols()));
      offset += p.cols();
    }
  });
}

template <typename Scalar>
Tensor<Scalar> concat_cols(const Tensor<Scalar>& a, const Tensor<Scalar>& b) {
  const Tensor<Scalar> parts[] = {a, b};
  return concat_cols<Scalar>(std::span<const Tensor<Scalar>>(parts));
}

template <typename Scalar>
Tensor<Scalar> concat_rows(std::span<const Tensor<Scalar>> parts) {
  if (parts.empty()) {
    throw ContractError("concat_rows of nothing");
  }
  const auto cols = parts.front().cols();
  Eigen::Index rows = 0;
  for (const auto& p : parts) {
    if (p.cols() != cols) {
      throw DimensionError("concat_rows: column mismatch " +
                           detail::shape_str(parts.front().rows(), parts.front().cols()) + " vs " +
                           detail::shape_str(p.rows(), p.cols()));
    }
    rows += p.rows();
  }
  Matrix<Scalar> out(rows, cols);
  Eigen::Index at = 0;
  for (const auto& p : parts) {
    out.middleRows(at, p.rows()) = p.value();
    at += p.rows();
  }
  auto& tape = detail::tape_of(parts.front());
  std::vector<Tensor<Scalar>> kept(parts.begin(), parts.end());
  return tape.record(std::move(out), parts, [tp = &tape, kept](const auto& g, auto& grads) {
    Eigen::Index offset = 0;
    for (const auto& p : kept) {
      if (p.requires_grad()) tp->accumulate(grads, p.id(), g.middleRows(offset, p.rows()));
      offset += p.rows();
    }
  });
}

template <typename Scalar>
Tensor<Scalar> slice_cols(const Tensor<Scalar>& a, Eigen::Index start, Eigen::Index count) {
  if (start < 0 || count < 0 || start + count > a.cols()) {
    throw DimensionError("slice_cols: [" + std::to_string(start) + ", " + std::to_string(start + count) +
                         ") out of range for " + detail::shape_str(a.rows(), a.cols()));
  }
  auto& tape = detail::tape_of(a);
  Matrix<Scalar> out = a.value().middleCols(start, count);
  return tape.record(std::move(out), {a}, [tp = &tape, a, start, count](const auto& g, auto& grads) {
    Matrix<Scalar> full = Matrix<Scalar>::Zero(a.rows(), a.cols());
    full.middleCols(start, count) = g;
    tp->accumulate(grads, a.id(), full);
  });
}

template <typename Scalar>
Tensor<Scalar> transpose(const Tensor<Scalar>& a) {
  auto& tape = detail::tape_of(a);
  Matrix<Scalar> out = a.value().transpose();
  return tape.record(std::move(out), {a}, [tp = &tape, a](const auto& g, auto& grads) {
    tp->accumulate(grads, a.id(), g.transpose());
  });
}

/// (N, d) -> (1, d) column means.
template <typename Scalar>
Tensor<Scalar> mean_rows(const Tensor<Scalar>& a) {
  if (a.rows() == 0) {
    throw ContractError("mean_rows of an empty matrix");
  }
  auto& tape = detail::tape_of(a);
  const auto n = static_cast<Scalar>(a.rows());
  Matrix<Scalar> out = a.value().colwise().sum() / n;
  return tape.record(std::move(out), {a}, [tp = &tape, a, n](const auto& g, auto& grads) {
    tp->accumulate(grads, a.id(), g.replicate(a.rows(), 1) / n);
  });
}

template <typename Scalar>
Tensor<Scalar> sum(const Tensor<Scalar>& a) {
  auto& tape = detail::tape_of(a);
  return tape.record(Matrix<Scalar>::Constant(1, 1, a.value().sum()), {a}, [tp = &tape, a](const auto& g, auto& grads) {
    tp->accumulate(grads, a.id(), Matrix<Scalar>::Constant(a.rows(), a.cols(), g(0, 0)));
  });
}

template <typename Scalar>
Tensor<Scalar> dot(const Tensor<Scalar>& a, const Tensor<Scalar>& b) {
  detail::require_same_shape(a, b, "dot");
  auto& tape = detail::tape_of(a);
  const Scalar v = a.value().cwiseProduct(b.value()).sum();
  return tape.record(Matrix<Scalar>::Constant(1, 1, v), {a, b}, [tp = &tape, a, b](const auto& g, auto& grads) {
    if (a.requires_grad()) tp->accumulate(grads, a.id(), b.value() * g(0, 0));
    if (b.requires_grad()) tp->accumulate(grads, b.id(), a.value() * g(0, 0));
  });
}

template <typename Scalar>
Tensor<Scalar> sigmoid(const Tensor<Scalar>& a) {
  auto& tape = detail::tape_of(a);
  Matrix<Scalar> out = a.value().unaryExpr([](Scalar x) {
    // Split by sign so exp never overflows.
    if (x >= 0) return Scalar(1) / (Scalar(1) + std::exp(-x));
    const Scalar e = std::exp(x);
    return e / (Scalar(1) + e);
  });
  Matrix<Scalar> local = out.cwiseProduct((Scalar(1) - out.array()).matrix());
  return tape.record(std::move(out), {a}, [tp = &tape, a, local](const auto& g, auto& grads) {
    tp->accumulate(grads, a.id(), g.cwiseProduct(local));
  });
}

template <typename Scalar>
Tensor<Scalar> relu(const Tensor<Scalar>& a) {
  auto& tape = detail::tape_of(a);
  Matrix<Scalar> out = a.value().cwiseMax(Scalar(0));
  return tape.record(std::move(out), {a}, [tp = &tape, a](const auto& g, auto& grads) {
    Matrix<Scalar> mask = (a.value().array() > Scalar(0)).template cast<Scalar>();
    tp->accumulate(grads, a.id(), g.cwiseProduct(mask));
  });
}

/// Row-wise softmax with the row maximum subtracted first.
template <typename Scalar>
Tensor<Scalar> softmax_rows(const Tensor<Scalar>& a) {
  auto& tape = detail::tape_of(a);
  Matrix<Scalar> out = a.value();
  for (Eigen::Index r = 0; r < out.rows(); ++r) {
    const Scalar m = out.row(r).maxCoeff();
    out.row(r) = (out.row(r).array() - m).exp();
    out.row(r) /= out.row(r).sum();
  }
  return tape.record(out, {a}, [tp = &tape, a, out](const auto& g, auto& grads) {
    Matrix<Scalar> dx(out.rows(), out.cols());
    for (Eigen::Index r = 0; r < out.rows(); ++r) {
      const Scalar inner = g.row(r).dot(out.row(r));
      dx.row(r) = out.row(r).cwiseProduct((g.row(r).array() - inner).matrix());
    }
    tp->accumulate(grads, a.id(), dx);
  });
}

inline constexpr double kLogFloor = 1e-12;

/// Natural log. Non-positive inputs are a domain error; positive inputs below
/// 1e-12 are clamped there (and pass no gradient).
template <typename Scalar>
Tensor<Scalar> log(const Tensor<Scalar>& a) {
  if ((a.value().array() <= Scalar(0)).any()) {
    throw DomainError("log of a non-positive value");
  }
  auto& tape = detail::tape_of(a);
  const Scalar floor = static_cast<Scalar>(kLogFloor);
  Matrix<Scalar> clamped = a.value().cwiseMax(floor);
  Matrix<Scalar> out = clamped.array().log();
  return tape.record(std::move(out), {a}, [tp = &tape, a, floor](const auto& g, auto& grads) {
    Matrix<Scalar> dx = a.value().unaryExpr([floor](Scalar x) { return x < floor ? Scalar(0) : Scalar(1) / x; });
    tp->accumulate(grads, a.id(), g.cwiseProduct(dx));
  });
}

/// Elementwise square root; the derivative at exactly 0 is taken as 0.
template <typename Scalar>
Tensor<Scalar> sqrt(const Tensor<Scalar>& a) {
  if ((a.value().array() < Scalar(0)).any()) {
    throw DomainError("sqrt of a negative value");
  }
  auto& tape = detail::tape_of(a);
  Matrix<Scalar> out = a.value().cwiseSqrt();
  return tape.record(out, {a}, [tp = &tape, a, out](const auto& g, auto& grads) {
    Matrix<Scalar> dx = out.unaryExpr([](Scalar y) { return y > Scalar(0) ? Scalar(0.5) / y : Scalar(0); });
    tp->accumulate(grads, a.id(), g.cwiseProduct(dx));
  });
}

template <typename Scalar>
Tensor<Scalar> reciprocal(const Tensor<Scalar>& a) {
  if ((a.value().array() == Scalar(0)).any()) {
    throw DomainError("reciprocal of zero");
  }
  auto& tape = detail::tape_of(a);
  Matrix<Scalar> out = a.value().cwiseInverse();
  return tape.record(out, {a}, [tp = &tape, a, out](const auto& g, auto& grads) {
    tp->accumulate(grads, a.id(), -g.cwiseProduct(out.cwiseProduct(out)));
  });
}

/// Elementwise clamp to [lo, hi]; clamped entries pass no gradient.
template <typename Scalar>
Tensor<Scalar> clamp(const Tensor<Scalar>& a, Scalar lo, Scalar hi) {
  auto& tape = detail::tape_of(a);
  Matrix<Scalar> out = a.value().cwiseMax(lo).cwiseMin(hi);
  return tape.record(std::move(out), {a}, [tp = &tape, a, lo, hi](const auto& g, auto& grads) {
    Matrix<Scalar> mask = a.value().unaryExpr([lo, hi](Scalar x) { return (x >= lo && x <= hi) ? Scalar(1) : Scalar(0); });
    tp->accumulate(grads, a.id(), g.cwiseProduct(mask));
  });
}

}  // namespace adaptmol::ad
