// SPDX-FileCopyrightText: Copyright (c) 2026 The adaptmol authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "adaptmol/pca.hpp"
#include "adaptmol/random.hpp"

namespace adaptmol {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Cyclic Jacobi rotations on a symmetric matrix; returns eigenvalues descending.
VectorXd jacobi_eigenvalues(MatrixXd a) {
  const Eigen::Index n = a.rows();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off < 1e-30) break;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
        const double c = 1 / std::sqrt(t * t + 1);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  VectorXd ev = a.diagonal();
  std::sort(ev.data(), ev.data() + ev.size(), std::greater<>());
  return ev;
}

MatrixXd random_samples(std::uint64_t seed, Eigen::Index n, Eigen::Index d) {
  Rng rng(seed);
  MatrixXd x(n, d);
  // Distinct column scales keep the spectrum well separated.
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < d; ++j) x(i, j) = rng.uniform(-1, 1) * (1.0 + 0.5 * static_cast<double>(j));
  return x;
}

TEST(Pca, SamplesOnXAxisGivePositiveUnitX) {
  MatrixXd x(4, 2);
  x << -2, 0, -1, 0, 1, 0, 3, 0;
  const auto model = pca_fit(x, 1);
  EXPECT_NEAR(model.components(0, 0), 1.0, 1e-12);
  EXPECT_NEAR(model.components(1, 0), 0.0, 1e-12);
}

TEST(Pca, NegativeOrientedDataStillGetsPositiveSign) {
  MatrixXd x(3, 2);
  x << 1, -2, 0, 0, -1, 2;
  const auto model = pca_fit(x, 1);
  Eigen::Index arg;
  model.components.col(0).cwiseAbs().maxCoeff(&arg);
  EXPECT_GT(model.components(arg, 0), 0);
}

TEST(Pca, ProjectedTrainingDataIsCentered) {
  const MatrixXd x = random_samples(1, 30, 6);
  const auto model = pca_fit(x, 3);
  VectorXd total = VectorXd::Zero(3);
  for (Eigen::Index i = 0; i < x.rows(); ++i) total += model.project(x.row(i).transpose());
  EXPECT_LT(total.cwiseAbs().maxCoeff() / 30.0, 1e-12);
}

TEST(Pca, ExplainedVarianceMatchesJacobiOracle) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const MatrixXd x = random_samples(seed + 10, 20, 8);
    const MatrixXd centered = x.rowwise() - x.colwise().mean();
    const MatrixXd cov = centered.transpose() * centered / 19.0;
    const VectorXd oracle = jacobi_eigenvalues(cov);
    const auto model = pca_fit(x, 8 - 1);
    for (Eigen::Index k = 0; k < 7; ++k) {
      EXPECT_NEAR(model.explained_variance(k), oracle(k), 1e-6) << "seed " << seed << " k " << k;
      if (k > 0) EXPECT_LE(model.explained_variance(k), model.explained_variance(k - 1) + 1e-12);
    }
  }
}

TEST(Pca, ComponentsAreOrthonormal) {
  const MatrixXd x = random_samples(3, 40, 12);
  const auto model = pca_fit(x, 5);
  const MatrixXd gram = model.components.transpose() * model.components;
  EXPECT_LT((gram - MatrixXd::Identity(5, 5)).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Pca, GramRouteAgreesWithCovarianceRoute) {
  // n < d takes the Gram route; the spectrum must match the covariance oracle.
  const MatrixXd x = random_samples(4, 6, 10);
  const MatrixXd centered = x.rowwise() - x.colwise().mean();
  const VectorXd oracle = jacobi_eigenvalues(centered.transpose() * centered / 5.0);
  const auto model = pca_fit(x, 4);
  for (Eigen::Index k = 0; k < 4; ++k) EXPECT_NEAR(model.explained_variance(k), oracle(k), 1e-6);
  const MatrixXd gram = model.components.transpose() * model.components;
  EXPECT_LT((gram - MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Pca, TooFewSamplesIsConfigError) {
  EXPECT_THROW(pca_fit(MatrixXd::Ones(3, 5), 3), ConfigError);
  EXPECT_THROW(pca_fit(MatrixXd::Ones(3, 5), 0), ConfigError);
}

TEST(Pca, RankDeficiencyPadsZeroAxesAndWarns) {
  MatrixXd x(5, 3);
  x << 1, 0, 0, 2, 0, 0, -1, 0, 0, 0, 0, 0, 3, 0, 0;
  ::testing::internal::CaptureStderr();
  const auto model = pca_fit(x, 2);
  const std::string warning = ::testing::internal::GetCapturedStderr();
  EXPECT_NE(warning.find("warning"), std::string::npos);
  EXPECT_EQ(model.rank, 1);
  EXPECT_EQ(model.components.col(1).norm(), 0.0);
  EXPECT_EQ(model.explained_variance(1), 0.0);
}

TEST(Pca, ProjectValidatesState) {
  PcaModel<double> empty;
  EXPECT_THROW(empty.project(VectorXd::Ones(3)), ContractError);
  const auto model = pca_fit(random_samples(5, 10, 4), 2);
  EXPECT_THROW(model.project(VectorXd::Ones(5)), DimensionError);
}

TEST(Pca, MeanProjectsToZero) {
  const auto model = pca_fit(random_samples(6, 10, 4), 2);
  EXPECT_EQ(model.project(model.mean), VectorXd::Zero(2));
}

}  // namespace
}  // namespace adaptmol
