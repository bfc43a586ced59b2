// SPDX-FileCopyrightText: Copyright (c) 2026 The adaptmol authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

//! @file Episodic meta-training with validation-based early stopping, and
//! few-shot evaluation over independent runs.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "adaptmol/dataset.hpp"
#include "adaptmol/metrics.hpp"
#include "adaptmol/model.hpp"

namespace adaptmol {

struct TrainConfig {
  int shots = 10;
  int query_size = 16;
  double learning_rate = 0.005;
  int episodes = 2000;
  int patience = 100;  // evaluations without improvement
  std::uint64_t seed = 0;
  double validation_fraction = 0.2;
  int eval_interval = 50;
  int validation_episodes = 4;  // per validation task
  int validation_query_size = 32;
  std::string optimizer = "sgd";
  ModelConfig model;

  /// Throws ConfigError when a field is out of range. `episodes` may be 0.
  void validate() const;
};

struct ValidationPoint {
  int episode = 0;
  double roc_auc = 0;
};

struct TrainResult {
  Model model;  // best checkpoint by validation ROC-AUC, else the final one
  std::vector<double> losses;
  std::vector<ValidationPoint> validation;
  int episodes_run = 0;
  int best_episode = 0;
  bool stopped_early = false;
};

/// Train tasks kept for updates and those held out for validation: the last
/// floor(fraction * n) train tasks, at least one when n >= 2 and fraction > 0.
std::pair<std::vector<int>, std::vector<int>> partition_train_tasks(std::span<const int> train, double fraction);

/// Fits the sequence PCA on every dataset molecule, then runs episodic
/// gradient descent. `external` replaces hashed sequence vectors where it has them.
TrainResult meta_train(const Dataset& dataset, const TaskSplit& split, const TrainConfig& cfg,
                       std::ostream* log = nullptr, std::shared_ptr<const ExternalFeatures> external = nullptr);

/// Query probabilities for an episode; the seam evaluate() scores through.
class Predictor {
 public:
  virtual ~Predictor() = default;
  virtual std::vector<double> predict(const Episode& episode) const = 0;
};

/// Predictor backed by a model; molecule inputs are encoded once up front.
class ModelPredictor final : public Predictor {
 public:
  ModelPredictor(const Model& model, const Dataset& dataset);
  std::vector<double> predict(const Episode& episode) const override;

  const EncodedMolecule& inputs(int molecule) const { return encoded_.at(static_cast<std::size_t>(molecule)); }

 private:
  const Model* model_;
  std::vector<EncodedMolecule> encoded_;
};

struct EvaluationResult {
  MetricReport report;
  std::vector<std::string> skipped_tasks;
};

inline constexpr int kEvalQuerySize = 32;

/// For each run and task: a 2K support, a query of min(32, available), and
/// ROC-AUC, F1 at 0.5 and PR-AUC over the query. Tasks lacking K+1 molecules
/// per class are skipped with a warning. Work items are seeded by (run, task)
/// and merged in that order, so `jobs` does not change the result.
EvaluationResult evaluate(const Predictor& predictor, const Dataset& dataset, std::span<const int> tasks, int shots,
                          int runs, std::uint64_t seed, int jobs = 1, std::ostream* log = nullptr);

}  // namespace adaptmol
