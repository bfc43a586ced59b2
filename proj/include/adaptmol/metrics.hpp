// SPDX-FileCopyrightText: Copyright (c) 2026 The adaptmol authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

namespace adaptmol {

/// Mann-Whitney ROC-AUC: wins count 1, ties 0.5, over all (positive, negative)
/// pairs. Throws UndefinedMetricError unless both classes are present.
double roc_auc(std::span<const double> scores, std::span<const int> labels);

/// Average precision. Ranks by descending score with ties in input order.
/// Throws UndefinedMetricError when there is no positive.
double pr_auc(std::span<const double> scores, std::span<const int> labels);

/// 2TP / (2TP + FP + FN); 0 when the denominator is 0.
double f1_score(std::span<const int> predictions, std::span<const int> labels);

struct MetricSummary {
  double mean = 0;
  double stddev = 0;  // population
  std::size_t count = 0;
};

/// Mean and population standard deviation per metric name.
class MetricReport {
 public:
  void add(const std::string& metric, double value) { samples_[metric].push_back(value); }

  MetricSummary summary(const std::string& metric) const;
  std::vector<std::string> metrics() const;
  bool empty() const { return samples_.empty(); }

  /// `<metric> <mean> <std> <count>` lines.
  std::string to_text() const;
  std::string to_json() const;

 private:
  std::map<std::string, std::vector<double>> samples_;
};

}  // namespace adaptmol
