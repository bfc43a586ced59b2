// SPDX-FileCopyrightText: Copyright (c) 2026 The adaptmol authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "adaptmol/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include <json.hpp>

#include "adaptmol/errors.hpp"

namespace adaptmol {

namespace {

void check_lengths(std::size_t a, std::size_t b) {
  if (a != b) {
    throw DimensionError("scores and labels differ in length");
  }
}

}  // namespace

double roc_auc(std::span<const double> scores, std::span<const int> labels) {
  check_lengths(scores.size(), labels.size());
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Sum of positive ranks with ties given their average rank.
  double positives = 0;
  double rank_sum = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const double average_rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]] == 1) {
        positives += 1;
        rank_sum += average_rank;
      }
    }
    i = j;
  }
  const double negatives = static_cast<double>(scores.size()) - positives;
  if (positives == 0 || negatives == 0) {
    throw UndefinedMetricError("ROC-AUC needs both positive and negative labels");
  }
  return (rank_sum - positives * (positives + 1) / 2) / (positives * negatives);
}

double pr_auc(std::span<const double> scores, std::span<const int> labels) {
  check_lengths(scores.size(), labels.size());
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  double hits = 0;
  double total = 0;
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    if (labels[order[rank]] == 1) {
      hits += 1;
      total += hits / static_cast<double>(rank + 1);
    }
  }
  if (hits == 0) {
    throw UndefinedMetricError("PR-AUC needs at least one positive label");
  }
  return total / hits;
}

double f1_score(std::span<const int> predictions, std::span<const int> labels) {
  check_lengths(predictions.size(), labels.size());
  if (predictions.empty()) {
    throw ContractError("F1 of an empty set");
  }
  int tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    if (predictions[i] == 1 && labels[i] == 1) ++tp;
    if (predictions[i] == 1 && labels[i] != 1) ++fp;
    if (predictions[i] != 1 && labels[i] == 1) ++fn;
  }
  const int denom = 2 * tp + fp + fn;
  return denom == 0 ? 0.0 : 2.0 * tp / denom;
}

MetricSummary MetricReport::summary(const std::string& metric) const {
  const auto it = samples_.find(metric);
  if (it == samples_.end() || it->second.empty()) {
    throw ContractError("no samples recorded for metric " + metric);
  }
  const auto& v = it->second;
  MetricSummary s;
  s.count = v.size();
  s.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double sq = 0;
  for (double x : v) sq += (x - s.mean) * (x - s.mean);
  s.stddev = std::sqrt(sq / static_cast<double>(v.size()));
  return s;
}

std::vector<std::string> MetricReport::metrics() const {
  std::vector<std::string> names;
  for (const auto& [name, values] : samples_) names.push_back(name);
  return names;
}

std::string MetricReport::to_text() const {
  std::string out;
  char line[256];
  for (const auto& name : metrics()) {
    const auto s = summary(name);
    std::snprintf(line, sizeof line, "%s %.17g %.17g %zu\n", name.c_str(), s.mean, s.stddev, s.count);
    out += line;
  }
  return out;
}

std::string MetricReport::to_json() const {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& name : metrics()) {
    const auto s = summary(name);
    j[name] = {{"mean", s.mean}, {"std", s.stddev}, {"count", s.count}};
  }
  return j.dump(2) + "\n";
}

}  // namespace adaptmol
