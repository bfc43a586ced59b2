// SPDX-FileCopyrightText: Copyright (c) 2026 The adaptmol authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "adaptmol/training.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <thread>

#include "adaptmol/errors.hpp"
#include "adaptmol/optimizer.hpp"

namespace adaptmol {

namespace {

constexpr std::uint64_t kTrainStream = 0x747261696eULL;
constexpr std::uint64_t kValidationStream = 0x76616cULL;
constexpr std::uint64_t kEvalStream = 0x6576616cULL;

std::vector<const EncodedMolecule*> inputs_of(const std::vector<EncodedMolecule>& encoded,
                                              const std::vector<int>& molecules) {
  std::vector<const EncodedMolecule*> out;
  out.reserve(molecules.size());
  for (int m : molecules) out.push_back(&encoded[static_cast<std::size_t>(m)]);
  return out;
}

std::vector<double> query_probabilities(const Model& model, const std::vector<EncodedMolecule>& encoded,
                                        const Episode& e) {
  Tape tape;
  ParamBinder bind(tape, false);
  const auto support = inputs_of(encoded, e.support);
  const auto query = inputs_of(encoded, e.query);
  const auto probs = episode_probabilities(bind, model, support, e.support_labels, query);
  std::vector<double> out;
  out.reserve(probs.size());
  for (const auto& p : probs) out.push_back(p.item());
  return out;
}

std::vector<EncodedMolecule> encode_all(const Model& model, const Dataset& dataset) {
  std::vector<EncodedMolecule> encoded;
  encoded.reserve(dataset.num_molecules());
  for (const auto& mol : dataset.molecules) encoded.push_back(model.encode_inputs(*mol));
  return encoded;
}

bool has_both_classes_beyond_support(const Dataset& dataset, int task, int shots) {
  const auto pos = dataset.molecules_with_label(task, 1).size();
  const auto neg = dataset.molecules_with_label(task, 0).size();
  return pos > static_cast<std::size_t>(shots) && neg > static_cast<std::size_t>(shots);
}

}  // namespace

void TrainConfig::validate() const {
  if (shots < 1) throw ConfigError("shots must be >= 1");
  if (query_size < 1) throw ConfigError("query size must be >= 1");
  if (!(learning_rate >= 0.0005 && learning_rate <= 0.05)) {
    throw ConfigError("learning rate must lie in [0.0005, 0.05]");
  }
  if (episodes < 0) throw ConfigError("episodes must be >= 0");
  if (patience < 1) throw ConfigError("patience must be >= 1");
  if (!(validation_fraction >= 0 && validation_fraction < 1)) {
    throw ConfigError("validation fraction must lie in [0, 1)");
  }
  if (eval_interval < 1) throw ConfigError("evaluation interval must be >= 1");
  if (validation_episodes < 1) throw ConfigError("validation episodes must be >= 1");
  if (validation_query_size < 1) throw ConfigError("validation query size must be >= 1");
  if (optimizer != "sgd" && optimizer != "adam") {
    throw ConfigError("unknown optimizer '" + optimizer + "' (expected sgd or adam)");
  }
  model.validate();
}

std::pair<std::vector<int>, std::vector<int>> partition_train_tasks(std::span<const int> train, double fraction) {
  const std::size_t n = train.size();
  std::size_t held = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n)));
  if (held == 0 && n >= 2 && fraction > 0) held = 1;
  if (held >= n) held = n == 0 ? 0 : n - 1;
  std::vector<int> update(train.begin(), train.end() - static_cast<std::ptrdiff_t>(held));
  std::vector<int> validation(train.end() - static_cast<std::ptrdiff_t>(held), train.end());
  return {std::move(update), std::move(validation)};
}

TrainResult meta_train(const Dataset& dataset, const TaskSplit& split, const TrainConfig& cfg, std::ostream* log,
                       std::shared_ptr<const ExternalFeatures> external) {
  cfg.validate();
  if (split.train.empty()) {
    throw ConfigError("split has no train tasks");
  }
  if (dataset.num_molecules() <= static_cast<std::size_t>(cfg.model.seq_dim)) {
    throw ConfigError("dataset has " + std::to_string(dataset.num_molecules()) +
                      " molecules; fitting the sequence PCA needs more than seq_dim = " +
                      std::to_string(cfg.model.seq_dim));
  }

  TrainResult result;
  result.model = Model::initialize(cfg.model, cfg.seed);
  Model& model = result.model;
  if (external) model.featurizer.set_external(std::move(external));
  model.featurizer.fit(std::span<const std::shared_ptr<const MolGraph>>(dataset.molecules));
  if (cfg.episodes == 0) {
    return result;
  }

  const auto [update_tasks, held_tasks] = partition_train_tasks(split.train, cfg.validation_fraction);
  for (int t : update_tasks) {
    if (!can_sample(dataset, t, cfg.shots)) {
      throw SamplingError("meta-training: train task '" + dataset.task_names[static_cast<std::size_t>(t)] +
                          "' cannot supply a " + std::to_string(cfg.shots) + "-shot episode");
    }
  }

  const auto encoded = encode_all(model, dataset);

  std::vector<Episode> validation;
  {
    Rng vrng(derive_seed(cfg.seed, kValidationStream, 0));
    for (int t : held_tasks) {
      if (!has_both_classes_beyond_support(dataset, t, cfg.shots)) {
        if (log) {
          *log << "warning: validation task '" << dataset.task_names[static_cast<std::size_t>(t)]
               << "' skipped: too few labeled molecules\n";
        }
        continue;
      }
      for (int i = 0; i < cfg.validation_episodes; ++i) {
        validation.push_back(sample_episode(dataset, t, cfg.shots, cfg.validation_query_size, vrng));
      }
    }
  }
  auto validation_auc = [&]() {
    double total = 0;
    for (const auto& e : validation) total += roc_auc(query_probabilities(model, encoded, e), e.query_labels);
    return total / static_cast<double>(validation.size());
  };

  std::vector<RowMatrix*> params;
  model.for_each_parameter([&](const std::string&, RowMatrix& p) { params.push_back(&p); });
  auto optimizer = make_optimizer(cfg.optimizer, cfg.learning_rate);

  Rng rng(derive_seed(cfg.seed, kTrainStream, 0));
  Model best = model;
  double best_auc = -std::numeric_limits<double>::infinity();
  int evaluations_without_gain = 0;

  for (int ep = 1; ep <= cfg.episodes; ++ep) {
    const int task = update_tasks[rng.below(update_tasks.size())];
    const Episode e = sample_episode(dataset, task, cfg.shots, cfg.query_size, rng);

    Tape tape;
    ParamBinder bind(tape, true);
    const auto probs =
        episode_probabilities(bind, model, inputs_of(encoded, e.support), e.support_labels, inputs_of(encoded, e.query));
    const Tensor loss = episode_loss(probs, e.query_labels);
    const auto grads = tape.backward(loss);
    std::vector<RowMatrix> g;
    g.reserve(params.size());
    for (const auto* p : params) g.push_back(bind.gradient(grads, *p));
    optimizer->step(params, g);
    result.losses.push_back(loss.item());
    result.episodes_run = ep;

    const bool checkpoint_due = ep % cfg.eval_interval == 0 || ep == cfg.episodes;
    if (!checkpoint_due || validation.empty()) continue;
    const double auc = validation_auc();
    result.validation.push_back({ep, auc});
    if (log) {
      double window = 0;
      const int from = std::max(0, ep - cfg.eval_interval);
      for (int i = from; i < ep; ++i) window += result.losses[static_cast<std::size_t>(i)];
      *log << "episode " << ep << " loss " << window / (ep - from) << " validation_roc_auc " << auc << '\n';
    }
    if (auc > best_auc) {
      best_auc = auc;
      best = model;
      result.best_episode = ep;
      evaluations_without_gain = 0;
    } else if (++evaluations_without_gain >= cfg.patience) {
      result.stopped_early = true;
      break;
    }
  }
  if (!validation.empty()) {
    model = std::move(best);
  } else {
    result.best_episode = result.episodes_run;
  }
  return result;
}

ModelPredictor::ModelPredictor(const Model& model, const Dataset& dataset)
    : model_(&model), encoded_(encode_all(model, dataset)) {}

std::vector<double> ModelPredictor::predict(const Episode& episode) const {
  return query_probabilities(*model_, encoded_, episode);
}

EvaluationResult evaluate(const Predictor& predictor, const Dataset& dataset, std::span<const int> tasks, int shots,
                          int runs, std::uint64_t seed, int jobs, std::ostream* log) {
  if (runs < 1) throw ConfigError("runs must be >= 1");
  if (shots < 1) throw ConfigError("shots must be >= 1");
  if (jobs < 1) throw ConfigError("jobs must be >= 1");

  EvaluationResult result;
  std::vector<int> usable;
  for (int t : tasks) {
    if (has_both_classes_beyond_support(dataset, t, shots)) {
      usable.push_back(t);
    } else {
      result.skipped_tasks.push_back(dataset.task_names.at(static_cast<std::size_t>(t)));
      if (log) {
        *log << "warning: test task '" << result.skipped_tasks.back() << "' skipped: needs more than " << shots
             << " labeled molecules per class\n";
      }
    }
  }

  struct Item {
    double roc = 0, f1 = 0, pr = 0;
  };
  const std::size_t total = static_cast<std::size_t>(runs) * usable.size();
  std::vector<Item> items(total);
  auto work = [&](std::size_t i) {
    const auto run = i / usable.size();
    const int task = usable[i % usable.size()];
    Rng rng(derive_seed(seed ^ kEvalStream, run, static_cast<std::uint64_t>(task)));
    const Episode e = sample_episode(dataset, task, shots, kEvalQuerySize, rng);
    const auto probs = predictor.predict(e);
    std::vector<int> decisions;
    for (double p : probs) decisions.push_back(p >= 0.5 ? 1 : 0);
    items[i] = {roc_auc(probs, e.query_labels), f1_score(decisions, e.query_labels), pr_auc(probs, e.query_labels)};
  };

  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(jobs), total);
  if (workers <= 1) {
    for (std::size_t i = 0; i < total; ++i) work(i);
  } else {
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> threads;
    for (std::size_t w = 0; w < workers; ++w) {
      threads.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < total; i += workers) work(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : threads) t.join();
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  for (const auto& item : items) {
    result.report.add("roc_auc", item.roc);
    result.report.add("f1", item.f1);
    result.report.add("pr_auc", item.pr);
  }
  return result;
}

}  // namespace adaptmol
