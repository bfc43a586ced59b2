// SPDX-FileCopyrightText: Copyright (c) 2026 The adaptmol authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "adaptmol/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "adaptmol/checkpoint.hpp"
#include "adaptmol/errors.hpp"
#include "adaptmol/mcts.hpp"
#include "adaptmol/synthetic.hpp"
#include "adaptmol/training.hpp"

namespace adaptmol {

namespace {

using Json = nlohmann::ordered_json;

/// `key = value` files with `#` comments. Keys apply to the parsed subcommand;
/// snake_case keys map to kebab-case flags.
class KeyValueConfig : public CLI::ConfigINI {
 public:
  explicit KeyValueConfig(const CLI::App* app) : app_(app) {}

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    auto items = CLI::ConfigINI::from_config(input);
    const auto subcommands = app_->get_subcommands();
    for (auto& item : items) {
      std::replace(item.name.begin(), item.name.end(), '_', '-');
      if (item.parents.empty() && !subcommands.empty()) item.parents = {subcommands.front()->get_name()};
    }
    return items;
  }

 private:
  const CLI::App* app_;
};

struct CommonOptions {
  std::string output;
  std::string format = "text";
  std::string external_features;
};

struct TrainOptions {
  std::string dataset, split, checkpoint = "adaptmol-checkpoint.json", log;
  TrainConfig cfg;
};

struct EvalOptions {
  std::string checkpoint, dataset, split, tasks;
  int shots = 10;
  int runs = 10;
  int jobs = 1;
  std::uint64_t seed = 0;
};

struct SupportOptions {
  std::string checkpoint, support, task, molecules;
};

struct SynthOptions {
  std::string output_dir;
  SyntheticConfig cfg;
};

void add_format(CLI::App* app, CommonOptions& common) {
  app->add_option("--format", common.format, "Report format")->check(CLI::IsMember({"text", "json"}));
  app->add_option("-o,--output", common.output, "Write the report here instead of standard output");
}

void add_external(CLI::App* app, CommonOptions& common) {
  app->add_option("--external-features", common.external_features,
                  "Per-molecule raw sequence vectors (<smiles>\\t<comma-separated reals>)");
}

void add_model_options(CLI::App* app, ModelConfig& m) {
  app->add_option("--graph-dim", m.graph_dim, "Graph embedding width")->capture_default_str();
  app->add_option("--gin-layers", m.gin_layers, "GIN layers")->capture_default_str();
  app->add_option("--hash-dim", m.hash_dim, "Hashed n-gram feature width")->capture_default_str();
  app->add_option("--seq-dim", m.seq_dim, "Sequence feature width after PCA")->capture_default_str();
  app->add_option("--hash-seed", m.hash_seed, "Seed of the n-gram hash")->capture_default_str();
  app->add_option("--beta-min", m.ama.beta_min, "Lower modality weight")->capture_default_str();
  app->add_option("--beta-max", m.ama.beta_max, "Upper modality weight")->capture_default_str();
  app->add_option("--k", m.ama.k, "Modality weight scale")->capture_default_str();
  app->add_option("--heads", m.ama.heads, "Attention heads")->capture_default_str();
}

std::vector<std::string> split_names(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

/// Writes to the --output file when given, else to `out`.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& out) : stream_(&out) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw Error("cannot write " + path);
      stream_ = &file_;
    }
  }
  std::ostream& get() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

void attach_external(Model& model, const std::string& path) {
  if (path.empty()) return;
  model.featurizer.set_external(
      std::make_shared<const ExternalFeatures>(load_external_features(path, model.config.hash_dim)));
}

std::vector<std::string> read_smiles_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    line.erase(line.find_last_not_of(" \t\r\n") + 1);
    line.erase(0, line.find_first_not_of(" \t"));
    if (!line.empty() && line[0] != '#') out.push_back(line);
  }
  return out;
}

Json train_echo(const TrainConfig& c) {
  return Json{{"shots", c.shots},
              {"query_size", c.query_size},
              {"learning_rate", c.learning_rate},
              {"episodes", c.episodes},
              {"patience", c.patience},
              {"seed", c.seed},
              {"validation_fraction", c.validation_fraction},
              {"eval_interval", c.eval_interval},
              {"validation_episodes", c.validation_episodes},
              {"optimizer", c.optimizer}};
}

int run_train(const TrainOptions& o, const CommonOptions& common, const std::string& resolved, std::ostream& err) {
  std::ofstream log_file;
  std::ostream* log = &err;
  if (!o.log.empty()) {
    log_file.open(o.log);
    if (!log_file) throw Error("cannot write log " + o.log);
    log = &log_file;
  }
  *log << "# resolved configuration\n" << resolved;
  const Dataset dataset = load_dataset(o.dataset, log);
  const TaskSplit split = load_split(o.split, dataset);
  std::shared_ptr<const ExternalFeatures> external;
  if (!common.external_features.empty()) {
    external = std::make_shared<const ExternalFeatures>(
        load_external_features(common.external_features, o.cfg.model.hash_dim));
  }
  const TrainResult result = meta_train(dataset, split, o.cfg, log, external);
  *log << "episodes_run " << result.episodes_run << " best_episode " << result.best_episode
       << (result.stopped_early ? " stopped_early" : "") << '\n';
  save_checkpoint(result.model, o.checkpoint, train_echo(o.cfg));
  return kExitOk;
}

int run_eval(const EvalOptions& o, const CommonOptions& common, std::ostream& out, std::ostream& err) {
  Model model = load_checkpoint(o.checkpoint);
  attach_external(model, common.external_features);
  const Dataset dataset = load_dataset(o.dataset, &err);
  std::vector<int> tasks;
  if (!o.tasks.empty()) {
    for (const auto& name : split_names(o.tasks)) tasks.push_back(dataset.task_index(name));
  } else {
    tasks = load_split(o.split, dataset).test;
  }
  if (tasks.empty()) throw ConfigError("no test tasks selected");
  const ModelPredictor predictor(model, dataset);
  const EvaluationResult r = evaluate(predictor, dataset, tasks, o.shots, o.runs, o.seed, o.jobs, &err);
  if (r.report.empty()) throw SamplingError("every requested test task was skipped");

  Sink sink(common.output, out);
  if (common.format == "json") {
    Json doc;
    doc["shots"] = o.shots;
    doc["runs"] = o.runs;
    doc["seed"] = o.seed;
    doc["metrics"] = Json::parse(r.report.to_json());
    doc["skipped_tasks"] = r.skipped_tasks;
    sink.get() << doc.dump(2) << '\n';
  } else {
    sink.get() << r.report.to_text();
    for (const auto& t : r.skipped_tasks) sink.get() << "skipped " << t << '\n';
  }
  return kExitOk;
}

struct SupportContext {
  Model model;
  FixedPrototypes protos;
};

SupportContext load_support(const SupportOptions& o, const CommonOptions& common, std::ostream& err) {
  SupportContext ctx{load_checkpoint(o.checkpoint), {}};
  attach_external(ctx.model, common.external_features);
  if (!ctx.model.featurizer.fitted()) throw FormatError(0, "checkpoint has no fitted sequence featurizer");
  const Dataset support = load_dataset(o.support, &err);
  const int task = o.task.empty() ? 0 : support.task_index(o.task);
  std::vector<EncodedMolecule> encoded;
  std::vector<int> labels;
  for (std::size_t m = 0; m < support.num_molecules(); ++m) {
    const int label = support.labels[m][static_cast<std::size_t>(task)];
    if (label == kMissingLabel) continue;
    encoded.push_back(ctx.model.encode_inputs(*support.molecules[m]));
    labels.push_back(label);
  }
  std::vector<const EncodedMolecule*> ptrs;
  for (const auto& e : encoded) ptrs.push_back(&e);
  if (std::count(labels.begin(), labels.end(), 1) == 0 || std::count(labels.begin(), labels.end(), 0) == 0) {
    throw SamplingError("support task '" + support.task_names[static_cast<std::size_t>(task)] +
                        "' needs labeled molecules of both classes");
  }
  ctx.protos = compute_prototypes(ctx.model, ptrs, labels);
  return ctx;
}

int run_predict(const SupportOptions& o, const CommonOptions& common, std::ostream& out, std::ostream& err) {
  const SupportContext ctx = load_support(o, common, err);
  Json results = Json::array();
  std::ostringstream text;
  for (const auto& smiles : read_smiles_list(o.molecules)) {
    const MolGraph mol = parse_smiles(smiles);
    const double p = predict_probability(ctx.model, ctx.protos, ctx.model.encode_inputs(mol));
    results.push_back({{"smiles", smiles}, {"probability", p}});
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", p);
    text << smiles << '\t' << buf << '\n';
  }
  Sink sink(common.output, out);
  sink.get() << (common.format == "json" ? results.dump(2) + "\n" : text.str());
  return kExitOk;
}

int run_rationale(const SupportOptions& o, const CommonOptions& common, const SearchConfig& search,
                  const std::string& summary_path, std::uint64_t seed, std::ostream& out, std::ostream& err) {
  search.validate();
  const SupportContext ctx = load_support(o, common, err);
  const ModelScorer scorer(ctx.model, ctx.protos);
  Rng rng(seed);

  std::ostringstream report, summary;
  Json results = Json::array();
  for (const auto& smiles : read_smiles_list(o.molecules)) {
    const MolGraph mol = parse_smiles(smiles);
    const auto entries = run_search(mol, std::cref(scorer), search, rng, &err);
    Json list = Json::array();
    for (const auto& e : entries) {
      report << format_rationale(e) << '\n';
      list.push_back({{"atoms", e.atoms}, {"score", e.score}});
    }
    results.push_back({{"smiles", smiles}, {"rationales", std::move(list)}});
    if (entries.empty()) {
      summary << smiles << "\tno rationale\n";
    } else {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.4f", entries.front().score);
      summary << smiles << "\ttop " << format_rationale(entries.front()).substr(smiles.size() + 1) << "\t("
              << entries.size() << " rationales, best " << buf << ")\n";
    }
  }
  Sink sink(common.output, out);
  sink.get() << (common.format == "json" ? results.dump(2) + "\n" : report.str());
  if (summary_path.empty()) {
    err << summary.str();
  } else {
    std::ofstream f(summary_path);
    if (!f) throw Error("cannot write " + summary_path);
    f << summary.str();
  }
  return kExitOk;
}

int run_synth(const SynthOptions& o, std::ostream& out) {
  namespace fs = std::filesystem;
  fs::create_directories(o.output_dir);
  const SyntheticData data = make_synthetic(o.cfg);
  const fs::path dataset = fs::path(o.output_dir) / "dataset.csv";
  const fs::path split = fs::path(o.output_dir) / "split.txt";
  std::ofstream(dataset) << data.csv;
  std::ofstream(split) << data.split;
  out << dataset.string() << '\n' << split.string() << '\n';
  return kExitOk;
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Few-shot molecular property prediction with adaptive multi-level attention", "adaptmol"};
  app.config_formatter(std::make_shared<KeyValueConfig>(&app));
  app.set_config("--config", "", "key = value configuration file (flags take precedence)");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.fallthrough();
  app.require_subcommand(1);

  CommonOptions common;

  TrainOptions train_opts;
  auto* train = app.add_subcommand("train", "Meta-train a model and write a checkpoint");
  train->add_option("--dataset", train_opts.dataset, "Dataset CSV")->required();
  train->add_option("--split", train_opts.split, "Split file")->required();
  train->add_option("--checkpoint", train_opts.checkpoint, "Checkpoint to write")->capture_default_str();
  train->add_option("--log", train_opts.log, "Training log (default: standard error)");
  train->add_option("--seed", train_opts.cfg.seed, "Run seed")->capture_default_str();
  train->add_option("--shots", train_opts.cfg.shots, "K, support molecules per class")->capture_default_str();
  train->add_option("--query-size", train_opts.cfg.query_size, "Query molecules per episode")->capture_default_str();
  train->add_option("--learning-rate", train_opts.cfg.learning_rate, "Learning rate")->capture_default_str();
  train->add_option("--episodes", train_opts.cfg.episodes, "Episodes")->capture_default_str();
  train->add_option("--patience", train_opts.cfg.patience, "Evaluations without improvement before stopping")
      ->capture_default_str();
  train->add_option("--validation-fraction", train_opts.cfg.validation_fraction, "Train tasks held out")
      ->capture_default_str();
  train->add_option("--eval-interval", train_opts.cfg.eval_interval, "Episodes between validations")
      ->capture_default_str();
  train->add_option("--validation-episodes", train_opts.cfg.validation_episodes, "Episodes per validation task")
      ->capture_default_str();
  train->add_option("--validation-query-size", train_opts.cfg.validation_query_size,
                    "Query molecules per validation episode")
      ->capture_default_str();
  train->add_option("--optimizer", train_opts.cfg.optimizer, "sgd or adam")
      ->check(CLI::IsMember({"sgd", "adam"}))
      ->capture_default_str();
  add_model_options(train, train_opts.cfg.model);
  add_external(train, common);

  EvalOptions eval_opts;
  auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint on test tasks");
  eval->add_option("--checkpoint", eval_opts.checkpoint, "Checkpoint to evaluate")->required();
  eval->add_option("--dataset", eval_opts.dataset, "Dataset CSV")->required();
  auto* split_opt = eval->add_option("--split", eval_opts.split, "Split file; its test tasks are evaluated");
  auto* tasks_opt = eval->add_option("--tasks", eval_opts.tasks, "Comma-separated test task names");
  split_opt->excludes(tasks_opt);
  eval->add_option("--shots", eval_opts.shots, "K, support molecules per class")->capture_default_str();
  eval->add_option("--runs", eval_opts.runs, "Independent runs")->capture_default_str();
  eval->add_option("--seed", eval_opts.seed, "Run seed")->capture_default_str();
  eval->add_option("--jobs", eval_opts.jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  add_format(eval, common);
  add_external(eval, common);

  SupportOptions predict_opts;
  auto* predict = app.add_subcommand("predict", "Predict query molecules from a labeled support set");
  predict->add_option("--checkpoint", predict_opts.checkpoint, "Checkpoint")->required();
  predict->add_option("--support", predict_opts.support, "Support CSV")->required();
  predict->add_option("--task", predict_opts.task, "Support task name (default: first task)");
  predict->add_option("--queries", predict_opts.molecules, "File with one query SMILES per line")->required();
  add_format(predict, common);
  add_external(predict, common);

  SupportOptions rationale_opts;
  SearchConfig search;
  std::string summary_path;
  std::uint64_t rationale_seed = 0;
  auto* rationale = app.add_subcommand("rationale", "Extract rationale subgraphs of positive molecules");
  rationale->add_option("--checkpoint", rationale_opts.checkpoint, "Checkpoint")->required();
  rationale->add_option("--support", rationale_opts.support, "Support CSV")->required();
  rationale->add_option("--task", rationale_opts.task, "Support task name (default: first task)");
  rationale->add_option("--molecules", rationale_opts.molecules, "File with one positive SMILES per line")
      ->required();
  rationale->add_option("--max-atoms", search.max_atoms, "Largest rationale, N_s")->capture_default_str();
  rationale->add_option("--min-atoms", search.min_atoms, "Smallest rationale")->capture_default_str();
  rationale->add_option("--delta", search.delta, "Score threshold")->capture_default_str();
  rationale->add_option("--c-puct", search.c_puct, "Exploration constant")->capture_default_str();
  rationale->add_option("--iterations", search.iterations, "Rollouts per molecule")->capture_default_str();
  rationale->add_option("--seed", rationale_seed, "Run seed")->capture_default_str();
  rationale->add_option("--summary", summary_path, "Per-molecule summary file (default: standard error)");
  add_format(rationale, common);
  add_external(rationale, common);

  SynthOptions synth_opts;
  auto* synth = app.add_subcommand("synth", "Write the synthetic motif dataset and its split");
  synth->add_option("--output-dir", synth_opts.output_dir, "Directory for dataset.csv and split.txt")->required();
  synth->add_option("--molecules", synth_opts.cfg.molecules, "Molecules")->capture_default_str();
  synth->add_option("--train-tasks", synth_opts.cfg.train_tasks, "Train tasks")->capture_default_str();
  synth->add_option("--test-tasks", synth_opts.cfg.test_tasks, "Test tasks")->capture_default_str();
  synth->add_option("--seed", synth_opts.cfg.seed, "Seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const CLI::App* failed = &app;
    for (const auto* sub : {train, eval, predict, rationale, synth}) {
      if (sub->parsed()) failed = sub;
    }
    err << failed->help();
    return kExitUsage;
  }

  try {
    if (train->parsed()) return run_train(train_opts, common, train->config_to_str(true, false), err);
    if (eval->parsed()) return run_eval(eval_opts, common, out, err);
    if (predict->parsed()) return run_predict(predict_opts, common, out, err);
    if (rationale->parsed()) {
      return run_rationale(rationale_opts, common, search, summary_path, rationale_seed, out, err);
    }
    if (synth->parsed()) return run_synth(synth_opts, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace adaptmol
