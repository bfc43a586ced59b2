// SPDX-FileCopyrightText: Copyright (c) 2026 The adaptmol authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "adaptmol/checkpoint.hpp"

#include <fstream>
#include <map>

#include "adaptmol/errors.hpp"

namespace adaptmol {

using Json = nlohmann::ordered_json;

namespace {

template <typename Derived>
Json tensor_json(const std::string& name, const Eigen::DenseBase<Derived>& m) {
  Json values = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) values.push_back(m(r, c));
  }
  return Json{{"name", name}, {"shape", {m.rows(), m.cols()}}, {"values", std::move(values)}};
}

RowMatrix tensor_value(const Json& t, Eigen::Index rows, Eigen::Index cols, const std::string& name) {
  const auto& shape = t.at("shape");
  if (shape.size() != 2 || shape[0].get<Eigen::Index>() != rows || shape[1].get<Eigen::Index>() != cols) {
    throw FormatError(0, "checkpoint tensor " + name + " has shape " + shape.dump() + ", expected [" +
                             std::to_string(rows) + "," + std::to_string(cols) + "]");
  }
  const auto& values = t.at("values");
  if (values.size() != static_cast<std::size_t>(rows * cols)) {
    throw FormatError(0, "checkpoint tensor " + name + " has the wrong number of values");
  }
  RowMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = values[static_cast<std::size_t>(i)].get<double>();
  return m;
}

Json config_json(const ModelConfig& c) {
  return Json{{"graph_dim", c.graph_dim},
              {"gin_layers", c.gin_layers},
              {"hash_dim", c.hash_dim},
              {"seq_dim", c.seq_dim},
              {"hash_seed", c.hash_seed},
              {"beta_min", c.ama.beta_min},
              {"beta_max", c.ama.beta_max},
              {"k", c.ama.k},
              {"heads", c.ama.heads}};
}

ModelConfig config_from_json(const Json& j) {
  ModelConfig c;
  c.graph_dim = j.at("graph_dim").get<int>();
  c.gin_layers = j.at("gin_layers").get<int>();
  c.hash_dim = j.at("hash_dim").get<int>();
  c.seq_dim = j.at("seq_dim").get<int>();
  c.hash_seed = j.at("hash_seed").get<std::uint64_t>();
  c.ama.beta_min = j.at("beta_min").get<double>();
  c.ama.beta_max = j.at("beta_max").get<double>();
  c.ama.k = j.at("k").get<double>();
  c.ama.heads = j.at("heads").get<int>();
  return c;
}

}  // namespace

Json checkpoint_to_json(const Model& model, const Json& run_config) {
  Json doc;
  doc["format"] = kCheckpointFormat;
  doc["version"] = kCheckpointVersion;
  doc["model_config"] = config_json(model.config);
  doc["run_config"] = run_config;
  Json tensors = Json::array();
  model.for_each_parameter([&](const std::string& name, const RowMatrix& p) { tensors.push_back(tensor_json(name, p)); });
  doc["parameters"] = std::move(tensors);
  const auto& pca = model.featurizer.pca();
  if (pca.fitted()) {
    doc["pca"] = Json{{"rank", pca.rank},
                      {"mean", tensor_json("pca.mean", pca.mean)},
                      {"components", tensor_json("pca.components", pca.components)},
                      {"explained_variance", tensor_json("pca.explained_variance", pca.explained_variance)}};
  } else {
    doc["pca"] = nullptr;
  }
  return doc;
}

Model checkpoint_from_json(const Json& doc) {
  try {
    if (doc.at("format").get<std::string>() != kCheckpointFormat) {
      throw FormatError(0, "not an adaptmol checkpoint");
    }
    const int version = doc.at("version").get<int>();
    if (version != kCheckpointVersion) {
      throw FormatError(0, "unsupported checkpoint version " + std::to_string(version));
    }
    const ModelConfig config = config_from_json(doc.at("model_config"));
    Model model = Model::initialize(config, 0);
    std::map<std::string, const Json*> by_name;
    for (const auto& t : doc.at("parameters")) by_name[t.at("name").get<std::string>()] = &t;
    model.for_each_parameter([&](const std::string& name, RowMatrix& p) {
      const auto it = by_name.find(name);
      if (it == by_name.end()) {
        throw FormatError(0, "checkpoint is missing tensor " + name);
      }
      p = tensor_value(*it->second, p.rows(), p.cols(), name);
    });
    const auto& pca_doc = doc.at("pca");
    if (!pca_doc.is_null()) {
      PcaModel<double> pca;
      const Eigen::Index d = config.hash_dim;
      const Eigen::Index k = config.seq_dim;
      pca.rank = pca_doc.at("rank").get<Eigen::Index>();
      pca.mean = tensor_value(pca_doc.at("mean"), d, 1, "pca.mean");
      pca.components = tensor_value(pca_doc.at("components"), d, k, "pca.components");
      pca.explained_variance = tensor_value(pca_doc.at("explained_variance"), k, 1, "pca.explained_variance");
      model.featurizer.set_pca(std::move(pca));
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(0, std::string("malformed checkpoint: ") + e.what());
  } catch (const ConfigError& e) {
    throw FormatError(0, std::string("checkpoint model config: ") + e.what());
  }
}

void save_checkpoint(const Model& model, const std::string& path, const Json& run_config) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error("cannot write checkpoint " + path);
  }
  out << checkpoint_to_json(model, run_config).dump(1) << '\n';
  if (!out) {
    throw Error("failed writing checkpoint " + path);
  }
}

Model load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error("cannot open checkpoint " + path);
  }
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(0, "checkpoint " + path + " is not valid JSON: " + e.what());
  }
  return checkpoint_from_json(doc);
}

}  // namespace adaptmol
