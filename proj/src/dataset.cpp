// SPDX-FileCopyrightText: Copyright (c) 2026 The adaptmol authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "adaptmol/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "adaptmol/errors.hpp"

namespace adaptmol {

namespace {

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_cells(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, sep)) out.push_back(trim(cell));
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

int Dataset::task_index(const std::string& name) const {
  const auto it = std::find(task_names.begin(), task_names.end(), name);
  if (it == task_names.end()) {
    throw ConfigError("unknown task '" + name + "'");
  }
  return static_cast<int>(it - task_names.begin());
}

std::vector<int> Dataset::molecules_with_label(int task, int label) const {
  std::vector<int> out;
  for (std::size_t m = 0; m < labels.size(); ++m) {
    if (labels[m].at(static_cast<std::size_t>(task)) == label) out.push_back(static_cast<int>(m));
  }
  return out;
}

Dataset read_dataset(std::istream& in, std::ostream* log) {
  Dataset ds;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_cells(trim(line), ',');
    if (!have_header) {
      if (cells.empty() || cells[0] != "smiles") {
        throw FormatError(line_no, "expected header starting with 'smiles'");
      }
      if (cells.size() < 2) {
        throw FormatError(line_no, "header has no task columns");
      }
      for (std::size_t c = 1; c < cells.size(); ++c) {
        if (cells[c].rfind("task_", 0) != 0 || cells[c].size() == 5) {
          throw FormatError(line_no, "column '" + cells[c] + "' is not of the form task_<name>");
        }
        ds.task_names.push_back(cells[c].substr(5));
      }
      const std::set<std::string> unique(ds.task_names.begin(), ds.task_names.end());
      if (unique.size() != ds.task_names.size()) {
        throw FormatError(line_no, "duplicate task column");
      }
      have_header = true;
      continue;
    }
    if (cells.size() != ds.task_names.size() + 1) {
      throw FormatError(line_no, "expected " + std::to_string(ds.task_names.size() + 1) + " cells, found " +
                                     std::to_string(cells.size()));
    }
    std::vector<std::int8_t> row;
    for (std::size_t c = 1; c < cells.size(); ++c) {
      if (cells[c].empty()) {
        row.push_back(kMissingLabel);
      } else if (cells[c] == "0" || cells[c] == "1") {
        row.push_back(static_cast<std::int8_t>(cells[c][0] - '0'));
      } else {
        throw FormatError(line_no, "label '" + cells[c] + "' is not 0, 1 or empty");
      }
    }
    try {
      ds.molecules.push_back(std::make_shared<const MolGraph>(parse_smiles(cells[0])));
      ds.labels.push_back(std::move(row));
    } catch (const ParseError& e) {
      ++ds.dropped;
      if (log) *log << "warning: line " << line_no << ": dropped '" << cells[0] << "': " << e.what() << '\n';
    }
  }
  if (!have_header) {
    throw FormatError(line_no == 0 ? 1 : line_no, "missing header");
  }
  if (ds.dropped > 0 && log) {
    *log << "warning: " << ds.dropped << " molecule(s) dropped as unparsable\n";
  }
  return ds;
}

Dataset load_dataset(const std::string& path, std::ostream* log) {
  std::ifstream in(path);
  if (!in) {
    throw Error("cannot open dataset " + path);
  }
  return read_dataset(in, log);
}

TaskSplit read_split(std::istream& in, const Dataset& dataset) {
  TaskSplit split;
  bool seen_train = false, seen_test = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos) {
      throw FormatError(line_no, "expected 'train: ...' or 'test: ...'");
    }
    const std::string key = trim(line.substr(0, colon));
    std::vector<int>* target = nullptr;
    if (key == "train" && !seen_train) {
      target = &split.train;
      seen_train = true;
    } else if (key == "test" && !seen_test) {
      target = &split.test;
      seen_test = true;
    } else {
      throw FormatError(line_no, "unexpected or repeated key '" + key + "'");
    }
    for (const auto& name : split_cells(line.substr(colon + 1), ',')) {
      if (name.empty()) continue;
      try {
        target->push_back(dataset.task_index(name));
      } catch (const ConfigError& e) {
        throw FormatError(line_no, e.what());
      }
    }
  }
  if (!seen_train || !seen_test) {
    throw FormatError(line_no, "split needs both a train and a test line");
  }
  std::set<int> train(split.train.begin(), split.train.end());
  if (train.size() != split.train.size()) {
    throw FormatError(0, "duplicate train task");
  }
  for (int t : split.test) {
    if (train.count(t)) {
      throw FormatError(0, "task '" + dataset.task_names[static_cast<std::size_t>(t)] + "' is in both train and test");
    }
  }
  return split;
}

TaskSplit load_split(const std::string& path, const Dataset& dataset) {
  std::ifstream in(path);
  if (!in) {
    throw Error("cannot open split file " + path);
  }
  return read_split(in, dataset);
}

bool can_sample(const Dataset& dataset, int task, int shots) {
  const auto pos = dataset.molecules_with_label(task, 1).size();
  const auto neg = dataset.molecules_with_label(task, 0).size();
  const auto k = static_cast<std::size_t>(shots);
  return pos >= k && neg >= k && pos + neg >= 2 * k + 1;
}

Episode sample_episode(const Dataset& dataset, int task, int shots, int query_size, Rng& rng) {
  if (task < 0 || static_cast<std::size_t>(task) >= dataset.num_tasks()) {
    throw ContractError("task index out of range");
  }
  if (shots < 1 || query_size < 1) {
    throw ContractError("episodes need K >= 1 and M >= 1");
  }
  const std::string& name = dataset.task_names[static_cast<std::size_t>(task)];
  if (!can_sample(dataset, task, shots)) {
    throw SamplingError("task '" + name + "' has too few labeled molecules for a " + std::to_string(shots) +
                        "-shot episode");
  }
  auto pos = dataset.molecules_with_label(task, 1);
  auto neg = dataset.molecules_with_label(task, 0);
  const auto k = static_cast<std::size_t>(shots);

  // Partial Fisher-Yates: the first K entries become the support, the rest stay available.
  auto draw = [&rng](std::vector<int>& pool, std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t j = i + rng.below(pool.size() - i);
      std::swap(pool[i], pool[j]);
    }
  };

  Episode e;
  e.task = task;
  draw(pos, k);
  draw(neg, k);
  for (std::size_t i = 0; i < k; ++i) {
    e.support.push_back(pos[i]);
    e.support_labels.push_back(1);
  }
  for (std::size_t i = 0; i < k; ++i) {
    e.support.push_back(neg[i]);
    e.support_labels.push_back(0);
  }

  const std::size_t rest_pos = pos.size() - k;
  const std::size_t rest_neg = neg.size() - k;
  const std::size_t m = std::min(static_cast<std::size_t>(query_size), rest_pos + rest_neg);
  std::size_t q_pos = std::min(rest_pos, (m + 1) / 2);
  const std::size_t q_neg = std::min(rest_neg, m - q_pos);
  q_pos = m - q_neg;

  std::vector<int> qp(pos.begin() + static_cast<std::ptrdiff_t>(k), pos.end());
  std::vector<int> qn(neg.begin() + static_cast<std::ptrdiff_t>(k), neg.end());
  draw(qp, q_pos);
  draw(qn, q_neg);
  std::vector<std::pair<int, int>> query;
  for (std::size_t i = 0; i < q_pos; ++i) query.emplace_back(qp[i], 1);
  for (std::size_t i = 0; i < q_neg; ++i) query.emplace_back(qn[i], 0);
  rng.shuffle(query);
  for (const auto& [mol, label] : query) {
    e.query.push_back(mol);
    e.query_labels.push_back(label);
  }
  return e;
}

}  // namespace adaptmol
