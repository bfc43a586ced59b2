// SPDX-FileCopyrightText: Copyright (c) 2026 The adaptmol authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

//! @file Versioned JSON checkpoints. Every tensor is stored with its name and
//! shape; doubles are written in shortest round-trip form so a save/load cycle
//! is bit-exact.

#pragma once

#include <string>

#include <json.hpp>

#include "adaptmol/model.hpp"

namespace adaptmol {

inline constexpr const char* kCheckpointFormat = "adaptmol-checkpoint";
inline constexpr int kCheckpointVersion = 1;

/// `run_config` is echoed verbatim under "run_config".
nlohmann::ordered_json checkpoint_to_json(const Model& model,
                                          const nlohmann::ordered_json& run_config = nlohmann::ordered_json::object());

/// Throws FormatError on a wrong format name, version, missing tensor or shape.
Model checkpoint_from_json(const nlohmann::ordered_json& doc);

void save_checkpoint(const Model& model, const std::string& path,
                     const nlohmann::ordered_json& run_config = nlohmann::ordered_json::object());
Model load_checkpoint(const std::string& path);

}  // namespace adaptmol
