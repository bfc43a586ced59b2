// SPDX-FileCopyrightText: Copyright (c) 2026 The adaptmol authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace adaptmol {

// Base for every error raised by the library; the CLI maps these to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

// A caller broke a documented precondition.
class ContractError : public Error {
 public:
  using Error::Error;
};

class EvaluationError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t offset, const std::string& what)
      : Error("SMILES parse error at offset " + std::to_string(offset) + ": " + what),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class FormatError : public Error {
 public:
  /// Line 0 means the problem is not tied to a line.
  FormatError(std::size_t line, const std::string& what)
      : Error((line == 0 ? std::string("format error: ") : "format error at line " + std::to_string(line) + ": ") +
              what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class SamplingError : public Error {
 public:
  using Error::Error;
};

// ROC-AUC / PR-AUC requested on inputs where the metric is undefined.
class UndefinedMetricError : public Error {
 public:
  using Error::Error;
};

}  // namespace adaptmol
