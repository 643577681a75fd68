// Copyright 2026 The MQT Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace mqt {

/// Malformed dataset or checkpoint document. The message names the field.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(field) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Shape, index or dimension contract violated by the caller.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Missing or inconsistent dataset coverage.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration. `path` is the offending JSON field path.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// Numerical failure: singular matrices, degenerate scales, NaN gradients.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Iterative eigensolver did not reach the requested tolerance.
class ConvergenceError : public NumericalError {
 public:
  ConvergenceError(const std::string& what, double estimate, double residual)
      : NumericalError(what), estimate_(estimate), residual_(residual) {}
  double estimate() const noexcept { return estimate_; }
  double residual() const noexcept { return residual_; }

 private:
  double estimate_;
  double residual_;
};

}  // namespace mqt
