// Copyright 2026 The mixgan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace mixgan {

/// Shapes or support sizes that do not line up.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A caller broke an operation's precondition (non-scalar backward root,
/// mismatched batch sizes, empty center list, ...).
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Mathematically undefined request, e.g. a complement of a single component.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Invalid architecture description.
class SpecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Invalid experiment configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed file contents (bad magic, bad header).
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File payload shorter than its header promises.
class LengthError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Data-level failures such as an empty filtered dataset.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File system failures.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A loss or parameter went non-finite during training.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(std::string sub_model, long iteration, const std::string& what)
      : std::runtime_error(what), sub_model_(std::move(sub_model)), iteration_(iteration) {}

  const std::string& sub_model() const noexcept { return sub_model_; }
  long iteration() const noexcept { return iteration_; }

 private:
  std::string sub_model_;
  long iteration_;
};

}  // namespace mixgan
