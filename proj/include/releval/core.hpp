// Copyright 2026 the releval authors
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

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "releval/errors.hpp"

namespace releval {

// Domain types shared by every module. All of them are immutable after
// construction and safe to share across threads; the validating factories
// throw ValidationError naming every violated invariant.

enum class TaskKind { multiple_choice, open_ended };

std::string_view task_kind_name(TaskKind kind);
TaskKind task_kind_from_name(std::string_view name);

/// Gold answer: a choice index for multiple choice, free text otherwise.
using Gold = std::variant<std::size_t, std::string>;

struct Example {
  std::string id;
  std::string question;
  std::vector<std::string> choices;  // empty for open-ended tasks
  Gold gold;

  bool operator==(const Example&) const = default;

  /// Invariant violations for this example under the given task kind.
  std::vector<std::string> violations(TaskKind kind) const;
};

struct DatasetSpec {
  std::string id;
  TaskKind task_kind = TaskKind::multiple_choice;
  std::vector<Example> examples;
  std::string metric_id;

  static DatasetSpec validated(std::string id, TaskKind task_kind,
                               std::vector<Example> examples, std::string metric_id);

  bool operator==(const DatasetSpec&) const = default;
};

struct DecodingParams {
  double temperature = 0.0;  // 0 denotes greedy decoding
  std::uint32_t max_tokens = 256;
  double top_p = 1.0;

  static DecodingParams validated(double temperature, std::uint32_t max_tokens, double top_p);

  bool operator==(const DecodingParams&) const = default;
};

enum class ModelRole { candidate, reference };

std::string_view model_role_name(ModelRole role);
ModelRole model_role_from_name(std::string_view name);

struct ModelSpec {
  std::string id;
  std::string endpoint;  // base URL of an OpenAI-compatible server
  std::string model_name;
  DecodingParams decoding;
  ModelRole role = ModelRole::candidate;
  std::string api_key_env;  // env var holding the bearer token; empty = no auth

  static ModelSpec validated(std::string id, std::string endpoint, std::string model_name,
                             DecodingParams decoding, ModelRole role, std::string api_key_env = "");

  bool operator==(const ModelSpec&) const = default;
};

/// At most one reference model per evaluation suite.
void ensure_single_reference(std::span<const ModelSpec> models);

struct ReliabilityParams {
  double epsilon = 0.01;                       // acceptable deviation
  double delta = 0.1;                          // confidence level
  std::uint32_t reference_sample_count = 100;  // N
  std::uint32_t resamples_per_n = 1000;        // K, Monte Carlo subsets per candidate n
  std::uint64_t seed = 0;

  static ReliabilityParams validated(double epsilon, double delta,
                                     std::uint32_t reference_sample_count,
                                     std::uint32_t resamples_per_n, std::uint64_t seed);

  bool operator==(const ReliabilityParams&) const = default;
};

/// Per-(perturbation, example) metric values in [0,1]. Missing cells are
/// stored as NaN; they are legal in a matrix but poison row aggregates.
class ScoreMatrix {
 public:
  static double missing() { return std::numeric_limits<double>::quiet_NaN(); }
  static bool is_missing(double v) { return v != v; }

  /// values is row-major, size rows*cols, NaN marking missing cells.
  static ScoreMatrix validated(std::vector<std::string> perturbation_ids,
                               std::vector<std::string> example_ids, std::vector<double> values,
                               std::string model_id, std::string dataset_id);

  std::size_t rows() const { return perturbation_ids_.size(); }
  std::size_t cols() const { return example_ids_.size(); }
  double at(std::size_t r, std::size_t c) const { return values_[r * cols() + c]; }
  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(values_).subspan(r * cols(), cols());
  }
  std::size_t missing_in_row(std::size_t r) const;
  std::size_t missing_count() const;

  const std::vector<std::string>& perturbation_ids() const { return perturbation_ids_; }
  const std::vector<std::string>& example_ids() const { return example_ids_; }
  const std::vector<double>& values() const { return values_; }
  const std::string& model_id() const { return model_id_; }
  const std::string& dataset_id() const { return dataset_id_; }

  std::optional<std::size_t> row_index(std::string_view perturbation_id) const;

  /// NaN cells compare equal to NaN cells; everything else bit-exact.
  bool operator==(const ScoreMatrix& other) const;

 private:
  ScoreMatrix() = default;
  std::vector<std::string> perturbation_ids_;
  std::vector<std::string> example_ids_;
  std::vector<double> values_;
  std::string model_id_;
  std::string dataset_id_;
};

struct MomentEstimate {
  double mean = 0.0;      // empirical first moment
  double variance = 0.0;  // population form, divisor = sample count
  std::uint64_t sample_count = 0;

  static MomentEstimate validated(double mean, double variance, std::uint64_t sample_count);

  bool operator==(const MomentEstimate&) const = default;
};

/// Ids appear verbatim in delimiter-separated files; reject separators and
/// line breaks up front.
std::vector<std::string> id_violations(std::string_view id, std::string_view what);

}  // namespace releval
