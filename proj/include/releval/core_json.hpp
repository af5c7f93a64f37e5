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

#include <json.hpp>

#include "releval/core.hpp"

namespace releval {

// JSON encode/decode for every core type. decode(encode(x)) == x bit-exactly:
// doubles rely on nlohmann's shortest round-trip formatting, missing matrix
// cells map to null. Decoding routes through the validating factories.

nlohmann::json encode(const Example& x);
nlohmann::json encode(const DatasetSpec& x);
nlohmann::json encode(const DecodingParams& x);
nlohmann::json encode(const ModelSpec& x);
nlohmann::json encode(const ReliabilityParams& x);
nlohmann::json encode(const ScoreMatrix& x);
nlohmann::json encode(const MomentEstimate& x);

Example decode_example(const nlohmann::json& j);
DatasetSpec decode_dataset(const nlohmann::json& j);
DecodingParams decode_decoding(const nlohmann::json& j);
/// Missing temperatures fall back to the known serving default for the
/// model family (greedy when unlisted).
DecodingParams decode_decoding(const nlohmann::json& j, std::string_view model_name);
ModelSpec decode_model(const nlohmann::json& j);
ReliabilityParams decode_reliability_params(const nlohmann::json& j);
ScoreMatrix decode_matrix(const nlohmann::json& j);
MomentEstimate decode_moment_estimate(const nlohmann::json& j);

/// Load a dataset / model spec from a JSON file (the CLI input formats).
DatasetSpec load_dataset(const std::string& path);
ModelSpec load_model(const std::string& path);

}  // namespace releval
