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

#include "releval/errors.hpp"

namespace releval {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::validation: return "Validation";
    case Errc::placeholder_missing: return "PlaceholderMissing";
    case Errc::empty_dimension: return "EmptyDimension";
    case Errc::k_exceeds_pool: return "KExceedsPool";
    case Errc::count_exceeds_cardinality: return "CountExceedsCardinality";
    case Errc::space_too_large: return "SpaceTooLarge";
    case Errc::missing_values: return "MissingValues";
    case Errc::unknown_row: return "UnknownRow";
    case Errc::empty_sample: return "EmptySample";
    case Errc::n_out_of_range: return "NOutOfRange";
    case Errc::incomplete_scores: return "IncompleteScores";
    case Errc::delta_out_of_range: return "DeltaOutOfRange";
    case Errc::length_mismatch: return "LengthMismatch";
    case Errc::missing_curve: return "MissingCurve";
    case Errc::grid_mismatch: return "GridMismatch";
    case Errc::endpoint_unreachable: return "EndpointUnreachable";
    case Errc::auth_failure: return "AuthFailure";
    case Errc::scorer_unknown: return "ScorerUnknown";
    case Errc::invalid_law: return "InvalidLaw";
    case Errc::malformed_file: return "MalformedFile";
    case Errc::duplicate_id: return "DuplicateId";
    case Errc::empty_scores: return "EmptyScores";
    case Errc::io_failure: return "IoFailure";
    case Errc::hash_collision: return "HashCollision";
  }
  return "Unknown";
}

std::string ValidationError::join(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += "; ";
    out += parts[i];
  }
  return out;
}

}  // namespace releval
