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

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace releval {

enum class Errc {
  validation,
  placeholder_missing,
  empty_dimension,
  k_exceeds_pool,
  count_exceeds_cardinality,
  space_too_large,
  missing_values,
  unknown_row,
  empty_sample,
  n_out_of_range,
  incomplete_scores,
  delta_out_of_range,
  length_mismatch,
  missing_curve,
  grid_mismatch,
  endpoint_unreachable,
  auth_failure,
  scorer_unknown,
  invalid_law,
  malformed_file,
  duplicate_id,
  empty_scores,
  io_failure,
  hash_collision,
};

std::string_view errc_name(Errc code);

/// Single error type for all modules; `code()` distinguishes validation
/// failures (CLI exit 2) from runtime/network failures (CLI exit 1).
class EvalError : public std::runtime_error {
 public:
  EvalError(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  Errc code() const { return code_; }

  bool is_validation() const {
    switch (code_) {
      case Errc::endpoint_unreachable:
      case Errc::auth_failure:
      case Errc::io_failure:
        return false;
      default:
        return true;
    }
  }

 private:
  Errc code_;
};

/// Thrown by type constructors; carries every violated invariant, not just
/// the first one found.
class ValidationError : public EvalError {
 public:
  explicit ValidationError(std::vector<std::string> violations)
      : EvalError(Errc::validation, join(violations)), violations_(std::move(violations)) {}

  const std::vector<std::string>& violations() const { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& parts);
  std::vector<std::string> violations_;
};

/// Accumulates invariant violations during construction; throws at the end
/// so the error names all of them at once.
class InvariantChecker {
 public:
  void require(bool ok, std::string_view invariant) {
    if (!ok) violations_.emplace_back(invariant);
  }

  void finish() const {
    if (!violations_.empty()) throw ValidationError(violations_);
  }

 private:
  std::vector<std::string> violations_;
};

}  // namespace releval
