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

#include "releval/moments.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace releval {

double first_moment(std::span<const double> scores) {
  if (scores.empty()) throw EvalError(Errc::empty_sample, "first_moment of an empty sample");
  double sum = 0.0;
  for (double s : scores) sum += s;
  return sum / static_cast<double>(scores.size());
}

double second_moment(std::span<const double> scores) {
  if (scores.empty()) throw EvalError(Errc::empty_sample, "second_moment of an empty sample");
  double mean = first_moment(scores);
  double sum_sq = 0.0;
  for (double s : scores) {
    double d = s - mean;
    sum_sq += d * d;
  }
  return sum_sq / static_cast<double>(scores.size());
}

MomentEstimate estimate_moments(std::span<const double> scores) {
  return MomentEstimate::validated(first_moment(scores), second_moment(scores), scores.size());
}

double aggregate_row(const ScoreMatrix& matrix, std::string_view perturbation_id) {
  auto r = matrix.row_index(perturbation_id);
  if (!r)
    throw EvalError(Errc::unknown_row, "no row '" + std::string(perturbation_id) + "' in matrix");
  std::size_t missing = matrix.missing_in_row(*r);
  if (missing > 0)
    throw EvalError(Errc::missing_values, "row '" + std::string(perturbation_id) + "' has " +
                                              std::to_string(missing) + " missing value(s)");
  return first_moment(matrix.row(*r));
}

std::vector<double> aggregate_rows(const ScoreMatrix& matrix) {
  std::string incomplete;
  for (std::size_t r = 0; r < matrix.rows(); ++r) {
    if (matrix.missing_in_row(r) > 0) {
      if (!incomplete.empty()) incomplete += ", ";
      incomplete += matrix.perturbation_ids()[r];
    }
  }
  if (!incomplete.empty())
    throw EvalError(Errc::incomplete_scores, "rows with missing values: " + incomplete);
  std::vector<double> out;
  out.reserve(matrix.rows());
  for (std::size_t r = 0; r < matrix.rows(); ++r) out.push_back(first_moment(matrix.row(r)));
  return out;
}

double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw EvalError(Errc::empty_sample, "quantile of an empty sample");
  double rank = q * static_cast<double>(sorted.size() - 1);
  std::size_t lo = static_cast<std::size_t>(std::floor(rank));
  std::size_t hi = static_cast<std::size_t>(std::ceil(rank));
  if (hi >= sorted.size()) hi = sorted.size() - 1;
  double frac = rank - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double quantile(std::span<const double> values, double q) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  return quantile_sorted(sorted, q);
}

SummaryStats summary(std::span<const double> scores) {
  if (scores.empty()) throw EvalError(Errc::empty_sample, "summary of an empty sample");
  std::vector<double> sorted(scores.begin(), scores.end());
  std::sort(sorted.begin(), sorted.end());
  SummaryStats s;
  s.min = sorted.front();
  s.max = sorted.back();
  s.q1 = quantile_sorted(sorted, 0.25);
  s.median = quantile_sorted(sorted, 0.5);
  s.q3 = quantile_sorted(sorted, 0.75);
  s.mean = first_moment(scores);
  s.variance = second_moment(scores);
  return s;
}

}  // namespace releval
