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

#include <span>
#include <string_view>

#include "releval/core.hpp"

namespace releval {

// Empirical method-of-moments estimation over score samples. Pure functions,
// 64-bit accumulation throughout, reproducible against compensated-summation
// references to 1e-12. The variance is deliberately the two-pass population
// form (divisor = sample count), not Welford and not the (n-1) unbiased
// estimator.

/// Arithmetic mean. Throws EmptySample on empty input.
double first_moment(std::span<const double> scores);

/// Population variance: mean of squared deviations from first_moment.
double second_moment(std::span<const double> scores);

MomentEstimate estimate_moments(std::span<const double> scores);

/// Mean of one matrix row = the metric value of that perturbation over the
/// dataset. Rows with missing cells are rejected, never imputed.
double aggregate_row(const ScoreMatrix& matrix, std::string_view perturbation_id);

/// All row aggregates in row order; throws IncompleteScores naming every row
/// that has missing cells.
std::vector<double> aggregate_rows(const ScoreMatrix& matrix);

/// Normative quantile rule shared with the reliability module: sort
/// ascending, rank r = q*(m-1), linear interpolation between neighbors.
double quantile_sorted(std::span<const double> sorted, double q);
double quantile(std::span<const double> values, double q);

struct SummaryStats {
  double median = 0, q1 = 0, q3 = 0, min = 0, max = 0, mean = 0, variance = 0;
  bool operator==(const SummaryStats&) const = default;
};

SummaryStats summary(std::span<const double> scores);

}  // namespace releval
