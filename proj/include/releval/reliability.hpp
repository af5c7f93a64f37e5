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
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "releval/core.hpp"

namespace releval {

// Minimal-reliable-sample-size estimation. Given N reference scores (one per
// perturbation), measure how far the empirical moments of random size-n
// subsets stray from the full-sample moments, build a delta-level percentile
// interval over those deviations per n, and pick the smallest n whose upper
// endpoint is within epsilon.

enum class Moment : int { first = 1, second = 2 };

struct DeviationSet {
  std::uint32_t n = 0;
  Moment moment = Moment::first;
  std::vector<double> deviations;  // |moment(subset) - moment(full)|, all >= 0
  bool exact = false;              // true when all C(N, n) subsets were enumerated
};

struct ConfidenceInterval {
  double lower = 0.0;  // delta/2 percentile
  double upper = 0.0;  // 1 - delta/2 percentile
  bool operator==(const ConfidenceInterval&) const = default;
};

struct CurvePoint {
  std::uint32_t n = 0;
  double ci_lower = 0.0;
  double ci_upper = 0.0;
  std::uint64_t deviation_count = 0;
  bool exact = false;
  bool operator==(const CurvePoint&) const = default;
};

struct ReliabilityReport {
  ReliabilityParams params;
  std::string reference_model_id;
  std::vector<CurvePoint> curve_first;   // n = 1..N
  std::vector<CurvePoint> curve_second;  // n = 1..N

  // Smallest n whose CI upper endpoint is within epsilon (first n passing).
  std::optional<std::uint32_t> n_star_first;
  std::optional<std::uint32_t> n_star_second;
  std::optional<std::uint32_t> n_star_combined;  // max over moments

  // Smallest n from which the condition holds at every measured n' >= n;
  // robust to Monte Carlo noise passing spuriously at small n. Downstream
  // defaults use these.
  std::optional<std::uint32_t> stable_n_star_first;
  std::optional<std::uint32_t> stable_n_star_second;
  std::optional<std::uint32_t> stable_n_star_combined;

  // n* = N means only the zero-deviation endpoint qualified; the estimate is
  // degenerate at this N.
  bool unreliable_at_n = false;

  const std::vector<CurvePoint>& curve(Moment m) const {
    return m == Moment::first ? curve_first : curve_second;
  }

  bool operator==(const ReliabilityReport&) const = default;
};

/// Deviations of the subset moment from the full-sample moment at subset
/// size n. Enumerates all C(N, n) subsets when that count is <= resamples,
/// otherwise draws `resamples` uniform subsets (independent draws, repeats
/// across draws permitted). Deterministic given seed; the RNG stream is
/// derived from (seed, n, moment) so distinct (n, moment) pairs are
/// independent and may be computed in parallel.
DeviationSet deviation_set(std::span<const double> reference_scores, std::uint32_t n,
                           Moment moment, std::uint32_t resamples, std::uint64_t seed);

/// Percentile interval [delta/2, 1 - delta/2] over the deviations, using the
/// normative sort + linear interpolation rule.
ConfidenceInterval confidence_interval(const DeviationSet& dev, double delta);

/// Full curve + n* computation for both moments.
ReliabilityReport estimate_n_star(std::span<const double> reference_scores,
                                  const ReliabilityParams& params,
                                  std::string reference_model_id = "");

struct ConvergenceCurve {
  Moment moment = Moment::first;
  std::vector<std::pair<std::uint32_t, double>> points;  // (n, CI upper)
  std::optional<std::uint32_t> n_star;
  std::optional<std::uint32_t> stable_n_star;
};

ConvergenceCurve convergence_curve(const ReliabilityReport& report, Moment moment);

struct ProxyCheckResult {
  bool holds = false;
  std::vector<std::uint32_t> violations;  // n values where small + slack < large
};

/// True iff the (cheap) small-model curve upper-bounds the large-model curve
/// at every n, up to slack. Curves must share the same n grid.
ProxyCheckResult proxy_upper_bound_check(
    std::span<const std::pair<std::uint32_t, double>> small_model_curve,
    std::span<const std::pair<std::uint32_t, double>> large_model_curve, double slack);

/// min(C(n, k), cap + 1): saturating binomial used to pick the exact vs
/// Monte Carlo path.
std::uint64_t binomial_capped(std::uint64_t n, std::uint64_t k, std::uint64_t cap);

}  // namespace releval
