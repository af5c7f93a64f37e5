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

#include "releval/reliability.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <numeric>
#include <string>
#include <thread>

#include "releval/moments.hpp"
#include "releval/util/hash.hpp"
#include "releval/util/rng.hpp"

namespace releval {

namespace {

double subset_moment(std::span<const double> scores, std::span<const std::size_t> indices,
                     Moment moment, std::vector<double>& scratch) {
  scratch.clear();
  for (std::size_t i : indices) scratch.push_back(scores[i]);
  return moment == Moment::first ? first_moment(scratch) : second_moment(scratch);
}

void require_complete(std::span<const double> scores) {
  for (double s : scores)
    if (s != s)
      throw EvalError(Errc::incomplete_scores, "reference scores contain missing values");
}

// Spreads fn(0..count-1) over the available cores. Results must be written
// to disjoint slots; determinism comes from per-index derived seeds, not
// from scheduling order.
template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  unsigned hw = std::thread::hardware_concurrency();
  std::size_t workers = std::min<std::size_t>(hw == 0 ? 1 : hw, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

std::uint64_t binomial_capped(std::uint64_t n, std::uint64_t k, std::uint64_t cap) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  unsigned __int128 c = 1;
  for (std::uint64_t i = 0; i < k; ++i) {
    c = c * (n - i) / (i + 1);
    if (c > cap) return cap + 1;
  }
  return static_cast<std::uint64_t>(c);
}

DeviationSet deviation_set(std::span<const double> reference_scores, std::uint32_t n,
                           Moment moment, std::uint32_t resamples, std::uint64_t seed) {
  const std::size_t total = reference_scores.size();
  if (total == 0) throw EvalError(Errc::empty_sample, "reference scores are empty");
  if (n < 1 || n > total)
    throw EvalError(Errc::n_out_of_range, "n = " + std::to_string(n) + " outside [1, " +
                                              std::to_string(total) + "]");
  if (resamples < 1) throw EvalError(Errc::n_out_of_range, "resamples must be positive");
  require_complete(reference_scores);

  const double full_moment = moment == Moment::first ? first_moment(reference_scores)
                                                     : second_moment(reference_scores);

  DeviationSet out;
  out.n = n;
  out.moment = moment;

  std::vector<double> scratch;
  scratch.reserve(n);

  std::uint64_t subset_count = binomial_capped(total, n, resamples);
  if (subset_count <= resamples) {
    out.exact = true;
    out.deviations.reserve(subset_count);
    // odometer over index combinations, ascending within each subset
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (;;) {
      out.deviations.push_back(
          std::abs(subset_moment(reference_scores, idx, moment, scratch) - full_moment));
      std::size_t i = n;
      while (i-- > 0) {
        if (idx[i] < total - n + i) {
          ++idx[i];
          for (std::size_t j = i + 1; j < n; ++j) idx[j] = idx[j - 1] + 1;
          break;
        }
        if (i == 0) return out;
      }
    }
  }

  out.exact = false;
  out.deviations.reserve(resamples);
  SplitMix64 rng(derive_seed(seed, n, static_cast<std::uint64_t>(moment)));
  for (std::uint32_t k = 0; k < resamples; ++k) {
    auto idx = sample_subset(rng, total, n);
    out.deviations.push_back(
        std::abs(subset_moment(reference_scores, idx, moment, scratch) - full_moment));
  }
  return out;
}

ConfidenceInterval confidence_interval(const DeviationSet& dev, double delta) {
  if (!(delta > 0.0 && delta < 1.0))
    throw EvalError(Errc::delta_out_of_range, "delta must lie in (0, 1)");
  if (dev.deviations.empty())
    throw EvalError(Errc::empty_sample, "deviation set is empty");
  std::vector<double> sorted = dev.deviations;
  std::sort(sorted.begin(), sorted.end());
  ConfidenceInterval ci;
  ci.lower = quantile_sorted(sorted, delta / 2.0);
  ci.upper = quantile_sorted(sorted, 1.0 - delta / 2.0);
  return ci;
}

namespace {

std::vector<CurvePoint> moment_curve(std::span<const double> scores,
                                     const ReliabilityParams& params, Moment moment) {
  const std::uint32_t n_max = params.reference_sample_count;
  std::vector<CurvePoint> curve(n_max);
  parallel_for(n_max, [&](std::size_t i) {
    std::uint32_t n = static_cast<std::uint32_t>(i) + 1;
    DeviationSet dev = deviation_set(scores, n, moment, params.resamples_per_n, params.seed);
    ConfidenceInterval ci = confidence_interval(dev, params.delta);
    curve[i] = CurvePoint{n, ci.lower, ci.upper, dev.deviations.size(), dev.exact};
  });
  return curve;
}

std::optional<std::uint32_t> first_passing(const std::vector<CurvePoint>& curve, double epsilon) {
  for (const auto& p : curve)
    if (epsilon >= p.ci_upper) return p.n;
  return std::nullopt;
}

std::optional<std::uint32_t> stable_passing(const std::vector<CurvePoint>& curve, double epsilon) {
  std::optional<std::uint32_t> start;
  for (auto it = curve.rbegin(); it != curve.rend(); ++it) {
    if (epsilon >= it->ci_upper)
      start = it->n;
    else
      break;
  }
  return start;
}

std::optional<std::uint32_t> combined(std::optional<std::uint32_t> a,
                                      std::optional<std::uint32_t> b) {
  if (a && b) return std::max(*a, *b);
  return std::nullopt;
}

}  // namespace

ReliabilityReport estimate_n_star(std::span<const double> reference_scores,
                                  const ReliabilityParams& params,
                                  std::string reference_model_id) {
  if (reference_scores.size() != params.reference_sample_count)
    throw EvalError(Errc::length_mismatch,
                    "got " + std::to_string(reference_scores.size()) + " reference scores, params say N = " +
                        std::to_string(params.reference_sample_count));
  require_complete(reference_scores);

  ReliabilityReport report;
  report.params = params;
  report.reference_model_id = std::move(reference_model_id);
  report.curve_first = moment_curve(reference_scores, params, Moment::first);
  report.curve_second = moment_curve(reference_scores, params, Moment::second);

  report.n_star_first = first_passing(report.curve_first, params.epsilon);
  report.n_star_second = first_passing(report.curve_second, params.epsilon);
  report.n_star_combined = combined(report.n_star_first, report.n_star_second);
  report.stable_n_star_first = stable_passing(report.curve_first, params.epsilon);
  report.stable_n_star_second = stable_passing(report.curve_second, params.epsilon);
  report.stable_n_star_combined =
      combined(report.stable_n_star_first, report.stable_n_star_second);

  report.unreliable_at_n =
      report.n_star_combined && *report.n_star_combined == params.reference_sample_count;
  return report;
}

ConvergenceCurve convergence_curve(const ReliabilityReport& report, Moment moment) {
  const auto& curve = report.curve(moment);
  if (curve.empty())
    throw EvalError(Errc::missing_curve, "report has no curve for the requested moment");
  ConvergenceCurve out;
  out.moment = moment;
  out.points.reserve(curve.size());
  for (const auto& p : curve) out.points.emplace_back(p.n, p.ci_upper);
  out.n_star = moment == Moment::first ? report.n_star_first : report.n_star_second;
  out.stable_n_star =
      moment == Moment::first ? report.stable_n_star_first : report.stable_n_star_second;
  return out;
}

ProxyCheckResult proxy_upper_bound_check(
    std::span<const std::pair<std::uint32_t, double>> small_model_curve,
    std::span<const std::pair<std::uint32_t, double>> large_model_curve, double slack) {
  if (slack < 0.0) throw EvalError(Errc::validation, "slack must be non-negative");
  if (small_model_curve.size() != large_model_curve.size())
    throw EvalError(Errc::grid_mismatch, "curves have different lengths");
  ProxyCheckResult result;
  for (std::size_t i = 0; i < small_model_curve.size(); ++i) {
    if (small_model_curve[i].first != large_model_curve[i].first)
      throw EvalError(Errc::grid_mismatch,
                      "curves disagree on the n grid at position " + std::to_string(i));
    if (small_model_curve[i].second + slack < large_model_curve[i].second)
      result.violations.push_back(small_model_curve[i].first);
  }
  result.holds = result.violations.empty();
  return result;
}

}  // namespace releval
