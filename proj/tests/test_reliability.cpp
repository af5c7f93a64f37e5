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

#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "releval/moments.hpp"
#include "releval/reliability.hpp"
#include "releval/util/rng.hpp"

using namespace releval;

namespace {

std::vector<double> random_scores(std::size_t n, std::uint64_t seed, double lo = 0.0,
                                  double hi = 1.0) {
  SplitMix64 rng(seed);
  std::vector<double> out(n);
  for (auto& x : out) x = rng.next_uniform(lo, hi);
  return out;
}

std::vector<double> sorted_copy(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST_CASE("binomial_capped counts and saturates") {
  CHECK(binomial_capped(8, 3, 1000) == 56);
  CHECK(binomial_capped(8, 0, 1000) == 1);
  CHECK(binomial_capped(8, 8, 1000) == 1);
  CHECK(binomial_capped(100, 50, 1000) == 1001);  // saturated
  CHECK(binomial_capped(3, 5, 1000) == 0);
  CHECK(binomial_capped(12, 6, 1000) == 924);
}

TEST_CASE("deviation set at n = N is exactly {0}") {
  auto scores = random_scores(20, 1);
  for (Moment m : {Moment::first, Moment::second}) {
    DeviationSet dev = deviation_set(scores, 20, m, 1000, 7);
    CHECK(dev.exact);
    REQUIRE(dev.deviations.size() == 1);
    CHECK(dev.deviations[0] == 0.0);
  }
}

TEST_CASE("constant scores give zero deviations at every n") {
  // dyadic constant: every partial mean is exact, so deviations are exactly 0
  std::vector<double> dyadic(10, 0.5);
  for (std::uint32_t n = 1; n <= 10; ++n) {
    for (Moment m : {Moment::first, Moment::second}) {
      DeviationSet dev = deviation_set(dyadic, n, m, 200, 3);
      for (double d : dev.deviations) CHECK(d == 0.0);
    }
  }
  // non-dyadic constant: means of different subset sizes can differ by an
  // ulp; deviations collapse to rounding noise, far below any usable epsilon
  std::vector<double> scores(10, 0.42);
  for (std::uint32_t n = 1; n <= 10; ++n) {
    for (Moment m : {Moment::first, Moment::second}) {
      DeviationSet dev = deviation_set(scores, n, m, 200, 3);
      for (double d : dev.deviations) CHECK(d <= 1e-15);
    }
  }
}

TEST_CASE("exhaustive deviation sets equal the brute-force oracle as multisets") {
  // N = 8 distinct values, n = 3: C(8,3) = 56 subsets
  auto scores = random_scores(8, 99);
  for (Moment m : {Moment::first, Moment::second}) {
    DeviationSet dev = deviation_set(scores, 3, m, 1000, 5);
    REQUIRE(dev.exact);
    REQUIRE(dev.deviations.size() == 56);
    auto expected = oracle::all_subset_deviations(scores, 3, static_cast<int>(m));
    auto got = sorted_copy(dev.deviations);
    auto want = sorted_copy(expected);
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == want[i]);
  }
}

TEST_CASE("monte carlo deviations are members of the exhaustive multiset") {
  auto scores = random_scores(12, 4);
  // C(12,5) = 792 > K = 100 forces the Monte Carlo path
  DeviationSet dev = deviation_set(scores, 5, Moment::first, 100, 11);
  CHECK_FALSE(dev.exact);
  CHECK(dev.deviations.size() == 100);
  auto all = sorted_copy(oracle::all_subset_deviations(scores, 5, 1));
  for (double d : dev.deviations)
    CHECK(std::binary_search(all.begin(), all.end(), d));
}

TEST_CASE("monte carlo path with K >= C(N,n) dispatches to exact enumeration") {
  auto scores = random_scores(12, 8);
  for (std::uint32_t n : {2u, 6u, 11u}) {
    DeviationSet dev = deviation_set(scores, n, Moment::second, 1000, 2);
    CHECK(dev.exact);  // C(12,6) = 924 <= 1000
    auto want = sorted_copy(oracle::all_subset_deviations(scores, n, 2));
    auto got = sorted_copy(dev.deviations);
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == want[i]);
  }
}

TEST_CASE("deviation set preconditions") {
  auto scores = random_scores(10, 2);
  CHECK_THROWS_AS(deviation_set(scores, 0, Moment::first, 10, 0), EvalError);
  CHECK_THROWS_AS(deviation_set(scores, 11, Moment::first, 10, 0), EvalError);
  auto incomplete = scores;
  incomplete[3] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(deviation_set(incomplete, 2, Moment::first, 10, 0), EvalError);
}

TEST_CASE("deviation set is deterministic given the seed") {
  auto scores = random_scores(30, 6);
  DeviationSet a = deviation_set(scores, 7, Moment::first, 500, 42);
  DeviationSet b = deviation_set(scores, 7, Moment::first, 500, 42);
  CHECK(a.deviations == b.deviations);
  DeviationSet c = deviation_set(scores, 7, Moment::first, 500, 43);
  CHECK(a.deviations != c.deviations);
}

TEST_CASE("confidence interval on the degenerate set") {
  DeviationSet dev{8, Moment::first, {0.0}, true};
  ConfidenceInterval ci = confidence_interval(dev, 0.1);
  CHECK(ci.lower == 0.0);
  CHECK(ci.upper == 0.0);
}

TEST_CASE("confidence interval interpolates ranks linearly") {
  DeviationSet dev;
  dev.n = 1;
  for (int i = 0; i <= 10; ++i) dev.deviations.push_back(i / 100.0);
  ConfidenceInterval ci = confidence_interval(dev, 0.1);
  CHECK(ci.lower == doctest::Approx(0.005).epsilon(1e-12));
  CHECK(ci.upper == doctest::Approx(0.095).epsilon(1e-12));
}

TEST_CASE("confidence interval equals the oracle quantiles exactly") {
  auto scores = random_scores(8, 5);
  DeviationSet dev = deviation_set(scores, 3, Moment::first, 1000, 0);
  ConfidenceInterval ci = confidence_interval(dev, 0.1);
  CHECK(ci.lower == oracle::quantile(dev.deviations, 0.05));
  CHECK(ci.upper == oracle::quantile(dev.deviations, 0.95));
  CHECK_THROWS_AS(confidence_interval(dev, 0.0), EvalError);
  CHECK_THROWS_AS(confidence_interval(dev, 1.0), EvalError);
}

TEST_CASE("constant scores yield n* = 1 for both moments") {
  std::vector<double> scores(16, 0.9);
  ReliabilityParams params = ReliabilityParams::validated(0.001, 0.05, 16, 100, 9);
  ReliabilityReport report = estimate_n_star(scores, params);
  CHECK(report.n_star_first == 1);
  CHECK(report.n_star_second == 1);
  CHECK(report.n_star_combined == 1);
  CHECK(report.stable_n_star_combined == 1);
  CHECK_FALSE(report.unreliable_at_n);
}

TEST_CASE("n = 1 deviations are |x_i - mean| in closed form, so wide epsilon gives n* = 1") {
  auto scores = random_scores(10, 77, 0.4, 0.6);  // spread < 0.25 around the mean
  double mean = first_moment(scores);

  DeviationSet dev = deviation_set(scores, 1, Moment::first, 1000, 0);
  REQUIRE(dev.exact);
  std::vector<double> closed_form;
  for (double x : scores) closed_form.push_back(std::abs(x - mean));
  auto got = sorted_copy(dev.deviations);
  auto want = sorted_copy(closed_form);
  for (std::size_t i = 0; i < want.size(); ++i) CHECK(got[i] == want[i]);

  ReliabilityParams params = ReliabilityParams::validated(0.25, 0.1, 10, 1000, 0);
  ReliabilityReport report = estimate_n_star(scores, params);
  CHECK(report.n_star_first == 1);
}

TEST_CASE("estimate_n_star matches the full brute-force oracle on N = 8") {
  auto scores = random_scores(8, 314);
  const double epsilon = 0.02;
  const double delta = 0.1;
  ReliabilityParams params = ReliabilityParams::validated(epsilon, delta, 8, 1000, 17);
  ReliabilityReport report = estimate_n_star(scores, params, "ref");

  oracle::BruteForceReport expected = oracle::brute_force_report(scores, epsilon, delta);
  for (int m : {1, 2}) {
    const auto& got = m == 1 ? report.curve_first : report.curve_second;
    const auto& want = m == 1 ? expected.first : expected.second;
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      CHECK(got[i].exact);
      CHECK(got[i].deviation_count == want[i].sorted_deviations.size());
      CHECK(got[i].ci_lower == want[i].ci_lower);
      CHECK(got[i].ci_upper == want[i].ci_upper);
    }
  }
  CHECK(report.n_star_first == expected.n_star_first);
  CHECK(report.n_star_second == expected.n_star_second);
  CHECK(report.n_star_combined == expected.n_star_combined);
  CHECK(report.stable_n_star_first == expected.stable_n_star_first);
  CHECK(report.stable_n_star_second == expected.stable_n_star_second);
  CHECK(report.stable_n_star_combined == expected.stable_n_star_combined);
}

TEST_CASE("estimate_n_star preconditions") {
  auto scores = random_scores(10, 1);
  ReliabilityParams params = ReliabilityParams::validated(0.01, 0.1, 12, 100, 0);
  CHECK_THROWS_AS(estimate_n_star(scores, params), EvalError);  // LengthMismatch
  auto incomplete = random_scores(12, 1);
  incomplete[0] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(estimate_n_star(incomplete, params), EvalError);
}

TEST_CASE("n* exists for every positive epsilon and the endpoint is flagged when degenerate") {
  // alternating extreme scores keep deviations large until n approaches N
  std::vector<double> scores;
  for (int i = 0; i < 12; ++i) scores.push_back(i % 2 ? 1.0 : 0.0);
  ReliabilityParams params = ReliabilityParams::validated(1e-9, 0.1, 12, 2000, 5);
  ReliabilityReport report = estimate_n_star(scores, params);
  REQUIRE(report.n_star_combined.has_value());
  CHECK(*report.n_star_combined == 12);
  CHECK(report.unreliable_at_n);
}

TEST_CASE("determinism: identical inputs give identical reports") {
  auto scores = random_scores(40, 55);
  ReliabilityParams params = ReliabilityParams::validated(0.01, 0.1, 40, 400, 123);
  ReliabilityReport a = estimate_n_star(scores, params, "m");
  ReliabilityReport b = estimate_n_star(scores, params, "m");
  CHECK(a == b);
}

TEST_CASE("exhaustive max deviation of the first moment is non-increasing in n") {
  auto scores = random_scores(8, 21);
  double prev_max = std::numeric_limits<double>::infinity();
  for (std::uint32_t n = 1; n <= 8; ++n) {
    DeviationSet dev = deviation_set(scores, n, Moment::first, 1000, 0);
    REQUIRE(dev.exact);
    double max_dev = *std::max_element(dev.deviations.begin(), dev.deviations.end());
    CHECK(max_dev <= prev_max);
    prev_max = max_dev;
  }
}

TEST_CASE("scaling scores by a power of two scales first-moment deviations exactly") {
  // dyadic scores keep every operation exact
  std::vector<double> scores{0.0, 0.125, 0.25, 0.375, 0.5, 0.625, 0.75, 1.0};
  const double a = 0.5;
  std::vector<double> scaled;
  for (double x : scores) scaled.push_back(a * x);

  for (std::uint32_t n = 1; n <= 8; ++n) {
    DeviationSet base = deviation_set(scores, n, Moment::first, 1000, 0);
    DeviationSet scal = deviation_set(scaled, n, Moment::first, 1000, 0);
    auto want = sorted_copy(base.deviations);
    auto got = sorted_copy(scal.deviations);
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == a * want[i]);
  }

  const double epsilon = 0.03125;  // 1/32; a*eps = 1/64 stays exact
  ReliabilityParams p1 = ReliabilityParams::validated(epsilon, 0.1, 8, 1000, 0);
  ReliabilityParams p2 = ReliabilityParams::validated(a * epsilon, 0.1, 8, 1000, 0);
  CHECK(estimate_n_star(scores, p1).n_star_first ==
        estimate_n_star(scaled, p2).n_star_first);
}

TEST_CASE("convergence curve carries the plot series and markers") {
  std::vector<double> constant(10, 0.25);
  ReliabilityParams params = ReliabilityParams::validated(0.01, 0.1, 10, 100, 0);
  ReliabilityReport report = estimate_n_star(constant, params);
  ConvergenceCurve curve = convergence_curve(report, Moment::first);
  REQUIRE(curve.points.size() == 10);
  for (const auto& [n, v] : curve.points) CHECK(v == 0.0);
  CHECK(curve.n_star == 1);

  auto scores = random_scores(10, 3);
  ReliabilityReport r2 = estimate_n_star(scores, params);
  ConvergenceCurve c2 = convergence_curve(r2, Moment::second);
  CHECK(c2.points.back().first == 10);
  CHECK(c2.points.back().second == 0.0);

  ReliabilityReport empty;
  CHECK_THROWS_AS(convergence_curve(empty, Moment::first), EvalError);
}

TEST_CASE("proxy upper bound check") {
  std::vector<std::pair<std::uint32_t, double>> base{{1, 0.05}, {2, 0.03}, {3, 0.0}};
  CHECK(proxy_upper_bound_check(base, base, 0.0).holds);

  auto above = base;
  for (auto& [n, v] : above) v += 0.01;
  CHECK(proxy_upper_bound_check(above, base, 0.0).holds);

  ProxyCheckResult fail = proxy_upper_bound_check(base, above, 0.0);
  CHECK_FALSE(fail.holds);
  CHECK(fail.violations == std::vector<std::uint32_t>{1, 2, 3});
  CHECK(proxy_upper_bound_check(base, above, 0.011).holds);

  std::vector<std::pair<std::uint32_t, double>> other_grid{{1, 0.0}, {4, 0.0}, {9, 0.0}};
  CHECK_THROWS_AS(proxy_upper_bound_check(base, other_grid, 0.0), EvalError);
  std::vector<std::pair<std::uint32_t, double>> shorter{{1, 0.0}};
  CHECK_THROWS_AS(proxy_upper_bound_check(base, shorter, 0.0), EvalError);
}

TEST_CASE("higher-variance synthetic model dominates the lower-variance one") {
  const std::uint32_t n_ref = 40;
  auto small_model = random_scores(n_ref, 1001, 0.3, 0.7);   // variance ~ 0.0133
  auto large_model = random_scores(n_ref, 1002, 0.55, 0.65);  // variance ~ 0.00083
  ReliabilityParams params = ReliabilityParams::validated(0.01, 0.1, n_ref, 300, 7);
  ConvergenceCurve small_curve =
      convergence_curve(estimate_n_star(small_model, params), Moment::first);
  ConvergenceCurve large_curve =
      convergence_curve(estimate_n_star(large_model, params), Moment::first);
  ProxyCheckResult res = proxy_upper_bound_check(small_curve.points, large_curve.points, 0.0);
  CHECK(res.holds);
  // reversed roles must violate somewhere before the zero endpoint
  ProxyCheckResult rev = proxy_upper_bound_check(large_curve.points, small_curve.points, 0.0);
  CHECK_FALSE(rev.holds);
}
