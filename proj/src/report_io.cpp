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

#include <ctime>
#include <fstream>

#include "releval/report.hpp"

#include <json.hpp>

namespace releval {

using nlohmann::json;

namespace {

std::string utc_now() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json encode_curve(const std::vector<CurvePoint>& curve) {
  json out = json::array();
  for (const auto& p : curve)
    out.push_back(json{{"n", p.n},
                       {"ci_lower", p.ci_lower},
                       {"ci_upper", p.ci_upper},
                       {"deviations", p.deviation_count},
                       {"exact", p.exact}});
  return out;
}

std::vector<CurvePoint> decode_curve(const json& j) {
  std::vector<CurvePoint> out;
  for (const auto& p : j)
    out.push_back(CurvePoint{p.at("n").get<std::uint32_t>(), p.at("ci_lower").get<double>(),
                             p.at("ci_upper").get<double>(),
                             p.at("deviations").get<std::uint64_t>(),
                             p.at("exact").get<bool>()});
  return out;
}

json encode_opt(const std::optional<std::uint32_t>& v) {
  if (v) return *v;
  return nullptr;
}

std::optional<std::uint32_t> decode_opt(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<std::uint32_t>();
}

std::optional<std::uint32_t> recompute_first_passing(const std::vector<CurvePoint>& curve,
                                                     double epsilon) {
  for (const auto& p : curve)
    if (epsilon >= p.ci_upper) return p.n;
  return std::nullopt;
}

}  // namespace

void write_report(const ReliabilityReport& report, const std::string& path) {
  json j{{"version", std::string(kReportVersion)},
         {"created", utc_now()},
         {"reference_model", report.reference_model_id},
         {"params",
          {{"epsilon", report.params.epsilon},
           {"delta", report.params.delta},
           {"reference_sample_count", report.params.reference_sample_count},
           {"resamples_per_n", report.params.resamples_per_n},
           {"seed", report.params.seed}}},
         {"curves", {{"first", encode_curve(report.curve_first)},
                     {"second", encode_curve(report.curve_second)}}},
         {"n_star",
          {{"first", encode_opt(report.n_star_first)},
           {"second", encode_opt(report.n_star_second)},
           {"combined", encode_opt(report.n_star_combined)},
           {"stable_first", encode_opt(report.stable_n_star_first)},
           {"stable_second", encode_opt(report.stable_n_star_second)},
           {"stable_combined", encode_opt(report.stable_n_star_combined)}}},
         {"unreliable_at_n", report.unreliable_at_n}};
  write_text_atomic(path, j.dump(2) + "\n");
}

ReliabilityReport read_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw EvalError(Errc::io_failure, "cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw EvalError(Errc::malformed_file, path + ": " + e.what());
  }

  try {
    if (j.at("version").get<std::string>() != kReportVersion)
      throw EvalError(Errc::malformed_file,
                      path + ": unsupported version '" + j.at("version").get<std::string>() + "'");

    ReliabilityReport report;
    const auto& p = j.at("params");
    report.params = ReliabilityParams::validated(
        p.at("epsilon").get<double>(), p.at("delta").get<double>(),
        p.at("reference_sample_count").get<std::uint32_t>(),
        p.at("resamples_per_n").get<std::uint32_t>(), p.at("seed").get<std::uint64_t>());
    report.reference_model_id = j.at("reference_model").get<std::string>();
    report.curve_first = decode_curve(j.at("curves").at("first"));
    report.curve_second = decode_curve(j.at("curves").at("second"));
    const auto& ns = j.at("n_star");
    report.n_star_first = decode_opt(ns.at("first"));
    report.n_star_second = decode_opt(ns.at("second"));
    report.n_star_combined = decode_opt(ns.at("combined"));
    report.stable_n_star_first = decode_opt(ns.at("stable_first"));
    report.stable_n_star_second = decode_opt(ns.at("stable_second"));
    report.stable_n_star_combined = decode_opt(ns.at("stable_combined"));
    report.unreliable_at_n = j.at("unreliable_at_n").get<bool>();

    // stored n* must match the minimal-n rule over the stored curves
    if (report.n_star_first != recompute_first_passing(report.curve_first, report.params.epsilon) ||
        report.n_star_second !=
            recompute_first_passing(report.curve_second, report.params.epsilon))
      throw EvalError(Errc::malformed_file,
                      path + ": stored n* values do not match the stored curves");
    for (const auto* curve : {&report.curve_first, &report.curve_second}) {
      for (std::size_t i = 0; i < curve->size(); ++i)
        if ((*curve)[i].n != i + 1)
          throw EvalError(Errc::malformed_file, path + ": curve n grid must run 1..N");
      if (curve->size() != report.params.reference_sample_count)
        throw EvalError(Errc::malformed_file, path + ": curve length must equal N");
    }
    return report;
  } catch (const json::exception& e) {
    throw EvalError(Errc::malformed_file, path + ": " + e.what());
  }
}

}  // namespace releval
