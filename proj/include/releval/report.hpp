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

#include <string>
#include <utility>
#include <vector>

#include "releval/core.hpp"
#include "releval/perturb.hpp"
#include "releval/reliability.hpp"

namespace releval {

// Persistent file formats and plot emission. Every writer is deterministic:
// identical inputs give byte-identical files. The one exception is the
// reliability report's "created" header field, which carries a wall-clock
// timestamp and is excluded from the determinism contract.

/// Shortest round-trip decimal form of a double (std::to_chars).
std::string format_double(double v);

/// Write-temp-then-rename; partial files never appear under `path`.
void write_text_atomic(const std::string& path, const std::string& content);

// --- score matrix -----------------------------------------------------------
//
// Delimiter-separated text. Optional `# model:` / `# dataset:` comment lines,
// then a header row `perturbation_id,<example ids...>`, then one row per
// perturbation. Missing value = empty field.

void write_matrix(const ScoreMatrix& matrix, const std::string& path);
ScoreMatrix read_matrix(const std::string& path);

/// Sibling manifest mapping perturbation ids to their full config plus run
/// metadata. Written next to the matrix as `<path>.manifest.json`.
struct RunManifest {
  std::string version = "reliable-eval/1";
  std::string model_id;
  std::string model_name;
  std::string dataset_id;
  std::string scorer_id;
  std::uint64_t seed = 0;
  DecodingParams decoding;
  std::vector<std::pair<std::string, PerturbationConfig>> configs;

  bool operator==(const RunManifest&) const = default;
};

std::string manifest_path(const std::string& matrix_path);
void write_manifest(const RunManifest& manifest, const std::string& path);
RunManifest read_manifest(const std::string& path);

// --- reliability report ------------------------------------------------------

inline constexpr std::string_view kReportVersion = "reliable-eval/1";

void write_report(const ReliabilityReport& report, const std::string& path);
/// Validates the version field and that the stored n* values satisfy the
/// minimal-n condition against the stored curves.
ReliabilityReport read_report(const std::string& path);

// --- plots -------------------------------------------------------------------

struct PlotOptions {
  double width = 640.0;
  double height = 400.0;
  double margin_left = 62.0;
  double margin_right = 18.0;
  double margin_top = 22.0;
  double margin_bottom = 46.0;
  std::string title;
};

/// One box per model: median line, q1-q3 box, whiskers at the most extreme
/// points within 1.5*IQR of the box, outlier dots beyond. The y axis is the
/// score domain [0,1]; y_px = margin_top + (1 - v) * plot_height.
std::string boxplot_svg(const std::vector<std::pair<std::string, std::vector<double>>>& per_model_scores,
                        const PlotOptions& options = {});
void emit_boxplot(const std::vector<std::pair<std::string, std::vector<double>>>& per_model_scores,
                  const std::string& path, const PlotOptions& options = {});

struct ConvergenceSeries {
  std::string label;
  std::vector<std::pair<std::uint32_t, double>> points;  // (n, CI upper)
  std::optional<std::uint32_t> n_star_marker;
};

/// Line per series, round marker at each n*, horizontal reference line at
/// epsilon. x spans the shared n grid; y spans [0, max(data, epsilon)].
std::string convergence_svg(const std::vector<ConvergenceSeries>& curves, double epsilon,
                            const PlotOptions& options = {});
void emit_convergence(const std::vector<ConvergenceSeries>& curves, double epsilon,
                      const std::string& path, const PlotOptions& options = {});

}  // namespace releval
