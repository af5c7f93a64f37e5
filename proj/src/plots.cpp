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

#include <algorithm>
#include <cmath>

#include "releval/moments.hpp"
#include "releval/report.hpp"

namespace releval {

namespace {

const char* kPalette[] = {"#4c72b0", "#dd8452", "#55a868", "#c44e52",
                          "#8172b3", "#937860", "#da8bc3", "#8c8c8c"};

std::string xml_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) { return format_double(v); }

// tick text only; data coordinates always go through num()
std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

struct Frame {
  double plot_w, plot_h, left, top;

  double x_frac(double frac) const { return left + frac * plot_w; }
  double y_value(double v, double v_max) const {
    return top + (1.0 - v / v_max) * plot_h;
  }
};

std::string svg_open(const PlotOptions& o, double y_max) {
  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(o.width) + "\" height=\"" +
       num(o.height) + "\" viewBox=\"0 0 " + num(o.width) + " " + num(o.height) +
       "\" data-y-max=\"" + num(y_max) + "\">\n";
  s += "<style>\n"
       "text { font: 11px sans-serif; fill: #333; }\n"
       ".title { font: 13px sans-serif; }\n"
       ".axis { stroke: #333; stroke-width: 1; }\n"
       ".grid { stroke: #ddd; stroke-width: 0.5; }\n"
       ".box { fill: #ffffff; stroke-width: 1.2; }\n"
       ".median { stroke-width: 1.6; }\n"
       ".whisker { stroke-width: 1; }\n"
       ".outlier { fill-opacity: 0.7; }\n"
       ".curve { fill: none; stroke-width: 1.6; }\n"
       ".n-star { stroke: #333; stroke-width: 0.8; }\n"
       ".epsilon { stroke: #999; stroke-dasharray: 5 3; }\n"
       "</style>\n";
  s += "<rect width=\"" + num(o.width) + "\" height=\"" + num(o.height) + "\" fill=\"#ffffff\"/>\n";
  return s;
}

void draw_y_axis(std::string& s, const Frame& f, double y_max, int divisions,
                 std::string_view label) {
  s += "<line class=\"axis\" x1=\"" + num(f.left) + "\" y1=\"" + num(f.top) + "\" x2=\"" +
       num(f.left) + "\" y2=\"" + num(f.top + f.plot_h) + "\"/>\n";
  for (int i = 0; i <= divisions; ++i) {
    double v = y_max * i / divisions;
    double y = f.y_value(v, y_max);
    if (i > 0)
      s += "<line class=\"grid\" x1=\"" + num(f.left) + "\" y1=\"" + num(y) + "\" x2=\"" +
           num(f.left + f.plot_w) + "\" y2=\"" + num(y) + "\"/>\n";
    s += "<text x=\"" + num(f.left - 6) + "\" y=\"" + num(y + 3) +
         "\" text-anchor=\"end\">" + tick_label(v) + "</text>\n";
  }
  s += "<text x=\"12\" y=\"" + num(f.top + f.plot_h / 2) + "\" transform=\"rotate(-90 12 " +
       num(f.top + f.plot_h / 2) + ")\" text-anchor=\"middle\">" + xml_escape(label) +
       "</text>\n";
}

}  // namespace

std::string boxplot_svg(
    const std::vector<std::pair<std::string, std::vector<double>>>& per_model_scores,
    const PlotOptions& o) {
  for (const auto& [model, scores] : per_model_scores)
    if (scores.empty())
      throw EvalError(Errc::empty_scores, "model '" + model + "' has no scores");
  if (per_model_scores.empty())
    throw EvalError(Errc::empty_scores, "no models to plot");

  Frame f{o.width - o.margin_left - o.margin_right, o.height - o.margin_top - o.margin_bottom,
          o.margin_left, o.margin_top};
  const double y_max = 1.0;  // score domain

  std::string s = svg_open(o, y_max);
  if (!o.title.empty())
    s += "<text class=\"title\" x=\"" + num(o.width / 2) + "\" y=\"14\" text-anchor=\"middle\">" +
         xml_escape(o.title) + "</text>\n";
  draw_y_axis(s, f, y_max, 5, "score");
  s += "<line class=\"axis\" x1=\"" + num(f.left) + "\" y1=\"" + num(f.top + f.plot_h) +
       "\" x2=\"" + num(f.left + f.plot_w) + "\" y2=\"" + num(f.top + f.plot_h) + "\"/>\n";

  const std::size_t k = per_model_scores.size();
  const double slot = f.plot_w / static_cast<double>(k);
  const double half = std::min(30.0, slot * 0.3);

  for (std::size_t i = 0; i < k; ++i) {
    const auto& [model, scores] = per_model_scores[i];
    std::vector<double> sorted(scores.begin(), scores.end());
    std::sort(sorted.begin(), sorted.end());
    double q1 = quantile_sorted(sorted, 0.25);
    double med = quantile_sorted(sorted, 0.5);
    double q3 = quantile_sorted(sorted, 0.75);
    double iqr = q3 - q1;
    double lo_fence = q1 - 1.5 * iqr;
    double hi_fence = q3 + 1.5 * iqr;
    double whisker_lo = q1;
    double whisker_hi = q3;
    std::vector<double> outliers;
    for (double v : sorted) {
      if (v < lo_fence || v > hi_fence) {
        outliers.push_back(v);
        continue;
      }
      whisker_lo = std::min(whisker_lo, v);
      whisker_hi = std::max(whisker_hi, v);
    }

    double cx = f.left + (static_cast<double>(i) + 0.5) * slot;
    const char* color = kPalette[i % (sizeof kPalette / sizeof *kPalette)];
    std::string id = xml_escape(model);

    s += "<g data-model=\"" + id + "\">\n";
    auto y = [&](double v) { return f.y_value(v, y_max); };
    // whisker stems and caps
    s += "<line class=\"whisker\" stroke=\"" + std::string(color) + "\" x1=\"" + num(cx) +
         "\" y1=\"" + num(y(whisker_lo)) + "\" x2=\"" + num(cx) + "\" y2=\"" + num(y(q1)) +
         "\"/>\n";
    s += "<line class=\"whisker\" stroke=\"" + std::string(color) + "\" x1=\"" + num(cx) +
         "\" y1=\"" + num(y(q3)) + "\" x2=\"" + num(cx) + "\" y2=\"" + num(y(whisker_hi)) +
         "\"/>\n";
    for (double w : {whisker_lo, whisker_hi})
      s += "<line class=\"whisker\" stroke=\"" + std::string(color) + "\" x1=\"" +
           num(cx - half * 0.6) + "\" y1=\"" + num(y(w)) + "\" x2=\"" + num(cx + half * 0.6) +
           "\" y2=\"" + num(y(w)) + "\"/>\n";
    // interquartile box + median
    s += "<rect class=\"box\" stroke=\"" + std::string(color) + "\" x=\"" + num(cx - half) +
         "\" y=\"" + num(y(q3)) + "\" width=\"" + num(2 * half) + "\" height=\"" +
         num(y(q1) - y(q3)) + "\"/>\n";
    s += "<line class=\"median\" stroke=\"" + std::string(color) + "\" x1=\"" + num(cx - half) +
         "\" y1=\"" + num(y(med)) + "\" x2=\"" + num(cx + half) + "\" y2=\"" + num(y(med)) +
         "\"/>\n";
    for (double v : outliers)
      s += "<circle class=\"outlier\" fill=\"" + std::string(color) + "\" cx=\"" + num(cx) +
           "\" cy=\"" + num(y(v)) + "\" r=\"2.5\"/>\n";
    s += "<text x=\"" + num(cx) + "\" y=\"" + num(f.top + f.plot_h + 16) +
         "\" text-anchor=\"middle\">" + id + "</text>\n";
    s += "</g>\n";
  }
  s += "</svg>\n";
  return s;
}

void emit_boxplot(const std::vector<std::pair<std::string, std::vector<double>>>& per_model_scores,
                  const std::string& path, const PlotOptions& options) {
  write_text_atomic(path, boxplot_svg(per_model_scores, options));
}

std::string convergence_svg(const std::vector<ConvergenceSeries>& curves, double epsilon,
                            const PlotOptions& o) {
  if (curves.empty() || curves.front().points.empty())
    throw EvalError(Errc::empty_sample, "no curve points to plot");
  const auto& grid = curves.front().points;
  for (const auto& c : curves) {
    if (c.points.size() != grid.size())
      throw EvalError(Errc::grid_mismatch, "curves have different lengths");
    for (std::size_t i = 0; i < grid.size(); ++i)
      if (c.points[i].first != grid[i].first)
        throw EvalError(Errc::grid_mismatch, "curves disagree on the n grid");
  }

  double y_max = epsilon;
  for (const auto& c : curves)
    for (const auto& [n, v] : c.points) y_max = std::max(y_max, v);
  if (y_max <= 0.0) y_max = 1.0;

  const std::uint32_t n_min = grid.front().first;
  const std::uint32_t n_max = grid.back().first;

  Frame f{o.width - o.margin_left - o.margin_right, o.height - o.margin_top - o.margin_bottom,
          o.margin_left, o.margin_top};
  auto x_of = [&](std::uint32_t n) {
    if (n_max == n_min) return f.left + f.plot_w / 2;
    return f.left + (static_cast<double>(n) - n_min) / (n_max - n_min) * f.plot_w;
  };

  std::string s = svg_open(o, y_max);
  if (!o.title.empty())
    s += "<text class=\"title\" x=\"" + num(o.width / 2) + "\" y=\"14\" text-anchor=\"middle\">" +
         xml_escape(o.title) + "</text>\n";
  draw_y_axis(s, f, y_max, 5, "moment deviation (CI upper)");
  s += "<line class=\"axis\" x1=\"" + num(f.left) + "\" y1=\"" + num(f.top + f.plot_h) +
       "\" x2=\"" + num(f.left + f.plot_w) + "\" y2=\"" + num(f.top + f.plot_h) + "\"/>\n";

  // x ticks on round n values
  std::uint32_t span = n_max > n_min ? n_max - n_min : 1;
  std::uint32_t step = std::max<std::uint32_t>(1, span / 5);
  for (std::uint32_t n = n_min; n <= n_max; n += step) {
    s += "<text x=\"" + num(x_of(n)) + "\" y=\"" + num(f.top + f.plot_h + 16) +
         "\" text-anchor=\"middle\">" + std::to_string(n) + "</text>\n";
  }
  s += "<text x=\"" + num(f.left + f.plot_w / 2) + "\" y=\"" + num(o.height - 8) +
       "\" text-anchor=\"middle\">resamplings n</text>\n";

  // epsilon reference line
  double ey = f.y_value(epsilon, y_max);
  s += "<line class=\"epsilon\" x1=\"" + num(f.left) + "\" y1=\"" + num(ey) + "\" x2=\"" +
       num(f.left + f.plot_w) + "\" y2=\"" + num(ey) + "\"/>\n";
  s += "<text x=\"" + num(f.left + f.plot_w + 2) + "\" y=\"" + num(ey + 3) +
       "\">eps</text>\n";

  for (std::size_t i = 0; i < curves.size(); ++i) {
    const auto& c = curves[i];
    const char* color = kPalette[i % (sizeof kPalette / sizeof *kPalette)];
    std::string points;
    for (const auto& [n, v] : c.points) {
      if (!points.empty()) points += ' ';
      points += num(x_of(n)) + "," + num(f.y_value(v, y_max));
    }
    s += "<polyline class=\"curve\" data-label=\"" + xml_escape(c.label) + "\" stroke=\"" +
         color + "\" points=\"" + points + "\"/>\n";
    if (c.n_star_marker) {
      for (const auto& [n, v] : c.points) {
        if (n == *c.n_star_marker) {
          s += "<circle class=\"n-star\" data-label=\"" + xml_escape(c.label) + "\" fill=\"" +
               color + "\" cx=\"" + num(x_of(n)) + "\" cy=\"" + num(f.y_value(v, y_max)) +
               "\" r=\"4\"/>\n";
          break;
        }
      }
    }
    // legend
    double ly = f.top + 14 * (static_cast<double>(i) + 1);
    s += "<line class=\"curve\" stroke=\"" + std::string(color) + "\" x1=\"" +
         num(f.left + f.plot_w - 120) + "\" y1=\"" + num(ly - 4) + "\" x2=\"" +
         num(f.left + f.plot_w - 100) + "\" y2=\"" + num(ly - 4) + "\"/>\n";
    s += "<text x=\"" + num(f.left + f.plot_w - 96) + "\" y=\"" + num(ly) + "\">" +
         xml_escape(c.label) + "</text>\n";
  }
  s += "</svg>\n";
  return s;
}

void emit_convergence(const std::vector<ConvergenceSeries>& curves, double epsilon,
                      const std::string& path, const PlotOptions& options) {
  write_text_atomic(path, convergence_svg(curves, epsilon, options));
}

}  // namespace releval
