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
#include <charconv>
#include <cmath>

#include "releval/harness.hpp"
#include "releval/report.hpp"

namespace releval {

namespace {

// Marsaglia-Tsang gamma draw; shape < 1 boosted via the power trick. Portable
// and deterministic given the rng stream.
double gamma_draw(SplitMix64& rng, double shape) {
  if (shape < 1.0) {
    double u = rng.next_unit();
    while (u <= 0.0) u = rng.next_unit();
    return gamma_draw(rng, shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  double d = shape - 1.0 / 3.0;
  double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = rng.next_gaussian();
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    double u = rng.next_unit();
    if (u <= 0.0) continue;
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

struct LawParser {
  std::string_view text;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& reason) {
    throw EvalError(Errc::invalid_law,
                    "'" + std::string(text) + "' at offset " + std::to_string(pos) + ": " + reason);
  }

  void skip_ws() {
    while (pos < text.size() && text[pos] == ' ') ++pos;
  }

  bool eat(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }

  std::string ident() {
    skip_ws();
    std::size_t start = pos;
    while (pos < text.size() && (std::isalpha(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
      ++pos;
    if (start == pos) fail("expected a law name");
    return std::string(text.substr(start, pos - start));
  }

  double number() {
    skip_ws();
    double out{};
    auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + text.size(), out);
    if (ec != std::errc{}) fail("expected a number");
    pos = static_cast<std::size_t>(ptr - text.data());
    return out;
  }

  ScoreLaw law() {
    std::string name = ident();
    expect('(');
    ScoreLaw out;
    if (name == "constant") {
      out.law = ConstantLaw{number()};
    } else if (name == "uniform") {
      double lo = number();
      expect(',');
      out.law = UniformLaw{lo, number()};
    } else if (name == "beta") {
      double alpha = number();
      expect(',');
      out.law = BetaLaw{alpha, number()};
    } else if (name == "bimodal") {
      double p = number();
      expect(',');
      auto first = std::make_shared<ScoreLaw>(law());
      expect(',');
      auto second = std::make_shared<ScoreLaw>(law());
      out.law = BimodalLaw{p, std::move(first), std::move(second)};
    } else {
      fail("unknown law '" + name + "'");
    }
    expect(')');
    return out;
  }
};

}  // namespace

ScoreLaw parse_law(std::string_view text) {
  LawParser parser{text};
  ScoreLaw out = parser.law();
  parser.skip_ws();
  if (parser.pos != text.size()) parser.fail("trailing characters");
  validate_law(out);
  return out;
}

std::string law_to_string(const ScoreLaw& law) {
  return std::visit(
      [](const auto& l) -> std::string {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, ConstantLaw>) {
          return "constant(" + format_double(l.value) + ")";
        } else if constexpr (std::is_same_v<T, UniformLaw>) {
          return "uniform(" + format_double(l.lo) + "," + format_double(l.hi) + ")";
        } else if constexpr (std::is_same_v<T, BetaLaw>) {
          return "beta(" + format_double(l.alpha) + "," + format_double(l.beta) + ")";
        } else {
          return "bimodal(" + format_double(l.p) + "," + law_to_string(*l.first) + "," +
                 law_to_string(*l.second) + ")";
        }
      },
      law.law);
}

void validate_law(const ScoreLaw& law) {
  std::visit(
      [](const auto& l) {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, ConstantLaw>) {
          if (!std::isfinite(l.value))
            throw EvalError(Errc::invalid_law, "constant law needs a finite value");
        } else if constexpr (std::is_same_v<T, UniformLaw>) {
          if (!std::isfinite(l.lo) || !std::isfinite(l.hi) || l.lo > l.hi)
            throw EvalError(Errc::invalid_law, "uniform law needs lo <= hi");
        } else if constexpr (std::is_same_v<T, BetaLaw>) {
          if (!(l.alpha > 0.0) || !(l.beta > 0.0))
            throw EvalError(Errc::invalid_law, "beta law needs positive alpha and beta");
        } else {
          if (!(l.p >= 0.0 && l.p <= 1.0))
            throw EvalError(Errc::invalid_law, "bimodal law needs p in [0, 1]");
          if (!l.first || !l.second)
            throw EvalError(Errc::invalid_law, "bimodal law needs two component laws");
          validate_law(*l.first);
          validate_law(*l.second);
        }
      },
      law.law);
}

double sample_law(const ScoreLaw& law, SplitMix64& rng) {
  return std::visit(
      [&rng](const auto& l) -> double {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, ConstantLaw>) {
          return l.value;
        } else if constexpr (std::is_same_v<T, UniformLaw>) {
          return rng.next_uniform(l.lo, l.hi);
        } else if constexpr (std::is_same_v<T, BetaLaw>) {
          double a = gamma_draw(rng, l.alpha);
          double b = gamma_draw(rng, l.beta);
          return a / (a + b);
        } else {
          return rng.next_unit() < l.p ? sample_law(*l.first, rng) : sample_law(*l.second, rng);
        }
      },
      law.law);
}

namespace {

std::uint64_t coordinate_hash(const PerturbationConfig& config, std::optional<int> dimension) {
  if (!dimension) return hash64(config.config_id);
  CanonicalEncoder enc;
  switch (*dimension) {
    case 0: enc.put_u64(config.paraphrase_index); break;
    case 1: enc.put_u64(config.enumerator_index); break;
    case 2: enc.put_u64(config.separator_index); break;
    case 3:
      enc.put_u64(config.permute_choices ? 1 : 0);
      enc.put_u64(config.choice_perm_index);
      break;
    case 4:
      for (auto i : config.fewshot_selection) enc.put_u64(i);
      break;
    case 5: enc.put_u64(config.qa_marker_index); break;
    case 6:
      for (auto i : config.example_subset) enc.put_u64(i);
      break;
    default:
      throw EvalError(Errc::validation, "perturbation effect dimension out of range");
  }
  return enc.hash().lo;
}

}  // namespace

ScoreMatrix synth_scores(const SyntheticModel& model,
                         const std::vector<PerturbationConfig>& configs,
                         std::uint32_t example_count, std::uint64_t seed) {
  if (configs.empty()) throw EvalError(Errc::empty_sample, "no configs to synthesize");
  if (example_count < 1) throw EvalError(Errc::validation, "example_count must be positive");
  validate_law(model.score_law);
  if (model.per_perturbation_effect) validate_law(model.per_perturbation_effect->offset_law);

  const std::uint64_t model_tag = hash64(model.id);
  std::vector<std::string> pids;
  pids.reserve(configs.size());
  std::vector<double> values;
  values.reserve(configs.size() * example_count);

  for (const auto& config : configs) {
    pids.push_back(config.config_id);
    double offset = 0.0;
    if (model.per_perturbation_effect) {
      std::uint64_t coord = coordinate_hash(config, model.per_perturbation_effect->dimension);
      SplitMix64 offset_rng(derive_seed(seed, model_tag ^ 0x0ffe7u, coord));
      offset = sample_law(model.per_perturbation_effect->offset_law, offset_rng);
    }
    const std::uint64_t config_tag = hash64(config.config_id);
    for (std::uint32_t e = 0; e < example_count; ++e) {
      SplitMix64 cell_rng(derive_seed(derive_seed(seed, model_tag, config_tag), e));
      double v = sample_law(model.score_law, cell_rng) + offset;
      values.push_back(std::clamp(v, 0.0, 1.0));
    }
  }

  std::vector<std::string> example_ids;
  example_ids.reserve(example_count);
  for (std::uint32_t e = 0; e < example_count; ++e)
    example_ids.push_back("e" + std::to_string(e));

  return ScoreMatrix::validated(std::move(pids), std::move(example_ids), std::move(values),
                                model.id, "synthetic");
}

}  // namespace releval
