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

#include "releval/perturb.hpp"

#include <algorithm>
#include <unordered_map>

#include "releval/util/hash.hpp"
#include "releval/util/rng.hpp"

namespace releval {

namespace {

constexpr std::string_view kQuestionPlaceholder = "{question}";
constexpr std::string_view kChoicesPlaceholder = "{choices}";

// largest c with c! representable in a uint64 coordinate
constexpr std::uint32_t kMaxPermutedChoices = 20;

std::size_t count_occurrences(std::string_view text, std::string_view needle) {
  std::size_t count = 0;
  std::size_t pos = 0;
  while ((pos = text.find(needle, pos)) != std::string_view::npos) {
    ++count;
    pos += needle.size();
  }
  return count;
}

std::string replace_once(std::string text, std::string_view needle, std::string_view value) {
  std::size_t pos = text.find(needle);
  if (pos != std::string::npos) text.replace(pos, needle.size(), value);
  return text;
}

std::uint64_t factorial_u64(std::uint32_t n) {
  std::uint64_t f = 1;
  for (std::uint32_t i = 2; i <= n; ++i) f *= i;
  return f;
}

std::string bijective_letters(std::size_t index, char base) {
  std::string out;
  std::size_t n = index + 1;
  while (n > 0) {
    --n;
    out.insert(out.begin(), static_cast<char>(base + n % 26));
    n /= 26;
  }
  return out;
}

std::string roman_numeral(std::size_t value) {
  static constexpr std::pair<std::size_t, std::string_view> table[] = {
      {1000, "M"}, {900, "CM"}, {500, "D"}, {400, "CD"}, {100, "C"}, {90, "XC"}, {50, "L"},
      {40, "XL"},  {10, "X"},   {9, "IX"},  {5, "V"},    {4, "IV"},  {1, "I"}};
  std::string out;
  for (auto [v, s] : table) {
    while (value >= v) {
      out += s;
      value -= v;
    }
  }
  return out;
}

struct ClassifiedViolation {
  Errc code;
  std::string message;
};

std::vector<ClassifiedViolation> classify_inventory(const DimensionInventory& inv,
                                                    TaskKind kind) {
  std::vector<ClassifiedViolation> out;
  const bool mcqa = kind == TaskKind::multiple_choice;

  if (inv.instruction_paraphrases.empty())
    out.push_back({Errc::empty_dimension, "instruction paraphrase list must be non-empty"});
  for (const auto& tpl : inv.instruction_paraphrases) {
    if (count_occurrences(tpl, kQuestionPlaceholder) != 1)
      out.push_back({Errc::placeholder_missing,
                     "paraphrase template must contain {question} exactly once: '" + tpl + "'"});
    std::size_t choices = count_occurrences(tpl, kChoicesPlaceholder);
    if (mcqa && choices != 1)
      out.push_back({Errc::placeholder_missing,
                     "paraphrase template must contain {choices} exactly once: '" + tpl + "'"});
    if (!mcqa && choices != 0)
      out.push_back({Errc::validation,
                     "open-ended paraphrase template must not contain {choices}: '" + tpl + "'"});
  }
  if (mcqa) {
    if (inv.enumerators.empty())
      out.push_back({Errc::empty_dimension, "multiple-choice inventories need enumerators"});
    if (inv.separators.empty())
      out.push_back({Errc::empty_dimension, "multiple-choice inventories need separators"});
    if (inv.example_subset_size)
      out.push_back(
          {Errc::validation, "example_subset_size applies only to open-ended datasets"});
  }
  if (inv.qa_markers.empty())
    out.push_back({Errc::empty_dimension, "qa marker list must be non-empty"});
  if (inv.fewshot_k > inv.fewshot_pool.size())
    out.push_back({Errc::k_exceeds_pool,
                   "fewshot_k = " + std::to_string(inv.fewshot_k) + " exceeds pool size " +
                       std::to_string(inv.fewshot_pool.size())});
  return out;
}

}  // namespace

std::string_view enumerator_style_name(EnumeratorStyle style) {
  switch (style) {
    case EnumeratorStyle::capital_letters: return "capitals";
    case EnumeratorStyle::lowercase_letters: return "lowercase";
    case EnumeratorStyle::numbers: return "numbers";
    case EnumeratorStyle::roman_numerals: return "roman";
  }
  return "capitals";
}

EnumeratorStyle enumerator_style_from_name(std::string_view name) {
  if (name == "capitals") return EnumeratorStyle::capital_letters;
  if (name == "lowercase") return EnumeratorStyle::lowercase_letters;
  if (name == "numbers") return EnumeratorStyle::numbers;
  if (name == "roman") return EnumeratorStyle::roman_numerals;
  throw EvalError(Errc::malformed_file, "unknown enumerator style '" + std::string(name) + "'");
}

std::string enumerator_label(EnumeratorStyle style, std::size_t index) {
  switch (style) {
    case EnumeratorStyle::capital_letters: return bijective_letters(index, 'A');
    case EnumeratorStyle::lowercase_letters: return bijective_letters(index, 'a');
    case EnumeratorStyle::numbers: return std::to_string(index + 1);
    case EnumeratorStyle::roman_numerals: return roman_numeral(index + 1);
  }
  return "";
}

std::vector<EnumeratorStyle> default_enumerators() {
  return {EnumeratorStyle::capital_letters, EnumeratorStyle::lowercase_letters,
          EnumeratorStyle::numbers, EnumeratorStyle::roman_numerals};
}

std::vector<std::string> default_separators() {
  return {"\n", " ", "\t", ", ", "; ", " | "};
}

std::vector<QaMarkerPair> default_qa_markers() {
  return {{"Question: ", "Answer: "}, {"", ""}};
}

std::vector<std::string> inventory_violations(const DimensionInventory& inventory, TaskKind kind) {
  std::vector<std::string> out;
  for (auto& v : classify_inventory(inventory, kind)) out.push_back(std::move(v.message));
  return out;
}

std::string compute_config_id(const PerturbationConfig& config) {
  CanonicalEncoder enc;
  enc.put_str("releval-config/1");
  enc.put_u64(config.paraphrase_index);
  enc.put_u64(config.enumerator_index);
  enc.put_u64(config.separator_index);
  enc.put_u64(config.permute_choices ? 1 : 0);
  enc.put_u64(config.choice_perm_index);
  enc.put_u64(config.fewshot_selection.size());
  for (auto i : config.fewshot_selection) enc.put_u64(i);
  enc.put_u64(config.qa_marker_index);
  enc.put_u64(config.example_subset.size());
  for (auto i : config.example_subset) enc.put_u64(i);
  return enc.hash().hex();
}

PerturbationSpace build_space(const DatasetSpec& dataset, DimensionInventory inventory) {
  auto violations = classify_inventory(inventory, dataset.task_kind);
  const bool mcqa = dataset.task_kind == TaskKind::multiple_choice;

  std::uint32_t max_choices = 0;
  for (const auto& ex : dataset.examples)
    max_choices = std::max(max_choices, static_cast<std::uint32_t>(ex.choices.size()));

  const bool permute = mcqa && inventory.choice_order_policy == ChoiceOrderPolicy::all_permutations;
  if (permute && max_choices > kMaxPermutedChoices)
    violations.push_back({Errc::validation,
                          "choice permutation supports at most " +
                              std::to_string(kMaxPermutedChoices) + " choices per example"});

  const auto example_count = static_cast<std::uint32_t>(dataset.examples.size());
  bool subset_active = false;
  std::uint32_t subset_size = example_count;
  if (!mcqa && inventory.example_subset_size) {
    std::uint32_t requested = *inventory.example_subset_size;
    if (requested < 1 || requested > example_count)
      violations.push_back({Errc::validation, "example_subset_size must lie in [1, " +
                                                  std::to_string(example_count) + "]"});
    else if (requested < example_count) {
      subset_active = true;
      subset_size = requested;
    }
  }

  if (!violations.empty()) {
    std::string joined;
    for (std::size_t i = 0; i < violations.size(); ++i) {
      if (i > 0) joined += "; ";
      joined += violations[i].message;
    }
    throw EvalError(violations.front().code, joined);
  }

  PerturbationSpace space;
  space.dataset_id = dataset.id;
  space.task_kind = dataset.task_kind;
  space.example_count = example_count;
  space.subset_active = subset_active;
  space.subset_size = subset_size;
  space.choice_perm_count = permute ? factorial_u64(max_choices) : 1;

  const std::uint64_t paraphrases = inventory.instruction_paraphrases.size();
  const std::uint64_t enumerators = mcqa ? inventory.enumerators.size() : 1;
  const std::uint64_t separators = mcqa ? inventory.separators.size() : 1;
  const std::uint64_t markers = inventory.qa_markers.size();

  space.factors.push_back({"instruction paraphrases", BigUint(paraphrases)});
  space.factors.push_back({"choice enumerators", BigUint(enumerators)});
  space.factors.push_back({"choice separators", BigUint(separators)});
  space.factors.push_back({"choice order", BigUint(space.choice_perm_count)});
  space.factors.push_back(
      {"few-shot selections",
       BigUint::falling_factorial(inventory.fewshot_pool.size(), inventory.fewshot_k)});
  space.factors.push_back({"qa markers", BigUint(markers)});
  space.factors.push_back({"example subsets", subset_active
                                                  ? BigUint::binomial(example_count, subset_size)
                                                  : BigUint(1)});

  BigUint cardinality(1);
  for (const auto& f : space.factors) {
    if (f.count.is_zero())
      throw EvalError(Errc::empty_dimension, "dimension '" + f.name + "' has no values");
    cardinality.mul(f.count);
  }
  space.cardinality = std::move(cardinality);
  space.inventory = std::move(inventory);
  return space;
}

std::vector<std::size_t> choice_permutation(const PerturbationConfig& config,
                                            const Example& example) {
  const std::size_t c = example.choices.size();
  std::vector<std::size_t> perm(c);
  for (std::size_t i = 0; i < c; ++i) perm[i] = i;
  if (!config.permute_choices || c < 2) return perm;
  SplitMix64 rng(derive_seed(config.choice_perm_index, hash64(example.id)));
  return sample_k_of_n(rng, c, c);
}

namespace {

std::string render_choice_block(const PerturbationConfig& config, const Example& example,
                                const DimensionInventory& inventory,
                                const std::vector<std::size_t>& perm) {
  const EnumeratorStyle style = inventory.enumerators.at(config.enumerator_index);
  const std::string& sep = inventory.separators.at(config.separator_index);
  std::string out;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    if (i > 0) out += sep;
    out += enumerator_label(style, i);
    out += ". ";
    out += example.choices[perm[i]];
  }
  return out;
}

std::string render_demo(const PerturbationConfig& config, const FewshotCandidate& demo,
                        const DimensionInventory& inventory, const QaMarkerPair& marker) {
  std::string block = marker.question_marker + demo.example.question;
  if (!demo.example.choices.empty()) {
    auto perm = choice_permutation(config, demo.example);
    block += "\n" + render_choice_block(config, demo.example, inventory, perm);
  }
  block += "\n" + marker.answer_marker + demo.gold_text;
  return block;
}

}  // namespace

RenderedPrompt render_prompt(const PerturbationConfig& config, const Example& example,
                             const DimensionInventory& inventory) {
  if (config.paraphrase_index >= inventory.instruction_paraphrases.size() ||
      config.qa_marker_index >= inventory.qa_markers.size())
    throw EvalError(Errc::validation, "config indices out of inventory bounds");
  for (auto i : config.fewshot_selection)
    if (i >= inventory.fewshot_pool.size())
      throw EvalError(Errc::validation, "few-shot selection out of pool bounds");

  const QaMarkerPair& marker = inventory.qa_markers[config.qa_marker_index];

  RenderedPrompt out;
  for (auto sel : config.fewshot_selection) {
    out.text += render_demo(config, inventory.fewshot_pool[sel], inventory, marker);
    out.text += "\n\n";
  }

  std::string body = inventory.instruction_paraphrases[config.paraphrase_index];
  body = replace_once(std::move(body), kQuestionPlaceholder,
                      marker.question_marker + example.question);

  if (!example.choices.empty()) {
    auto perm = choice_permutation(config, example);
    body = replace_once(std::move(body), kChoicesPlaceholder,
                        render_choice_block(config, example, inventory, perm));

    GoldMap map;
    map.rendered_to_original = perm;
    map.gold_original_index = std::get<std::size_t>(example.gold);
    for (std::size_t i = 0; i < perm.size(); ++i)
      if (perm[i] == map.gold_original_index) map.gold_rendered_position = i;
    map.gold_label = enumerator_label(inventory.enumerators.at(config.enumerator_index),
                                      map.gold_rendered_position);
    map.gold_choice_text = example.choices[map.gold_original_index];
    out.gold_text = map.gold_choice_text;
    out.gold_map = std::move(map);
  } else {
    out.gold_text = std::holds_alternative<std::string>(example.gold)
                        ? std::get<std::string>(example.gold)
                        : "";
  }

  out.text += body;
  if (!marker.answer_marker.empty()) out.text += "\n" + marker.answer_marker;
  return out;
}

std::vector<PerturbationConfig> sample_configs(const PerturbationSpace& space,
                                               std::uint64_t count, std::uint64_t seed) {
  if (BigUint(count) > space.cardinality)
    throw EvalError(Errc::count_exceeds_cardinality,
                    "requested " + std::to_string(count) + " configs from a space of " +
                        space.cardinality.str());

  const auto& inv = space.inventory;
  const bool mcqa = space.task_kind == TaskKind::multiple_choice;
  const bool permute = mcqa && inv.choice_order_policy == ChoiceOrderPolicy::all_permutations;

  SplitMix64 rng(derive_seed(seed, 0x5ace));
  std::vector<PerturbationConfig> out;
  out.reserve(count);
  std::unordered_map<std::string, PerturbationConfig> seen;

  while (out.size() < count) {
    PerturbationConfig config;
    config.paraphrase_index =
        static_cast<std::uint32_t>(rng.next_below(inv.instruction_paraphrases.size()));
    config.enumerator_index =
        mcqa ? static_cast<std::uint32_t>(rng.next_below(inv.enumerators.size())) : 0;
    config.separator_index =
        mcqa ? static_cast<std::uint32_t>(rng.next_below(inv.separators.size())) : 0;
    config.permute_choices = permute;
    config.choice_perm_index = permute ? rng.next_below(space.choice_perm_count) : 0;
    if (inv.fewshot_k > 0) {
      auto picks = sample_k_of_n(rng, inv.fewshot_pool.size(), inv.fewshot_k);
      config.fewshot_selection.assign(picks.begin(), picks.end());
    }
    config.qa_marker_index = static_cast<std::uint32_t>(rng.next_below(inv.qa_markers.size()));
    if (space.subset_active) {
      auto picks = sample_subset(rng, space.example_count, space.subset_size);
      config.example_subset.assign(picks.begin(), picks.end());
    }
    config.config_id = compute_config_id(config);

    auto [it, inserted] = seen.emplace(config.config_id, config);
    if (!inserted) {
      if (!(it->second == config))
        throw EvalError(Errc::hash_collision,
                        "distinct configs hashed to id " + config.config_id);
      continue;  // duplicate draw, rejected
    }
    out.push_back(std::move(config));
  }
  return out;
}

std::vector<PerturbationConfig> enumerate_space(const PerturbationSpace& space,
                                                std::uint64_t bound) {
  if (space.cardinality > BigUint(bound))
    throw EvalError(Errc::space_too_large, "space cardinality " + space.cardinality.str() +
                                               " exceeds enumeration bound " +
                                               std::to_string(bound));

  const auto& inv = space.inventory;
  const bool mcqa = space.task_kind == TaskKind::multiple_choice;
  const bool permute = mcqa && inv.choice_order_policy == ChoiceOrderPolicy::all_permutations;

  // ordered k-selections of pool indices, lexicographic
  std::vector<std::vector<std::uint32_t>> fewshot_tuples;
  {
    std::vector<std::uint32_t> current;
    std::vector<bool> used(inv.fewshot_pool.size(), false);
    auto recurse = [&](auto&& self) -> void {
      if (current.size() == inv.fewshot_k) {
        fewshot_tuples.push_back(current);
        return;
      }
      for (std::uint32_t i = 0; i < inv.fewshot_pool.size(); ++i) {
        if (used[i]) continue;
        used[i] = true;
        current.push_back(i);
        self(self);
        current.pop_back();
        used[i] = false;
      }
    };
    if (inv.fewshot_k == 0)
      fewshot_tuples.push_back({});
    else
      recurse(recurse);
  }

  // size-m combinations of example indices, lexicographic ascending
  std::vector<std::vector<std::uint32_t>> subsets;
  if (!space.subset_active) {
    subsets.push_back({});
  } else {
    std::vector<std::uint32_t> idx(space.subset_size);
    for (std::uint32_t i = 0; i < space.subset_size; ++i) idx[i] = i;
    for (;;) {
      subsets.push_back(idx);
      std::size_t i = space.subset_size;
      bool advanced = false;
      while (i-- > 0) {
        if (idx[i] < space.example_count - space.subset_size + i) {
          ++idx[i];
          for (std::size_t j = i + 1; j < space.subset_size; ++j) idx[j] = idx[j - 1] + 1;
          advanced = true;
          break;
        }
      }
      if (!advanced) break;
    }
  }

  const std::size_t paraphrases = inv.instruction_paraphrases.size();
  const std::size_t enumerators = mcqa ? inv.enumerators.size() : 1;
  const std::size_t separators = mcqa ? inv.separators.size() : 1;
  const std::size_t markers = inv.qa_markers.size();

  std::vector<PerturbationConfig> out;
  for (std::size_t p = 0; p < paraphrases; ++p)
    for (std::size_t e = 0; e < enumerators; ++e)
      for (std::size_t s = 0; s < separators; ++s)
        for (std::uint64_t perm = 0; perm < space.choice_perm_count; ++perm)
          for (const auto& fewshot : fewshot_tuples)
            for (std::size_t q = 0; q < markers; ++q)
              for (const auto& subset : subsets) {
                PerturbationConfig config;
                config.paraphrase_index = static_cast<std::uint32_t>(p);
                config.enumerator_index = static_cast<std::uint32_t>(e);
                config.separator_index = static_cast<std::uint32_t>(s);
                config.permute_choices = permute;
                config.choice_perm_index = perm;
                config.fewshot_selection = fewshot;
                config.qa_marker_index = static_cast<std::uint32_t>(q);
                config.example_subset = subset;
                config.config_id = compute_config_id(config);
                out.push_back(std::move(config));
              }
  return out;
}

}  // namespace releval
