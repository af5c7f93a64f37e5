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
#include <string>
#include <vector>

#include "releval/core.hpp"
#include "releval/util/bigint.hpp"

namespace releval {

// The finite product space of meaning-preserving prompt perturbations:
// instruction paraphrase x choice enumerator x choice separator x choice
// order x few-shot selection x question/answer markers (x example subset for
// open-ended tasks). Everything here is pure and deterministic given seeds.

enum class EnumeratorStyle { capital_letters, lowercase_letters, numbers, roman_numerals };

std::string_view enumerator_style_name(EnumeratorStyle style);
EnumeratorStyle enumerator_style_from_name(std::string_view name);

/// Choice label for a 0-based position: A/B/C, a/b/c, 1/2/3 or I/II/III.
std::string enumerator_label(EnumeratorStyle style, std::size_t index);

enum class ChoiceOrderPolicy { identity_only, all_permutations };

struct QaMarkerPair {
  std::string question_marker;
  std::string answer_marker;
  bool operator==(const QaMarkerPair&) const = default;
};

struct FewshotCandidate {
  Example example;
  std::string gold_text;  // answer text emitted after the answer marker
  bool operator==(const FewshotCandidate&) const = default;
};

std::vector<EnumeratorStyle> default_enumerators();
std::vector<std::string> default_separators();
std::vector<QaMarkerPair> default_qa_markers();

struct DimensionInventory {
  std::vector<std::string> instruction_paraphrases;  // templates with {question} (+{choices})
  std::vector<EnumeratorStyle> enumerators = default_enumerators();
  std::vector<std::string> separators = default_separators();
  ChoiceOrderPolicy choice_order_policy = ChoiceOrderPolicy::identity_only;
  std::vector<FewshotCandidate> fewshot_pool;
  std::uint32_t fewshot_k = 5;
  std::vector<QaMarkerPair> qa_markers = default_qa_markers();
  // open-ended only: evaluate each config on a random subset of this size
  std::optional<std::uint32_t> example_subset_size;

  bool operator==(const DimensionInventory&) const = default;
};

struct DimensionFactor {
  std::string name;
  BigUint count;
};

struct PerturbationSpace {
  std::string dataset_id;
  TaskKind task_kind = TaskKind::multiple_choice;
  DimensionInventory inventory;
  BigUint cardinality;
  std::vector<DimensionFactor> factors;
  std::uint64_t choice_perm_count = 1;  // c! under all_permutations, else 1
  std::uint32_t example_count = 0;
  std::uint32_t subset_size = 0;  // == example_count when the subset dimension is inactive
  bool subset_active = false;
};

/// One point of the space. All coordinates are stored explicitly so configs
/// can be enumerated, deduplicated and hashed; the choice permutation is a
/// coordinate index whose per-example permutation is derived by seeding a
/// shuffle with (coordinate, example id).
struct PerturbationConfig {
  std::uint32_t paraphrase_index = 0;
  std::uint32_t enumerator_index = 0;
  std::uint32_t separator_index = 0;
  bool permute_choices = false;
  std::uint64_t choice_perm_index = 0;           // in [0, c!) when permute_choices
  std::vector<std::uint32_t> fewshot_selection;  // ordered pool indices, no duplicates
  std::uint32_t qa_marker_index = 0;
  std::vector<std::uint32_t> example_subset;  // sorted dataset indices; empty = full dataset
  std::string config_id;                      // canonical 128-bit hash (hex)

  bool operator==(const PerturbationConfig&) const = default;
};

/// Canonical, field-ordered 128-bit hash; stable across runs and platforms.
std::string compute_config_id(const PerturbationConfig& config);

/// Validates the inventory against the task kind and computes the exact
/// cardinality. Throws PlaceholderMissing / EmptyDimension / KExceedsPool.
PerturbationSpace build_space(const DatasetSpec& dataset, DimensionInventory inventory);

/// `count` distinct configs drawn uniformly (each dimension independent and
/// uniform, duplicates rejected). Deterministic given (space, count, seed);
/// output order is draw order.
std::vector<PerturbationConfig> sample_configs(const PerturbationSpace& space,
                                               std::uint64_t count, std::uint64_t seed);

/// Every config exactly once, in canonical nested order. Refuses spaces
/// larger than `bound`.
std::vector<PerturbationConfig> enumerate_space(const PerturbationSpace& space,
                                                std::uint64_t bound = 1000000);

/// Order-aware gold bookkeeping for scoring a rendered MCQA prompt.
struct GoldMap {
  std::vector<std::size_t> rendered_to_original;  // rendered position -> original choice index
  std::size_t gold_original_index = 0;
  std::size_t gold_rendered_position = 0;
  std::string gold_label;        // enumerator label at the rendered position
  std::string gold_choice_text;  // choice text (order independent)
};

struct RenderedPrompt {
  std::string text;
  std::string gold_text;            // open-ended gold answer, or the gold choice text
  std::optional<GoldMap> gold_map;  // present for multiple choice
};

/// Deterministic prompt rendering: few-shot demonstrations (same markers,
/// enumerators, separators and choice-order treatment), then the target
/// example through the paraphrase template. Task kind is inferred from the
/// example: with choices it renders as multiple choice.
RenderedPrompt render_prompt(const PerturbationConfig& config, const Example& example,
                             const DimensionInventory& inventory);

/// Per-example choice permutation for a config: identity, or a shuffle seeded
/// by (choice_perm_index, example id).
std::vector<std::size_t> choice_permutation(const PerturbationConfig& config,
                                            const Example& example);

std::vector<std::string> inventory_violations(const DimensionInventory& inventory, TaskKind kind);

/// Parse the inventory file format (key = value lines, escapes \n \t \\ \s
/// honored, few-shot pool entries reference dataset example ids).
DimensionInventory load_inventory(const std::string& path, const DatasetSpec& dataset);
DimensionInventory parse_inventory(std::string_view text, const DatasetSpec& dataset);

}  // namespace releval
