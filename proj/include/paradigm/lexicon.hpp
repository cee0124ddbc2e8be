// Copyright 2026 the paradigm authors
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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "paradigm/pos_tag.hpp"

namespace paradigm {

class TypeEmbeddingStore;

/// Frequency band used for colouring. Declared low-to-high so that the
/// enum order matches High > Mid > Low.
enum class Tier : std::uint8_t { Low = 0, Mid = 1, High = 2 };

[[nodiscard]] std::string_view to_string(Tier tier) noexcept;

struct TierThresholds {
    std::size_t high_max_rank = 3000;
    std::size_t mid_max_rank = 20000;
};

struct LexiconEntry {
    std::uint64_t frequency = 0;
    std::size_t rank = 0;  // 1-based
};

/// word -> (frequency, rank). Ranks follow descending frequency, ties by
/// ascending word. Immutable once built.
class FrequencyLexicon {
public:
    FrequencyLexicon() = default;

    /// Duplicate words have their frequencies summed.
    /// Throws InvalidArgument unless 1 <= high_max_rank < mid_max_rank.
    static FrequencyLexicon from_counts(std::span<const std::pair<std::string, std::uint64_t>> counts,
                                        TierThresholds thresholds = {});

    /// Fallback when no dictionary is configured: the store's own frequencies.
    static FrequencyLexicon from_store(const TypeEmbeddingStore& store, TierThresholds thresholds = {});

    [[nodiscard]] const LexiconEntry* find(std::string_view word) const;

    /// Rank <= high_max_rank is High, <= mid_max_rank is Mid, anything else
    /// (including absent words) is Low.
    [[nodiscard]] Tier tier(std::string_view word) const;

    [[nodiscard]] std::size_t size() const noexcept { return by_rank_.size(); }
    [[nodiscard]] std::uint64_t total_tokens() const noexcept { return total_tokens_; }
    [[nodiscard]] const TierThresholds& thresholds() const noexcept { return thresholds_; }

    /// (word, frequency) in rank order.
    [[nodiscard]] const std::vector<std::pair<std::string, std::uint64_t>>& by_rank() const noexcept {
        return by_rank_;
    }

    /// word<TAB>frequency lines in rank order; loads back to the same lexicon.
    [[nodiscard]] std::string to_tsv() const;

private:
    std::vector<std::pair<std::string, std::uint64_t>> by_rank_;
    std::unordered_map<std::string, LexiconEntry> entries_;
    std::uint64_t total_tokens_ = 0;
    TierThresholds thresholds_;
};

struct DictionaryLoadReport {
    std::size_t data_lines = 0;
    std::size_t malformed = 0;
    std::vector<std::size_t> malformed_line_numbers;
};

/// Parses word<TAB>frequency[<TAB>pos] lines. Blank and '#' lines are
/// ignored; malformed lines are skipped and counted, and more than 1% of
/// data lines being malformed is an error (TooManyMalformedLines).
[[nodiscard]] FrequencyLexicon parse_freq_dict(std::string_view content, TierThresholds thresholds = {},
                                               DictionaryLoadReport* report = nullptr);

/// Throws FileUnreadable or NotUtf8 in addition to the parse errors.
[[nodiscard]] FrequencyLexicon load_freq_dict(const std::filesystem::path& path,
                                              TierThresholds thresholds = {},
                                              DictionaryLoadReport* report = nullptr);

/// Closed-class words of one language, keyed by their folded form.
class ClosedClassList {
public:
    ClosedClassList() = default;

    /// The bundled list for a language code; only "en" ships. Other codes
    /// yield an empty list.
    static ClosedClassList builtin(std::string_view language);

    /// word<TAB>UPOS lines; '#' comments allowed. Throws FileUnreadable,
    /// NotUtf8, ParseError or UnknownTag.
    static ClosedClassList load(const std::filesystem::path& path);

    void add(std::string_view word, PosTag tag);
    [[nodiscard]] std::optional<PosTag> lookup(std::string_view word) const;
    [[nodiscard]] std::size_t size() const noexcept { return words_.size(); }

private:
    std::unordered_map<std::string, PosTag> words_;
};

/// Rule-based tag for one token: all punctuation -> PUNCT, punctuation and
/// symbols -> SYM, any decimal digit -> NUM, closed-class member -> its
/// tag, otherwise NOUN.
[[nodiscard]] PosTag fallback_tag(std::string_view token, const ClosedClassList& closed_class);

/// Provider tags pass through unchanged; without them every token gets
/// its fallback tag. Throws TagCountMismatch.
[[nodiscard]] std::vector<PosTag> classify_pos(std::span<const std::string> tokens,
                                               const std::optional<std::vector<PosTag>>& provider_tags,
                                               const ClosedClassList& closed_class);

/// The vocabulary exclusion rule for store building: functional fallback
/// tag, or any decimal digit in the word.
[[nodiscard]] bool is_excluded_from_vocabulary(std::string_view word, const ClosedClassList& closed_class);

}  // namespace paradigm
