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

#include <chrono>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "paradigm/embedding.hpp"
#include "paradigm/layer_mode.hpp"
#include "paradigm/lexicon.hpp"
#include "paradigm/pos_tag.hpp"
#include "paradigm/typestore.hpp"

namespace paradigm {

inline constexpr std::size_t kDefaultSubstitutes = 5;
inline constexpr std::size_t kMaxSubstitutes = 50;

struct QuerySpec {
    std::string sentence;
    std::string model_id;
    LayerMode layer_mode = LayerMode::Top;
    std::size_t n = kDefaultSubstitutes;
    /// Drop the token's own folded form from its substitute list.
    bool exclude_self = false;
};

struct Substitute {
    std::string word;
    double similarity = 0.0;
    Tier tier = Tier::Low;

    friend bool operator==(const Substitute&, const Substitute&) = default;
};

struct TokenAnalysis {
    std::string surface;
    std::size_t position = 0;
    PosTag pos = PosTag::X;
    bool functional = false;
    Tier tier = Tier::Low;
    std::vector<Substitute> substitutes;

    friend bool operator==(const TokenAnalysis&, const TokenAnalysis&) = default;
};

/// One analyzed sentence: tokens along the sentence axis, each with its
/// ranked substitutes along the other.
struct TwoDimensionalText {
    QuerySpec query;
    std::vector<TokenAnalysis> tokens;
    LayerMode store_layer_mode = LayerMode::Top;
    std::chrono::system_clock::time_point timestamp;
};

/// Splits on whitespace. Runs of letters and digits form words, with an
/// apostrophe or hyphen kept when it sits between two letters; every other
/// non-space character is a token of its own. Surface forms are kept.
/// Throws EmptySentence, TooManyTokens or NotUtf8.
[[nodiscard]] std::vector<std::string> tokenize(std::string_view sentence);

/// Everything a query needs besides the sentence itself.
struct AnalysisContext {
    const TypeEmbeddingStore& store;
    const FrequencyLexicon& lexicon;
    const EmbeddingProvider& provider;
    const ClosedClassList& closed_class;
};

/// Runs the full pipeline: tokenize, embed the folded tokens, tag, and
/// search the store for every content token. Functional tokens get
/// themselves as the only substitute, with similarity exactly 1.0.
/// Throws InvalidArgument (n out of 1..50), LayerModeMismatch,
/// DimensionMismatch, EmptySentence, TooManyTokens, provider errors.
[[nodiscard]] TwoDimensionalText analyze(const QuerySpec& query, const AnalysisContext& context);

/// Fixed-width grid: the sentence on the first line, substitutes below
/// each token. Columns are as wide as their widest cell plus two spaces;
/// trailing blanks are trimmed.
[[nodiscard]] std::string render_plain(const TwoDimensionalText& result);

/// The JSON projection shared by the HTTP service and the CLI.
[[nodiscard]] nlohmann::json to_json(const TwoDimensionalText& result);

/// ISO-8601 UTC with milliseconds, e.g. 2026-01-02T03:04:05.678Z.
[[nodiscard]] std::string format_timestamp(std::chrono::system_clock::time_point t);

}  // namespace paradigm
