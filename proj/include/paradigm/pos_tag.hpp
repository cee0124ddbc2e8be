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

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace paradigm {

/// The 17 Universal Dependencies part-of-speech labels.
enum class PosTag : std::uint8_t {
    ADJ,
    ADP,
    ADV,
    AUX,
    CCONJ,
    DET,
    INTJ,
    NOUN,
    NUM,
    PART,
    PRON,
    PROPN,
    PUNCT,
    SCONJ,
    SYM,
    VERB,
    X,
};

inline constexpr std::array<PosTag, 17> kAllPosTags = {
    PosTag::ADJ,  PosTag::ADP,  PosTag::ADV,   PosTag::AUX,   PosTag::CCONJ, PosTag::DET,
    PosTag::INTJ, PosTag::NOUN, PosTag::NUM,   PosTag::PART,  PosTag::PRON,  PosTag::PROPN,
    PosTag::PUNCT, PosTag::SCONJ, PosTag::SYM, PosTag::VERB, PosTag::X,
};

[[nodiscard]] std::string_view to_string(PosTag tag) noexcept;

/// Exact, case-sensitive UPOS label lookup.
[[nodiscard]] std::optional<PosTag> parse_pos_tag(std::string_view label) noexcept;

/// Closed-class and non-lexical tags: ADP AUX CCONJ SCONJ DET PART PRON PUNCT NUM SYM.
[[nodiscard]] constexpr bool is_functional(PosTag tag) noexcept {
    switch (tag) {
        case PosTag::ADP:
        case PosTag::AUX:
        case PosTag::CCONJ:
        case PosTag::SCONJ:
        case PosTag::DET:
        case PosTag::PART:
        case PosTag::PRON:
        case PosTag::PUNCT:
        case PosTag::NUM:
        case PosTag::SYM:
            return true;
        default:
            return false;
    }
}

}  // namespace paradigm
