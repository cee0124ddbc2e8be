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
#include <string>
#include <string_view>

namespace paradigm::text {

[[nodiscard]] bool is_valid_utf8(std::string_view bytes) noexcept;

/// NFC normalization followed by root-locale lowercasing. This is the one
/// canonical word key used for embedding, store and lexicon lookups.
/// Throws Error(NotUtf8) on malformed input.
[[nodiscard]] std::string fold_case(std::string_view word);

/// True if any code point is a decimal digit (general category Nd).
[[nodiscard]] bool contains_digit(std::string_view word);

/// True if the word is non-empty and every code point is punctuation (P*).
[[nodiscard]] bool is_all_punctuation(std::string_view word);

/// True if the word is non-empty and every code point is punctuation or a
/// symbol (P* or S*) and at least one is a symbol.
[[nodiscard]] bool is_all_symbol(std::string_view word);

/// Number of code points; used as the display width of a cell.
[[nodiscard]] std::size_t display_width(std::string_view word) noexcept;

}  // namespace paradigm::text
