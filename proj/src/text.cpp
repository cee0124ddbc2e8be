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

#include "paradigm/text.hpp"

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include "paradigm/error.hpp"

namespace paradigm::text {

namespace {

template <typename Fn>
void for_each_code_point(std::string_view s, Fn&& fn) {
    const auto* bytes = reinterpret_cast<const uint8_t*>(s.data());
    const auto length = static_cast<int32_t>(s.size());
    int32_t i = 0;
    while (i < length) {
        UChar32 c = 0;
        U8_NEXT(bytes, i, length, c);
        if (c < 0) {
            throw Error(ErrorKind::NotUtf8, "malformed UTF-8 sequence");
        }
        if (!fn(c)) {
            return;
        }
    }
}

bool is_punct(UChar32 c) {
    return (U_GET_GC_MASK(c) & U_GC_P_MASK) != 0;
}

bool is_symbol(UChar32 c) {
    return (U_GET_GC_MASK(c) & U_GC_S_MASK) != 0;
}

}  // namespace

bool is_valid_utf8(std::string_view bytes) noexcept {
    const auto* p = reinterpret_cast<const uint8_t*>(bytes.data());
    const auto length = static_cast<int32_t>(bytes.size());
    int32_t i = 0;
    while (i < length) {
        UChar32 c = 0;
        U8_NEXT(p, i, length, c);
        if (c < 0) {
            return false;
        }
    }
    return true;
}

std::string fold_case(std::string_view word) {
    if (!is_valid_utf8(word)) {
        throw Error(ErrorKind::NotUtf8, "malformed UTF-8 sequence");
    }
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
    if (U_FAILURE(status)) {
        throw Error(ErrorKind::Io, "ICU NFC normalizer unavailable");
    }
    icu::UnicodeString source = icu::UnicodeString::fromUTF8(
        icu::StringPiece(word.data(), static_cast<int32_t>(word.size())));
    icu::UnicodeString normalized = nfc->normalize(source, status);
    if (U_FAILURE(status)) {
        throw Error(ErrorKind::NotUtf8, "NFC normalization failed");
    }
    normalized.toLower(icu::Locale::getRoot());
    std::string out;
    normalized.toUTF8String(out);
    return out;
}

bool contains_digit(std::string_view word) {
    bool found = false;
    for_each_code_point(word, [&](UChar32 c) {
        found = u_charType(c) == U_DECIMAL_DIGIT_NUMBER;
        return !found;
    });
    return found;
}

bool is_all_punctuation(std::string_view word) {
    if (word.empty()) {
        return false;
    }
    bool all = true;
    for_each_code_point(word, [&](UChar32 c) {
        all = is_punct(c);
        return all;
    });
    return all;
}

bool is_all_symbol(std::string_view word) {
    if (word.empty()) {
        return false;
    }
    bool all = true;
    bool any_symbol = false;
    for_each_code_point(word, [&](UChar32 c) {
        any_symbol = any_symbol || is_symbol(c);
        all = is_punct(c) || is_symbol(c);
        return all;
    });
    return all && any_symbol;
}

std::size_t display_width(std::string_view word) noexcept {
    std::size_t n = 0;
    for (unsigned char c : word) {
        // count lead bytes only
        if ((c & 0xC0U) != 0x80U) {
            ++n;
        }
    }
    return n;
}

}  // namespace paradigm::text
