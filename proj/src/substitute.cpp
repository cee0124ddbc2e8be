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

#include "paradigm/substitute.hpp"

#include <algorithm>
#include <cstdio>
#include <ctime>

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include "paradigm/error.hpp"
#include "paradigm/text.hpp"

namespace paradigm {

namespace {

bool is_letter(UChar32 c) {
    return u_isalpha(c) || (U_GET_GC_MASK(c) & U_GC_M_MASK) != 0;
}

bool is_word_char(UChar32 c) {
    return is_letter(c) || u_charType(c) == U_DECIMAL_DIGIT_NUMBER;
}

bool is_joiner(UChar32 c) {
    switch (c) {
        case 0x0027:  // '
        case 0x2019:  // right single quotation mark
        case 0x002D:  // -
        case 0x2010:  // hyphen
        case 0x2011:  // non-breaking hyphen
            return true;
        default:
            return false;
    }
}

}  // namespace

std::vector<std::string> tokenize(std::string_view sentence) {
    const auto* bytes = reinterpret_cast<const uint8_t*>(sentence.data());
    const auto length = static_cast<int32_t>(sentence.size());

    struct CodePoint {
        UChar32 c;
        int32_t begin;
        int32_t end;
    };
    std::vector<CodePoint> cps;
    for (int32_t i = 0; i < length;) {
        const int32_t begin = i;
        UChar32 c = 0;
        U8_NEXT(bytes, i, length, c);
        if (c < 0) {
            throw Error(ErrorKind::NotUtf8, "sentence is not valid UTF-8");
        }
        cps.push_back({c, begin, i});
    }

    std::vector<std::string> tokens;
    auto emit = [&](int32_t begin, int32_t end) {
        if (tokens.size() == kMaxRequestTokens) {
            throw Error(ErrorKind::TooManyTokens, "sentence has more than 512 tokens");
        }
        tokens.emplace_back(sentence.substr(static_cast<std::size_t>(begin),
                                            static_cast<std::size_t>(end - begin)));
    };

    int32_t word_begin = -1;
    for (std::size_t k = 0; k < cps.size(); ++k) {
        const auto& cp = cps[k];
        if (is_word_char(cp.c)) {
            if (word_begin < 0) {
                word_begin = cp.begin;
            }
            continue;
        }
        const bool joins = word_begin >= 0 && is_joiner(cp.c) && is_letter(cps[k - 1].c) &&
                           k + 1 < cps.size() && is_letter(cps[k + 1].c);
        if (joins) {
            continue;
        }
        if (word_begin >= 0) {
            emit(word_begin, cp.begin);
            word_begin = -1;
        }
        if (!u_isUWhiteSpace(cp.c)) {
            emit(cp.begin, cp.end);
        }
    }
    if (word_begin >= 0) {
        emit(word_begin, length);
    }
    if (tokens.empty()) {
        throw Error(ErrorKind::EmptySentence, "sentence has no tokens");
    }
    return tokens;
}

TwoDimensionalText analyze(const QuerySpec& query, const AnalysisContext& context) {
    if (query.n < 1 || query.n > kMaxSubstitutes) {
        throw Error(ErrorKind::InvalidArgument, "n must be between 1 and 50");
    }
    if (context.store.layer_mode() != query.layer_mode) {
        throw Error(ErrorKind::LayerModeMismatch,
                    "query asks for " + std::string(to_string(query.layer_mode)) +
                        " but the store was built for " +
                        std::string(to_string(context.store.layer_mode())));
    }
    if (context.provider.dim() != context.store.dim()) {
        throw Error(ErrorKind::DimensionMismatch,
                    "provider dim " + std::to_string(context.provider.dim()) + " != store dim " +
                        std::to_string(context.store.dim()));
    }

    const auto surfaces = tokenize(query.sentence);
    EmbeddingRequest request;
    request.layer_mode = query.layer_mode;
    request.tokens.reserve(surfaces.size());
    for (const auto& s : surfaces) {
        request.tokens.push_back(text::fold_case(s));
    }
    validate_request(request);
    const EmbeddingResponse response = context.provider.embed_tokens(request);
    validate_response(request, response, context.store.dim());
    const auto tags = classify_pos(request.tokens, response.pos_tags, context.closed_class);

    TwoDimensionalText result;
    result.query = query;
    result.store_layer_mode = context.store.layer_mode();
    result.tokens.reserve(surfaces.size());

    const std::size_t fetch = query.exclude_self ? query.n + 1 : query.n;
    for (std::size_t i = 0; i < surfaces.size(); ++i) {
        TokenAnalysis token;
        token.surface = surfaces[i];
        token.position = i;
        token.pos = tags[i];
        token.functional = is_functional(tags[i]);
        token.tier = context.lexicon.tier(request.tokens[i]);
        if (token.functional) {
            token.substitutes.push_back({token.surface, 1.0, token.tier});
        } else {
            for (auto& nb : context.store.topk(response.vectors[i], fetch)) {
                if (query.exclude_self && nb.word == request.tokens[i]) {
                    continue;
                }
                if (token.substitutes.size() == query.n) {
                    break;
                }
                const Tier tier = context.lexicon.tier(nb.word);
                token.substitutes.push_back({std::move(nb.word), nb.similarity, tier});
            }
        }
        result.tokens.push_back(std::move(token));
    }
    result.timestamp = std::chrono::system_clock::now();
    return result;
}

std::string render_plain(const TwoDimensionalText& result) {
    std::size_t rows = 1;
    std::vector<std::size_t> widths;
    widths.reserve(result.tokens.size());
    for (const auto& token : result.tokens) {
        std::size_t w = text::display_width(token.surface);
        for (const auto& s : token.substitutes) {
            w = std::max(w, text::display_width(s.word));
        }
        widths.push_back(w + 2);
        rows = std::max(rows, token.substitutes.size() + 1);
    }

    std::string out;
    for (std::size_t row = 0; row < rows; ++row) {
        std::string line;
        for (std::size_t col = 0; col < result.tokens.size(); ++col) {
            const auto& token = result.tokens[col];
            std::string_view cell;
            if (row == 0) {
                cell = token.surface;
            } else if (row - 1 < token.substitutes.size()) {
                cell = token.substitutes[row - 1].word;
            }
            line += cell;
            line.append(widths[col] - text::display_width(cell), ' ');
        }
        while (!line.empty() && line.back() == ' ') {
            line.pop_back();
        }
        out += line;
        out += '\n';
    }
    return out;
}

std::string format_timestamp(std::chrono::system_clock::time_point t) {
    using namespace std::chrono;
    const auto ms = duration_cast<milliseconds>(t.time_since_epoch()).count();
    std::time_t secs = static_cast<std::time_t>(ms / 1000);
    long millis = static_cast<long>(ms % 1000);
    if (millis < 0) {
        millis += 1000;
        --secs;
    }
    std::tm tm{};
    gmtime_r(&secs, &tm);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02d.%03ldZ", tm.tm_year + 1900,
                  tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec, millis);
    return buf;
}

nlohmann::json to_json(const TwoDimensionalText& result) {
    nlohmann::json tokens = nlohmann::json::array();
    for (const auto& token : result.tokens) {
        nlohmann::json subs = nlohmann::json::array();
        for (const auto& s : token.substitutes) {
            subs.push_back({{"word", s.word},
                            {"similarity", s.similarity},
                            {"tier", std::string(to_string(s.tier))}});
        }
        tokens.push_back({{"surface", token.surface},
                          {"pos", std::string(to_string(token.pos))},
                          {"functional", token.functional},
                          {"tier", std::string(to_string(token.tier))},
                          {"substitutes", std::move(subs)}});
    }
    return {{"model", result.query.model_id},
            {"layer_mode", std::string(to_string(result.query.layer_mode))},
            {"n", result.query.n},
            {"sentence", result.query.sentence},
            {"timestamp", format_timestamp(result.timestamp)},
            {"tokens", std::move(tokens)}};
}

}  // namespace paradigm
