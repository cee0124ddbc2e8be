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

// Independent re-derivations used to check the library. Nothing here calls
// into paradigm; arithmetic is carried out in long double.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace oracle {

inline std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h = (h ^ c) * 0x100000001b3ULL;
    }
    return h;
}

// ASCII lowercasing is enough for the words the oracle is fed.
inline std::string ascii_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
        return static_cast<char>(c >= 'A' && c <= 'Z' ? c + 32 : c);
    });
    return out;
}

inline std::vector<long double> unit(std::vector<long double> v) {
    long double n = 0;
    for (auto x : v) {
        n += x * x;
    }
    n = std::sqrt(n);
    for (auto& x : v) {
        x /= n;
    }
    return v;
}

inline std::vector<long double> base_vector(std::string_view token, std::size_t dim) {
    std::uint64_t state = fnv1a(ascii_lower(token));
    std::vector<long double> v(dim);
    for (auto& x : v) {
        state += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        z ^= z >> 31;
        x = 2.0L * (static_cast<long double>(z) / 18446744073709551616.0L) - 1.0L;
    }
    return unit(std::move(v));
}

// Top layer of the reference embedder: own base plus half of each neighbour.
inline std::vector<long double> top_layer(const std::vector<std::string>& tokens, std::size_t i,
                                          std::size_t dim) {
    auto v = base_vector(tokens[i], dim);
    for (std::size_t d = 0; d < dim; ++d) {
        if (i > 0) {
            v[d] += 0.5L * base_vector(tokens[i - 1], dim)[d];
        }
        if (i + 1 < tokens.size()) {
            v[d] += 0.5L * base_vector(tokens[i + 1], dim)[d];
        }
    }
    return unit(std::move(v));
}

inline std::vector<long double> average_layer(const std::vector<std::string>& tokens, std::size_t i,
                                              std::size_t dim) {
    auto l0 = base_vector(tokens[i], dim);
    auto l1 = top_layer(tokens, i, dim);
    std::vector<long double> v(dim);
    for (std::size_t d = 0; d < dim; ++d) {
        v[d] = (l0[d] + l1[d]) / 2.0L;
    }
    return unit(std::move(v));
}

struct Ranked {
    std::string word;
    long double similarity;
};

// Exhaustive search by sorting every candidate, independent of the
// library's partial selection.
inline std::vector<Ranked> exhaustive_topk(const std::vector<std::string>& words,
                                           const std::vector<std::vector<float>>& vectors,
                                           const std::vector<double>& query, std::size_t k) {
    long double qn = 0;
    for (double x : query) {
        qn += static_cast<long double>(x) * x;
    }
    qn = std::sqrt(qn);
    std::vector<std::pair<long double, std::size_t>> all;
    for (std::size_t i = 0; i < words.size(); ++i) {
        long double d = 0;
        long double n = 0;
        for (std::size_t j = 0; j < query.size(); ++j) {
            d += static_cast<long double>(vectors[i][j]) * query[j];
            n += static_cast<long double>(vectors[i][j]) * vectors[i][j];
        }
        all.emplace_back(d / (qn * std::sqrt(n)), i);
    }
    std::stable_sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    std::vector<Ranked> out;
    for (std::size_t r = 0; r < std::min(k, all.size()); ++r) {
        out.push_back({words[all[r].second], all[r].first});
    }
    return out;
}

}  // namespace oracle
