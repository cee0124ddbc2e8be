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
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "paradigm/layer_mode.hpp"
#include "paradigm/vector_ops.hpp"

namespace paradigm {

using Metadata = std::map<std::string, std::string>;

struct StoreEntry {
    std::string word;
    std::uint64_t frequency = 0;
    std::vector<float> vector;
};

struct Neighbor {
    std::string word;
    double similarity = 0.0;
    std::size_t rank_in_store = 0;  // 1-based
};

/// Immutable set of unit-normalized type vectors, ordered by descending
/// frequency with ties broken by ascending word. Safe for concurrent reads.
class TypeEmbeddingStore {
public:
    /// Validates every invariant (unit norms within 1e-5, ordering, unique
    /// words, vector lengths). Throws Error(MalformedStore) otherwise.
    TypeEmbeddingStore(std::size_t dim, LayerMode layer_mode, std::vector<StoreEntry> entries,
                       Metadata metadata = {});

    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
    [[nodiscard]] LayerMode layer_mode() const noexcept { return layer_mode_; }
    [[nodiscard]] std::size_t size() const noexcept { return words_.size(); }
    [[nodiscard]] bool empty() const noexcept { return words_.empty(); }
    [[nodiscard]] const Metadata& metadata() const noexcept { return metadata_; }

    [[nodiscard]] const std::string& word(std::size_t index) const { return words_.at(index); }
    [[nodiscard]] std::uint64_t frequency(std::size_t index) const { return frequencies_.at(index); }
    [[nodiscard]] std::span<const float> vector(std::size_t index) const;

    /// Zero-based index of an exact word, if stored. Rank is index + 1.
    [[nodiscard]] std::optional<std::size_t> find(std::string_view word) const;

    /// Exhaustive cosine search. Results are sorted by descending
    /// similarity, ties by ascending rank; at most k of them.
    /// Throws DimensionMismatch, ZeroVector, or InvalidArgument for k == 0.
    [[nodiscard]] std::vector<Neighbor> topk(std::span<const double> query, std::size_t k) const;

    /// Field-wise equality; vectors compare by their bytes.
    friend bool operator==(const TypeEmbeddingStore& a, const TypeEmbeddingStore& b) noexcept;

private:
    std::size_t dim_;
    LayerMode layer_mode_;
    std::vector<std::string> words_;
    std::vector<std::uint64_t> frequencies_;
    std::vector<float> matrix_;  // row-major, size() x dim()
    std::vector<double> norms_;
    std::unordered_map<std::string, std::size_t> index_;
    Metadata metadata_;
};

/// Running per-word vector sums and observation counts.
class Accumulator {
public:
    struct Slot {
        Vector sum;
        std::uint64_t count = 0;
    };

    Accumulator(std::size_t dim, LayerMode layer_mode);

    /// sums[word] += vector; counts[word] += 1.
    /// Throws DimensionMismatch or NonFiniteComponent and leaves state unchanged.
    void add(std::string_view word, std::span<const double> vector);

    /// Adds another accumulator's sums and counts into this one.
    void merge(const Accumulator& other);

    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
    [[nodiscard]] LayerMode layer_mode() const noexcept { return layer_mode_; }
    [[nodiscard]] bool empty() const noexcept { return slots_.empty(); }
    [[nodiscard]] std::size_t size() const noexcept { return slots_.size(); }
    [[nodiscard]] std::uint64_t records() const noexcept { return records_; }
    [[nodiscard]] const Slot* find(std::string_view word) const;
    [[nodiscard]] const std::unordered_map<std::string, Slot>& slots() const noexcept { return slots_; }

private:
    std::size_t dim_;
    LayerMode layer_mode_;
    std::uint64_t records_ = 0;
    std::unordered_map<std::string, Slot> slots_;
};

struct FinalizeOptions {
    std::size_t vocab_limit = 10000;
    /// Words for which this returns true are dropped before ranking.
    std::function<bool(std::string_view)> exclude;
    /// Ranking frequency for a word given its observation count. Defaults
    /// to the count itself.
    std::function<std::uint64_t(std::string_view, std::uint64_t)> frequency;
    Metadata metadata;
};

struct FinalizeReport {
    std::size_t types_seen = 0;
    std::size_t excluded = 0;
    std::size_t zero_norm = 0;
    std::size_t over_limit = 0;
    std::size_t kept = 0;
    std::vector<std::string> warnings;
};

struct FinalizeResult {
    TypeEmbeddingStore store;
    FinalizeReport report;
};

/// Exclusion, zero-norm removal, ranking, then the vocabulary cut.
/// Throws EmptyAccumulator or EmptyAfterExclusion.
[[nodiscard]] FinalizeResult finalize(const Accumulator& acc, const FinalizeOptions& options);

}  // namespace paradigm
