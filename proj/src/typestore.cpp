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

#include "paradigm/typestore.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

#include "paradigm/error.hpp"

namespace paradigm {

namespace {

constexpr double kUnitTolerance = 1e-5;

bool ranks_before(std::uint64_t freq_a, std::string_view word_a, std::uint64_t freq_b,
                  std::string_view word_b) {
    if (freq_a != freq_b) {
        return freq_a > freq_b;
    }
    return word_a < word_b;
}

}  // namespace

TypeEmbeddingStore::TypeEmbeddingStore(std::size_t dim, LayerMode layer_mode,
                                       std::vector<StoreEntry> entries, Metadata metadata)
    : dim_(dim), layer_mode_(layer_mode), metadata_(std::move(metadata)) {
    if (dim_ == 0) {
        throw Error(ErrorKind::MalformedStore, "store dimension must be positive");
    }
    words_.reserve(entries.size());
    frequencies_.reserve(entries.size());
    norms_.reserve(entries.size());
    matrix_.reserve(entries.size() * dim_);
    index_.reserve(entries.size());

    for (std::size_t i = 0; i < entries.size(); ++i) {
        auto& e = entries[i];
        if (e.word.empty() || e.word.size() > std::numeric_limits<std::uint16_t>::max()) {
            throw Error(ErrorKind::MalformedStore, "word length out of range at entry " +
                                                       std::to_string(i));
        }
        if (e.vector.size() != dim_) {
            throw Error(ErrorKind::MalformedStore, "vector length differs from dim for \"" +
                                                       e.word + "\"");
        }
        double sq = 0.0;
        for (float x : e.vector) {
            sq += static_cast<double>(x) * static_cast<double>(x);
        }
        const double n = std::sqrt(sq);
        if (!(std::abs(n - 1.0) <= kUnitTolerance)) {
            throw Error(ErrorKind::MalformedStore, "vector for \"" + e.word + "\" is not unit-norm");
        }
        if (i > 0 && !ranks_before(frequencies_.back(), words_.back(), e.frequency, e.word)) {
            throw Error(ErrorKind::MalformedStore,
                        "entries not ordered by frequency then word at \"" + e.word + "\"");
        }
        if (!index_.emplace(e.word, i).second) {
            throw Error(ErrorKind::MalformedStore, "duplicate word \"" + e.word + "\"");
        }
        matrix_.insert(matrix_.end(), e.vector.begin(), e.vector.end());
        norms_.push_back(n);
        frequencies_.push_back(e.frequency);
        words_.push_back(std::move(e.word));
    }
}

std::span<const float> TypeEmbeddingStore::vector(std::size_t index) const {
    if (index >= size()) {
        throw std::out_of_range("store index out of range");
    }
    return {matrix_.data() + index * dim_, dim_};
}

std::optional<std::size_t> TypeEmbeddingStore::find(std::string_view word) const {
    auto it = index_.find(std::string(word));
    if (it == index_.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::vector<Neighbor> TypeEmbeddingStore::topk(std::span<const double> query, std::size_t k) const {
    if (query.size() != dim_) {
        throw Error(ErrorKind::DimensionMismatch, "query has " + std::to_string(query.size()) +
                                                      " components, store dim is " +
                                                      std::to_string(dim_));
    }
    if (k == 0) {
        throw Error(ErrorKind::InvalidArgument, "k must be at least 1");
    }
    const double query_norm = euclidean_norm(query);
    if (!(query_norm >= kMinNorm)) {
        throw Error(ErrorKind::ZeroVector, "query vector has zero norm");
    }

    std::vector<std::pair<double, std::size_t>> scored(size());
    for (std::size_t i = 0; i < size(); ++i) {
        const float* row = matrix_.data() + i * dim_;
        double acc = 0.0;
        for (std::size_t d = 0; d < dim_; ++d) {
            acc += query[d] * static_cast<double>(row[d]);
        }
        scored[i] = {std::clamp(acc / (query_norm * norms_[i]), -1.0, 1.0), i};
    }
    const std::size_t take = std::min(k, scored.size());
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(take),
                      scored.end(), [](const auto& a, const auto& b) {
                          if (a.first != b.first) {
                              return a.first > b.first;
                          }
                          return a.second < b.second;
                      });

    std::vector<Neighbor> out;
    out.reserve(take);
    for (std::size_t i = 0; i < take; ++i) {
        out.push_back({words_[scored[i].second], scored[i].first, scored[i].second + 1});
    }
    return out;
}

bool operator==(const TypeEmbeddingStore& a, const TypeEmbeddingStore& b) noexcept {
    return a.dim_ == b.dim_ && a.layer_mode_ == b.layer_mode_ && a.words_ == b.words_ &&
           a.frequencies_ == b.frequencies_ && a.metadata_ == b.metadata_ &&
           a.matrix_.size() == b.matrix_.size() &&
           std::memcmp(a.matrix_.data(), b.matrix_.data(), a.matrix_.size() * sizeof(float)) == 0;
}

Accumulator::Accumulator(std::size_t dim, LayerMode layer_mode)
    : dim_(dim), layer_mode_(layer_mode) {
    if (dim_ == 0) {
        throw Error(ErrorKind::InvalidArgument, "dimension must be positive");
    }
}

void Accumulator::add(std::string_view word, std::span<const double> vector) {
    if (vector.size() != dim_) {
        throw Error(ErrorKind::DimensionMismatch, "record for \"" + std::string(word) + "\" has " +
                                                      std::to_string(vector.size()) +
                                                      " components, expected " +
                                                      std::to_string(dim_));
    }
    if (!all_finite(vector)) {
        throw Error(ErrorKind::NonFiniteComponent,
                    "record for \"" + std::string(word) + "\" has a non-finite component");
    }
    auto [it, inserted] = slots_.try_emplace(std::string(word));
    if (inserted) {
        it->second.sum.assign(dim_, 0.0);
    }
    for (std::size_t d = 0; d < dim_; ++d) {
        it->second.sum[d] += vector[d];
    }
    ++it->second.count;
    ++records_;
}

void Accumulator::merge(const Accumulator& other) {
    if (other.dim_ != dim_) {
        throw Error(ErrorKind::DimensionMismatch, "cannot merge accumulators of different dims");
    }
    if (other.layer_mode_ != layer_mode_) {
        throw Error(ErrorKind::LayerModeMismatch,
                    "cannot merge accumulators of different layer modes");
    }
    for (const auto& [word, slot] : other.slots_) {
        auto [it, inserted] = slots_.try_emplace(word);
        if (inserted) {
            it->second.sum.assign(dim_, 0.0);
        }
        for (std::size_t d = 0; d < dim_; ++d) {
            it->second.sum[d] += slot.sum[d];
        }
        it->second.count += slot.count;
    }
    records_ += other.records_;
}

const Accumulator::Slot* Accumulator::find(std::string_view word) const {
    auto it = slots_.find(std::string(word));
    return it == slots_.end() ? nullptr : &it->second;
}

FinalizeResult finalize(const Accumulator& acc, const FinalizeOptions& options) {
    if (acc.empty()) {
        throw Error(ErrorKind::EmptyAccumulator, "no records were accumulated");
    }
    if (options.vocab_limit == 0) {
        throw Error(ErrorKind::InvalidArgument, "vocabulary limit must be positive");
    }

    FinalizeReport report;
    report.types_seen = acc.size();

    struct Candidate {
        std::string_view word;
        std::uint64_t frequency;
        Vector unit;
    };
    std::vector<Candidate> candidates;
    candidates.reserve(acc.size());
    for (const auto& [word, slot] : acc.slots()) {
        if (options.exclude && options.exclude(word)) {
            ++report.excluded;
            continue;
        }
        if (!(euclidean_norm(slot.sum) >= kMinNorm)) {
            ++report.zero_norm;
            report.warnings.push_back("dropped \"" + word + "\": summed vector has zero norm");
            continue;
        }
        const std::uint64_t freq =
            options.frequency ? options.frequency(word, slot.count) : slot.count;
        candidates.push_back({word, freq, normalize(slot.sum)});
    }
    if (candidates.empty()) {
        throw Error(ErrorKind::EmptyAfterExclusion, "every accumulated word was excluded");
    }

    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        return ranks_before(a.frequency, a.word, b.frequency, b.word);
    });
    if (candidates.size() > options.vocab_limit) {
        report.over_limit = candidates.size() - options.vocab_limit;
        candidates.resize(options.vocab_limit);
    }
    report.kept = candidates.size();

    std::vector<StoreEntry> entries;
    entries.reserve(candidates.size());
    for (auto& c : candidates) {
        std::vector<float> v(c.unit.begin(), c.unit.end());
        entries.push_back({std::string(c.word), c.frequency, std::move(v)});
    }
    return {TypeEmbeddingStore(acc.dim(), acc.layer_mode(), std::move(entries), options.metadata),
            std::move(report)};
}

}  // namespace paradigm
