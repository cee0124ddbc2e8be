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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "paradigm/layer_mode.hpp"
#include "paradigm/pos_tag.hpp"
#include "paradigm/vector_ops.hpp"

namespace paradigm {

inline constexpr std::size_t kMaxRequestTokens = 512;
inline constexpr std::size_t kMaxTokenBytes = 256;

struct EmbeddingRequest {
    std::vector<std::string> tokens;
    LayerMode layer_mode = LayerMode::Top;
};

struct EmbeddingResponse {
    std::size_t dim = 0;
    std::vector<Vector> vectors;
    std::optional<std::vector<PosTag>> pos_tags;
};

/// Throws EmptyTokenList, TooManyTokens, EmptyToken, TokenTooLong or
/// InvalidToken (tab or line break inside a token).
void validate_request(const EmbeddingRequest& request);

/// Checks a provider answer against the request it was issued for: vector
/// count, dimension, finiteness and tag count. Throws ProviderProtocol.
void validate_response(const EmbeddingRequest& request, const EmbeddingResponse& response,
                       std::size_t expected_dim);

/// Source of contextualized token vectors. Implementations are immutable
/// after construction and callable from many threads at once.
class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;

    [[nodiscard]] virtual std::size_t dim() const noexcept = 0;
    [[nodiscard]] virtual EmbeddingResponse embed_tokens(const EmbeddingRequest& request) const = 0;
};

/// Deterministic context-free vector for a token: FNV-1a of the folded
/// token seeds a splitmix64 stream, mapped to [-1, 1) and unit-normalized.
[[nodiscard]] Vector reference_base_vector(std::string_view token, std::size_t dim);

/// In-process embedder with two synthetic layers. Layer 0 is the base
/// vector; layer 1 mixes in half of each neighbour's base vector. Top
/// returns layer 1, Average the normalized mean of both.
class ReferenceEmbedder final : public EmbeddingProvider {
public:
    explicit ReferenceEmbedder(std::size_t dim);

    [[nodiscard]] std::size_t dim() const noexcept override { return dim_; }
    [[nodiscard]] EmbeddingResponse embed_tokens(const EmbeddingRequest& request) const override;

private:
    std::size_t dim_;
};

}  // namespace paradigm
