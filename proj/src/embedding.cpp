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

#include "paradigm/embedding.hpp"

#include <cmath>

#include "paradigm/error.hpp"
#include "paradigm/hash.hpp"
#include "paradigm/text.hpp"

namespace paradigm {

void validate_request(const EmbeddingRequest& request) {
    if (request.tokens.empty()) {
        throw Error(ErrorKind::EmptyTokenList, "request has no tokens");
    }
    if (request.tokens.size() > kMaxRequestTokens) {
        throw Error(ErrorKind::TooManyTokens,
                    std::to_string(request.tokens.size()) + " tokens exceeds the limit of 512");
    }
    for (const auto& token : request.tokens) {
        if (token.empty()) {
            throw Error(ErrorKind::EmptyToken, "empty token in request");
        }
        if (token.size() > kMaxTokenBytes) {
            throw Error(ErrorKind::TokenTooLong, "token exceeds 256 bytes");
        }
        if (token.find_first_of("\t\r\n") != std::string::npos) {
            throw Error(ErrorKind::InvalidToken, "token contains a tab or line break");
        }
    }
}

void validate_response(const EmbeddingRequest& request, const EmbeddingResponse& response,
                       std::size_t expected_dim) {
    if (response.dim != expected_dim) {
        throw Error(ErrorKind::ProviderProtocol, "provider answered with dim " +
                                                     std::to_string(response.dim) + ", expected " +
                                                     std::to_string(expected_dim));
    }
    if (response.vectors.size() != request.tokens.size()) {
        throw Error(ErrorKind::ProviderProtocol, "provider returned " +
                                                     std::to_string(response.vectors.size()) +
                                                     " vectors for " +
                                                     std::to_string(request.tokens.size()) +
                                                     " tokens");
    }
    for (const auto& v : response.vectors) {
        if (v.size() != expected_dim) {
            throw Error(ErrorKind::ProviderProtocol, "vector length differs from dim");
        }
        if (!all_finite(v)) {
            throw Error(ErrorKind::ProviderProtocol, "vector has non-finite components");
        }
    }
    if (response.pos_tags && response.pos_tags->size() != request.tokens.size()) {
        throw Error(ErrorKind::ProviderProtocol, "pos tag count differs from token count");
    }
}

Vector reference_base_vector(std::string_view token, std::size_t dim) {
    if (token.empty()) {
        throw Error(ErrorKind::EmptyToken, "cannot embed an empty token");
    }
    if (dim == 0) {
        throw Error(ErrorKind::InvalidArgument, "dimension must be positive");
    }
    SplitMix64 rng(fnv1a64(text::fold_case(token)));
    Vector v(dim);
    for (auto& x : v) {
        x = 2.0 * std::ldexp(static_cast<double>(rng.next()), -64) - 1.0;
    }
    return normalize(v);
}

ReferenceEmbedder::ReferenceEmbedder(std::size_t dim) : dim_(dim) {
    if (dim == 0) {
        throw Error(ErrorKind::InvalidArgument, "dimension must be positive");
    }
}

EmbeddingResponse ReferenceEmbedder::embed_tokens(const EmbeddingRequest& request) const {
    validate_request(request);
    const std::size_t count = request.tokens.size();

    std::vector<Vector> base;
    base.reserve(count);
    for (const auto& token : request.tokens) {
        base.push_back(reference_base_vector(token, dim_));
    }

    EmbeddingResponse response;
    response.dim = dim_;
    response.vectors.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        Vector mixed = base[i];
        for (std::size_t d = 0; d < dim_; ++d) {
            if (i > 0) {
                mixed[d] += 0.5 * base[i - 1][d];
            }
            if (i + 1 < count) {
                mixed[d] += 0.5 * base[i + 1][d];
            }
        }
        // Layer 0 when the neighbours cancel the token exactly.
        Vector layer1 = euclidean_norm(mixed) >= kMinNorm ? normalize(mixed) : base[i];
        if (request.layer_mode == LayerMode::Top) {
            response.vectors.push_back(std::move(layer1));
            continue;
        }
        Vector mean(dim_);
        for (std::size_t d = 0; d < dim_; ++d) {
            mean[d] = (base[i][d] + layer1[d]) / 2.0;
        }
        response.vectors.push_back(euclidean_norm(mean) >= kMinNorm ? normalize(mean) : base[i]);
    }
    return response;
}

}  // namespace paradigm
