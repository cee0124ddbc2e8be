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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "paradigm/embedding.hpp"

namespace paradigm::protocol {

// Newline-delimited JSON spoken with embedding bridges. One document per
// line, ids echoed verbatim, replies may arrive out of order.
//   request: {"id": int, "op": "embed", "tokens": [str...], "layer_mode": "top"|"average"}
//   success: {"id": int, "dim": int, "vectors": [[float...]...], "pos": [str...]?}
//   error:   {"id": int|null, "error": str}

struct Request {
    std::int64_t id = 0;
    EmbeddingRequest embed;
};

struct Reply {
    std::optional<std::int64_t> id;  // null only on errors for unparseable requests
    std::variant<EmbeddingResponse, std::string> body;

    [[nodiscard]] bool is_error() const noexcept { return body.index() == 1; }
};

/// Encoded documents never contain a newline; callers append '\n'.
[[nodiscard]] std::string encode_request(std::int64_t id, const EmbeddingRequest& request);
[[nodiscard]] std::string encode_reply(std::int64_t id, const EmbeddingResponse& response);
[[nodiscard]] std::string encode_error(std::optional<std::int64_t> id, std::string_view message);

/// Throw Error(ProviderProtocol) on anything outside the grammar.
[[nodiscard]] Request decode_request(std::string_view line);
[[nodiscard]] Reply decode_reply(std::string_view line);

}  // namespace paradigm::protocol
