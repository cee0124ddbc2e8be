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

#include "paradigm/protocol.hpp"

#include <nlohmann/json.hpp>

#include "paradigm/error.hpp"

namespace paradigm::protocol {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& what) {
    throw Error(ErrorKind::ProviderProtocol, what);
}

json parse_object(std::string_view line) {
    auto j = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded() || !j.is_object()) {
        fail("line is not a JSON object");
    }
    return j;
}

std::int64_t get_id(const json& j) {
    auto it = j.find("id");
    if (it == j.end() || !it->is_number_integer()) {
        fail("missing integer \"id\"");
    }
    return it->get<std::int64_t>();
}

}  // namespace

std::string encode_request(std::int64_t id, const EmbeddingRequest& request) {
    json j = {{"id", id},
              {"op", "embed"},
              {"tokens", request.tokens},
              {"layer_mode", std::string(to_string(request.layer_mode))}};
    return j.dump();
}

std::string encode_reply(std::int64_t id, const EmbeddingResponse& response) {
    json j = {{"id", id}, {"dim", response.dim}, {"vectors", response.vectors}};
    if (response.pos_tags) {
        json pos = json::array();
        for (auto tag : *response.pos_tags) {
            pos.push_back(std::string(to_string(tag)));
        }
        j["pos"] = std::move(pos);
    }
    return j.dump();
}

std::string encode_error(std::optional<std::int64_t> id, std::string_view message) {
    json j = {{"id", id ? json(*id) : json(nullptr)}, {"error", std::string(message)}};
    return j.dump();
}

Request decode_request(std::string_view line) {
    const json j = parse_object(line);
    Request out;
    out.id = get_id(j);
    auto op = j.find("op");
    if (op == j.end() || *op != "embed") {
        fail("\"op\" must be \"embed\"");
    }
    auto tokens = j.find("tokens");
    if (tokens == j.end() || !tokens->is_array()) {
        fail("missing \"tokens\" array");
    }
    for (const auto& t : *tokens) {
        if (!t.is_string()) {
            fail("\"tokens\" holds a non-string");
        }
        out.embed.tokens.push_back(t.get<std::string>());
    }
    auto mode = j.find("layer_mode");
    if (mode == j.end() || !mode->is_string()) {
        fail("missing \"layer_mode\"");
    }
    try {
        out.embed.layer_mode = parse_layer_mode(mode->get<std::string>());
    } catch (const Error& e) {
        fail(e.what());
    }
    return out;
}

Reply decode_reply(std::string_view line) {
    const json j = parse_object(line);
    Reply out;
    if (auto err = j.find("error"); err != j.end()) {
        if (!err->is_string()) {
            fail("\"error\" must be a string");
        }
        auto id = j.find("id");
        if (id == j.end() || !(id->is_null() || id->is_number_integer())) {
            fail("error line needs an integer or null \"id\"");
        }
        if (!id->is_null()) {
            out.id = id->get<std::int64_t>();
        }
        out.body = err->get<std::string>();
        return out;
    }

    out.id = get_id(j);
    EmbeddingResponse response;
    auto dim = j.find("dim");
    if (dim == j.end() || !dim->is_number_unsigned() || dim->get<std::uint64_t>() == 0) {
        fail("\"dim\" must be a positive integer");
    }
    response.dim = dim->get<std::size_t>();
    auto vectors = j.find("vectors");
    if (vectors == j.end() || !vectors->is_array()) {
        fail("missing \"vectors\" array");
    }
    response.vectors.reserve(vectors->size());
    for (const auto& v : *vectors) {
        if (!v.is_array()) {
            fail("\"vectors\" holds a non-array");
        }
        Vector vec;
        vec.reserve(v.size());
        for (const auto& x : v) {
            if (!x.is_number()) {
                fail("vector holds a non-number");
            }
            vec.push_back(x.get<double>());
        }
        response.vectors.push_back(std::move(vec));
    }
    if (auto pos = j.find("pos"); pos != j.end()) {
        if (!pos->is_array()) {
            fail("\"pos\" must be an array");
        }
        std::vector<PosTag> tags;
        for (const auto& p : *pos) {
            if (!p.is_string()) {
                fail("\"pos\" holds a non-string");
            }
            auto tag = parse_pos_tag(p.get<std::string>());
            if (!tag) {
                fail("unknown UPOS label \"" + p.get<std::string>() + "\"");
            }
            tags.push_back(*tag);
        }
        response.pos_tags = std::move(tags);
    }
    out.body = std::move(response);
    return out;
}

}  // namespace paradigm::protocol
