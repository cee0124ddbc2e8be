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

#include "paradigm/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <toml.hpp>

#include "paradigm/error.hpp"
#include "paradigm/substitute.hpp"

namespace paradigm {

namespace {

[[noreturn]] void parse_fail(const std::string& where, const std::string& what) {
    throw Error(ErrorKind::ParseError, where + ": " + what);
}

void reject_unknown_keys(const toml::table& table, std::initializer_list<std::string_view> known,
                         const std::string& where) {
    const std::set<std::string_view> allowed(known);
    for (const auto& [key, _] : table) {
        if (!allowed.contains(key.str())) {
            parse_fail(where, "unknown key \"" + std::string(key.str()) + "\"");
        }
    }
}

std::string required_string(const toml::table& t, std::string_view key, const std::string& where) {
    const auto* node = t.get(key);
    if (node == nullptr) {
        parse_fail(where, "missing \"" + std::string(key) + "\"");
    }
    const auto* s = node->as_string();
    if (s == nullptr || s->get().empty()) {
        parse_fail(where, "\"" + std::string(key) + "\" must be a non-empty string");
    }
    return s->get();
}

std::optional<std::string> optional_string(const toml::table& t, std::string_view key,
                                           const std::string& where) {
    const auto* node = t.get(key);
    if (node == nullptr) {
        return std::nullopt;
    }
    const auto* s = node->as_string();
    if (s == nullptr || s->get().empty()) {
        parse_fail(where, "\"" + std::string(key) + "\" must be a non-empty string");
    }
    return s->get();
}

std::optional<std::size_t> optional_positive(const toml::table& t, std::string_view key,
                                             const std::string& where) {
    const auto* node = t.get(key);
    if (node == nullptr) {
        return std::nullopt;
    }
    const auto* i = node->as_integer();
    if (i == nullptr || i->get() < 1) {
        parse_fail(where, "\"" + std::string(key) + "\" must be a positive integer");
    }
    return static_cast<std::size_t>(i->get());
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() ? path : base / path;
}

ProviderConfig parse_provider(const toml::table& t, const std::string& where) {
    reject_unknown_keys(t, {"kind", "dim", "command", "address", "timeout_ms"}, where);
    ProviderConfig p;
    const auto kind = required_string(t, "kind", where);
    if (kind == "reference") {
        p.kind = ProviderKind::Reference;
    } else if (kind == "bridge-stdio") {
        p.kind = ProviderKind::BridgeStdio;
        p.command = required_string(t, "command", where);
    } else if (kind == "bridge-http") {
        p.kind = ProviderKind::BridgeHttp;
        p.address = required_string(t, "address", where);
    } else {
        parse_fail(where, "kind must be reference, bridge-stdio or bridge-http");
    }
    auto dim = optional_positive(t, "dim", where);
    if (!dim) {
        parse_fail(where, "missing \"dim\"");
    }
    p.dim = *dim;
    p.timeout_ms = optional_positive(t, "timeout_ms", where).value_or(p.timeout_ms);
    return p;
}

ModelConfig parse_model(const toml::table& t, std::size_t index, const std::filesystem::path& base) {
    std::string where = "model[" + std::to_string(index) + "]";
    reject_unknown_keys(t,
                        {"id", "display_name", "language", "default", "default_n", "lexicon",
                         "closed_class", "max_inflight", "provider", "stores", "tiers"},
                        where);
    ModelConfig m;
    m.model_id = required_string(t, "id", where);
    where = "model \"" + m.model_id + "\"";
    m.display_name = optional_string(t, "display_name", where).value_or(m.model_id);
    m.language = optional_string(t, "language", where).value_or("en");
    if (const auto* node = t.get("default")) {
        const auto* b = node->as_boolean();
        if (b == nullptr) {
            parse_fail(where, "\"default\" must be a boolean");
        }
        m.is_default = b->get();
    }
    m.default_n = optional_positive(t, "default_n", where).value_or(kDefaultSubstitutes);
    if (m.default_n > kMaxSubstitutes) {
        parse_fail(where, "\"default_n\" must be at most 50");
    }
    m.max_inflight = optional_positive(t, "max_inflight", where).value_or(m.max_inflight);
    if (auto lex = optional_string(t, "lexicon", where)) {
        m.lexicon_path = resolve(base, *lex);
    }
    if (auto cc = optional_string(t, "closed_class", where)) {
        m.closed_class_path = resolve(base, *cc);
    }

    const auto* provider = t.get_as<toml::table>("provider");
    if (provider == nullptr) {
        parse_fail(where, "missing [provider] table");
    }
    m.provider = parse_provider(*provider, where + ".provider");

    const auto* stores = t.get_as<toml::table>("stores");
    if (stores == nullptr || stores->empty()) {
        parse_fail(where, "missing [stores] table");
    }
    for (const auto& [key, node] : *stores) {
        LayerMode mode{};
        try {
            mode = parse_layer_mode(key.str());
        } catch (const Error&) {
            parse_fail(where + ".stores", "unknown layer mode \"" + std::string(key.str()) + "\"");
        }
        const auto* s = node.as_string();
        if (s == nullptr || s->get().empty()) {
            parse_fail(where + ".stores", "store path must be a non-empty string");
        }
        m.stores.emplace(mode, resolve(base, s->get()));
    }

    if (const auto* tiers = t.get_as<toml::table>("tiers")) {
        reject_unknown_keys(*tiers, {"high_max_rank", "mid_max_rank"}, where + ".tiers");
        m.tiers.high_max_rank =
            optional_positive(*tiers, "high_max_rank", where).value_or(m.tiers.high_max_rank);
        m.tiers.mid_max_rank =
            optional_positive(*tiers, "mid_max_rank", where).value_or(m.tiers.mid_max_rank);
        if (m.tiers.high_max_rank >= m.tiers.mid_max_rank) {
            parse_fail(where + ".tiers", "high_max_rank must be below mid_max_rank");
        }
    }
    return m;
}

}  // namespace

std::string_view to_string(ProviderKind kind) noexcept {
    switch (kind) {
        case ProviderKind::Reference: return "reference";
        case ProviderKind::BridgeStdio: return "bridge-stdio";
        case ProviderKind::BridgeHttp: return "bridge-http";
    }
    return "reference";
}

const ModelConfig& ServiceConfig::default_model() const {
    for (const auto& m : models) {
        if (m.is_default) {
            return m;
        }
    }
    throw Error(ErrorKind::NoDefaultModel, "no model is marked default");
}

ServiceConfig parse_config(std::string_view toml_text, const std::filesystem::path& base_dir) {
    toml::table root;
    try {
        root = toml::parse(toml_text);
    } catch (const toml::parse_error& e) {
        std::ostringstream msg;
        msg << e.description() << " at line " << e.source().begin.line;
        throw Error(ErrorKind::ParseError, msg.str());
    }
    reject_unknown_keys(root, {"service", "model"}, "config");

    ServiceConfig config;
    if (const auto* node = root.get("service")) {
        const auto* service = node->as_table();
        if (service == nullptr) {
            parse_fail("config", "[service] must be a table");
        }
        reject_unknown_keys(*service, {"cors_origin", "history_capacity"}, "service");
        config.cors_origin = optional_string(*service, "cors_origin", "service").value_or("*");
        config.history_capacity =
            optional_positive(*service, "history_capacity", "service").value_or(10);
    }

    const auto* models = root.get_as<toml::array>("model");
    if (models == nullptr || models->empty()) {
        parse_fail("config", "at least one [[model]] table is required");
    }
    std::set<std::string> ids;
    for (std::size_t i = 0; i < models->size(); ++i) {
        const auto* table = models->get(i)->as_table();
        if (table == nullptr) {
            parse_fail("config", "model entries must be tables");
        }
        auto model = parse_model(*table, i, base_dir);
        if (!ids.insert(model.model_id).second) {
            parse_fail("config", "duplicate model id \"" + model.model_id + "\"");
        }
        config.models.push_back(std::move(model));
    }

    std::size_t defaults = 0;
    for (const auto& m : config.models) {
        defaults += m.is_default ? 1 : 0;
    }
    if (defaults == 0) {
        throw Error(ErrorKind::NoDefaultModel, "exactly one model must set default = true");
    }
    if (defaults > 1) {
        throw Error(ErrorKind::MultipleDefaultModels,
                    std::to_string(defaults) + " models set default = true");
    }
    return config;
}

ServiceConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::ParseError, "cannot read config " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path.parent_path());
}

}  // namespace paradigm
