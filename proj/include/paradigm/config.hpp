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
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "paradigm/layer_mode.hpp"
#include "paradigm/lexicon.hpp"

namespace paradigm {

enum class ProviderKind { Reference, BridgeStdio, BridgeHttp };

[[nodiscard]] std::string_view to_string(ProviderKind kind) noexcept;

struct ProviderConfig {
    ProviderKind kind = ProviderKind::Reference;
    std::string command;  // bridge-stdio
    std::string address;  // bridge-http
    std::size_t dim = 0;
    std::size_t timeout_ms = 30000;
};

struct ModelConfig {
    std::string model_id;
    std::string display_name;
    std::string language = "en";
    ProviderConfig provider;
    std::map<LayerMode, std::filesystem::path> stores;
    /// Without a dictionary, tiers come from the store's own frequencies.
    std::optional<std::filesystem::path> lexicon_path;
    std::optional<std::filesystem::path> closed_class_path;
    TierThresholds tiers;
    std::size_t default_n = 5;
    std::size_t max_inflight = 4;
    bool is_default = false;
};

struct ServiceConfig {
    std::vector<ModelConfig> models;
    std::string cors_origin = "*";
    std::size_t history_capacity = 10;

    [[nodiscard]] const ModelConfig& default_model() const;
};

/// Parses the TOML deployment file. Relative paths resolve against
/// base_dir. Checks the schema and the single-default rule; store and
/// lexicon files are opened later, when the service starts.
/// Throws ParseError, NoDefaultModel or MultipleDefaultModels.
[[nodiscard]] ServiceConfig parse_config(std::string_view toml_text,
                                         const std::filesystem::path& base_dir);

[[nodiscard]] ServiceConfig load_config(const std::filesystem::path& path);

}  // namespace paradigm
