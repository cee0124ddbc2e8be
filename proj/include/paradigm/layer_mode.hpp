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
#include <string_view>

namespace paradigm {

/// Which model layers supply token vectors: the top layer, or the
/// unweighted mean of all layers.
enum class LayerMode : std::uint8_t { Top = 0, Average = 1 };

/// Accepts exactly "top" or "average"; throws Error(UnknownLayerMode).
[[nodiscard]] LayerMode parse_layer_mode(std::string_view label);
[[nodiscard]] std::string_view to_string(LayerMode mode) noexcept;

}  // namespace paradigm
