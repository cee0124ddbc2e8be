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

#include "paradigm/vector_ops.hpp"

#include <cmath>
#include <numeric>

#include "paradigm/error.hpp"
#include "paradigm/layer_mode.hpp"

namespace paradigm {

double dot(std::span<const double> a, std::span<const double> b) noexcept {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double euclidean_norm(std::span<const double> v) noexcept {
    return std::sqrt(dot(v, v));
}

Vector normalize(std::span<const double> v) {
    const double n = euclidean_norm(v);
    if (!(n >= kMinNorm)) {
        throw Error(ErrorKind::ZeroVector, "cannot normalize a vector with norm below 1e-12");
    }
    Vector out(v.begin(), v.end());
    for (auto& x : out) {
        x /= n;
    }
    return out;
}

bool all_finite(std::span<const double> v) noexcept {
    for (double x : v) {
        if (!std::isfinite(x)) {
            return false;
        }
    }
    return true;
}

LayerMode parse_layer_mode(std::string_view label) {
    if (label == "top") {
        return LayerMode::Top;
    }
    if (label == "average") {
        return LayerMode::Average;
    }
    throw Error(ErrorKind::UnknownLayerMode, "expected \"top\" or \"average\", got \"" +
                                                 std::string(label) + "\"");
}

std::string_view to_string(LayerMode mode) noexcept {
    return mode == LayerMode::Top ? "top" : "average";
}

}  // namespace paradigm
