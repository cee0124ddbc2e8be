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

#include <span>
#include <vector>

namespace paradigm {

using Vector = std::vector<double>;

/// Norms below this are treated as zero.
inline constexpr double kMinNorm = 1e-12;

[[nodiscard]] double dot(std::span<const double> a, std::span<const double> b) noexcept;
[[nodiscard]] double euclidean_norm(std::span<const double> v) noexcept;

/// v / |v|. Throws Error(ZeroVector) when |v| < kMinNorm.
[[nodiscard]] Vector normalize(std::span<const double> v);

[[nodiscard]] bool all_finite(std::span<const double> v) noexcept;

}  // namespace paradigm
