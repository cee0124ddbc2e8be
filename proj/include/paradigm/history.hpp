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
#include <deque>
#include <shared_mutex>
#include <vector>

#include "paradigm/substitute.hpp"

namespace paradigm {

inline constexpr std::size_t kDefaultHistoryCapacity = 10;

/// Bounded record of analyses, newest first. Pushes are exclusive;
/// reads share the lock.
class QueryHistory {
public:
    explicit QueryHistory(std::size_t capacity = kDefaultHistoryCapacity);

    /// Inserts ahead of every entry with an older-or-equal timestamp, then
    /// evicts from the old end down to capacity.
    void push(TwoDimensionalText result);

    /// The min(limit, size) newest entries, newest first.
    [[nodiscard]] std::vector<TwoDimensionalText> recent(std::size_t limit) const;

    [[nodiscard]] std::size_t size() const;
    [[nodiscard]] std::size_t capacity() const noexcept { return capacity_; }

private:
    std::size_t capacity_;
    mutable std::shared_mutex mutex_;
    std::deque<TwoDimensionalText> entries_;
};

}  // namespace paradigm
