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

#include "paradigm/history.hpp"

#include <algorithm>
#include <mutex>

#include "paradigm/error.hpp"

namespace paradigm {

QueryHistory::QueryHistory(std::size_t capacity) : capacity_(capacity) {
    if (capacity_ == 0) {
        throw Error(ErrorKind::InvalidArgument, "history capacity must be positive");
    }
}

void QueryHistory::push(TwoDimensionalText result) {
    std::unique_lock lock(mutex_);
    auto pos = std::find_if(entries_.begin(), entries_.end(), [&](const TwoDimensionalText& e) {
        return e.timestamp <= result.timestamp;
    });
    entries_.insert(pos, std::move(result));
    while (entries_.size() > capacity_) {
        entries_.pop_back();
    }
}

std::vector<TwoDimensionalText> QueryHistory::recent(std::size_t limit) const {
    std::shared_lock lock(mutex_);
    const auto take = std::min(limit, entries_.size());
    return {entries_.begin(), entries_.begin() + static_cast<std::ptrdiff_t>(take)};
}

std::size_t QueryHistory::size() const {
    std::shared_lock lock(mutex_);
    return entries_.size();
}

}  // namespace paradigm
