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

#include <gtest/gtest.h>

#include <thread>

#include "paradigm/history.hpp"

using namespace paradigm;

namespace {

TwoDimensionalText entry(const std::string& sentence, long ms) {
    TwoDimensionalText t;
    t.query.sentence = sentence;
    t.timestamp = std::chrono::system_clock::time_point(std::chrono::milliseconds(ms));
    return t;
}

std::vector<std::string> sentences(const std::vector<TwoDimensionalText>& v) {
    std::vector<std::string> out;
    for (const auto& t : v) {
        out.push_back(t.query.sentence);
    }
    return out;
}

}  // namespace

TEST(QueryHistory, KeepsNewestFirstUpToCapacity) {
    QueryHistory h(3);
    for (int i = 0; i < 5; ++i) {
        h.push(entry("q" + std::to_string(i), 1000 + i));
    }
    EXPECT_EQ(h.size(), 3u);
    EXPECT_EQ(sentences(h.recent(10)), (std::vector<std::string>{"q4", "q3", "q2"}));
    EXPECT_EQ(sentences(h.recent(1)), (std::vector<std::string>{"q4"}));
    EXPECT_TRUE(h.recent(0).empty());
}

TEST(QueryHistory, OutOfOrderArrivalSortsByTimestamp) {
    QueryHistory h(3);
    h.push(entry("late", 30));
    h.push(entry("early", 10));
    h.push(entry("middle", 20));
    EXPECT_EQ(sentences(h.recent(3)), (std::vector<std::string>{"late", "middle", "early"}));
    // An entry older than everything retained is evicted at once.
    h.push(entry("ancient", 1));
    EXPECT_EQ(sentences(h.recent(3)), (std::vector<std::string>{"late", "middle", "early"}));
    // Equal timestamps: the later push counts as newer.
    h.push(entry("tie", 30));
    EXPECT_EQ(sentences(h.recent(3)), (std::vector<std::string>{"tie", "late", "middle"}));
}

TEST(QueryHistory, ConcurrentPushes) {
    QueryHistory h(10);
    std::vector<std::thread> threads;
    for (int t = 0; t < 8; ++t) {
        threads.emplace_back([&h, t] {
            for (int i = 0; i < 100; ++i) {
                h.push(entry("t", t * 1000 + i));
                (void)h.recent(5);
            }
        });
    }
    for (auto& th : threads) {
        th.join();
    }
    EXPECT_EQ(h.size(), 10u);
    const auto r = h.recent(10);
    for (std::size_t i = 1; i < r.size(); ++i) {
        EXPECT_GE(r[i - 1].timestamp, r[i].timestamp);
    }
    EXPECT_EQ(r.front().timestamp, std::chrono::system_clock::time_point(std::chrono::milliseconds(7099)));
}
