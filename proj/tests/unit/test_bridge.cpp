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

#include <httplib.h>

#include "paradigm/bridge.hpp"
#include "paradigm/error.hpp"
#include "paradigm/protocol.hpp"

using namespace paradigm;
using namespace std::chrono_literals;

namespace {

const std::string kFakeBridge = PARADIGM_FAKE_BRIDGE;

ErrorKind kind_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorKind::InvalidArgument;
}

BridgeOptions fast_options() {
    BridgeOptions o;
    o.request_timeout = 5000ms;
    o.backoff.base = 200ms;
    o.backoff.cap = 1000ms;
    return o;
}

}  // namespace

TEST(Backoff, DoublesUpToCap) {
    const BackoffPolicy policy;
    const long expected[] = {0, 1000, 2000, 4000, 8000, 16000, 30000, 30000, 30000};
    for (unsigned f = 0; f < std::size(expected); ++f) {
        EXPECT_EQ(policy.delay(f).count(), expected[f]) << f;
    }
    EXPECT_EQ(policy.delay(200).count(), 30000);
}

TEST(ChildProcess, EchoesLines) {
    ChildProcess child("cat");
    EXPECT_GT(child.pid(), 0);
    ASSERT_TRUE(child.write_line("hello"));
    ASSERT_TRUE(child.write_line("wörld"));
    EXPECT_EQ(child.read_line(2000ms), "hello");
    EXPECT_EQ(child.read_line(2000ms), "wörld");
}

TEST(ChildProcess, ReadTimesOut) {
    ChildProcess child("sleep 5");
    const auto start = std::chrono::steady_clock::now();
    EXPECT_FALSE(child.read_line(100ms).has_value());
    EXPECT_LT(std::chrono::steady_clock::now() - start, 2s);
}

TEST(ChildProcess, EofAfterExit) {
    ChildProcess child("echo done");
    EXPECT_EQ(child.read_line(2000ms), "done");
    EXPECT_FALSE(child.read_line(2000ms).has_value());
}

TEST(StdioBridge, MatchesInProcessEmbedder) {
    const StdioBridgeProvider bridge(kFakeBridge + " --dim 16", 16, fast_options());
    const ReferenceEmbedder reference(16);
    for (LayerMode mode : {LayerMode::Top, LayerMode::Average}) {
        const EmbeddingRequest req{{"The", "river", "bank", "."}, mode};
        const auto got = bridge.embed_tokens(req);
        const auto want = reference.embed_tokens(req);
        EXPECT_EQ(got.dim, 16u);
        EXPECT_EQ(got.vectors, want.vectors);
    }
}

TEST(StdioBridge, PassesPosTagsThrough) {
    const StdioBridgeProvider bridge(kFakeBridge + " --dim 8 --pos", 8, fast_options());
    const auto got = bridge.embed_tokens({{"the", "cat", "sat", "."}, LayerMode::Top});
    ASSERT_TRUE(got.pos_tags.has_value());
    EXPECT_EQ(*got.pos_tags, (std::vector<PosTag>{PosTag::DET, PosTag::NOUN, PosTag::NOUN, PosTag::PUNCT}));
}

TEST(StdioBridge, SkipsStaleReplies) {
    const StdioBridgeProvider bridge(kFakeBridge + " --dim 8 --stale-first", 8, fast_options());
    for (int i = 0; i < 3; ++i) {
        EXPECT_EQ(bridge.embed_tokens({{"word"}, LayerMode::Top}).vectors.size(), 1u);
    }
}

TEST(StdioBridge, SerializesConcurrentCallers) {
    const StdioBridgeProvider bridge(kFakeBridge + " --dim 8", 8, fast_options());
    const ReferenceEmbedder reference(8);
    std::vector<std::thread> threads;
    std::atomic<int> mismatches{0};
    for (int t = 0; t < 8; ++t) {
        threads.emplace_back([&, t] {
            for (int i = 0; i < 10; ++i) {
                const EmbeddingRequest req{{"tok" + std::to_string(t), "x" + std::to_string(i)}, LayerMode::Top};
                if (bridge.embed_tokens(req).vectors != reference.embed_tokens(req).vectors) {
                    ++mismatches;
                }
            }
        });
    }
    for (auto& th : threads) {
        th.join();
    }
    EXPECT_EQ(mismatches.load(), 0);
}

TEST(StdioBridge, StartupFailuresAreUnavailable) {
    EXPECT_EQ(kind_of([] { StdioBridgeProvider("/nonexistent/bridge-binary", 8, fast_options()); }),
              ErrorKind::ProviderUnavailable);
    EXPECT_EQ(kind_of([] { StdioBridgeProvider(kFakeBridge + " --garbage", 8, fast_options()); }),
              ErrorKind::ProviderUnavailable);
    // The probe reply has the wrong dimension.
    EXPECT_EQ(kind_of([] { StdioBridgeProvider(kFakeBridge + " --dim 4", 8, fast_options()); }),
              ErrorKind::ProviderUnavailable);
    auto slow = fast_options();
    slow.request_timeout = 200ms;
    EXPECT_EQ(kind_of([&] { StdioBridgeProvider("sleep 5", 8, slow); }), ErrorKind::ProviderUnavailable);
}

TEST(StdioBridge, RestartsAfterCrashWithBackoff) {
    // The probe and one request succeed, then the child exits.
    const StdioBridgeProvider bridge(kFakeBridge + " --dim 8 --crash-after 2", 8, fast_options());
    const EmbeddingRequest req{{"alpha"}, LayerMode::Top};
    EXPECT_NO_THROW((void)bridge.embed_tokens(req));
    EXPECT_EQ(kind_of([&] { (void)bridge.embed_tokens(req); }), ErrorKind::ProviderUnavailable);
    EXPECT_EQ(bridge.failures(), 1u);
    // Still inside the 200 ms backoff window.
    EXPECT_EQ(kind_of([&] { (void)bridge.embed_tokens(req); }), ErrorKind::ProviderUnavailable);
    std::this_thread::sleep_for(300ms);
    EXPECT_NO_THROW((void)bridge.embed_tokens(req));
    EXPECT_EQ(bridge.failures(), 0u);
}

TEST(StdioBridge, BridgeErrorLineIsUnavailable) {
    const StdioBridgeProvider bridge(kFakeBridge + " --dim 8", 8, fast_options());
    EXPECT_EQ(kind_of([&] { (void)bridge.embed_tokens({{"__fail__"}, LayerMode::Top}); }),
              ErrorKind::ProviderUnavailable);
    // An error line is not a transport failure; the same child keeps serving.
    EXPECT_EQ(bridge.failures(), 0u);
    EXPECT_NO_THROW((void)bridge.embed_tokens({{"fine"}, LayerMode::Top}));
}

TEST(StdioBridge, InvalidRequestsNeverReachTheChild) {
    const StdioBridgeProvider bridge(kFakeBridge + " --dim 8", 8, fast_options());
    EXPECT_EQ(kind_of([&] { (void)bridge.embed_tokens({{}, LayerMode::Top}); }), ErrorKind::EmptyTokenList);
}

class HttpBridgeTest : public ::testing::Test {
protected:
    void SetUp() override {
        server_.Post("/embed", [this](const httplib::Request& req, httplib::Response& res) {
            const auto request = protocol::decode_request(req.body.substr(0, req.body.find('\n')));
            std::int64_t id = wrong_id_ ? request.id + 1 : request.id;
            if (refuse_) {
                res.set_content(protocol::encode_error(id, "out of memory") + "\n", "application/x-ndjson");
                return;
            }
            res.set_content(protocol::encode_reply(id, embedder_.embed_tokens(request.embed)) + "\n",
                            "application/x-ndjson");
        });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    void TearDown() override {
        server_.stop();
        thread_.join();
    }
    std::string url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/embed"; }

    httplib::Server server_;
    std::thread thread_;
    int port_ = 0;
    ReferenceEmbedder embedder_{12};
    std::atomic<bool> wrong_id_{false};
    std::atomic<bool> refuse_{false};
};

TEST_F(HttpBridgeTest, RoundTrip) {
    const HttpBridgeProvider bridge(url(), 12);
    const EmbeddingRequest req{{"money", "bank"}, LayerMode::Average};
    EXPECT_EQ(bridge.embed_tokens(req).vectors, embedder_.embed_tokens(req).vectors);
}

TEST_F(HttpBridgeTest, IdMismatchIsProtocolError) {
    wrong_id_ = true;
    const HttpBridgeProvider bridge(url(), 12);
    EXPECT_EQ(kind_of([&] { (void)bridge.embed_tokens({{"a"}, LayerMode::Top}); }), ErrorKind::ProviderProtocol);
}

TEST_F(HttpBridgeTest, ErrorLineIsUnavailable) {
    refuse_ = true;
    const HttpBridgeProvider bridge(url(), 12);
    EXPECT_EQ(kind_of([&] { (void)bridge.embed_tokens({{"a"}, LayerMode::Top}); }),
              ErrorKind::ProviderUnavailable);
}

TEST_F(HttpBridgeTest, DimensionMismatchIsProtocolError) {
    const HttpBridgeProvider bridge(url(), 13);
    EXPECT_EQ(kind_of([&] { (void)bridge.embed_tokens({{"a"}, LayerMode::Top}); }), ErrorKind::ProviderProtocol);
}

TEST(HttpBridge, UnreachableAndBadUrl) {
    BridgeOptions o;
    o.request_timeout = 1000ms;
    // Port 1 on loopback refuses connections.
    const HttpBridgeProvider bridge("http://127.0.0.1:1/embed", 4, o);
    EXPECT_EQ(kind_of([&] { (void)bridge.embed_tokens({{"a"}, LayerMode::Top}); }),
              ErrorKind::ProviderUnavailable);
    EXPECT_EQ(kind_of([] { HttpBridgeProvider("ftp://host/x", 4); }), ErrorKind::InvalidArgument);
    EXPECT_EQ(kind_of([] { HttpBridgeProvider("localhost:8000", 4); }), ErrorKind::InvalidArgument);
}
