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

// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "oracles/reference_oracle.hpp"
#include "paradigm/cli.hpp"
#include "paradigm/error.hpp"
#include "paradigm/service.hpp"
#include "paradigm/store_io.hpp"
#include "support/fixture.hpp"

using namespace paradigm;
using nlohmann::json;
using Clock = std::chrono::steady_clock;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

Outcome fail(std::string why) { return {false, std::move(why)}; }

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(3);
    s << v;
    return s.str();
}

// normalize(sum) from the store against an oracle normalize(mean).
Outcome sum_normalize_equivalence() {
    std::mt19937_64 rng(1001);
    const auto start = Clock::now();
    double worst = 0;
    for (int a = 0; a < 1000; ++a) {
        Accumulator acc(32, LayerMode::Top);
        std::map<std::string, std::vector<Vector>> observed;
        const std::size_t words = 1 + rng() % 5;
        for (std::size_t w = 0; w < words; ++w) {
            const auto word = testsupport::synthetic_word(w);
            const std::size_t reps = 1 + rng() % 50;
            for (std::size_t r = 0; r < reps; ++r) {
                auto v = testsupport::random_vector(rng, 32);
                acc.add(word, v);
                observed[word].push_back(std::move(v));
            }
        }
        const auto store = finalize(acc, {}).store;
        for (const auto& [word, vectors] : observed) {
            std::vector<long double> mean(32, 0.0L);
            for (const auto& v : vectors) {
                for (std::size_t d = 0; d < 32; ++d) {
                    mean[d] += v[d];
                }
            }
            for (auto& x : mean) {
                x /= static_cast<long double>(vectors.size());
            }
            mean = oracle::unit(mean);
            const auto idx = store.find(word);
            if (!idx) {
                return fail("word missing from store");
            }
            for (std::size_t d = 0; d < 32; ++d) {
                worst = std::max(worst, std::abs(static_cast<double>(store.vector(*idx)[d] - mean[d])));
            }
        }
    }
    const double secs = seconds_since(start);
    const bool ok = worst <= 1e-6 && secs < 5.0;
    return {ok, "1000 accumulators, max deviation " + fmt(worst) + ", " + fmt(secs) + " s"};
}

Outcome topk_oracle_equivalence() {
    std::mt19937_64 rng(2002);
    const auto store = testsupport::random_store(rng, 1000, 32);
    std::vector<std::string> words;
    std::vector<std::vector<float>> vectors;
    for (std::size_t i = 0; i < store.size(); ++i) {
        words.push_back(store.word(i));
        vectors.emplace_back(store.vector(i).begin(), store.vector(i).end());
    }
    const auto start = Clock::now();
    double worst = 0;
    for (int q = 0; q < 100; ++q) {
        const auto query = testsupport::random_vector(rng, 32);
        const std::size_t k = q % 2 ? 10 : 1000;
        const auto got = store.topk(query, k);
        const auto want = oracle::exhaustive_topk(words, vectors, query, k);
        if (got.size() != want.size()) {
            return fail("result size differs on query " + std::to_string(q));
        }
        for (std::size_t i = 0; i < got.size(); ++i) {
            if (got[i].word != want[i].word) {
                return fail("order differs on query " + std::to_string(q) + " at position " + std::to_string(i));
            }
            worst = std::max(worst, std::abs(got[i].similarity - static_cast<double>(want[i].similarity)));
        }
    }
    const double secs = seconds_since(start);
    const bool ok = worst <= 1e-6 && secs < 10.0;
    return {ok, "100 queries x 1000 words, max similarity deviation " + fmt(worst) + ", " + fmt(secs) + " s"};
}

Outcome self_recovery() {
    std::vector<std::string> sentences;
    for (std::size_t i = 0; i < 50; ++i) {
        sentences.push_back(testsupport::synthetic_word(i * 7 + 3));
    }
    const auto store = testsupport::build_store_from(sentences, 32, LayerMode::Top);
    if (store.size() != 50) {
        return fail("store kept " + std::to_string(store.size()) + " of 50 words");
    }
    const auto lexicon = FrequencyLexicon::from_store(store);
    const ReferenceEmbedder provider(32);
    const auto closed = ClosedClassList::builtin("en");
    double lowest = 1.0;
    for (const auto& w : sentences) {
        QuerySpec q;
        q.sentence = w;
        q.n = 1;
        const auto r = analyze(q, {store, lexicon, provider, closed});
        const auto& top = r.tokens.at(0).substitutes.at(0);
        if (top.word != w) {
            return fail("\"" + w + "\" recovered \"" + top.word + "\"");
        }
        lowest = std::min(lowest, top.similarity);
    }
    return {lowest >= 1 - 1e-5, "50 words, lowest self-similarity " + std::to_string(lowest)};
}

Outcome context_sensitivity() {
    const std::vector<std::string> corpus{
        "river shore river", "money vault money", "cat dog bird",   "apple pear plum",
        "red green blue",    "chair table lamp",  "snow rain wind", "train car ship",
    };
    const auto store = testsupport::build_store_from(corpus, 32, LayerMode::Top);
    const auto lexicon = FrequencyLexicon::from_store(store);
    const ReferenceEmbedder provider(32);
    const auto closed = ClosedClassList::builtin("en");
    auto top1 = [&](const std::string& sentence) {
        QuerySpec q;
        q.sentence = sentence;
        q.n = 1;
        return analyze(q, {store, lexicon, provider, closed}).tokens.at(1).substitutes.at(0).word;
    };
    const auto a = top1("river bank river");
    const auto b = top1("money bank money");
    const std::set<std::string> water{"river", "shore"};
    const std::set<std::string> finance{"money", "vault"};
    const bool ok = a != b && water.count(a) && finance.count(b);
    return {ok, "\"bank\" -> \"" + a + "\" beside river, \"" + b + "\" beside money"};
}

Outcome functional_passthrough() {
    auto sentences = testsupport::corpus_sentences();
    sentences.resize(20);
    const auto store = testsupport::build_store_from(testsupport::corpus_sentences(), testsupport::kFixtureDim,
                                                     LayerMode::Top);
    const auto lexicon = FrequencyLexicon::from_store(store);
    const ReferenceEmbedder provider(testsupport::kFixtureDim);
    const auto closed = ClosedClassList::builtin("en");
    std::size_t functional = 0;
    for (const auto& s : sentences) {
        QuerySpec q;
        q.sentence = s;
        q.n = 5;
        for (const auto& t : analyze(q, {store, lexicon, provider, closed}).tokens) {
            if (!t.functional) {
                continue;
            }
            ++functional;
            if (t.substitutes.size() != 1 || t.substitutes[0].word != t.surface || t.substitutes[0].similarity != 1.0) {
                return fail("\"" + t.surface + "\" in \"" + s + "\" is not its own sole substitute");
            }
        }
    }
    return {functional > 0, "20 sentences, " + std::to_string(functional) + " functional tokens self-substituted"};
}

Outcome vocabulary_policy() {
    testsupport::TempDir dir;
    // Excluded types are given the highest counts so the cut has to skip them.
    const std::vector<std::string> functional{"the", "of", "and", "a", "to"};
    const std::vector<std::string> digits{"1990", "3d", "covid19"};
    const std::vector<std::string> content{"river", "meadow", "harbour", "lantern", "orchard", "glacier",
                                           "violin", "pepper", "saddle",  "timber",  "quarry",  "falcon",
                                           "marble", "thistle", "canyon", "biscuit", "walnut"};
    std::ostringstream stream;
    std::mt19937_64 rng(3003);
    auto emit = [&](const std::string& w, int times) {
        for (int i = 0; i < times; ++i) {
            json rec = {{"word", w}, {"vec", testsupport::random_vector(rng, 4)}};
            stream << rec.dump() << "\n";
        }
    };
    for (const auto& w : functional) emit(w, 60);
    for (const auto& w : digits) emit(w, 50);
    for (std::size_t i = 0; i < content.size(); ++i) emit(content[i], 40 - static_cast<int>(i));

    std::istringstream in(stream.str());
    std::ostringstream out;
    std::ostringstream err;
    const auto path = dir / "vocab.tvs";
    const int code = cli::run({"paradigm", "build-store", "--input", "-", "--output", path.string(), "--dim", "4",
                               "--vocab-limit", "10"},
                              in, out, err);
    if (code != 0) {
        return fail("build-store exited " + std::to_string(code) + ": " + err.str());
    }
    const auto store = load_store(path);
    if (store.size() != 10) {
        return fail("kept " + std::to_string(store.size()) + " types");
    }
    for (std::size_t i = 0; i < 10; ++i) {
        if (store.word(i) != content[i]) {
            return fail("rank " + std::to_string(i + 1) + " is \"" + store.word(i) + "\"");
        }
    }
    return {true, "25 types in, kept the 10 most frequent of the 17 eligible, in order"};
}

Outcome store_round_trip() {
    std::mt19937_64 rng(4004);
    testsupport::TempDir dir;
    for (int i = 0; i < 20; ++i) {
        const std::size_t n = i == 0 ? 1 : 1 + rng() % 200;
        const std::size_t dim = 1 + rng() % 64;
        Metadata meta;
        if (i % 2) {
            meta = {{"model", "m" + std::to_string(i)}, {"corpus", "synthetic"}};
        }
        const auto store = testsupport::random_store(rng, n, dim, i % 3 ? LayerMode::Top : LayerMode::Average, meta);
        const auto path = dir / ("s" + std::to_string(i) + ".tvs");
        save_store(store, path);
        const auto bytes = read_file_bytes(path);
        const auto loaded = load_store(path);
        if (!(loaded == store) || encode_store(loaded) != bytes) {
            return fail("store " + std::to_string(i) + " did not round-trip");
        }
    }
    const auto bytes = encode_store(testsupport::random_store(rng, 30, 8, LayerMode::Top, {{"k", "v"}}));
    std::set<std::size_t> positions;
    while (positions.size() < 100) {
        positions.insert(rng() % bytes.size());
    }
    for (auto pos : positions) {
        auto bad = bytes;
        bad[pos] ^= std::byte{static_cast<unsigned char>(1 + rng() % 255)};
        try {
            (void)decode_store(bad);
            return fail("mutation at byte " + std::to_string(pos) + " went unnoticed");
        } catch (const Error&) {
        }
    }
    return {true, "20 stores bit-exact, 100 of 100 byte mutations rejected"};
}

Outcome tier_boundaries() {
    std::vector<std::pair<std::string, std::uint64_t>> counts;
    for (std::size_t r = 1; r <= 20001; ++r) {
        counts.emplace_back("r" + std::to_string(r), 30000 - r);
    }
    const auto lex = FrequencyLexicon::from_counts(counts);
    const std::vector<std::pair<std::string, Tier>> cases{
        {"r1", Tier::High},    {"r3000", Tier::High}, {"r3001", Tier::Mid},
        {"r20000", Tier::Mid}, {"r20001", Tier::Low}, {"absent", Tier::Low}};
    for (const auto& [word, tier] : cases) {
        if (lex.tier(word) != tier) {
            return fail(word + " is " + std::string(to_string(lex.tier(word))));
        }
    }
    return {true, "ranks 1, 3000, 3001, 20000, 20001, absent -> high, high, mid, mid, low, low"};
}

struct RunningServer {
    explicit RunningServer(const fs::path& config)
        : service(Service::create(load_config(config))), server(*service) {
        port = server.bind("127.0.0.1", 0);
        server.start();
    }
    ~RunningServer() { server.stop(); }
    std::unique_ptr<Service> service;
    HttpServer server;
    int port = 0;
};

Outcome http_end_to_end() {
    testsupport::TempDir dir;
    RunningServer running(testsupport::write_service_fixture(dir));
    httplib::Client client("127.0.0.1", running.port);
    const std::string body = R"({"sentence":"The old man told a story."})";

    const auto start = Clock::now();
    auto res = client.Post("/api/v1/substitutes", body, "application/json");
    const double ms = seconds_since(start) * 1000;
    if (!res || res->status != 200) {
        return fail("POST failed");
    }
    const auto j = json::parse(res->body);
    if (j["tokens"].size() != 7) {
        return fail("expected 7 tokens, got " + std::to_string(j["tokens"].size()));
    }
    for (const auto& t : j["tokens"]) {
        if (t["functional"]) {
            continue;
        }
        const auto& subs = t["substitutes"];
        if (subs.size() != 5) {
            return fail("content token with " + std::to_string(subs.size()) + " substitutes");
        }
        for (std::size_t i = 0; i < subs.size(); ++i) {
            const double s = subs[i]["similarity"];
            if (s < -1 || s > 1 || (i > 0 && subs[i - 1]["similarity"].get<double>() < s)) {
                return fail("similarities out of range or order");
            }
        }
    }

    std::vector<std::string> bodies(50);
    std::vector<std::thread> threads;
    for (std::size_t i = 0; i < bodies.size(); ++i) {
        threads.emplace_back([&, i] {
            httplib::Client c("127.0.0.1", running.port);
            auto r = c.Post("/api/v1/substitutes", body, "application/json");
            if (!r) {
                bodies[i] = "transport error: " + httplib::to_string(r.error());
            } else if (r->status != 200) {
                bodies[i] = "HTTP " + std::to_string(r->status) + ": " + r->body;
            } else {
                auto parsed = json::parse(r->body);
                parsed.erase("timestamp");
                bodies[i] = parsed.dump();
            }
        });
    }
    for (auto& t : threads) {
        t.join();
    }
    auto expected = j;
    expected.erase("timestamp");
    for (const auto& b : bodies) {
        if (b != expected.dump()) {
            return fail("concurrent responses differ (" + b.substr(0, 120) + ")");
        }
    }
    return {ms < 100, "7 tokens answered in " + fmt(ms) + " ms, 50 concurrent responses identical"};
}

Outcome history_window() {
    testsupport::TempDir dir;
    RunningServer running(testsupport::write_service_fixture(dir, 10));
    httplib::Client client("127.0.0.1", running.port);
    for (int i = 0; i < 12; ++i) {
        auto r = client.Post("/api/v1/substitutes", json{{"sentence", "query " + std::to_string(i)}}.dump(),
                             "application/json");
        if (!r || r->status != 200) {
            return fail("query " + std::to_string(i) + " failed");
        }
    }
    auto r = client.Get("/api/v1/history");
    if (!r || r->status != 200) {
        return fail("GET /history failed");
    }
    const auto h = json::parse(r->body)["history"];
    if (h.size() != 10) {
        return fail("history holds " + std::to_string(h.size()));
    }
    for (int i = 0; i < 10; ++i) {
        if (h[i]["sentence"] != "query " + std::to_string(11 - i)) {
            return fail("entry " + std::to_string(i) + " is " + h[i]["sentence"].dump());
        }
    }
    return {true, "12 queries, capacity 10, newest 10 returned newest first"};
}

std::string capture(const std::string& command, int& status) {
    std::string out;
    FILE* pipe = popen(command.c_str(), "r");
    if (pipe == nullptr) {
        status = -1;
        return out;
    }
    char buf[4096];
    std::size_t n = 0;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) {
        out.append(buf, n);
    }
    status = pclose(pipe);
    return out;
}

Outcome cli_goldens() {
    testsupport::TempDir dir;
    const std::string cli = PARADIGM_CLI;
    const auto store = dir / "fixture.tvs";
    int status = 0;
    capture(cli + " build-store --input " + (testsupport::data_dir() / "corpus_top16.jsonl").string() +
                " --output " + store.string() + " --dim 16 --model-name fixture 2>/dev/null",
            status);
    if (status != 0) {
        return fail("build-store failed");
    }
    const std::vector<std::string> sentences{
        "The old fisherman walked along the river bank.",
        "She deposited her savings at the bank.",
        "A cat slept in the garden.",
    };
    for (std::size_t i = 0; i < sentences.size(); ++i) {
        const auto got = capture(cli + " query --store " + store.string() + " --sentence '" + sentences[i] + "'", status);
        const auto golden_path = testsupport::data_dir() / "golden" / ("query_" + std::to_string(i + 1) + ".txt");
        if (!fs::exists(golden_path)) {
            return fail("missing golden " + golden_path.string());
        }
        if (status != 0 || got != testsupport::read_text(golden_path)) {
            return fail("output for sentence " + std::to_string(i + 1) + " differs from its golden");
        }
    }
    return {true, "3 sentences byte-identical to goldens"};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"sum/normalize equivalence", sum_normalize_equivalence},
        {"top-k oracle equivalence", topk_oracle_equivalence},
        {"self-recovery", self_recovery},
        {"context sensitivity", context_sensitivity},
        {"functional passthrough", functional_passthrough},
        {"vocabulary policy", vocabulary_policy},
        {"store round-trip", store_round_trip},
        {"tier boundaries", tier_boundaries},
        {"end-to-end HTTP", http_end_to_end},
        {"history", history_window},
        {"CLI golden files", cli_goldens},
    };
    int failures = 0;
    for (const auto& [name, check] : criteria) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = fail(std::string("exception: ") + e.what());
        }
        failures += o.pass ? 0 : 1;
        std::cout << (o.pass ? "PASS  " : "FAIL  ") << name << ": " << o.detail << std::endl;
    }
    std::cout << (criteria.size() - failures) << "/" << criteria.size() << " acceptance criteria passed"
              << std::endl;
    return failures == 0 ? 0 : 1;
}
