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

#include <fstream>
#include <string>
#include <vector>

#include "paradigm/embedding.hpp"
#include "paradigm/lexicon.hpp"
#include "paradigm/store_io.hpp"
#include "paradigm/substitute.hpp"
#include "paradigm/text.hpp"
#include "paradigm/typestore.hpp"
#include "support/test_support.hpp"

namespace testsupport {

inline fs::path data_dir() { return PARADIGM_TEST_DATA; }

/// Non-comment lines of the fixture corpus.
inline std::vector<std::string> corpus_sentences() {
    std::ifstream in(data_dir() / "corpus.txt");
    std::vector<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] != '#') {
            out.push_back(line);
        }
    }
    return out;
}

/// Type store over the given sentences, built the same way as
/// `paradigm build-store` with the bundled English closed-class list.
inline paradigm::TypeEmbeddingStore build_store_from(const std::vector<std::string>& sentences, std::size_t dim,
                                                     paradigm::LayerMode mode, std::size_t vocab_limit = 10000,
                                                     paradigm::Metadata metadata = {}) {
    const paradigm::ReferenceEmbedder embedder(dim);
    const auto closed = paradigm::ClosedClassList::builtin("en");
    paradigm::Accumulator acc(dim, mode);
    for (const auto& s : sentences) {
        const auto tokens = paradigm::tokenize(s);
        const auto response = embedder.embed_tokens({tokens, mode});
        for (std::size_t i = 0; i < tokens.size(); ++i) {
            acc.add(paradigm::text::fold_case(tokens[i]), response.vectors[i]);
        }
    }
    paradigm::FinalizeOptions opts;
    opts.vocab_limit = vocab_limit;
    opts.exclude = [&closed](std::string_view w) { return paradigm::is_excluded_from_vocabulary(w, closed); };
    opts.metadata = std::move(metadata);
    return paradigm::finalize(acc, opts).store;
}

inline constexpr std::size_t kFixtureDim = 16;

/// Writes top and average corpus stores plus a two-model config into dir.
/// The default model "fixture" has both stores; "fixture-top" only one.
inline fs::path write_service_fixture(const TempDir& dir, std::size_t history_capacity = 10) {
    const auto sentences = corpus_sentences();
    paradigm::save_store(build_store_from(sentences, kFixtureDim, paradigm::LayerMode::Top, 10000,
                                          {{"model", "fixture"}, {"corpus", "corpus.txt"}}),
                         dir / "top.tvs");
    paradigm::save_store(build_store_from(sentences, kFixtureDim, paradigm::LayerMode::Average),
                         dir / "average.tvs");
    write_text(dir / "paradigm.toml",
               "[service]\nhistory_capacity = " + std::to_string(history_capacity) +
                   "\n"
                   "[[model]]\nid = \"fixture\"\ndisplay_name = \"Fixture English\"\ndefault = true\n"
                   "[model.provider]\nkind = \"reference\"\ndim = 16\n"
                   "[model.stores]\ntop = \"top.tvs\"\naverage = \"average.tvs\"\n"
                   "[[model]]\nid = \"fixture-top\"\ndefault_n = 3\n"
                   "[model.provider]\nkind = \"reference\"\ndim = 16\n"
                   "[model.stores]\ntop = \"top.tvs\"\n");
    return dir / "paradigm.toml";
}

}  // namespace testsupport
