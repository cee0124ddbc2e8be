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

#include "paradigm/cli.hpp"

#include <pthread.h>
#include <signal.h>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <thread>

#include <CLI11.hpp>

#include "paradigm/config.hpp"
#include "paradigm/error.hpp"
#include "paradigm/lexicon.hpp"
#include "paradigm/service.hpp"
#include "paradigm/store_io.hpp"
#include "paradigm/substitute.hpp"
#include "paradigm/text.hpp"
#include "paradigm/typestore.hpp"

namespace paradigm::cli {

namespace {

namespace fs = std::filesystem;


struct BuildArgs {
    std::string input;
    std::string output;
    std::size_t dim = 0;
    std::string layer_mode = "top";
    std::size_t vocab_limit = 10000;
    std::string lexicon;
    std::string language = "en";
    std::string closed_class;
    std::string model_name;
};

struct QueryArgs {
    std::string store;
    std::string lexicon;
    std::string sentence;
    std::size_t n = kDefaultSubstitutes;
    std::string layer_mode = "top";
    std::string format = "plain";
    std::string language = "en";
    std::string closed_class;
    bool exclude_self = false;
};

struct InspectArgs {
    std::string store;
    std::string word;
};

struct ServeArgs {
    std::string config;
    std::string bind = "127.0.0.1:8642";
};

ClosedClassList closed_class_for(const std::string& path, const std::string& language) {
    return path.empty() ? ClosedClassList::builtin(language) : ClosedClassList::load(path);
}

int build_store(const BuildArgs& args, std::istream& in, std::ostream& err) {
    const ClosedClassList closed_class = closed_class_for(args.closed_class, args.language);
    std::optional<FrequencyLexicon> lexicon;
    if (!args.lexicon.empty()) {
        lexicon = load_freq_dict(args.lexicon);
    }

    Accumulator acc(args.dim, parse_layer_mode(args.layer_mode));
    std::ifstream file;
    std::istream* source = &in;
    if (args.input != "-") {
        file.open(args.input);
        if (!file) {
            throw Error(ErrorKind::Io, "cannot open " + args.input);
        }
        source = &file;
    }
    read_token_stream(*source, [&](TokenRecord&& record) {
        acc.add(text::fold_case(record.word), record.vector);
    });

    FinalizeOptions options;
    options.vocab_limit = args.vocab_limit;
    options.exclude = [&](std::string_view w) { return is_excluded_from_vocabulary(w, closed_class); };
    if (lexicon) {
        // Rank the vocabulary by the reference dictionary instead of the stream.
        options.frequency = [&](std::string_view w, std::uint64_t) -> std::uint64_t {
            const auto* e = lexicon->find(w);
            return e ? e->frequency : 0;
        };
    }
    options.metadata = {{"source", args.input},
                        {"language", args.language},
                        {"vocab_limit", std::to_string(args.vocab_limit)}};
    if (!args.lexicon.empty()) {
        options.metadata["lexicon"] = args.lexicon;
    }
    if (!args.model_name.empty()) {
        options.metadata["model"] = args.model_name;
    }

    auto [store, report] = finalize(acc, options);
    for (const auto& w : report.warnings) {
        err << "warning: " << w << "\n";
    }
    const auto bytes = save_store(store, args.output);
    err << "records read: " << acc.records() << "\n"
        << "word types: " << report.types_seen << "\n"
        << "kept: " << report.kept << "\n"
        << "dropped (excluded): " << report.excluded << "\n"
        << "dropped (zero norm): " << report.zero_norm << "\n"
        << "dropped (over vocab limit): " << report.over_limit << "\n"
        << "wrote " << bytes << " bytes to " << args.output << "\n";
    return kExitOk;
}

int query(const QueryArgs& args, std::ostream& out) {
    const auto store = load_store(args.store);
    const FrequencyLexicon lexicon =
        args.lexicon.empty() ? FrequencyLexicon::from_store(store) : load_freq_dict(args.lexicon);
    const ClosedClassList closed_class = closed_class_for(args.closed_class, args.language);
    const ReferenceEmbedder provider(store.dim());

    QuerySpec spec;
    spec.sentence = args.sentence;
    auto model = store.metadata().find("model");
    spec.model_id = model != store.metadata().end() ? model->second : fs::path(args.store).stem().string();
    spec.layer_mode = parse_layer_mode(args.layer_mode);
    spec.n = args.n;
    spec.exclude_self = args.exclude_self;

    const auto result = analyze(spec, {store, lexicon, provider, closed_class});
    if (args.format == "json") {
        out << to_json(result).dump() << "\n";
    } else {
        out << render_plain(result);
    }
    return kExitOk;
}

int inspect(const InspectArgs& args, std::ostream& out) {
    const auto bytes = read_file_bytes(args.store);
    const auto store = decode_store(bytes);
    std::ostringstream checksum;
    checksum << "0x" << std::hex << std::setw(16) << std::setfill('0') << stored_checksum(bytes);

    out << "file: " << args.store << "\n"
        << "version: " << kStoreVersion << "\n"
        << "dim: " << store.dim() << "\n"
        << "layer_mode: " << to_string(store.layer_mode()) << "\n"
        << "entries: " << store.size() << "\n"
        << "checksum: ok " << checksum.str() << "\n";
    for (const auto& [key, value] : store.metadata()) {
        out << "metadata." << key << ": " << value << "\n";
    }
    if (args.word.empty()) {
        return kExitOk;
    }
    const auto folded = text::fold_case(args.word);
    const auto index = store.find(folded);
    if (!index) {
        out << "word \"" << folded << "\": not found\n";
        return kExitOk;
    }
    out << "word: " << folded << "\n"
        << "rank: " << *index + 1 << "\n"
        << "frequency: " << store.frequency(*index) << "\n"
        << "vector[0:8]:";
    const auto v = store.vector(*index);
    for (std::size_t i = 0; i < std::min<std::size_t>(8, v.size()); ++i) {
        out << " " << std::setprecision(9) << v[i];
    }
    out << "\n";
    return kExitOk;
}

int serve(ServeArgs args, std::ostream& err) {
    if (const char* env = std::getenv("PARADIGM_CONFIG"); env != nullptr && *env != '\0') {
        args.config = env;
    }
    if (const char* env = std::getenv("PARADIGM_BIND"); env != nullptr && *env != '\0') {
        args.bind = env;
    }
    if (args.config.empty()) {
        err << "serve: --config or PARADIGM_CONFIG is required\n";
        return kExitUsage;
    }
    const auto [host, port] = parse_bind_address(args.bind);

    const auto config = load_config(args.config);
    auto service = Service::create(config);
    HttpServer server(*service);
    const int bound = server.bind(host, port);

    // Worker threads inherit this mask; only the waiter takes the signals.
    sigset_t signals;
    sigset_t previous;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, &previous);

    err << "paradigm: " << config.models.size() << " model(s) loaded, default \""
        << config.default_model().model_id << "\"; listening on " << host << ":" << bound << "\n";

    std::atomic<bool> signalled{false};
    std::thread waiter([&server, &signalled, signals] {
        int sig = 0;
        sigwait(&signals, &sig);
        signalled = true;
        server.stop();
    });
    server.listen();
    if (!signalled) {
        // The listener died on its own; wake the waiter so it can be joined.
        pthread_kill(waiter.native_handle(), SIGTERM);
    }
    waiter.join();
    pthread_sigmask(SIG_SETMASK, &previous, nullptr);
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"Lexical substitutes from contextualized embeddings", "paradigm"};
    app.require_subcommand(1);

    BuildArgs build;
    auto* build_cmd = app.add_subcommand("build-store", "Build a type-embedding store from a token stream");
    build_cmd->add_option("--input", build.input, "JSONL token-embedding stream, or - for stdin")->required();
    build_cmd->add_option("--output", build.output, "Destination .tvs file")->required();
    build_cmd->add_option("--dim", build.dim, "Vector dimension")->required()->check(CLI::PositiveNumber);
    build_cmd->add_option("--layer-mode", build.layer_mode, "top or average")
        ->check(CLI::IsMember({"top", "average"}));
    build_cmd->add_option("--vocab-limit", build.vocab_limit, "Keep this many most frequent words")
        ->check(CLI::PositiveNumber);
    build_cmd->add_option("--lexicon", build.lexicon, "Frequency dictionary used for ranking")
        ->check(CLI::ExistingFile);
    build_cmd->add_option("--language", build.language, "Language of the closed-class word list");
    build_cmd->add_option("--closed-class", build.closed_class, "word<TAB>UPOS list overriding the bundled one")
        ->check(CLI::ExistingFile);
    build_cmd->add_option("--model-name", build.model_name, "Recorded in the store metadata");

    QueryArgs q;
    auto* query_cmd = app.add_subcommand("query", "Print substitutes for a sentence");
    query_cmd->add_option("--store", q.store, "Type-embedding store")->required();
    query_cmd->add_option("--lexicon", q.lexicon, "Frequency dictionary (defaults to store counts)");
    query_cmd->add_option("--sentence", q.sentence, "Input sentence")->required();
    query_cmd->add_option("--n", q.n, "Substitutes per token")->check(CLI::Range(1, 50));
    query_cmd->add_option("--layer-mode", q.layer_mode, "top or average")
        ->check(CLI::IsMember({"top", "average"}));
    query_cmd->add_option("--format", q.format, "plain or json")->check(CLI::IsMember({"plain", "json"}));
    query_cmd->add_option("--language", q.language, "Language of the closed-class word list");
    query_cmd->add_option("--closed-class", q.closed_class, "word<TAB>UPOS list overriding the bundled one");
    query_cmd->add_flag("--exclude-self", q.exclude_self, "Drop the token itself from its substitutes");

    InspectArgs insp;
    auto* inspect_cmd = app.add_subcommand("inspect", "Print a store's header and, optionally, one word's entry");
    inspect_cmd->add_option("--store", insp.store, "Type-embedding store")->required();
    inspect_cmd->add_option("--word", insp.word, "Show this word's rank, frequency and vector");

    ServeArgs srv;
    auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP service");
    serve_cmd->add_option("--config", srv.config, "TOML configuration (PARADIGM_CONFIG overrides)");
    serve_cmd->add_option("--bind", srv.bind, "host:port (PARADIGM_BIND overrides)");

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (build_cmd->parsed()) {
            return build_store(build, in, err);
        }
        if (query_cmd->parsed()) {
            return query(q, out);
        }
        if (inspect_cmd->parsed()) {
            return inspect(insp, out);
        }
        return serve(srv, err);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
    }
    return kExitRuntime;
}

}  // namespace paradigm::cli
