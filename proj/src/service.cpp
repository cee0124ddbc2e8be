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

#include "paradigm/service.hpp"

#include <algorithm>
#include <charconv>
#include <iostream>

#include <httplib.h>

#include "paradigm/bridge.hpp"
#include "paradigm/error.hpp"
#include "paradigm/store_io.hpp"
#include "paradigm/substitute.hpp"
#include "paradigm/text.hpp"

namespace paradigm {

namespace {

using nlohmann::json;

constexpr std::size_t kDefaultNeighbors = 10;
constexpr std::size_t kMaxNeighbors = 100;
constexpr std::size_t kDefaultHistoryLimit = 10;

HttpResponse error_response(int status, std::string_view kind, std::string_view message) {
    return {status, json{{"error", std::string(kind)}, {"message", std::string(message)}}};
}

HttpResponse error_response(const Error& e) {
    return error_response(http_status_for(e.kind()), to_string(e.kind()), e.what());
}

/// Parses a positive integer query parameter; nullopt if absent.
std::optional<std::size_t> positive_param(const std::optional<std::string>& raw, std::string_view name) {
    if (!raw) {
        return std::nullopt;
    }
    std::size_t value = 0;
    const auto* first = raw->data();
    const auto* last = raw->data() + raw->size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (raw->empty() || ec != std::errc() || ptr != last || value == 0) {
        throw Error(ErrorKind::InvalidArgument,
                    std::string(name) + " must be a positive integer");
    }
    return value;
}

}  // namespace

ThrottledProvider::ThrottledProvider(std::unique_ptr<EmbeddingProvider> inner, std::size_t limit)
    : inner_(std::move(inner)), slots_(static_cast<std::ptrdiff_t>(std::clamp<std::size_t>(limit, 1, 1024))) {}

EmbeddingResponse ThrottledProvider::embed_tokens(const EmbeddingRequest& request) const {
    slots_.acquire();
    struct Release {
        std::counting_semaphore<1024>& s;
        ~Release() { s.release(); }
    } release{slots_};
    return inner_->embed_tokens(request);
}

std::unique_ptr<EmbeddingProvider> make_provider(const ProviderConfig& config) {
    BridgeOptions options;
    options.request_timeout = std::chrono::milliseconds(config.timeout_ms);
    switch (config.kind) {
        case ProviderKind::Reference:
            return std::make_unique<ReferenceEmbedder>(config.dim);
        case ProviderKind::BridgeStdio:
            return std::make_unique<StdioBridgeProvider>(config.command, config.dim, options);
        case ProviderKind::BridgeHttp:
            return std::make_unique<HttpBridgeProvider>(config.address, config.dim, options);
    }
    throw Error(ErrorKind::InvalidArgument, "unknown provider kind");
}

LoadedModel load_model(const ModelConfig& config) {
    LoadedModel model;
    model.config = config;
    for (const auto& [mode, path] : config.stores) {
        try {
            auto store = load_store(path);
            if (store.layer_mode() != mode) {
                throw Error(ErrorKind::LayerModeMismatch,
                            "file holds a " + std::string(to_string(store.layer_mode())) + " store");
            }
            model.stores.emplace(mode, std::move(store));
        } catch (const Error& e) {
            throw Error(ErrorKind::StoreLoadError, "model \"" + config.model_id + "\" " +
                                                       std::string(to_string(mode)) + " store " +
                                                       path.string() + ": " + e.what());
        }
        const auto& store = model.stores.at(mode);
        if (store.dim() != config.provider.dim) {
            throw Error(ErrorKind::DimensionMismatch,
                        "model \"" + config.model_id + "\": store " + path.string() + " has dim " +
                            std::to_string(store.dim()) + " but the provider has dim " +
                            std::to_string(config.provider.dim));
        }
    }

    try {
        if (config.lexicon_path) {
            model.lexicon = load_freq_dict(*config.lexicon_path, config.tiers);
        } else {
            model.lexicon = FrequencyLexicon::from_store(model.stores.begin()->second, config.tiers);
        }
    } catch (const Error& e) {
        throw Error(ErrorKind::LexiconLoadError,
                    "model \"" + config.model_id + "\": " + std::string(e.what()));
    }

    try {
        model.closed_class = config.closed_class_path ? ClosedClassList::load(*config.closed_class_path)
                                                      : ClosedClassList::builtin(config.language);
    } catch (const Error& e) {
        throw Error(ErrorKind::LexiconLoadError,
                    "model \"" + config.model_id + "\" closed-class list: " + std::string(e.what()));
    }

    model.provider = std::make_unique<ThrottledProvider>(make_provider(config.provider),
                                                         config.max_inflight);
    return model;
}

int http_status_for(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::EmptyTokenList:
        case ErrorKind::EmptyToken:
        case ErrorKind::TokenTooLong:
        case ErrorKind::TooManyTokens:
        case ErrorKind::InvalidToken:
        case ErrorKind::EmptySentence:
        case ErrorKind::UnknownLayerMode:
        case ErrorKind::InvalidArgument:
        case ErrorKind::NotUtf8:
        case ErrorKind::ParseError:
            return 400;
        case ErrorKind::UnknownModel:
            return 404;
        case ErrorKind::LayerModeMismatch:
            return 422;
        case ErrorKind::ProviderUnavailable:
        case ErrorKind::ProviderProtocol:
            return 502;
        default:
            return 500;
    }
}

std::unique_ptr<Service> Service::create(const ServiceConfig& config) {
    std::vector<LoadedModel> models;
    models.reserve(config.models.size());
    for (const auto& m : config.models) {
        models.push_back(load_model(m));
    }
    return std::make_unique<Service>(config, std::move(models));
}

Service::Service(ServiceConfig config, std::vector<LoadedModel> models)
    : config_(std::move(config)), models_(std::move(models)), history_(config_.history_capacity) {
    std::size_t defaults = 0;
    for (std::size_t i = 0; i < models_.size(); ++i) {
        if (models_[i].config.is_default) {
            default_index_ = i;
            ++defaults;
        }
    }
    if (defaults == 0) {
        throw Error(ErrorKind::NoDefaultModel, "exactly one model must be the default");
    }
    if (defaults > 1) {
        throw Error(ErrorKind::MultipleDefaultModels, "exactly one model must be the default");
    }
}

const LoadedModel& Service::resolve_model(const std::optional<std::string>& id) const {
    if (!id) {
        return models_[default_index_];
    }
    for (const auto& m : models_) {
        if (m.config.model_id == *id) {
            return m;
        }
    }
    throw Error(ErrorKind::UnknownModel, "no model named \"" + *id + "\"");
}

HttpResponse Service::handle_substitutes(std::string_view body) {
    try {
        const auto j = json::parse(body, nullptr, /*allow_exceptions=*/false);
        if (j.is_discarded() || !j.is_object()) {
            throw Error(ErrorKind::ParseError, "body must be a JSON object");
        }
        auto sentence = j.find("sentence");
        if (sentence == j.end() || !sentence->is_string()) {
            throw Error(ErrorKind::ParseError, "\"sentence\" must be a string");
        }
        const auto& text = sentence->get_ref<const std::string&>();
        if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
            throw Error(ErrorKind::EmptySentence, "sentence is empty");
        }

        std::optional<std::string> model_id;
        if (auto m = j.find("model"); m != j.end() && !m->is_null()) {
            if (!m->is_string()) {
                throw Error(ErrorKind::ParseError, "\"model\" must be a string");
            }
            model_id = m->get<std::string>();
        }
        LayerMode mode = LayerMode::Top;
        if (auto lm = j.find("layer_mode"); lm != j.end() && !lm->is_null()) {
            if (!lm->is_string()) {
                throw Error(ErrorKind::UnknownLayerMode, "\"layer_mode\" must be a string");
            }
            mode = parse_layer_mode(lm->get<std::string>());
        }
        std::optional<std::int64_t> n;
        if (auto nn = j.find("n"); nn != j.end() && !nn->is_null()) {
            if (!nn->is_number_integer()) {
                throw Error(ErrorKind::InvalidArgument, "\"n\" must be an integer");
            }
            n = nn->get<std::int64_t>();
            if (*n < 1 || *n > static_cast<std::int64_t>(kMaxSubstitutes)) {
                throw Error(ErrorKind::InvalidArgument, "\"n\" must be between 1 and 50");
            }
        }
        bool exclude_self = false;
        if (auto ex = j.find("exclude_self"); ex != j.end() && !ex->is_null()) {
            if (!ex->is_boolean()) {
                throw Error(ErrorKind::ParseError, "\"exclude_self\" must be a boolean");
            }
            exclude_self = ex->get<bool>();
        }

        const auto& model = resolve_model(model_id);
        auto store = model.stores.find(mode);
        if (store == model.stores.end()) {
            throw Error(ErrorKind::LayerModeMismatch, "model \"" + model.config.model_id +
                                                          "\" has no " +
                                                          std::string(to_string(mode)) + " store");
        }
        QuerySpec query;
        query.sentence = text;
        query.model_id = model.config.model_id;
        query.layer_mode = mode;
        query.n = n ? static_cast<std::size_t>(*n) : model.config.default_n;
        query.exclude_self = exclude_self;

        auto result = analyze(query, {store->second, model.lexicon, *model.provider, model.closed_class});
        auto out = to_json(result);
        history_.push(std::move(result));
        return {200, std::move(out)};
    } catch (const Error& e) {
        return error_response(e);
    }
}

HttpResponse Service::handle_neighbors(const std::optional<std::string>& model_id,
                                       const std::optional<std::string>& word,
                                       const std::optional<std::string>& topn) const {
    try {
        if (!word || word->find_first_not_of(" \t\r\n") == std::string::npos) {
            throw Error(ErrorKind::InvalidArgument, "word must be non-empty");
        }
        const std::size_t k = positive_param(topn, "topn").value_or(kDefaultNeighbors);
        if (k > kMaxNeighbors) {
            throw Error(ErrorKind::InvalidArgument, "topn must be at most 100");
        }
        const auto& model = resolve_model(model_id);
        // Top-layer store when the model has one.
        const auto& [mode, store] = *(model.stores.contains(LayerMode::Top)
                                          ? model.stores.find(LayerMode::Top)
                                          : model.stores.begin());
        const std::string folded = text::fold_case(*word);
        EmbeddingRequest request{{folded}, mode};
        validate_request(request);
        const auto response = model.provider->embed_tokens(request);
        validate_response(request, response, store.dim());

        json neighbors = json::array();
        for (const auto& nb : store.topk(response.vectors.front(), k)) {
            neighbors.push_back({{"word", nb.word},
                                 {"similarity", nb.similarity},
                                 {"rank", nb.rank_in_store},
                                 {"tier", std::string(to_string(model.lexicon.tier(nb.word)))}});
        }
        const auto* entry = model.lexicon.find(folded);
        return {200, json{{"model", model.config.model_id},
                          {"word", folded},
                          {"layer_mode", std::string(to_string(mode))},
                          {"tier", std::string(to_string(model.lexicon.tier(folded)))},
                          {"frequency", entry ? json(entry->frequency) : json(nullptr)},
                          {"rank", entry ? json(entry->rank) : json(nullptr)},
                          {"neighbors", std::move(neighbors)}}};
    } catch (const Error& e) {
        return error_response(e);
    }
}

HttpResponse Service::handle_models() const {
    json list = json::array();
    for (const auto& m : models_) {
        json modes = json::array();
        json metadata = json::object();
        for (const auto& [mode, store] : m.stores) {
            modes.push_back(std::string(to_string(mode)));
            metadata[std::string(to_string(mode))] = store.metadata();
        }
        list.push_back({{"id", m.config.model_id},
                        {"display_name", m.config.display_name},
                        {"language", m.config.language},
                        {"layer_modes", std::move(modes)},
                        {"dim", m.config.provider.dim},
                        {"default", m.config.is_default},
                        {"default_n", m.config.default_n},
                        {"provider", std::string(to_string(m.config.provider.kind))},
                        {"lexicon", m.config.lexicon_path ? json(m.config.lexicon_path->string())
                                                          : json(nullptr)},
                        {"store_metadata", std::move(metadata)}});
    }
    return {200, json{{"models", std::move(list)}}};
}

HttpResponse Service::handle_history(const std::optional<std::string>& limit) const {
    try {
        const std::size_t n = positive_param(limit, "limit").value_or(kDefaultHistoryLimit);
        json entries = json::array();
        for (const auto& r : history_.recent(n)) {
            entries.push_back(to_json(r));
        }
        return {200, json{{"history", std::move(entries)}}};
    } catch (const Error& e) {
        return error_response(e);
    }
}

HttpResponse Service::handle_health() const {
    return {200, json{{"status", "ok"}}};
}

std::pair<std::string, int> parse_bind_address(std::string_view address) {
    const auto colon = address.rfind(':');
    if (colon == std::string_view::npos || colon == 0) {
        throw Error(ErrorKind::InvalidArgument, "bind address must be host:port");
    }
    int port = 0;
    const auto digits = address.substr(colon + 1);
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), port);
    if (digits.empty() || ec != std::errc() || ptr != digits.data() + digits.size() || port < 0 ||
        port > 65535) {
        throw Error(ErrorKind::InvalidArgument, "bad port in bind address");
    }
    return {std::string(address.substr(0, colon)), port};
}

HttpServer::HttpServer(Service& service)
    : service_(service), server_(std::make_unique<httplib::Server>()) {
    auto& srv = *server_;
    // SO_REUSEADDR only, so binding a port that is in use fails.
    srv.set_socket_options([](socket_t sock) {
        int yes = 1;
        setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
    });
    const std::string origin = service_.config().cors_origin;
    srv.set_default_headers({{"Access-Control-Allow-Origin", origin}});

    auto reply = [](httplib::Response& res, const HttpResponse& r) {
        res.status = r.status;
        res.set_content(r.body.dump(-1, ' ', false, json::error_handler_t::replace), "application/json");
    };
    auto param = [](const httplib::Request& req, const char* name) -> std::optional<std::string> {
        if (!req.has_param(name)) {
            return std::nullopt;
        }
        return req.get_param_value(name);
    };

    srv.Options(R"(/api/v1/.*)", [](const httplib::Request&, httplib::Response& res) {
        res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
        res.set_header("Access-Control-Allow-Headers", "Content-Type");
        res.status = 204;
    });
    srv.Get("/api/v1/health", [this, reply](const httplib::Request&, httplib::Response& res) {
        reply(res, service_.handle_health());
    });
    srv.Get("/api/v1/models", [this, reply](const httplib::Request&, httplib::Response& res) {
        reply(res, service_.handle_models());
    });
    srv.Post("/api/v1/substitutes", [this, reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, service_.handle_substitutes(req.body));
    });
    srv.Get("/api/v1/neighbors",
            [this, reply, param](const httplib::Request& req, httplib::Response& res) {
                reply(res, service_.handle_neighbors(param(req, "model"), param(req, "word"),
                                                     param(req, "topn")));
            });
    srv.Get("/api/v1/history", [this, reply, param](const httplib::Request& req, httplib::Response& res) {
        reply(res, service_.handle_history(param(req, "limit")));
    });
    srv.set_error_handler([](const httplib::Request&, httplib::Response& res) {
        if (!res.body.empty()) {
            return httplib::Server::HandlerResponse::Unhandled;
        }
        res.set_content(json{{"error", "NotFound"}, {"message", "no such endpoint"}}.dump(),
                        "application/json");
        return httplib::Server::HandlerResponse::Handled;
    });
    srv.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        std::string message = "internal error";
        try {
            std::rethrow_exception(ep);
        } catch (const std::exception& e) {
            message = e.what();
        } catch (...) {
        }
        std::cerr << "paradigm: unhandled error: " << message << "\n";
        res.status = 500;
        res.set_content(json{{"error", "Internal"}, {"message", message}}.dump(), "application/json");
    });
}

HttpServer::~HttpServer() {
    stop();
}

int HttpServer::bind(const std::string& host, int port) {
    if (port == 0) {
        const int bound = server_->bind_to_any_port(host);
        if (bound < 0) {
            throw Error(ErrorKind::Io, "cannot bind " + host);
        }
        return bound;
    }
    if (!server_->bind_to_port(host, port)) {
        throw Error(ErrorKind::Io, "cannot bind " + host + ":" + std::to_string(port));
    }
    return port;
}

void HttpServer::listen() {
    server_->listen_after_bind();
}

void HttpServer::start() {
    thread_ = std::thread([this] { listen(); });
    server_->wait_until_ready();
}

void HttpServer::stop() {
    if (server_) {
        server_->stop();
    }
    if (thread_.joinable()) {
        thread_.join();
    }
}

}  // namespace paradigm
