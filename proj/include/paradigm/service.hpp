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

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <semaphore>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "paradigm/config.hpp"
#include "paradigm/embedding.hpp"
#include "paradigm/error.hpp"
#include "paradigm/history.hpp"
#include "paradigm/lexicon.hpp"
#include "paradigm/typestore.hpp"

namespace httplib {
class Server;
}

namespace paradigm {

/// Wraps a provider so at most `limit` calls run at once; further callers
/// block until a slot frees up.
class ThrottledProvider final : public EmbeddingProvider {
public:
    ThrottledProvider(std::unique_ptr<EmbeddingProvider> inner, std::size_t limit);

    [[nodiscard]] std::size_t dim() const noexcept override { return inner_->dim(); }
    [[nodiscard]] EmbeddingResponse embed_tokens(const EmbeddingRequest& request) const override;

private:
    std::unique_ptr<EmbeddingProvider> inner_;
    mutable std::counting_semaphore<1024> slots_;
};

struct LoadedModel {
    ModelConfig config;
    std::map<LayerMode, TypeEmbeddingStore> stores;
    FrequencyLexicon lexicon;
    ClosedClassList closed_class;
    std::unique_ptr<EmbeddingProvider> provider;
};

/// Instantiates the provider a model config describes.
[[nodiscard]] std::unique_ptr<EmbeddingProvider> make_provider(const ProviderConfig& config);

/// Loads every store, lexicon and provider. Throws StoreLoadError,
/// LexiconLoadError, DimensionMismatch or ProviderUnavailable.
[[nodiscard]] LoadedModel load_model(const ModelConfig& config);

struct HttpResponse {
    int status = 200;
    nlohmann::json body;
};

/// The HTTP-independent request handlers. All state except the history is
/// immutable after construction, so handlers may run concurrently.
class Service {
public:
    /// Loads every model eagerly; any failure propagates and no Service
    /// is produced.
    static std::unique_ptr<Service> create(const ServiceConfig& config);

    Service(ServiceConfig config, std::vector<LoadedModel> models);

    HttpResponse handle_substitutes(std::string_view body);
    [[nodiscard]] HttpResponse handle_neighbors(const std::optional<std::string>& model,
                                                const std::optional<std::string>& word,
                                                const std::optional<std::string>& topn) const;
    [[nodiscard]] HttpResponse handle_models() const;
    [[nodiscard]] HttpResponse handle_history(const std::optional<std::string>& limit) const;
    [[nodiscard]] HttpResponse handle_health() const;

    [[nodiscard]] const ServiceConfig& config() const noexcept { return config_; }
    [[nodiscard]] const QueryHistory& history() const noexcept { return history_; }

private:
    const LoadedModel& resolve_model(const std::optional<std::string>& id) const;

    ServiceConfig config_;
    std::vector<LoadedModel> models_;
    std::size_t default_index_ = 0;
    QueryHistory history_;
};

/// Maps error kinds onto HTTP statuses (400, 404, 422, 502, 500).
[[nodiscard]] int http_status_for(ErrorKind kind) noexcept;

/// cpp-httplib front end for a Service under /api/v1.
class HttpServer {
public:
    explicit HttpServer(Service& service);
    ~HttpServer();
    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    /// Binds the socket; port 0 picks a free port. Returns the bound port.
    /// Throws Io on failure.
    int bind(const std::string& host, int port);

    /// Serves until stop(); call after bind().
    void listen();

    /// listen() on a background thread.
    void start();
    void stop();

private:
    Service& service_;
    std::unique_ptr<httplib::Server> server_;
    std::thread thread_;
};

/// "host:port" -> (host, port). Throws InvalidArgument.
[[nodiscard]] std::pair<std::string, int> parse_bind_address(std::string_view address);

}  // namespace paradigm
