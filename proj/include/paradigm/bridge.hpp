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

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "paradigm/embedding.hpp"

namespace paradigm {

/// Restart delay after consecutive failures: base * 2^(failures - 1),
/// capped.
struct BackoffPolicy {
    std::chrono::milliseconds base{1000};
    std::chrono::milliseconds cap{30000};

    [[nodiscard]] std::chrono::milliseconds delay(unsigned failures) const noexcept;
};

/// A child process running `/bin/sh -c command` with piped stdin/stdout.
/// Stderr is inherited. The destructor closes stdin and reaps the child,
/// killing it if it does not exit promptly.
class ChildProcess {
public:
    explicit ChildProcess(const std::string& command);
    ~ChildProcess();
    ChildProcess(const ChildProcess&) = delete;
    ChildProcess& operator=(const ChildProcess&) = delete;

    /// Writes line + '\n'. Returns false if the pipe is closed.
    bool write_line(const std::string& line);

    /// Next complete line without its newline, or nullopt on EOF or
    /// timeout.
    std::optional<std::string> read_line(std::chrono::milliseconds timeout);

    [[nodiscard]] int pid() const noexcept { return pid_; }

private:
    int pid_ = -1;
    int stdin_fd_ = -1;
    int stdout_fd_ = -1;
    std::string buffer_;
};

struct BridgeOptions {
    std::chrono::milliseconds request_timeout{30000};
    BackoffPolicy backoff;
};

/// Provider backed by a supervised child process speaking the line
/// protocol on stdio. The child is started and probed at construction;
/// after a transport failure it is restarted lazily once the backoff delay
/// has passed. One request is in flight at a time.
class StdioBridgeProvider final : public EmbeddingProvider {
public:
    /// Throws ProviderUnavailable if the first start or probe fails.
    StdioBridgeProvider(std::string command, std::size_t dim, BridgeOptions options = {});
    ~StdioBridgeProvider() override;

    [[nodiscard]] std::size_t dim() const noexcept override { return dim_; }
    [[nodiscard]] EmbeddingResponse embed_tokens(const EmbeddingRequest& request) const override;

    /// Consecutive transport failures since the last success.
    [[nodiscard]] unsigned failures() const;

private:
    void start_locked() const;
    void fail_locked(const std::string& why) const;
    EmbeddingResponse exchange_locked(const EmbeddingRequest& request) const;

    std::string command_;
    std::size_t dim_;
    BridgeOptions options_;

    mutable std::mutex mutex_;
    mutable std::unique_ptr<ChildProcess> child_;
    mutable std::int64_t next_id_ = 1;
    mutable unsigned failures_ = 0;
    mutable std::chrono::steady_clock::time_point retry_at_{};
};

/// Provider that POSTs one request line per call to an HTTP bridge and
/// reads one reply line from the body.
class HttpBridgeProvider final : public EmbeddingProvider {
public:
    /// url is http://host:port/path. Throws InvalidArgument on a bad URL.
    HttpBridgeProvider(std::string url, std::size_t dim, BridgeOptions options = {});

    [[nodiscard]] std::size_t dim() const noexcept override { return dim_; }
    [[nodiscard]] EmbeddingResponse embed_tokens(const EmbeddingRequest& request) const override;

private:
    std::string origin_;
    std::string path_;
    std::size_t dim_;
    BridgeOptions options_;
    mutable std::mutex id_mutex_;
    mutable std::int64_t next_id_ = 1;
};

}  // namespace paradigm
