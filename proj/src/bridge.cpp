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

#include "paradigm/bridge.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <csignal>
#include <regex>
#include <thread>

#include <httplib.h>

#include "paradigm/error.hpp"
#include "paradigm/protocol.hpp"

extern char** environ;

namespace paradigm {

namespace {

/// The child is gone or its reply timed out.
struct TransportFailure {
    std::string what;
};

}  // namespace

std::chrono::milliseconds BackoffPolicy::delay(unsigned failures) const noexcept {
    if (failures == 0) {
        return std::chrono::milliseconds{0};
    }
    auto d = base;
    for (unsigned i = 1; i < failures && d < cap; ++i) {
        d *= 2;
    }
    return std::min(d, cap);
}

ChildProcess::ChildProcess(const std::string& command) {
    static std::once_flag ignore_sigpipe;
    std::call_once(ignore_sigpipe, [] { std::signal(SIGPIPE, SIG_IGN); });

    int to_child[2];
    int from_child[2];
    if (pipe2(to_child, O_CLOEXEC) != 0) {
        throw Error(ErrorKind::ProviderUnavailable, "pipe() failed");
    }
    if (pipe2(from_child, O_CLOEXEC) != 0) {
        close(to_child[0]);
        close(to_child[1]);
        throw Error(ErrorKind::ProviderUnavailable, "pipe() failed");
    }
    // argv is prepared before fork; only async-signal-safe calls follow in the child.
    std::string shell = "/bin/sh";
    std::string flag = "-c";
    std::string cmd = command;
    char* argv[] = {shell.data(), flag.data(), cmd.data(), nullptr};

    pid_ = fork();
    if (pid_ < 0) {
        close(to_child[0]);
        close(to_child[1]);
        close(from_child[0]);
        close(from_child[1]);
        throw Error(ErrorKind::ProviderUnavailable, "fork() failed");
    }
    if (pid_ == 0) {
        // Start the bridge with default signal handling whatever the parent set up.
        sigset_t none;
        sigemptyset(&none);
        sigprocmask(SIG_SETMASK, &none, nullptr);
        signal(SIGPIPE, SIG_DFL);
        dup2(to_child[0], STDIN_FILENO);
        dup2(from_child[1], STDOUT_FILENO);
        execve("/bin/sh", argv, environ);
        _exit(127);
    }
    close(to_child[0]);
    close(from_child[1]);
    stdin_fd_ = to_child[1];
    stdout_fd_ = from_child[0];
}

ChildProcess::~ChildProcess() {
    if (stdin_fd_ >= 0) {
        close(stdin_fd_);
    }
    if (stdout_fd_ >= 0) {
        close(stdout_fd_);
    }
    if (pid_ <= 0) {
        return;
    }
    for (int i = 0; i < 50; ++i) {
        const pid_t reaped = waitpid(pid_, nullptr, WNOHANG);
        if (reaped == pid_ || (reaped < 0 && errno == ECHILD)) {
            return;
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
    kill(pid_, SIGKILL);
    waitpid(pid_, nullptr, 0);
}

bool ChildProcess::write_line(const std::string& line) {
    std::string data = line;
    data += '\n';
    std::size_t off = 0;
    while (off < data.size()) {
        const ssize_t n = write(stdin_fd_, data.data() + off, data.size() - off);
        if (n < 0) {
            if (errno == EINTR) {
                continue;
            }
            return false;
        }
        off += static_cast<std::size_t>(n);
    }
    return true;
}

std::optional<std::string> ChildProcess::read_line(std::chrono::milliseconds timeout) {
    const auto deadline = std::chrono::steady_clock::now() + timeout;
    for (;;) {
        if (auto nl = buffer_.find('\n'); nl != std::string::npos) {
            std::string line = buffer_.substr(0, nl);
            buffer_.erase(0, nl + 1);
            return line;
        }
        const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
            deadline - std::chrono::steady_clock::now());
        if (left.count() <= 0) {
            return std::nullopt;
        }
        pollfd pfd{stdout_fd_, POLLIN, 0};
        const int ready = poll(&pfd, 1, static_cast<int>(left.count()));
        if (ready < 0 && errno == EINTR) {
            continue;
        }
        if (ready <= 0) {
            return std::nullopt;
        }
        char chunk[8192];
        const ssize_t n = read(stdout_fd_, chunk, sizeof(chunk));
        if (n < 0 && errno == EINTR) {
            continue;
        }
        if (n <= 0) {
            return std::nullopt;
        }
        buffer_.append(chunk, static_cast<std::size_t>(n));
    }
}

StdioBridgeProvider::StdioBridgeProvider(std::string command, std::size_t dim, BridgeOptions options)
    : command_(std::move(command)), dim_(dim), options_(options) {
    if (dim_ == 0) {
        throw Error(ErrorKind::InvalidArgument, "dimension must be positive");
    }
    std::lock_guard lock(mutex_);
    try {
        start_locked();
    } catch (const TransportFailure& f) {
        throw Error(ErrorKind::ProviderUnavailable, "bridge failed to start: " + f.what);
    } catch (const Error& e) {
        throw Error(ErrorKind::ProviderUnavailable, std::string("bridge failed its probe: ") + e.what());
    }
}

StdioBridgeProvider::~StdioBridgeProvider() = default;

unsigned StdioBridgeProvider::failures() const {
    std::lock_guard lock(mutex_);
    return failures_;
}

void StdioBridgeProvider::start_locked() const {
    child_ = std::make_unique<ChildProcess>(command_);
    EmbeddingRequest probe;
    probe.tokens = {"probe"};
    try {
        (void)exchange_locked(probe);
    } catch (...) {
        child_.reset();
        throw;
    }
}

void StdioBridgeProvider::fail_locked(const std::string& why) const {
    child_.reset();
    ++failures_;
    retry_at_ = std::chrono::steady_clock::now() + options_.backoff.delay(failures_);
    throw Error(ErrorKind::ProviderUnavailable, why);
}

EmbeddingResponse StdioBridgeProvider::exchange_locked(const EmbeddingRequest& request) const {
    const std::int64_t id = next_id_++;
    if (!child_->write_line(protocol::encode_request(id, request))) {
        throw TransportFailure{"bridge closed its input"};
    }
    const auto deadline = std::chrono::steady_clock::now() + options_.request_timeout;
    for (;;) {
        const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
            deadline - std::chrono::steady_clock::now());
        auto line = child_->read_line(std::max(left, std::chrono::milliseconds{0}));
        if (!line) {
            throw TransportFailure{"no reply from bridge (exited or timed out)"};
        }
        if (line->empty()) {
            continue;
        }
        auto reply = protocol::decode_reply(*line);
        if (reply.id && *reply.id != id) {
            continue;  // stale reply to an abandoned request
        }
        if (reply.is_error()) {
            throw Error(ErrorKind::ProviderUnavailable,
                        "bridge reported: " + std::get<std::string>(reply.body));
        }
        auto& response = std::get<EmbeddingResponse>(reply.body);
        validate_response(request, response, dim_);
        return std::move(response);
    }
}

EmbeddingResponse StdioBridgeProvider::embed_tokens(const EmbeddingRequest& request) const {
    validate_request(request);
    std::lock_guard lock(mutex_);
    if (!child_) {
        if (std::chrono::steady_clock::now() < retry_at_) {
            throw Error(ErrorKind::ProviderUnavailable, "bridge is down, waiting to restart");
        }
        try {
            start_locked();
        } catch (const TransportFailure& f) {
            fail_locked("bridge restart failed: " + f.what);
        } catch (const Error& e) {
            fail_locked(std::string("bridge restart failed: ") + e.what());
        }
    }
    try {
        auto response = exchange_locked(request);
        failures_ = 0;
        return response;
    } catch (const TransportFailure& f) {
        fail_locked(f.what);
    }
    return {};  // unreachable, fail_locked throws
}

HttpBridgeProvider::HttpBridgeProvider(std::string url, std::size_t dim, BridgeOptions options)
    : dim_(dim), options_(options) {
    static const std::regex kUrl(R"(^(http://[^/:]+(:[0-9]+)?)(/.*)?$)");
    std::smatch m;
    if (!std::regex_match(url, m, kUrl)) {
        throw Error(ErrorKind::InvalidArgument, "bridge address must be http://host[:port][/path]");
    }
    if (dim_ == 0) {
        throw Error(ErrorKind::InvalidArgument, "dimension must be positive");
    }
    origin_ = m[1].str();
    path_ = m[3].matched ? m[3].str() : "/";
}

EmbeddingResponse HttpBridgeProvider::embed_tokens(const EmbeddingRequest& request) const {
    validate_request(request);
    std::int64_t id = 0;
    {
        std::lock_guard lock(id_mutex_);
        id = next_id_++;
    }
    httplib::Client client(origin_);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(options_.request_timeout);
    client.set_connection_timeout(secs.count() > 0 ? secs.count() : 1);
    client.set_read_timeout(secs.count() > 0 ? secs.count() : 1);
    auto res = client.Post(path_, protocol::encode_request(id, request) + "\n",
                           "application/x-ndjson");
    if (!res) {
        throw Error(ErrorKind::ProviderUnavailable,
                    "bridge at " + origin_ + " unreachable: " + httplib::to_string(res.error()));
    }
    if (res->status != 200) {
        throw Error(ErrorKind::ProviderUnavailable,
                    "bridge answered HTTP " + std::to_string(res->status));
    }
    std::string_view body = res->body;
    while (!body.empty() && (body.back() == '\n' || body.back() == '\r')) {
        body.remove_suffix(1);
    }
    if (auto nl = body.find('\n'); nl != std::string_view::npos) {
        body = body.substr(0, nl);
    }
    auto reply = protocol::decode_reply(body);
    if (reply.id && *reply.id != id) {
        throw Error(ErrorKind::ProviderProtocol, "bridge echoed a different id");
    }
    if (reply.is_error()) {
        throw Error(ErrorKind::ProviderUnavailable,
                    "bridge reported: " + std::get<std::string>(reply.body));
    }
    auto& response = std::get<EmbeddingResponse>(reply.body);
    validate_response(request, response, dim_);
    return std::move(response);
}

}  // namespace paradigm
