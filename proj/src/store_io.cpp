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

#include "paradigm/store_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <system_error>

#include <nlohmann/json.hpp>

#include "paradigm/error.hpp"
#include "paradigm/hash.hpp"
#include "paradigm/text.hpp"

namespace paradigm {

namespace {

constexpr char kMagic[4] = {'T', 'V', 'S', '1'};

class ByteWriter {
public:
    template <typename T>
    void put(T value) {
        static_assert(std::is_integral_v<T>);
        for (std::size_t i = 0; i < sizeof(T); ++i) {
            buf_.push_back(static_cast<std::byte>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xFFU));
        }
    }

    void put_f32(float value) { put(std::bit_cast<std::uint32_t>(value)); }

    void put_bytes(std::string_view s) {
        const auto* p = reinterpret_cast<const std::byte*>(s.data());
        buf_.insert(buf_.end(), p, p + s.size());
    }

    std::vector<std::byte>& bytes() noexcept { return buf_; }

private:
    std::vector<std::byte> buf_;
};

class ByteReader {
public:
    explicit ByteReader(std::span<const std::byte> bytes) : bytes_(bytes) {}

    template <typename T>
    T get(const char* what) {
        require(sizeof(T), what);
        std::uint64_t v = 0;
        for (std::size_t i = 0; i < sizeof(T); ++i) {
            v |= static_cast<std::uint64_t>(bytes_[pos_ + i]) << (8 * i);
        }
        pos_ += sizeof(T);
        return static_cast<T>(v);
    }

    float get_f32(const char* what) { return std::bit_cast<float>(get<std::uint32_t>(what)); }

    std::string get_string(std::size_t n, const char* what) {
        require(n, what);
        std::string s(reinterpret_cast<const char*>(bytes_.data() + pos_), n);
        pos_ += n;
        return s;
    }

    [[nodiscard]] std::size_t position() const noexcept { return pos_; }
    [[nodiscard]] std::size_t remaining() const noexcept { return bytes_.size() - pos_; }

private:
    void require(std::size_t n, const char* what) const {
        if (remaining() < n) {
            throw Error(ErrorKind::TruncatedFile, std::string("file ends inside ") + what);
        }
    }

    std::span<const std::byte> bytes_;
    std::size_t pos_ = 0;
};

Metadata parse_metadata(const std::string& raw) {
    Metadata out;
    if (raw.empty()) {
        return out;
    }
    auto j = nlohmann::json::parse(raw, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded() || !j.is_object()) {
        throw Error(ErrorKind::MalformedStore, "metadata is not a JSON object");
    }
    for (const auto& [key, value] : j.items()) {
        if (!value.is_string()) {
            throw Error(ErrorKind::MalformedStore, "metadata value for \"" + key + "\" is not text");
        }
        out.emplace(key, value.get<std::string>());
    }
    return out;
}

}  // namespace

std::vector<std::byte> encode_store(const TypeEmbeddingStore& store) {
    ByteWriter w;
    w.put_bytes(std::string_view(kMagic, 4));
    w.put<std::uint32_t>(kStoreVersion);
    w.put<std::uint32_t>(static_cast<std::uint32_t>(store.dim()));
    w.put<std::uint64_t>(store.size());
    w.put<std::uint8_t>(static_cast<std::uint8_t>(store.layer_mode()));

    nlohmann::json meta = nlohmann::json::object();
    for (const auto& [key, value] : store.metadata()) {
        meta[key] = value;
    }
    const std::string meta_text = meta.dump();
    w.put<std::uint32_t>(static_cast<std::uint32_t>(meta_text.size()));
    w.put_bytes(meta_text);

    for (std::size_t i = 0; i < store.size(); ++i) {
        const auto& word = store.word(i);
        w.put<std::uint16_t>(static_cast<std::uint16_t>(word.size()));
        w.put_bytes(word);
        w.put<std::uint64_t>(store.frequency(i));
        for (float x : store.vector(i)) {
            w.put_f32(x);
        }
    }
    const std::uint64_t checksum = fnv1a64(w.bytes());
    w.put<std::uint64_t>(checksum);
    return std::move(w.bytes());
}

TypeEmbeddingStore decode_store(std::span<const std::byte> bytes) {
    if (bytes.size() < 4) {
        throw Error(ErrorKind::TruncatedFile, "file ends inside magic");
    }
    if (std::memcmp(bytes.data(), kMagic, 4) != 0) {
        throw Error(ErrorKind::BadMagic, "not a TVS1 store file");
    }
    ByteReader r(bytes.subspan(4));
    const auto version = r.get<std::uint32_t>("version");
    if (version != kStoreVersion) {
        throw Error(ErrorKind::UnsupportedVersion, "store version " + std::to_string(version));
    }
    const auto dim = r.get<std::uint32_t>("dim");
    const auto count = r.get<std::uint64_t>("entry count");
    const auto mode_byte = r.get<std::uint8_t>("layer mode");
    if (mode_byte > 1) {
        throw Error(ErrorKind::MalformedStore, "unknown layer mode byte " + std::to_string(mode_byte));
    }
    if (dim == 0) {
        throw Error(ErrorKind::MalformedStore, "zero dimension");
    }
    const auto meta_len = r.get<std::uint32_t>("metadata length");
    const std::string meta_raw = r.get_string(meta_len, "metadata");

    // Bounded by what the remaining bytes could hold.
    const std::uint64_t min_entry = 11 + 4ULL * dim;
    std::vector<StoreEntry> entries;
    entries.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(count, r.remaining() / min_entry)));
    for (std::uint64_t i = 0; i < count; ++i) {
        StoreEntry e;
        const auto word_len = r.get<std::uint16_t>("word length");
        e.word = r.get_string(word_len, "word");
        e.frequency = r.get<std::uint64_t>("frequency");
        if (r.remaining() < 4ULL * dim) {
            throw Error(ErrorKind::TruncatedFile, "file ends inside vector");
        }
        e.vector.resize(dim);
        for (auto& x : e.vector) {
            x = r.get_f32("vector");
        }
        entries.push_back(std::move(e));
    }
    if (r.remaining() < 8) {
        throw Error(ErrorKind::TruncatedFile, "file ends inside checksum");
    }
    if (r.remaining() > 8) {
        throw Error(ErrorKind::MalformedStore, std::to_string(r.remaining() - 8) +
                                                   " unexpected bytes before checksum");
    }
    const std::size_t body_len = bytes.size() - 8;
    const std::uint64_t expected = stored_checksum(bytes);
    const std::uint64_t actual = fnv1a64(bytes.first(body_len));
    if (expected != actual) {
        throw Error(ErrorKind::ChecksumMismatch, "stored checksum does not match file contents");
    }

    for (const auto& e : entries) {
        if (!text::is_valid_utf8(e.word)) {
            throw Error(ErrorKind::MalformedStore, "word is not valid UTF-8");
        }
    }
    return TypeEmbeddingStore(dim, static_cast<LayerMode>(mode_byte), std::move(entries),
                              parse_metadata(meta_raw));
}

std::uint64_t stored_checksum(std::span<const std::byte> bytes) {
    if (bytes.size() < 8) {
        throw Error(ErrorKind::TruncatedFile, "file ends inside checksum");
    }
    ByteReader r(bytes.last(8));
    return r.get<std::uint64_t>("checksum");
}

std::size_t save_store(const TypeEmbeddingStore& store, const std::filesystem::path& path) {
    const auto bytes = encode_store(store);
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error(ErrorKind::Io, "cannot open " + tmp.string() + " for writing");
        }
        out.write(reinterpret_cast<const char*>(bytes.data()),
                  static_cast<std::streamsize>(bytes.size()));
        out.flush();
        if (!out) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw Error(ErrorKind::Io, "write to " + tmp.string() + " failed");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw Error(ErrorKind::Io, "cannot move store into place at " + path.string());
    }
    return bytes.size();
}

std::vector<std::byte> read_file_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::Io, "cannot open " + path.string());
    }
    in.seekg(0, std::ios::end);
    const auto size = in.tellg();
    in.seekg(0, std::ios::beg);
    std::vector<std::byte> bytes(static_cast<std::size_t>(size));
    in.read(reinterpret_cast<char*>(bytes.data()), size);
    if (!in) {
        throw Error(ErrorKind::Io, "read of " + path.string() + " failed");
    }
    return bytes;
}

TypeEmbeddingStore load_store(const std::filesystem::path& path) {
    return decode_store(read_file_bytes(path));
}

std::size_t read_token_stream(std::istream& in, const std::function<void(TokenRecord&&)>& sink) {
    std::string line;
    std::size_t line_no = 0;
    std::size_t delivered = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.find_first_not_of(" \t") == std::string::npos || line.front() == '#') {
            continue;
        }
        const auto where = "line " + std::to_string(line_no);
        auto j = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
        if (j.is_discarded() || !j.is_object()) {
            throw Error(ErrorKind::ParseError, where + ": not a JSON object");
        }
        auto word = j.find("word");
        auto vec = j.find("vec");
        if (word == j.end() || !word->is_string() || word->get_ref<const std::string&>().empty()) {
            throw Error(ErrorKind::ParseError, where + ": missing or empty \"word\"");
        }
        if (vec == j.end() || !vec->is_array()) {
            throw Error(ErrorKind::ParseError, where + ": missing \"vec\" array");
        }
        TokenRecord record;
        record.word = word->get<std::string>();
        record.vector.reserve(vec->size());
        for (const auto& x : *vec) {
            if (!x.is_number()) {
                throw Error(ErrorKind::ParseError, where + ": \"vec\" holds a non-number");
            }
            record.vector.push_back(x.get<double>());
        }
        sink(std::move(record));
        ++delivered;
    }
    return delivered;
}

}  // namespace paradigm
