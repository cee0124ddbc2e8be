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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <istream>
#include <span>
#include <string>
#include <vector>

#include "paradigm/typestore.hpp"

namespace paradigm {

// .tvs layout, all integers little-endian:
//   "TVS1" | u32 version | u32 dim | u64 count | u8 layer_mode
//   | u32 meta_len | meta_len bytes of JSON metadata
//   | count x (u16 word_len | word | u64 frequency | dim x f32)
//   | u64 FNV-1a of every preceding byte
inline constexpr std::uint32_t kStoreVersion = 1;

[[nodiscard]] std::vector<std::byte> encode_store(const TypeEmbeddingStore& store);

/// Structural errors (BadMagic, UnsupportedVersion, TruncatedFile,
/// MalformedStore) are reported before the checksum is compared.
[[nodiscard]] TypeEmbeddingStore decode_store(std::span<const std::byte> bytes);

/// Writes through a sibling temporary file and renames it into place, so a
/// failed save leaves no partial file. Returns the byte count written.
std::size_t save_store(const TypeEmbeddingStore& store, const std::filesystem::path& path);

[[nodiscard]] TypeEmbeddingStore load_store(const std::filesystem::path& path);

[[nodiscard]] std::vector<std::byte> read_file_bytes(const std::filesystem::path& path);

/// The trailing checksum field of an encoded store (no verification).
[[nodiscard]] std::uint64_t stored_checksum(std::span<const std::byte> bytes);

struct TokenRecord {
    std::string word;
    Vector vector;
};

/// Reads the newline-delimited {"word": str, "vec": [float...]} stream.
/// Blank lines and lines starting with '#' are skipped. Any other line that
/// fails to parse throws Error(ParseError) naming the line number.
/// Returns the number of records delivered.
std::size_t read_token_stream(std::istream& in, const std::function<void(TokenRecord&&)>& sink);

}  // namespace paradigm
