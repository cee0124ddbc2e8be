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

#include <stdexcept>
#include <string>
#include <string_view>

namespace paradigm {

enum class ErrorKind {
    // embedding provider
    EmptyTokenList,
    EmptyToken,
    TokenTooLong,
    TooManyTokens,
    InvalidToken,
    ProviderUnavailable,
    ProviderProtocol,
    // vectors and type store
    ZeroVector,
    DimensionMismatch,
    NonFiniteComponent,
    EmptyAccumulator,
    EmptyAfterExclusion,
    BadMagic,
    UnsupportedVersion,
    TruncatedFile,
    ChecksumMismatch,
    MalformedStore,
    Io,
    // lexicon
    FileUnreadable,
    NotUtf8,
    TooManyMalformedLines,
    TagCountMismatch,
    UnknownTag,
    // query engine
    EmptySentence,
    LayerModeMismatch,
    UnknownLayerMode,
    InvalidArgument,
    // configuration and service
    ParseError,
    NoDefaultModel,
    MultipleDefaultModels,
    StoreLoadError,
    LexiconLoadError,
    UnknownModel,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace paradigm
