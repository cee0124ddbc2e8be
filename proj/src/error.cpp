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

#include "paradigm/error.hpp"

namespace paradigm {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::EmptyTokenList: return "EmptyTokenList";
        case ErrorKind::EmptyToken: return "EmptyToken";
        case ErrorKind::TokenTooLong: return "TokenTooLong";
        case ErrorKind::TooManyTokens: return "TooManyTokens";
        case ErrorKind::InvalidToken: return "InvalidToken";
        case ErrorKind::ProviderUnavailable: return "ProviderUnavailable";
        case ErrorKind::ProviderProtocol: return "ProviderProtocol";
        case ErrorKind::ZeroVector: return "ZeroVector";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::NonFiniteComponent: return "NonFiniteComponent";
        case ErrorKind::EmptyAccumulator: return "EmptyAccumulator";
        case ErrorKind::EmptyAfterExclusion: return "EmptyAfterExclusion";
        case ErrorKind::BadMagic: return "BadMagic";
        case ErrorKind::UnsupportedVersion: return "UnsupportedVersion";
        case ErrorKind::TruncatedFile: return "TruncatedFile";
        case ErrorKind::ChecksumMismatch: return "ChecksumMismatch";
        case ErrorKind::MalformedStore: return "MalformedStore";
        case ErrorKind::Io: return "Io";
        case ErrorKind::FileUnreadable: return "FileUnreadable";
        case ErrorKind::NotUtf8: return "NotUtf8";
        case ErrorKind::TooManyMalformedLines: return "TooManyMalformedLines";
        case ErrorKind::TagCountMismatch: return "TagCountMismatch";
        case ErrorKind::UnknownTag: return "UnknownTag";
        case ErrorKind::EmptySentence: return "EmptySentence";
        case ErrorKind::LayerModeMismatch: return "LayerModeMismatch";
        case ErrorKind::UnknownLayerMode: return "UnknownLayerMode";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::NoDefaultModel: return "NoDefaultModel";
        case ErrorKind::MultipleDefaultModels: return "MultipleDefaultModels";
        case ErrorKind::StoreLoadError: return "StoreLoadError";
        case ErrorKind::LexiconLoadError: return "LexiconLoadError";
        case ErrorKind::UnknownModel: return "UnknownModel";
    }
    return "Unknown";
}

}  // namespace paradigm
