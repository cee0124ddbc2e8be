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

#include "paradigm/lexicon.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "paradigm/error.hpp"
#include "paradigm/text.hpp"
#include "paradigm/typestore.hpp"

namespace paradigm {

namespace {

constexpr std::string_view kPosLabels[] = {
    "ADJ", "ADP", "ADV", "AUX", "CCONJ", "DET", "INTJ", "NOUN", "NUM",
    "PART", "PRON", "PROPN", "PUNCT", "SCONJ", "SYM", "VERB", "X",
};

struct ClosedClassWord {
    std::string_view word;
    PosTag tag;
};

// English function words. Possessives follow UD English and are PRON.
constexpr ClosedClassWord kEnglishClosedClass[] = {
    // determiners
    {"the", PosTag::DET}, {"a", PosTag::DET}, {"an", PosTag::DET}, {"this", PosTag::DET},
    {"that", PosTag::DET}, {"these", PosTag::DET}, {"those", PosTag::DET}, {"some", PosTag::DET},
    {"any", PosTag::DET}, {"no", PosTag::DET}, {"every", PosTag::DET}, {"each", PosTag::DET},
    {"all", PosTag::DET}, {"both", PosTag::DET}, {"either", PosTag::DET}, {"neither", PosTag::DET},
    {"another", PosTag::DET}, {"such", PosTag::DET}, {"which", PosTag::DET}, {"whose", PosTag::DET},
    {"what", PosTag::DET}, {"whatever", PosTag::DET}, {"whichever", PosTag::DET},
    // pronouns
    {"i", PosTag::PRON}, {"me", PosTag::PRON}, {"my", PosTag::PRON}, {"mine", PosTag::PRON},
    {"myself", PosTag::PRON}, {"you", PosTag::PRON}, {"your", PosTag::PRON},
    {"yours", PosTag::PRON}, {"yourself", PosTag::PRON}, {"yourselves", PosTag::PRON},
    {"he", PosTag::PRON}, {"him", PosTag::PRON}, {"his", PosTag::PRON}, {"himself", PosTag::PRON},
    {"she", PosTag::PRON}, {"her", PosTag::PRON}, {"hers", PosTag::PRON},
    {"herself", PosTag::PRON}, {"it", PosTag::PRON}, {"its", PosTag::PRON},
    {"itself", PosTag::PRON}, {"we", PosTag::PRON}, {"us", PosTag::PRON}, {"our", PosTag::PRON},
    {"ours", PosTag::PRON}, {"ourselves", PosTag::PRON}, {"they", PosTag::PRON},
    {"them", PosTag::PRON}, {"their", PosTag::PRON}, {"theirs", PosTag::PRON},
    {"themselves", PosTag::PRON}, {"who", PosTag::PRON}, {"whom", PosTag::PRON},
    {"whoever", PosTag::PRON}, {"someone", PosTag::PRON}, {"somebody", PosTag::PRON},
    {"something", PosTag::PRON}, {"anyone", PosTag::PRON}, {"anybody", PosTag::PRON},
    {"anything", PosTag::PRON}, {"everyone", PosTag::PRON}, {"everybody", PosTag::PRON},
    {"everything", PosTag::PRON}, {"nobody", PosTag::PRON}, {"nothing", PosTag::PRON},
    {"none", PosTag::PRON}, {"i'm", PosTag::PRON}, {"it's", PosTag::PRON},
    // adpositions
    {"of", PosTag::ADP}, {"in", PosTag::ADP}, {"on", PosTag::ADP}, {"at", PosTag::ADP},
    {"by", PosTag::ADP}, {"for", PosTag::ADP}, {"with", PosTag::ADP}, {"without", PosTag::ADP},
    {"about", PosTag::ADP}, {"against", PosTag::ADP}, {"between", PosTag::ADP},
    {"among", PosTag::ADP}, {"into", PosTag::ADP}, {"onto", PosTag::ADP}, {"upon", PosTag::ADP},
    {"through", PosTag::ADP}, {"throughout", PosTag::ADP}, {"during", PosTag::ADP},
    {"before", PosTag::ADP}, {"after", PosTag::ADP}, {"above", PosTag::ADP},
    {"below", PosTag::ADP}, {"to", PosTag::ADP}, {"from", PosTag::ADP}, {"up", PosTag::ADP},
    {"down", PosTag::ADP}, {"over", PosTag::ADP}, {"under", PosTag::ADP}, {"off", PosTag::ADP},
    {"out", PosTag::ADP}, {"across", PosTag::ADP}, {"along", PosTag::ADP},
    {"around", PosTag::ADP}, {"behind", PosTag::ADP}, {"beside", PosTag::ADP},
    {"beyond", PosTag::ADP}, {"inside", PosTag::ADP}, {"outside", PosTag::ADP},
    {"toward", PosTag::ADP}, {"towards", PosTag::ADP}, {"via", PosTag::ADP},
    {"within", PosTag::ADP}, {"per", PosTag::ADP}, {"than", PosTag::ADP},
    // auxiliaries
    {"be", PosTag::AUX}, {"am", PosTag::AUX}, {"is", PosTag::AUX}, {"are", PosTag::AUX},
    {"was", PosTag::AUX}, {"were", PosTag::AUX}, {"been", PosTag::AUX}, {"being", PosTag::AUX},
    {"have", PosTag::AUX}, {"has", PosTag::AUX}, {"had", PosTag::AUX}, {"having", PosTag::AUX},
    {"do", PosTag::AUX}, {"does", PosTag::AUX}, {"did", PosTag::AUX}, {"will", PosTag::AUX},
    {"would", PosTag::AUX}, {"shall", PosTag::AUX}, {"should", PosTag::AUX}, {"may", PosTag::AUX},
    {"might", PosTag::AUX}, {"must", PosTag::AUX}, {"can", PosTag::AUX}, {"could", PosTag::AUX},
    {"can't", PosTag::AUX}, {"cannot", PosTag::AUX}, {"won't", PosTag::AUX},
    {"don't", PosTag::AUX}, {"doesn't", PosTag::AUX}, {"didn't", PosTag::AUX},
    {"isn't", PosTag::AUX}, {"aren't", PosTag::AUX}, {"wasn't", PosTag::AUX},
    {"weren't", PosTag::AUX}, {"hasn't", PosTag::AUX}, {"haven't", PosTag::AUX},
    {"wouldn't", PosTag::AUX}, {"shouldn't", PosTag::AUX}, {"couldn't", PosTag::AUX},
    // conjunctions
    {"and", PosTag::CCONJ}, {"or", PosTag::CCONJ}, {"but", PosTag::CCONJ}, {"nor", PosTag::CCONJ},
    {"yet", PosTag::CCONJ}, {"so", PosTag::CCONJ},
    {"if", PosTag::SCONJ}, {"because", PosTag::SCONJ}, {"although", PosTag::SCONJ},
    {"though", PosTag::SCONJ}, {"while", PosTag::SCONJ}, {"whereas", PosTag::SCONJ},
    {"since", PosTag::SCONJ}, {"unless", PosTag::SCONJ}, {"until", PosTag::SCONJ},
    {"whether", PosTag::SCONJ}, {"as", PosTag::SCONJ},
    {"when", PosTag::SCONJ}, {"where", PosTag::SCONJ}, {"whenever", PosTag::SCONJ},
    {"wherever", PosTag::SCONJ},
    // particles
    {"not", PosTag::PART}, {"n't", PosTag::PART}, {"'s", PosTag::PART}, {"'", PosTag::PART},
};

}  // namespace

std::string_view to_string(PosTag tag) noexcept {
    return kPosLabels[static_cast<std::size_t>(tag)];
}

std::optional<PosTag> parse_pos_tag(std::string_view label) noexcept {
    for (std::size_t i = 0; i < std::size(kPosLabels); ++i) {
        if (kPosLabels[i] == label) {
            return static_cast<PosTag>(i);
        }
    }
    return std::nullopt;
}

std::string_view to_string(Tier tier) noexcept {
    switch (tier) {
        case Tier::High: return "high";
        case Tier::Mid: return "mid";
        case Tier::Low: return "low";
    }
    return "low";
}

FrequencyLexicon FrequencyLexicon::from_counts(
    std::span<const std::pair<std::string, std::uint64_t>> counts, TierThresholds thresholds) {
    if (thresholds.high_max_rank == 0 || thresholds.high_max_rank >= thresholds.mid_max_rank) {
        throw Error(ErrorKind::InvalidArgument,
                    "tier thresholds need 1 <= high_max_rank < mid_max_rank");
    }
    std::map<std::string, std::uint64_t, std::less<>> merged;
    for (const auto& [word, freq] : counts) {
        merged[word] += freq;
    }

    FrequencyLexicon lex;
    lex.thresholds_ = thresholds;
    lex.by_rank_.assign(merged.begin(), merged.end());
    // merged is already word-ascending, so a stable sort on frequency keeps
    // the lexicographic tie-break.
    std::stable_sort(lex.by_rank_.begin(), lex.by_rank_.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    lex.entries_.reserve(lex.by_rank_.size());
    for (std::size_t i = 0; i < lex.by_rank_.size(); ++i) {
        const auto& [word, freq] = lex.by_rank_[i];
        lex.entries_.emplace(word, LexiconEntry{freq, i + 1});
        lex.total_tokens_ += freq;
    }
    return lex;
}

FrequencyLexicon FrequencyLexicon::from_store(const TypeEmbeddingStore& store,
                                              TierThresholds thresholds) {
    std::vector<std::pair<std::string, std::uint64_t>> counts;
    counts.reserve(store.size());
    for (std::size_t i = 0; i < store.size(); ++i) {
        counts.emplace_back(store.word(i), store.frequency(i));
    }
    return from_counts(counts, thresholds);
}

const LexiconEntry* FrequencyLexicon::find(std::string_view word) const {
    auto it = entries_.find(std::string(word));
    return it == entries_.end() ? nullptr : &it->second;
}

Tier FrequencyLexicon::tier(std::string_view word) const {
    const auto* entry = find(word);
    if (entry == nullptr) {
        return Tier::Low;
    }
    if (entry->rank <= thresholds_.high_max_rank) {
        return Tier::High;
    }
    if (entry->rank <= thresholds_.mid_max_rank) {
        return Tier::Mid;
    }
    return Tier::Low;
}

std::string FrequencyLexicon::to_tsv() const {
    std::string out;
    for (const auto& [word, freq] : by_rank_) {
        out += word;
        out += '\t';
        out += std::to_string(freq);
        out += '\n';
    }
    return out;
}

FrequencyLexicon parse_freq_dict(std::string_view content, TierThresholds thresholds,
                                 DictionaryLoadReport* report) {
    if (!text::is_valid_utf8(content)) {
        throw Error(ErrorKind::NotUtf8, "frequency dictionary is not valid UTF-8");
    }
    DictionaryLoadReport local;
    std::vector<std::pair<std::string, std::uint64_t>> counts;

    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= content.size()) {
        auto end = content.find('\n', start);
        if (end == std::string_view::npos) {
            end = content.size();
        }
        std::string_view line = content.substr(start, end - start);
        start = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        if (line.empty() || line.front() == '#') {
            if (end == content.size()) {
                break;
            }
            continue;
        }
        ++local.data_lines;

        const auto tab1 = line.find('\t');
        bool ok = tab1 != std::string_view::npos && tab1 > 0;
        std::uint64_t freq = 0;
        if (ok) {
            std::string_view rest = line.substr(tab1 + 1);
            const auto tab2 = rest.find('\t');
            std::string_view number = rest.substr(0, tab2);
            if (tab2 != std::string_view::npos && rest.find('\t', tab2 + 1) != std::string_view::npos) {
                ok = false;  // more than three columns
            }
            const auto* first = number.data();
            const auto* last = number.data() + number.size();
            auto [ptr, ec] = std::from_chars(first, last, freq);
            ok = ok && !number.empty() && ec == std::errc() && ptr == last;
        }
        if (ok) {
            counts.emplace_back(std::string(line.substr(0, tab1)), freq);
        } else {
            ++local.malformed;
            local.malformed_line_numbers.push_back(line_no);
        }
        if (end == content.size()) {
            break;
        }
    }

    if (local.malformed * 100 > local.data_lines) {
        throw Error(ErrorKind::TooManyMalformedLines,
                    std::to_string(local.malformed) + " of " + std::to_string(local.data_lines) +
                        " lines are malformed (cap is 1%)");
    }
    auto lex = FrequencyLexicon::from_counts(counts, thresholds);
    if (report != nullptr) {
        *report = std::move(local);
    }
    return lex;
}

namespace {

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::FileUnreadable, "cannot read " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) {
        throw Error(ErrorKind::FileUnreadable, "read of " + path.string() + " failed");
    }
    return ss.str();
}

}  // namespace

FrequencyLexicon load_freq_dict(const std::filesystem::path& path, TierThresholds thresholds,
                                DictionaryLoadReport* report) {
    return parse_freq_dict(read_text_file(path), thresholds, report);
}

ClosedClassList ClosedClassList::builtin(std::string_view language) {
    ClosedClassList list;
    if (language == "en") {
        for (const auto& entry : kEnglishClosedClass) {
            list.add(entry.word, entry.tag);
        }
    }
    return list;
}

ClosedClassList ClosedClassList::load(const std::filesystem::path& path) {
    const std::string content = read_text_file(path);
    if (!text::is_valid_utf8(content)) {
        throw Error(ErrorKind::NotUtf8, path.string() + " is not valid UTF-8");
    }
    ClosedClassList list;
    std::istringstream in(content);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty() || line.front() == '#') {
            continue;
        }
        const auto tab = line.find('\t');
        if (tab == std::string::npos || tab == 0) {
            throw Error(ErrorKind::ParseError,
                        path.string() + ":" + std::to_string(line_no) + ": expected word<TAB>UPOS");
        }
        const auto label = std::string_view(line).substr(tab + 1);
        const auto tag = parse_pos_tag(label);
        if (!tag) {
            throw Error(ErrorKind::UnknownTag, path.string() + ":" + std::to_string(line_no) +
                                                   ": unknown UPOS label \"" + std::string(label) +
                                                   "\"");
        }
        list.add(std::string_view(line).substr(0, tab), *tag);
    }
    return list;
}

void ClosedClassList::add(std::string_view word, PosTag tag) {
    words_.insert_or_assign(text::fold_case(word), tag);
}

std::optional<PosTag> ClosedClassList::lookup(std::string_view word) const {
    auto it = words_.find(text::fold_case(word));
    if (it == words_.end()) {
        return std::nullopt;
    }
    return it->second;
}

PosTag fallback_tag(std::string_view token, const ClosedClassList& closed_class) {
    if (text::is_all_punctuation(token)) {
        return PosTag::PUNCT;
    }
    if (text::is_all_symbol(token)) {
        return PosTag::SYM;
    }
    if (text::contains_digit(token)) {
        return PosTag::NUM;
    }
    if (auto tag = closed_class.lookup(token)) {
        return *tag;
    }
    return PosTag::NOUN;
}

std::vector<PosTag> classify_pos(std::span<const std::string> tokens,
                                 const std::optional<std::vector<PosTag>>& provider_tags,
                                 const ClosedClassList& closed_class) {
    if (provider_tags) {
        if (provider_tags->size() != tokens.size()) {
            throw Error(ErrorKind::TagCountMismatch,
                        std::to_string(provider_tags->size()) + " tags for " +
                            std::to_string(tokens.size()) + " tokens");
        }
        return *provider_tags;
    }
    std::vector<PosTag> tags;
    tags.reserve(tokens.size());
    for (const auto& token : tokens) {
        tags.push_back(fallback_tag(token, closed_class));
    }
    return tags;
}

bool is_excluded_from_vocabulary(std::string_view word, const ClosedClassList& closed_class) {
    return is_functional(fallback_tag(word, closed_class)) || text::contains_digit(word);
}

}  // namespace paradigm
