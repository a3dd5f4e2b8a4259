#include "curricula/langswitch.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <sstream>
#include <unordered_set>

#include "curricula/csv.hpp"
#include "curricula/encoder.hpp"
#include "curricula/errors.hpp"

namespace curricula {

std::optional<std::string> PseudoTranslator::translate(const std::string& text,
                                                       const std::string& source,
                                                       const std::string& target) const {
    if (source == target) return text;
    std::istringstream in(text);
    std::string token;
    std::string out;
    while (in >> token) {
        if (!out.empty()) out += ' ';
        out += token;
        out += '_';
        out += target;
    }
    return out;
}

CsvTranslationMemory::CsvTranslationMemory(const std::filesystem::path& path) {
    const auto rows = csv::parse_file(path);
    const std::vector<std::string> header = {"source_text", "source_lang", "target_lang",
                                             "target_text"};
    if (rows.empty() || rows.front().fields != header) {
        throw IngestError(path.string() +
                          ": expected header source_text,source_lang,target_lang,target_text");
    }
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& f = rows[i].fields;
        if (f.size() != 4) {
            throw IngestError(path.string() + ": row " + std::to_string(rows[i].row_no) +
                              " has " + std::to_string(f.size()) + " fields, expected 4");
        }
        entries_[{f[0], f[1], f[2]}] = f[3];
    }
}

std::optional<std::string> CsvTranslationMemory::translate(const std::string& text,
                                                           const std::string& source,
                                                           const std::string& target) const {
    if (source == target) return text;
    auto it = entries_.find(std::make_tuple(text, source, target));
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

void validate(const SwitchConfig& config) {
    if (config.period < 1) throw ConfigError("langswitch: period must be >= 1");
    if (config.dedup_threshold < 0.0 || config.dedup_threshold > 1.0) {
        throw ConfigError("langswitch: dedup_threshold must be in [0, 1]");
    }
    std::unordered_set<std::string> seen;
    for (const auto& lang : config.languages) {
        if (!seen.insert(lang).second) {
            throw ConfigError("langswitch: language '" + lang + "' appears twice in the cycle");
        }
    }
}

bool is_switch_epoch(int epoch, const SwitchConfig& config) {
    if (epoch < 1) throw ArgumentError("is_switch_epoch: epoch must be >= 1");
    validate(config);
    return epoch % config.period == 0;
}

std::optional<std::string> next_cycle_language(const std::string& language,
                                               const SwitchConfig& config) {
    const auto& cycle = config.languages;
    for (std::size_t i = 0; i < cycle.size(); ++i) {
        if (cycle[i] == language) return cycle[(i + 1) % cycle.size()];
    }
    return std::nullopt;
}

SwitchOutcome switch_pairs(const std::vector<Pair>& pairs, const TranslationProvider& provider,
                           const SwitchConfig& config, int epoch) {
    SwitchOutcome outcome;
    outcome.pairs = pairs;
    outcome.translated.assign(pairs.size(), false);
    if (!is_switch_epoch(epoch, config)) return outcome;

    for (std::size_t i = 0; i < outcome.pairs.size(); ++i) {
        Pair& pair = outcome.pairs[i];
        const auto target = next_cycle_language(pair.language, config);
        if (!target) continue;  // confined to the configured cycle
        const auto topic_text = provider.translate(pair.epoch_text_topic, pair.language, *target);
        const auto content_text =
            provider.translate(pair.epoch_text_content, pair.language, *target);
        if (!topic_text || !content_text) {
            ++outcome.skipped;
            continue;
        }
        pair.epoch_text_topic = *topic_text;
        pair.epoch_text_content = *content_text;
        pair.language = *target;
        outcome.translated[i] = true;
    }
    return outcome;
}

double jaccard_token_similarity(const std::string& a, const std::string& b) {
    // Untruncated token sets; the filter must not depend on encoder limits.
    const auto tokens_of = [](const std::string& text) {
        auto tokens = tokenize_truncate(text, std::numeric_limits<int>::max());
        return std::set<std::string>(tokens.begin(), tokens.end());
    };
    const auto sa = tokens_of(a);
    const auto sb = tokens_of(b);
    if (sa.empty() && sb.empty()) return 1.0;
    std::size_t intersection = 0;
    for (const auto& t : sa) intersection += sb.count(t);
    const std::size_t uni = sa.size() + sb.size() - intersection;
    return static_cast<double>(intersection) / static_cast<double>(uni);
}

std::vector<std::size_t> filter_translated_indices(const std::vector<Pair>& translated,
                                                   const std::vector<Pair>& existing,
                                                   double theta) {
    if (theta < 0.0 || theta > 1.0) {
        throw ArgumentError("filter_translated_pairs: theta must be in [0, 1]");
    }
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < translated.size(); ++i) {
        const Pair& candidate = translated[i];
        bool duplicate = false;
        for (const Pair& other : existing) {
            if (other.language != candidate.language) continue;
            if (jaccard_token_similarity(candidate.epoch_text_topic, other.epoch_text_topic) >=
                    theta &&
                jaccard_token_similarity(candidate.epoch_text_content, other.epoch_text_content) >=
                    theta) {
                duplicate = true;
                break;
            }
        }
        if (!duplicate) kept.push_back(i);
    }
    return kept;
}

std::vector<Pair> filter_translated_pairs(const std::vector<Pair>& translated,
                                          const std::vector<Pair>& existing, double theta) {
    std::vector<Pair> survivors;
    for (std::size_t i : filter_translated_indices(translated, existing, theta)) {
        survivors.push_back(translated[i]);
    }
    return survivors;
}

std::string pseudo_translate(const std::string& text, const std::string& source,
                             const std::string& target) {
    return *PseudoTranslator{}.translate(text, source, target);
}

}  // namespace curricula
