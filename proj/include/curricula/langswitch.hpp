#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "curricula/batching.hpp"

namespace curricula {

// Deterministic per (text, source, target); translate(t, L, L) must be the
// identity. Returns nullopt when no translation is available.
class TranslationProvider {
public:
    virtual ~TranslationProvider() = default;
    virtual std::optional<std::string> translate(const std::string& text,
                                                 const std::string& source,
                                                 const std::string& target) const = 0;
};

// Test/default provider: every token t becomes t + "_" + target, order and
// count preserved; identity when source == target.
class PseudoTranslator final : public TranslationProvider {
public:
    std::optional<std::string> translate(const std::string& text, const std::string& source,
                                         const std::string& target) const override;
};

// Lookup table loaded from a CSV of precomputed translations with header
// source_text,source_lang,target_lang,target_text. Misses return nullopt.
class CsvTranslationMemory final : public TranslationProvider {
public:
    explicit CsvTranslationMemory(const std::filesystem::path& path);
    std::optional<std::string> translate(const std::string& text, const std::string& source,
                                         const std::string& target) const override;
    std::size_t size() const { return entries_.size(); }

private:
    std::map<std::tuple<std::string, std::string, std::string>, std::string> entries_;
};

struct SwitchConfig {
    std::vector<std::string> languages = {"en", "es", "pt", "fr"};  // ordered cycle
    int period = 2;                                                 // epochs between switches
    double dedup_threshold = 0.8;
};

// Throws ConfigError if period < 1, the threshold leaves [0, 1] or the
// cycle repeats a language.
void validate(const SwitchConfig& config);

// True on epochs period, 2*period, ... (epoch is 1-based).
bool is_switch_epoch(int epoch, const SwitchConfig& config);

// Next language in the cycle, or nullopt when language is not in it.
std::optional<std::string> next_cycle_language(const std::string& language,
                                               const SwitchConfig& config);

struct SwitchOutcome {
    std::vector<Pair> pairs;
    std::vector<bool> translated;  // per pair: texts were replaced
    std::size_t skipped = 0;       // provider failures, passed through untranslated
};

// On switch epochs, replaces both texts of every in-cycle pair with the
// provider's output into the next cycle language and updates the language
// field; all other pairs (and every pair on non-switch epochs) pass through
// unchanged. Ids are never modified.
SwitchOutcome switch_pairs(const std::vector<Pair>& pairs, const TranslationProvider& provider,
                           const SwitchConfig& config, int epoch);

// Drops a translated pair when some existing pair in the same target
// language has token-set Jaccard similarity >= theta on the topic text and
// >= theta on the content text. Survivor order is preserved.
std::vector<Pair> filter_translated_pairs(const std::vector<Pair>& translated,
                                          const std::vector<Pair>& existing, double theta);

// Indices into `translated` of the surviving pairs.
std::vector<std::size_t> filter_translated_indices(const std::vector<Pair>& translated,
                                                   const std::vector<Pair>& existing, double theta);

// Convenience wrapper around the default provider.
std::string pseudo_translate(const std::string& text, const std::string& source,
                             const std::string& target);

// Token-set Jaccard similarity on lowercased whitespace tokens; both-empty
// counts as identical (1.0).
double jaccard_token_similarity(const std::string& a, const std::string& b);

}  // namespace curricula
