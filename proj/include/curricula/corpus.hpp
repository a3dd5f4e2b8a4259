#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

namespace curricula {

enum class ContentKind { document, video, exercise, audio, html };

ContentKind parse_content_kind(const std::string& text);
std::string to_string(ContentKind kind);

// A node of a curriculum taxonomy tree. parent_id empty = root.
struct Topic {
    std::string id;
    std::string title;
    std::string description;
    std::string language;   // ISO-639-1
    std::string parent_id;  // empty for roots
    std::string channel_id;
    bool has_content = false;

    bool operator==(const Topic&) const = default;
};

// A learning resource to be aligned with topics.
struct ContentItem {
    std::string id;
    std::string title;
    std::string description;
    ContentKind kind = ContentKind::document;
    std::string language;
    std::string text_snippet;

    bool operator==(const ContentItem&) const = default;
};

// Ground-truth topic -> content associations. Ordered containers keep every
// iteration over it deterministic.
class CorrelationSet {
public:
    using Map = std::map<std::string, std::set<std::string>>;

    void add(const std::string& topic_id, const std::string& content_id);
    bool contains(const std::string& topic_id, const std::string& content_id) const;
    const std::set<std::string>* find(const std::string& topic_id) const;
    const Map& by_topic() const { return by_topic_; }
    std::size_t size() const { return by_topic_.size(); }
    bool empty() const { return by_topic_.empty(); }

    // content id -> topic ids that list it.
    Map reversed() const;

    bool operator==(const CorrelationSet&) const = default;

private:
    Map by_topic_;
};

// Immutable after load; topics and contents are kept sorted by ascending id,
// which is the row order every embedding matrix uses.
struct Corpus {
    std::vector<Topic> topics;
    std::vector<ContentItem> contents;
    CorrelationSet correlations;

    std::unordered_map<std::string, std::size_t> topic_index;
    std::unordered_map<std::string, std::size_t> content_index;

    const Topic& topic(const std::string& id) const;
    const ContentItem& content(const std::string& id) const;

    void rebuild_index();

    bool operator==(const Corpus& other) const {
        return topics == other.topics && contents == other.contents &&
               correlations == other.correlations;
    }
};

// Validates every corpus invariant (unique ids, referential integrity,
// acyclic parents, same-channel parents, non-empty correlation sets).
// Throws IngestError on the first violation.
void validate_corpus(const Corpus& corpus);

// Reads topics.csv, content.csv and correlations.csv. Fatal on missing
// files, schema mismatches, duplicate ids, dangling references (reported
// with the offending row number), parent cycles and malformed language
// codes.
Corpus load_corpus(const std::filesystem::path& topics_path,
                   const std::filesystem::path& content_path,
                   const std::filesystem::path& correlations_path);

// Convenience: DIR/topics.csv, DIR/content.csv, DIR/correlations.csv.
Corpus load_corpus_dir(const std::filesystem::path& dir);

// Writes the three files back; load_corpus(write_corpus(c)) == c.
void write_corpus(const Corpus& corpus, const std::filesystem::path& dir);

// Root-to-leaf ancestor titles joined by " > ", then the topic's own title,
// then its description. Throws LookupError for an unknown id.
std::string topic_breadcrumb_text(const Corpus& corpus, const std::string& topic_id);

// Text a content item contributes to the encoder.
std::string content_item_text(const ContentItem& item);

// Desk-scale corpus with one disjoint token cluster per topic; correlated
// contents draw >= 80% of their tokens from that cluster, languages are
// assigned round-robin, and the output is byte-identical for a fixed seed.
Corpus generate_synthetic_corpus(std::size_t n_topics,
                                 std::size_t contents_per_topic,
                                 const std::set<std::string>& languages,
                                 std::size_t vocab_per_cluster,
                                 std::uint64_t seed);

}  // namespace curricula
