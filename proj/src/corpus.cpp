#include "curricula/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "curricula/csv.hpp"
#include "curricula/errors.hpp"
#include "curricula/rng.hpp"

namespace curricula {

namespace {

const std::vector<std::string> kTopicsHeader = {
    "id", "title", "description", "language", "parent_id", "channel_id", "has_content"};
const std::vector<std::string> kContentHeader = {
    "id", "title", "description", "kind", "language", "text_snippet"};
const std::vector<std::string> kCorrelationsHeader = {"topic_id", "content_ids"};

bool valid_language_code(const std::string& code) {
    if (code.size() != 2) return false;
    return code[0] >= 'a' && code[0] <= 'z' && code[1] >= 'a' && code[1] <= 'z';
}

void check_header(const csv::Row& row, const std::vector<std::string>& expected,
                  const std::string& origin) {
    if (row.fields != expected) {
        std::string want;
        for (std::size_t i = 0; i < expected.size(); ++i) {
            if (i) want += ',';
            want += expected[i];
        }
        throw IngestError(origin + ": header mismatch, expected '" + want + "'");
    }
}

void check_width(const csv::Row& row, std::size_t expected, const std::string& origin) {
    if (row.fields.size() != expected) {
        throw IngestError(origin + ": row " + std::to_string(row.row_no) + " has " +
                          std::to_string(row.fields.size()) + " fields, expected " +
                          std::to_string(expected));
    }
}

bool parse_bool(const std::string& text, const std::string& origin, std::size_t row_no) {
    if (text == "true" || text == "1") return true;
    if (text == "false" || text == "0") return false;
    throw IngestError(origin + ": row " + std::to_string(row_no) + ": bad boolean '" + text + "'");
}

std::vector<std::string> split_ws(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

}  // namespace

ContentKind parse_content_kind(const std::string& text) {
    if (text == "document") return ContentKind::document;
    if (text == "video") return ContentKind::video;
    if (text == "exercise") return ContentKind::exercise;
    if (text == "audio") return ContentKind::audio;
    if (text == "html") return ContentKind::html;
    throw IngestError("unknown content kind '" + text + "'");
}

std::string to_string(ContentKind kind) {
    switch (kind) {
        case ContentKind::document: return "document";
        case ContentKind::video: return "video";
        case ContentKind::exercise: return "exercise";
        case ContentKind::audio: return "audio";
        case ContentKind::html: return "html";
    }
    throw ContractViolation("invalid ContentKind value");
}

void CorrelationSet::add(const std::string& topic_id, const std::string& content_id) {
    by_topic_[topic_id].insert(content_id);
}

bool CorrelationSet::contains(const std::string& topic_id, const std::string& content_id) const {
    auto it = by_topic_.find(topic_id);
    return it != by_topic_.end() && it->second.count(content_id) > 0;
}

const std::set<std::string>* CorrelationSet::find(const std::string& topic_id) const {
    auto it = by_topic_.find(topic_id);
    return it == by_topic_.end() ? nullptr : &it->second;
}

CorrelationSet::Map CorrelationSet::reversed() const {
    Map rev;
    for (const auto& [topic_id, contents] : by_topic_) {
        for (const auto& content_id : contents) rev[content_id].insert(topic_id);
    }
    return rev;
}

const Topic& Corpus::topic(const std::string& id) const {
    auto it = topic_index.find(id);
    if (it == topic_index.end()) throw LookupError("unknown topic id '" + id + "'");
    return topics[it->second];
}

const ContentItem& Corpus::content(const std::string& id) const {
    auto it = content_index.find(id);
    if (it == content_index.end()) throw LookupError("unknown content id '" + id + "'");
    return contents[it->second];
}

void Corpus::rebuild_index() {
    topic_index.clear();
    content_index.clear();
    for (std::size_t i = 0; i < topics.size(); ++i) topic_index[topics[i].id] = i;
    for (std::size_t i = 0; i < contents.size(); ++i) content_index[contents[i].id] = i;
}

void validate_corpus(const Corpus& corpus) {
    std::unordered_set<std::string> topic_ids;
    for (const auto& t : corpus.topics) {
        if (!topic_ids.insert(t.id).second) throw IngestError("duplicate topic id '" + t.id + "'");
        if (!valid_language_code(t.language)) {
            throw IngestError("topic '" + t.id + "': malformed language code '" + t.language + "'");
        }
    }
    std::unordered_set<std::string> content_ids;
    for (const auto& c : corpus.contents) {
        if (!content_ids.insert(c.id).second) {
            throw IngestError("duplicate content id '" + c.id + "'");
        }
        if (!valid_language_code(c.language)) {
            throw IngestError("content '" + c.id + "': malformed language code '" + c.language + "'");
        }
    }
    for (const auto& t : corpus.topics) {
        if (t.parent_id.empty()) continue;
        auto it = corpus.topic_index.find(t.parent_id);
        if (it == corpus.topic_index.end()) {
            throw IngestError("topic '" + t.id + "': unknown parent '" + t.parent_id + "'");
        }
        if (corpus.topics[it->second].channel_id != t.channel_id) {
            throw IngestError("topic '" + t.id + "': parent '" + t.parent_id +
                              "' is in a different channel");
        }
    }
    // Acyclicity of the parent relation: 0 = unvisited, 1 = on current path, 2 = done.
    std::unordered_map<std::string, int> color;
    for (const auto& t : corpus.topics) {
        std::vector<const Topic*> path;
        const Topic* node = &t;
        while (node != nullptr && color[node->id] == 0) {
            color[node->id] = 1;
            path.push_back(node);
            node = node->parent_id.empty() ? nullptr : &corpus.topic(node->parent_id);
        }
        if (node != nullptr && color[node->id] == 1) {
            throw IngestError("parent cycle involving topic '" + node->id + "'");
        }
        for (const Topic* p : path) color[p->id] = 2;
    }
    for (const auto& [topic_id, contents] : corpus.correlations.by_topic()) {
        if (contents.empty()) {
            throw IngestError("correlation set for topic '" + topic_id + "' is empty");
        }
        if (!topic_ids.count(topic_id)) {
            throw IngestError("correlations reference unknown topic '" + topic_id + "'");
        }
        for (const auto& cid : contents) {
            if (!content_ids.count(cid)) {
                throw IngestError("correlations reference unknown content '" + cid + "'");
            }
        }
    }
}

Corpus load_corpus(const std::filesystem::path& topics_path,
                   const std::filesystem::path& content_path,
                   const std::filesystem::path& correlations_path) {
    Corpus corpus;

    const auto topic_rows = csv::parse_file(topics_path);
    const std::string topics_origin = topics_path.string();
    if (topic_rows.empty()) throw IngestError(topics_origin + ": missing header row");
    check_header(topic_rows.front(), kTopicsHeader, topics_origin);
    for (std::size_t i = 1; i < topic_rows.size(); ++i) {
        const auto& row = topic_rows[i];
        check_width(row, kTopicsHeader.size(), topics_origin);
        Topic t;
        t.id = row.fields[0];
        t.title = row.fields[1];
        t.description = row.fields[2];
        t.language = row.fields[3];
        t.parent_id = row.fields[4];
        t.channel_id = row.fields[5];
        t.has_content = parse_bool(row.fields[6], topics_origin, row.row_no);
        if (t.id.empty()) {
            throw IngestError(topics_origin + ": row " + std::to_string(row.row_no) + ": empty id");
        }
        if (!valid_language_code(t.language)) {
            throw IngestError(topics_origin + ": row " + std::to_string(row.row_no) +
                              ": malformed language code '" + t.language + "'");
        }
        corpus.topics.push_back(std::move(t));
    }
    std::sort(corpus.topics.begin(), corpus.topics.end(),
              [](const Topic& a, const Topic& b) { return a.id < b.id; });
    for (std::size_t i = 1; i < corpus.topics.size(); ++i) {
        if (corpus.topics[i].id == corpus.topics[i - 1].id) {
            throw IngestError(topics_origin + ": duplicate topic id '" + corpus.topics[i].id + "'");
        }
    }

    const auto content_rows = csv::parse_file(content_path);
    const std::string content_origin = content_path.string();
    if (content_rows.empty()) throw IngestError(content_origin + ": missing header row");
    check_header(content_rows.front(), kContentHeader, content_origin);
    for (std::size_t i = 1; i < content_rows.size(); ++i) {
        const auto& row = content_rows[i];
        check_width(row, kContentHeader.size(), content_origin);
        ContentItem c;
        c.id = row.fields[0];
        c.title = row.fields[1];
        c.description = row.fields[2];
        try {
            c.kind = parse_content_kind(row.fields[3]);
        } catch (const IngestError& e) {
            throw IngestError(content_origin + ": row " + std::to_string(row.row_no) + ": " +
                              e.what());
        }
        c.language = row.fields[4];
        c.text_snippet = row.fields[5];
        if (c.id.empty()) {
            throw IngestError(content_origin + ": row " + std::to_string(row.row_no) + ": empty id");
        }
        if (!valid_language_code(c.language)) {
            throw IngestError(content_origin + ": row " + std::to_string(row.row_no) +
                              ": malformed language code '" + c.language + "'");
        }
        corpus.contents.push_back(std::move(c));
    }
    std::sort(corpus.contents.begin(), corpus.contents.end(),
              [](const ContentItem& a, const ContentItem& b) { return a.id < b.id; });
    for (std::size_t i = 1; i < corpus.contents.size(); ++i) {
        if (corpus.contents[i].id == corpus.contents[i - 1].id) {
            throw IngestError(content_origin + ": duplicate content id '" + corpus.contents[i].id +
                              "'");
        }
    }

    corpus.rebuild_index();

    const auto corr_rows = csv::parse_file(correlations_path);
    const std::string corr_origin = correlations_path.string();
    if (corr_rows.empty()) throw IngestError(corr_origin + ": missing header row");
    check_header(corr_rows.front(), kCorrelationsHeader, corr_origin);
    for (std::size_t i = 1; i < corr_rows.size(); ++i) {
        const auto& row = corr_rows[i];
        check_width(row, kCorrelationsHeader.size(), corr_origin);
        const std::string& topic_id = row.fields[0];
        if (!corpus.topic_index.count(topic_id)) {
            throw IngestError(corr_origin + ": row " + std::to_string(row.row_no) +
                              ": dangling reference to topic '" + topic_id + "'");
        }
        if (corpus.correlations.find(topic_id) != nullptr) {
            throw IngestError(corr_origin + ": row " + std::to_string(row.row_no) +
                              ": duplicate correlations row for topic '" + topic_id + "'");
        }
        const auto content_ids = split_ws(row.fields[1]);
        if (content_ids.empty()) {
            throw IngestError(corr_origin + ": row " + std::to_string(row.row_no) +
                              ": empty content id list for topic '" + topic_id + "'");
        }
        for (const auto& cid : content_ids) {
            if (!corpus.content_index.count(cid)) {
                throw IngestError(corr_origin + ": row " + std::to_string(row.row_no) +
                                  ": dangling reference to content '" + cid + "'");
            }
            corpus.correlations.add(topic_id, cid);
        }
    }

    validate_corpus(corpus);
    return corpus;
}

Corpus load_corpus_dir(const std::filesystem::path& dir) {
    return load_corpus(dir / "topics.csv", dir / "content.csv", dir / "correlations.csv");
}

void write_corpus(const Corpus& corpus, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);

    {
        std::ofstream out(dir / "topics.csv", std::ios::binary);
        if (!out) throw IngestError("cannot write " + (dir / "topics.csv").string());
        csv::write_row(out, kTopicsHeader);
        for (const auto& t : corpus.topics) {
            csv::write_row(out, {t.id, t.title, t.description, t.language, t.parent_id,
                                 t.channel_id, t.has_content ? "true" : "false"});
        }
    }
    {
        std::ofstream out(dir / "content.csv", std::ios::binary);
        if (!out) throw IngestError("cannot write " + (dir / "content.csv").string());
        csv::write_row(out, kContentHeader);
        for (const auto& c : corpus.contents) {
            csv::write_row(out, {c.id, c.title, c.description, to_string(c.kind), c.language,
                                 c.text_snippet});
        }
    }
    {
        std::ofstream out(dir / "correlations.csv", std::ios::binary);
        if (!out) throw IngestError("cannot write " + (dir / "correlations.csv").string());
        csv::write_row(out, kCorrelationsHeader);
        for (const auto& [topic_id, contents] : corpus.correlations.by_topic()) {
            std::string joined;
            for (const auto& cid : contents) {
                if (!joined.empty()) joined += ' ';
                joined += cid;
            }
            csv::write_row(out, {topic_id, joined});
        }
    }
}

std::string topic_breadcrumb_text(const Corpus& corpus, const std::string& topic_id) {
    const Topic* node = &corpus.topic(topic_id);
    std::vector<const Topic*> chain = {node};
    while (!node->parent_id.empty()) {
        node = &corpus.topic(node->parent_id);
        chain.push_back(node);
        if (chain.size() > corpus.topics.size()) {
            throw ContractViolation("parent cycle reached from topic '" + topic_id + "'");
        }
    }
    std::string text;
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
        if (!text.empty()) text += " > ";
        text += (*it)->title;
    }
    const std::string& description = chain.front()->description;
    if (!description.empty()) {
        text += ' ';
        text += description;
    }
    return text;
}

std::string content_item_text(const ContentItem& item) {
    return item.title + " " + item.description + " " + item.text_snippet;
}

namespace {

// Generator texture. Topic descriptions repeat tokens from a small shared
// per-language pool so that, at random init, the shared mass dominates every
// similarity; the per-topic cluster tokens carry the alignment signal.
constexpr std::size_t kSharedPoolSize = 8;
constexpr std::size_t kSharedTitleTokens = 2;
constexpr std::size_t kSharedDescDraws = 24;
constexpr std::size_t kClusterTitleTokens = 3;
constexpr std::size_t kClusterDescTokens = 6;
constexpr std::size_t kSnippetClusterTokens = 3;
constexpr std::size_t kSharedSnippetTokens = 2;  // <= 20% of each content's tokens

std::string random_token(Rng& rng, std::unordered_set<std::string>& used) {
    static const char letters[] = "abcdefghijklmnopqrstuvwxyz";
    for (;;) {
        const std::size_t len = 5 + uniform_index(rng, 4);
        std::string tok;
        tok.reserve(len);
        for (std::size_t i = 0; i < len; ++i) tok.push_back(letters[uniform_index(rng, 26)]);
        if (used.insert(tok).second) return tok;
    }
}

std::string join(const std::vector<std::string>& tokens) {
    std::string out;
    for (const auto& t : tokens) {
        if (!out.empty()) out += ' ';
        out += t;
    }
    return out;
}

std::string padded_id(char prefix, std::size_t value, int width) {
    std::string digits = std::to_string(value);
    std::string out(1, prefix);
    out.append(static_cast<std::size_t>(width) > digits.size() ? width - digits.size() : 0, '0');
    out += digits;
    return out;
}

}  // namespace

Corpus generate_synthetic_corpus(std::size_t n_topics,
                                 std::size_t contents_per_topic,
                                 const std::set<std::string>& languages,
                                 std::size_t vocab_per_cluster,
                                 std::uint64_t seed) {
    if (n_topics == 0) throw ArgumentError("generate_synthetic_corpus: n_topics must be >= 1");
    if (contents_per_topic == 0) {
        throw ArgumentError("generate_synthetic_corpus: contents_per_topic must be >= 1");
    }
    if (vocab_per_cluster == 0) {
        throw ArgumentError("generate_synthetic_corpus: vocab_per_cluster must be >= 1");
    }
    if (languages.empty()) {
        throw ArgumentError("generate_synthetic_corpus: languages must be non-empty");
    }
    for (const auto& lang : languages) {
        if (!valid_language_code(lang)) {
            throw ArgumentError("generate_synthetic_corpus: malformed language code '" + lang + "'");
        }
    }

    Rng rng(seed);
    std::unordered_set<std::string> used_tokens;
    const std::vector<std::string> langs(languages.begin(), languages.end());

    std::map<std::string, std::vector<std::string>> shared_pool;
    for (const auto& lang : langs) {
        auto& pool = shared_pool[lang];
        for (std::size_t i = 0; i < kSharedPoolSize; ++i) pool.push_back(random_token(rng, used_tokens));
    }

    const auto kinds = {ContentKind::document, ContentKind::video, ContentKind::exercise,
                        ContentKind::audio, ContentKind::html};
    const std::vector<ContentKind> kind_cycle(kinds);

    Corpus corpus;
    std::size_t content_counter = 0;
    for (std::size_t i = 0; i < n_topics; ++i) {
        const std::string& lang = langs[i % langs.size()];
        const auto& pool = shared_pool[lang];

        std::vector<std::string> cluster;
        cluster.reserve(vocab_per_cluster);
        for (std::size_t k = 0; k < vocab_per_cluster; ++k) {
            cluster.push_back(random_token(rng, used_tokens));
        }
        const std::size_t title_end = std::min(kClusterTitleTokens, cluster.size());
        const std::size_t desc_end = std::min(title_end + kClusterDescTokens, cluster.size());

        Topic topic;
        topic.id = padded_id('t', i, 5);
        topic.channel_id = "main";
        topic.language = lang;
        topic.has_content = true;
        {
            std::vector<std::string> title_tokens;
            for (std::size_t k = 0; k < kSharedTitleTokens; ++k) {
                title_tokens.push_back(pool[uniform_index(rng, pool.size())]);
            }
            title_tokens.insert(title_tokens.end(), cluster.begin(), cluster.begin() + title_end);
            topic.title = join(title_tokens);
        }
        {
            std::vector<std::string> desc_tokens;
            for (std::size_t k = 0; k < kSharedDescDraws; ++k) {
                desc_tokens.push_back(pool[uniform_index(rng, pool.size())]);
            }
            desc_tokens.insert(desc_tokens.end(), cluster.begin() + title_end,
                               cluster.begin() + desc_end);
            topic.description = join(desc_tokens);
        }

        for (std::size_t j = 0; j < contents_per_topic; ++j) {
            ContentItem item;
            item.id = padded_id('c', content_counter, 6);
            item.kind = kind_cycle[content_counter % kind_cycle.size()];
            item.language = lang;
            ++content_counter;

            std::vector<std::string> title_tokens(cluster.begin(), cluster.begin() + title_end);
            item.title = join(title_tokens);
            std::vector<std::string> desc_tokens(cluster.begin() + title_end,
                                                 cluster.begin() + desc_end);
            item.description = join(desc_tokens);

            std::vector<std::string> snippet_tokens;
            std::size_t cluster_token_count = title_end + (desc_end - title_end);
            for (std::size_t k = 0; k < kSnippetClusterTokens; ++k) {
                const std::size_t lo = desc_end < cluster.size() ? desc_end : 0;
                snippet_tokens.push_back(cluster[lo + uniform_index(rng, cluster.size() - lo)]);
                ++cluster_token_count;
            }
            // Keep the shared fraction strictly under 20% of the item's tokens.
            const std::size_t shared_budget = std::min(kSharedSnippetTokens, cluster_token_count / 5);
            for (std::size_t k = 0; k < shared_budget; ++k) {
                snippet_tokens.push_back(pool[uniform_index(rng, pool.size())]);
            }
            item.text_snippet = join(snippet_tokens);

            corpus.correlations.add(topic.id, item.id);
            corpus.contents.push_back(std::move(item));
        }
        corpus.topics.push_back(std::move(topic));
    }

    corpus.rebuild_index();
    validate_corpus(corpus);
    return corpus;
}

}  // namespace curricula
