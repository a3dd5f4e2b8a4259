#include "curricula/batching.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "curricula/errors.hpp"
#include "curricula/rng.hpp"

namespace curricula {

namespace {

struct OpenBatch {
    std::vector<Pair> pairs;
    std::unordered_set<std::string> topic_ids;
    std::unordered_set<std::string> content_ids;
};

using ReverseMap = std::unordered_map<std::string, std::vector<std::string>>;

ReverseMap reverse_correlations(const CorrelationSet& correlations) {
    ReverseMap rev;
    for (const auto& [topic_id, contents] : correlations.by_topic()) {
        for (const auto& cid : contents) rev[cid].push_back(topic_id);
    }
    return rev;
}

// A pair fits iff its ids are new to the batch and no true correlation ends
// up off the diagonal in either direction.
bool fits(const OpenBatch& batch, const Pair& pair, const CorrelationSet& correlations,
          const ReverseMap& rev) {
    if (batch.topic_ids.count(pair.topic_id) || batch.content_ids.count(pair.content_id)) {
        return false;
    }
    if (const auto* correlated = correlations.find(pair.topic_id)) {
        for (const auto& cid : *correlated) {
            if (batch.content_ids.count(cid)) return false;
        }
    }
    if (auto it = rev.find(pair.content_id); it != rev.end()) {
        for (const auto& tid : it->second) {
            if (batch.topic_ids.count(tid)) return false;
        }
    }
    return true;
}

}  // namespace

std::vector<Batch> constrained_shuffle(const std::vector<Pair>& pairs,
                                       const CorrelationSet& correlations, std::size_t batch_size,
                                       std::uint64_t seed) {
    if (batch_size < 2) throw ArgumentError("constrained_shuffle: batch_size must be >= 2");

    std::vector<Pair> shuffled = pairs;
    Rng rng(seed);
    shuffle(shuffled, rng);

    const ReverseMap rev = reverse_correlations(correlations);
    std::vector<OpenBatch> open;
    for (auto& pair : shuffled) {
        bool placed = false;
        for (auto& batch : open) {
            if (batch.pairs.size() >= batch_size) continue;
            if (!fits(batch, pair, correlations, rev)) continue;
            batch.topic_ids.insert(pair.topic_id);
            batch.content_ids.insert(pair.content_id);
            batch.pairs.push_back(std::move(pair));
            placed = true;
            break;
        }
        if (!placed) {
            OpenBatch fresh;
            fresh.topic_ids.insert(pair.topic_id);
            fresh.content_ids.insert(pair.content_id);
            fresh.pairs.push_back(std::move(pair));
            open.push_back(std::move(fresh));
        }
    }

    std::vector<Batch> batches;
    batches.reserve(open.size());
    for (auto& b : open) batches.push_back(Batch{std::move(b.pairs)});
    return batches;
}

std::size_t verify_batches(const std::vector<Batch>& batches, const CorrelationSet& correlations) {
    std::size_t violations = 0;
    for (const auto& batch : batches) {
        const auto& p = batch.pairs;
        for (std::size_t i = 0; i < p.size(); ++i) {
            for (std::size_t j = 0; j < p.size(); ++j) {
                if (i == j) continue;
                if (correlations.contains(p[i].topic_id, p[j].content_id)) ++violations;
            }
        }
        std::unordered_map<std::string, std::size_t> topic_count, content_count;
        for (const auto& pair : p) {
            ++topic_count[pair.topic_id];
            ++content_count[pair.content_id];
        }
        for (const auto& [id, count] : topic_count) {
            if (count > 1) violations += count - 1;
        }
        for (const auto& [id, count] : content_count) {
            if (count > 1) violations += count - 1;
        }
    }
    return violations;
}

HardNegativePool mine_hard_negatives(const std::vector<std::string>& topic_ids,
                                     const Eigen::MatrixXd& topic_embeddings,
                                     const std::vector<std::string>& content_ids,
                                     const Eigen::MatrixXd& content_embeddings,
                                     const CorrelationSet& correlations, std::size_t k) {
    if (k < 1) throw ArgumentError("mine_hard_negatives: k must be >= 1");
    if (topic_embeddings.rows() != static_cast<Eigen::Index>(topic_ids.size()) ||
        content_embeddings.rows() != static_cast<Eigen::Index>(content_ids.size())) {
        throw ContractViolation("mine_hard_negatives: id/embedding row mismatch");
    }

    HardNegativePool pool;
    for (std::size_t t = 0; t < topic_ids.size(); ++t) {
        const auto* correlated = correlations.find(topic_ids[t]);
        std::vector<std::pair<std::string, double>> candidates;
        for (std::size_t c = 0; c < content_ids.size(); ++c) {
            if (correlated != nullptr && correlated->count(content_ids[c])) continue;
            const double sim = topic_embeddings.row(static_cast<Eigen::Index>(t))
                                   .dot(content_embeddings.row(static_cast<Eigen::Index>(c)));
            candidates.emplace_back(content_ids[c], sim);
        }
        const std::size_t keep = std::min(k, candidates.size());
        std::partial_sort(candidates.begin(), candidates.begin() + keep, candidates.end(),
                          [](const auto& a, const auto& b) {
                              if (a.second != b.second) return a.second > b.second;
                              return a.first < b.first;
                          });
        candidates.resize(keep);
        if (!candidates.empty()) pool.by_topic[topic_ids[t]] = std::move(candidates);
    }
    return pool;
}

}  // namespace curricula
