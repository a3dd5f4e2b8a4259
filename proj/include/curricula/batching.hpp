#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "curricula/corpus.hpp"

namespace curricula {

// One training example. epoch_text_* hold the texts actually fed to the
// encoder this epoch (possibly translated); ids always refer to the corpus.
struct Pair {
    std::string topic_id;
    std::string content_id;
    std::string epoch_text_topic;
    std::string epoch_text_content;
    std::string language;

    bool operator==(const Pair&) const = default;
};

struct Batch {
    std::vector<Pair> pairs;
};

// topic id -> non-correlated content ids ranked by descending similarity.
struct HardNegativePool {
    std::map<std::string, std::vector<std::pair<std::string, double>>> by_topic;
};

// Greedy randomized packing: pairs are shuffled with the seeded generator,
// then each is placed into the first unfilled batch where it neither
// duplicates a topic/content id nor creates an off-diagonal true
// correlation; a pair conflicting with every open batch opens a new one.
// Every input pair appears exactly once; trailing batches may be short.
std::vector<Batch> constrained_shuffle(const std::vector<Pair>& pairs,
                                       const CorrelationSet& correlations, std::size_t batch_size,
                                       std::uint64_t seed);

// Counts off-diagonal correlated (topic_i, content_j) hits plus duplicate
// topic/content id occurrences across all batches; 0 means valid.
std::size_t verify_batches(const std::vector<Batch>& batches, const CorrelationSet& correlations);

// For each topic, the k most similar non-correlated contents by current
// cosine similarity, descending (ties broken by ascending content id).
// Embedding rows follow ascending-id order, matching embed_corpus.
HardNegativePool mine_hard_negatives(const std::vector<std::string>& topic_ids,
                                     const Eigen::MatrixXd& topic_embeddings,
                                     const std::vector<std::string>& content_ids,
                                     const Eigen::MatrixXd& content_embeddings,
                                     const CorrelationSet& correlations, std::size_t k);

}  // namespace curricula
