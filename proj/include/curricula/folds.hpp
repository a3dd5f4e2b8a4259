#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "curricula/corpus.hpp"

namespace curricula {

struct FoldAssignment {
    std::map<std::string, int> fold_of;  // every correlated topic, exactly once
    int n_folds = 10;
};

struct OverlapReport {
    // sum over content ids of (distinct folds containing it - 1)
    long long objective = 0;
    std::vector<std::size_t> per_fold_sizes;           // topics per fold
    std::map<std::string, int> per_content_fold_spread;  // content id -> distinct folds
};

// Assigns every correlated topic to a fold so that a content item's topics
// land together whenever possible. Topics are processed one connected
// component of the topic-content graph at a time (components in descending
// total-content order, walked outward from their largest topic), and each
// topic goes to the fold maximizing the overlap of its content set with the
// fold's accumulated contents, ties broken by smallest current topic count,
// then lowest fold index. Deterministic; the seed only shuffles equal-key
// ordering when shuffle_ties is set.
FoldAssignment greedy_assign(const CorrelationSet& correlations, int n_folds, std::uint64_t seed,
                             bool shuffle_ties = false);

// Computes the overlap objective for an assignment; throws ContractViolation
// naming the first correlated topic the assignment does not cover.
OverlapReport overlap_objective(const FoldAssignment& assignment,
                                const CorrelationSet& correlations);

// folds.csv: topic_id,fold with a header row.
void write_folds(const FoldAssignment& assignment, const std::filesystem::path& path);
FoldAssignment load_folds(const std::filesystem::path& path);

}  // namespace curricula
