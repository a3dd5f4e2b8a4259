#include "curricula/folds.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "curricula/csv.hpp"
#include "curricula/errors.hpp"
#include "curricula/rng.hpp"

namespace curricula {

namespace {

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

}  // namespace

FoldAssignment greedy_assign(const CorrelationSet& correlations, int n_folds, std::uint64_t seed,
                             bool shuffle_ties) {
    if (n_folds < 2) throw ArgumentError("greedy_assign: n_folds must be >= 2");
    if (correlations.empty()) throw ArgumentError("greedy_assign: no correlated topics");

    std::vector<std::string> topics;
    topics.reserve(correlations.size());
    for (const auto& [topic_id, contents] : correlations.by_topic()) topics.push_back(topic_id);

    std::unordered_map<std::string, std::size_t> topic_pos;
    for (std::size_t i = 0; i < topics.size(); ++i) topic_pos[topics[i]] = i;

    // Equal-key order is ascending id unless the caller asks for a seeded
    // shuffle, in which case a random rank replaces the id everywhere.
    std::vector<std::size_t> rank(topics.size());
    std::iota(rank.begin(), rank.end(), 0);
    if (shuffle_ties) {
        Rng rng(seed);
        shuffle(rank, rng);
    }

    const auto content_sets = [&] {
        std::vector<const std::set<std::string>*> sets(topics.size());
        for (std::size_t i = 0; i < topics.size(); ++i) sets[i] = correlations.find(topics[i]);
        return sets;
    }();

    // Topics sharing any content item form one component; a component always
    // fits into a single fold, so walking components whole keeps every
    // content's fold spread at one.
    UnionFind uf(topics.size());
    {
        std::unordered_map<std::string, std::size_t> first_owner;
        for (std::size_t i = 0; i < topics.size(); ++i) {
            for (const auto& cid : *content_sets[i]) {
                auto [it, inserted] = first_owner.emplace(cid, i);
                if (!inserted) uf.unite(i, it->second);
            }
        }
    }

    std::unordered_map<std::size_t, std::vector<std::size_t>> components;
    for (std::size_t i = 0; i < topics.size(); ++i) components[uf.find(i)].push_back(i);

    const auto key_less = [&](std::size_t a, std::size_t b) {
        const std::size_t ca = content_sets[a]->size();
        const std::size_t cb = content_sets[b]->size();
        if (ca != cb) return ca > cb;
        return rank[a] < rank[b];
    };

    // Components ordered by descending total content count, then by their
    // best topic's key; topics within a component leave the frontier in
    // descending-content-count order, so neighbours of placed topics always
    // see a positive fold affinity.
    std::vector<std::vector<std::size_t>> ordered_components;
    ordered_components.reserve(components.size());
    for (auto& [root, members] : components) {
        std::sort(members.begin(), members.end(), key_less);
        ordered_components.push_back(std::move(members));
    }
    std::sort(ordered_components.begin(), ordered_components.end(),
              [&](const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
                  std::size_t ta = 0, tb = 0;
                  for (std::size_t i : a) ta += content_sets[i]->size();
                  for (std::size_t i : b) tb += content_sets[i]->size();
                  if (ta != tb) return ta > tb;
                  return key_less(a.front(), b.front());
              });

    FoldAssignment assignment;
    assignment.n_folds = n_folds;
    std::vector<std::unordered_set<std::string>> fold_contents(n_folds);
    std::vector<std::size_t> fold_topic_count(n_folds, 0);

    const auto assign_topic = [&](std::size_t t) {
        int best_fold = 0;
        std::size_t best_score = 0;
        bool first = true;
        for (int f = 0; f < n_folds; ++f) {
            std::size_t score = 0;
            for (const auto& cid : *content_sets[t]) score += fold_contents[f].count(cid);
            const bool better =
                first || score > best_score ||
                (score == best_score && fold_topic_count[f] < fold_topic_count[best_fold]);
            if (better) {
                best_fold = f;
                best_score = score;
                first = false;
            }
        }
        assignment.fold_of[topics[t]] = best_fold;
        ++fold_topic_count[best_fold];
        for (const auto& cid : *content_sets[t]) fold_contents[best_fold].insert(cid);
    };

    std::unordered_map<std::string, std::vector<std::size_t>> content_owners;
    for (std::size_t i = 0; i < topics.size(); ++i) {
        for (const auto& cid : *content_sets[i]) content_owners[cid].push_back(i);
    }

    std::vector<bool> placed(topics.size(), false);
    for (const auto& component : ordered_components) {
        std::vector<std::size_t> frontier;  // discovered, not yet placed
        std::vector<bool> discovered(topics.size(), false);
        frontier.push_back(component.front());
        discovered[component.front()] = true;
        while (!frontier.empty()) {
            const auto best = std::min_element(frontier.begin(), frontier.end(),
                                               [&](std::size_t a, std::size_t b) {
                                                   return key_less(a, b);
                                               });
            const std::size_t t = *best;
            frontier.erase(best);
            if (placed[t]) continue;
            assign_topic(t);
            placed[t] = true;
            for (const auto& cid : *content_sets[t]) {
                for (std::size_t neighbour : content_owners[cid]) {
                    if (!placed[neighbour] && !discovered[neighbour]) {
                        discovered[neighbour] = true;
                        frontier.push_back(neighbour);
                    }
                }
            }
        }
    }

    return assignment;
}

OverlapReport overlap_objective(const FoldAssignment& assignment,
                                const CorrelationSet& correlations) {
    if (assignment.n_folds < 1) throw ContractViolation("overlap_objective: n_folds must be >= 1");
    OverlapReport report;
    report.per_fold_sizes.assign(static_cast<std::size_t>(assignment.n_folds), 0);
    for (const auto& [topic_id, fold] : assignment.fold_of) {
        if (fold < 0 || fold >= assignment.n_folds) {
            throw ContractViolation("overlap_objective: fold index " + std::to_string(fold) +
                                    " out of range for topic '" + topic_id + "'");
        }
        ++report.per_fold_sizes[static_cast<std::size_t>(fold)];
    }

    std::map<std::string, std::set<int>> folds_of_content;
    for (const auto& [topic_id, contents] : correlations.by_topic()) {
        const auto it = assignment.fold_of.find(topic_id);
        if (it == assignment.fold_of.end()) {
            throw ContractViolation("overlap_objective: assignment does not cover topic '" +
                                    topic_id + "'");
        }
        for (const auto& cid : contents) folds_of_content[cid].insert(it->second);
    }
    for (const auto& [cid, folds] : folds_of_content) {
        report.per_content_fold_spread[cid] = static_cast<int>(folds.size());
        report.objective += static_cast<long long>(folds.size()) - 1;
    }
    return report;
}

void write_folds(const FoldAssignment& assignment, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IngestError("cannot write " + path.string());
    csv::write_row(out, {"topic_id", "fold"});
    for (const auto& [topic_id, fold] : assignment.fold_of) {
        csv::write_row(out, {topic_id, std::to_string(fold)});
    }
}

FoldAssignment load_folds(const std::filesystem::path& path) {
    const auto rows = csv::parse_file(path);
    const std::vector<std::string> header = {"topic_id", "fold"};
    if (rows.empty() || rows.front().fields != header) {
        throw IngestError(path.string() + ": expected header topic_id,fold");
    }
    FoldAssignment assignment;
    assignment.n_folds = 1;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& row = rows[i];
        if (row.fields.size() != 2) {
            throw IngestError(path.string() + ": row " + std::to_string(row.row_no) +
                              " has " + std::to_string(row.fields.size()) + " fields, expected 2");
        }
        int fold = 0;
        try {
            fold = std::stoi(row.fields[1]);
        } catch (const std::exception&) {
            throw IngestError(path.string() + ": row " + std::to_string(row.row_no) +
                              ": bad fold index '" + row.fields[1] + "'");
        }
        if (fold < 0) {
            throw IngestError(path.string() + ": row " + std::to_string(row.row_no) +
                              ": negative fold index");
        }
        if (!assignment.fold_of.emplace(row.fields[0], fold).second) {
            throw IngestError(path.string() + ": duplicate topic '" + row.fields[0] + "'");
        }
        assignment.n_folds = std::max(assignment.n_folds, fold + 1);
    }
    return assignment;
}

}  // namespace curricula
