#pragma once

#include <Eigen/Core>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "curricula/corpus.hpp"
#include "curricula/encoder.hpp"
#include "curricula/folds.hpp"

namespace curricula {

// topic id -> ordered list of predicted content ids (no duplicates).
struct PredictionSet {
    std::map<std::string, std::vector<std::string>> by_topic;
};

struct MetricsReport {
    double mean_f2 = 0.0;
    std::map<std::string, double> per_topic_f2;
    long long tp = 0;
    long long fp = 0;
    long long fn = 0;
};

// Weighted harmonic mean of precision and recall; beta > 1 favours recall.
// Zero true positives give 0 by convention; the caller handles the
// empty-truth case (see row_f2). Throws ContractViolation on negative counts.
double fbeta(long long tp, long long fp, long long fn, double beta);

// F2 of one prediction row. Empty truth: 1.0 when the prediction is also
// empty, else 0.0.
double row_f2(const std::set<std::string>& predicted, const std::set<std::string>& truth);

// Contents ranked by descending cosine (ties: ascending id); returns those
// among the top k with similarity >= threshold, but always the top 1.
// Zero (degenerate) rows never appear; a degenerate topic yields no
// predictions at all.
std::vector<std::string> recommend(const Eigen::VectorXd& topic_embedding,
                                   const Eigen::MatrixXd& content_embeddings,
                                   const std::vector<std::string>& content_ids, std::size_t k,
                                   double threshold);

// Scores a prediction set against the correlations, restricted to the given
// topics; mean_f2 is the arithmetic mean of the per-topic values. Topics
// without predictions score as empty predictions.
MetricsReport score_predictions(const PredictionSet& predictions,
                                const CorrelationSet& correlations,
                                const std::vector<std::string>& topic_ids);

// Embeds the held-out fold's topics and every content item, recommends per
// topic and averages row F2. Throws ConfigError when the fold is empty.
MetricsReport evaluate_fold(const EncoderParams& params, const Corpus& corpus,
                            const FoldAssignment& assignment, int fold, std::size_t k,
                            double threshold, int threads = 1);

// Builds the prediction set itself (used by the recommend subcommand).
PredictionSet predict_topics(const EncoderParams& params, const Corpus& corpus,
                             const std::vector<std::string>& topic_ids, std::size_t k,
                             double threshold, int threads = 1);

// predictions.csv: topic_id,content_ids (space-separated), header row.
void write_predictions(const PredictionSet& predictions, const std::filesystem::path& path);

// Line-oriented key=value block (mean_f2, topics, tp, fp, fn).
std::string format_metrics(const MetricsReport& report);

// Machine-readable per-topic CSV: topic_id,f2 plus a final mean row.
void write_metrics_csv(const MetricsReport& report, const std::filesystem::path& path);

}  // namespace curricula
