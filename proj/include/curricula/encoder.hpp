#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "curricula/corpus.hpp"

namespace curricula {

struct EncoderConfig {
    int max_seq_len = 96;
    int ngram_size = 3;
    int hash_dim = 32768;
    int embed_dim = 64;
    std::uint64_t seed = 0;
};

// Throws ConfigError if max_seq_len < 1 or not hash_dim >= embed_dim >= 2.
void validate(const EncoderConfig& config);

using ProjectionMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// The single trainable object: a shared linear projection applied to hashed
// features of topics and contents alike (tied bi-encoder).
struct EncoderParams {
    EncoderConfig config;
    ProjectionMatrix projection;  // hash_dim x embed_dim
};

// Sparse hashed-count vector; entries sorted by bucket, buckets unique.
struct SparseFeatures {
    std::vector<std::pair<std::uint32_t, double>> counts;
    bool empty() const { return counts.empty(); }
    double squared_norm() const;
};

// Unit vector unless the input text produced zero features, in which case
// the all-zeros vector is returned with the degenerate flag set.
struct Embedding {
    Eigen::VectorXd vector;
    bool degenerate = false;
};

// Lowercased, Unicode-whitespace-split tokens; the first max_seq_len kept.
std::vector<std::string> tokenize_truncate(std::string_view text, int max_seq_len);

// Pads each token with '#' boundary markers, hashes every byte n-gram with
// 64-bit FNV-1a and accumulates counts modulo hash_dim. Deterministic across
// runs and platforms.
SparseFeatures hash_features(const std::vector<std::string>& tokens, const EncoderConfig& config);

// tokenize_truncate + hash_features.
SparseFeatures featurize(std::string_view text, const EncoderConfig& config);

// normalize(features . projection). Throws ContractViolation if a feature
// bucket is out of range for the projection.
Embedding embed(const EncoderParams& params, const SparseFeatures& features);

// Row i is the embedding of the i-th item in ascending-id order (the order
// Corpus stores). Degenerate inputs produce all-zero rows.
struct CorpusEmbeddings {
    Eigen::MatrixXd topics;    // |topics| x embed_dim
    Eigen::MatrixXd contents;  // |contents| x embed_dim
};

CorpusEmbeddings embed_corpus(const EncoderParams& params, const Corpus& corpus,
                              const EncoderConfig& config, int threads = 1);

// Projection entries i.i.d. uniform in [-1/sqrt(hash_dim), +1/sqrt(hash_dim)]
// from the seeded generator.
EncoderParams init_params(const EncoderConfig& config);

// Checkpoint file: little-endian header (magic "CRCLENC1", u32 hash_dim,
// u32 embed_dim, u32 ngram_size, u32 max_seq_len) then row-major f64 values.
void save_params(const EncoderParams& params, const std::filesystem::path& path);
EncoderParams load_params(const std::filesystem::path& path);

}  // namespace curricula
