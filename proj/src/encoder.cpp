#include "curricula/encoder.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <unordered_map>

#include "curricula/errors.hpp"
#include "curricula/parallel.hpp"
#include "curricula/rng.hpp"

namespace curricula {

namespace {

bool is_unicode_space(char32_t cp) {
    switch (cp) {
        case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D:
        case 0x20: case 0x85: case 0xA0: case 0x1680:
        case 0x2028: case 0x2029: case 0x202F: case 0x205F: case 0x3000:
            return true;
        default:
            return cp >= 0x2000 && cp <= 0x200A;
    }
}

// Decodes one UTF-8 code point starting at i; returns its byte length.
// Malformed bytes are passed through one at a time as opaque characters.
std::size_t decode_utf8(std::string_view text, std::size_t i, char32_t& cp) {
    const auto byte = [&](std::size_t k) { return static_cast<unsigned char>(text[k]); };
    const unsigned char b0 = byte(i);
    if (b0 < 0x80) {
        cp = b0;
        return 1;
    }
    std::size_t len = 0;
    if ((b0 & 0xE0) == 0xC0) len = 2;
    else if ((b0 & 0xF0) == 0xE0) len = 3;
    else if ((b0 & 0xF8) == 0xF0) len = 4;
    if (len == 0 || i + len > text.size()) {
        cp = b0;
        return 1;
    }
    char32_t value = b0 & (0x7F >> len);
    for (std::size_t k = 1; k < len; ++k) {
        if ((byte(i + k) & 0xC0) != 0x80) {
            cp = b0;
            return 1;
        }
        value = (value << 6) | (byte(i + k) & 0x3F);
    }
    cp = value;
    return len;
}

// 64-bit FNV-1a over the gram bytes; the offset basis doubles as the hash
// seed and is never changed, so buckets are stable across platforms.
constexpr std::uint64_t kFnvOffset = 14695981039346656037ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = kFnvOffset;
    for (char c : bytes) {
        h ^= static_cast<unsigned char>(c);
        h *= kFnvPrime;
    }
    return h;
}

void put_u32_le(std::ostream& out, std::uint32_t v) {
    const std::array<char, 4> b = {static_cast<char>(v & 0xFF), static_cast<char>((v >> 8) & 0xFF),
                                   static_cast<char>((v >> 16) & 0xFF),
                                   static_cast<char>((v >> 24) & 0xFF)};
    out.write(b.data(), b.size());
}

std::uint32_t get_u32_le(std::istream& in) {
    std::array<unsigned char, 4> b{};
    in.read(reinterpret_cast<char*>(b.data()), b.size());
    return std::uint32_t(b[0]) | std::uint32_t(b[1]) << 8 | std::uint32_t(b[2]) << 16 |
           std::uint32_t(b[3]) << 24;
}

void put_f64_le(std::ostream& out, double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    std::array<char, 8> b{};
    for (int k = 0; k < 8; ++k) b[k] = static_cast<char>((bits >> (8 * k)) & 0xFF);
    out.write(b.data(), b.size());
}

double get_f64_le(std::istream& in) {
    std::array<unsigned char, 8> b{};
    in.read(reinterpret_cast<char*>(b.data()), b.size());
    std::uint64_t bits = 0;
    for (int k = 0; k < 8; ++k) bits |= std::uint64_t(b[k]) << (8 * k);
    return std::bit_cast<double>(bits);
}

constexpr char kMagic[8] = {'C', 'R', 'C', 'L', 'E', 'N', 'C', '1'};

}  // namespace

void validate(const EncoderConfig& config) {
    if (config.max_seq_len < 1) throw ConfigError("encoder: max_seq_len must be >= 1");
    if (config.embed_dim < 2) throw ConfigError("encoder: embed_dim must be >= 2");
    if (config.hash_dim < config.embed_dim) {
        throw ConfigError("encoder: hash_dim must be >= embed_dim");
    }
    if (config.ngram_size < 1) throw ConfigError("encoder: ngram_size must be >= 1");
}

double SparseFeatures::squared_norm() const {
    double s = 0.0;
    for (const auto& [bucket, count] : counts) s += count * count;
    return s;
}

std::vector<std::string> tokenize_truncate(std::string_view text, int max_seq_len) {
    std::vector<std::string> tokens;
    std::string current;
    std::size_t i = 0;
    const auto flush = [&] {
        if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    };
    while (i < text.size() && tokens.size() < static_cast<std::size_t>(std::max(0, max_seq_len))) {
        char32_t cp = 0;
        const std::size_t len = decode_utf8(text, i, cp);
        if (is_unicode_space(cp)) {
            flush();
        } else if (len == 1) {
            char c = text[i];
            if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
            current.push_back(c);
        } else {
            current.append(text.substr(i, len));
        }
        i += len;
    }
    if (tokens.size() < static_cast<std::size_t>(std::max(0, max_seq_len))) flush();
    return tokens;
}

SparseFeatures hash_features(const std::vector<std::string>& tokens, const EncoderConfig& config) {
    validate(config);
    const std::size_t n = static_cast<std::size_t>(config.ngram_size);
    std::unordered_map<std::uint32_t, double> buckets;
    std::string padded;
    for (const auto& token : tokens) {
        padded.clear();
        padded.push_back('#');
        padded += token;
        padded.push_back('#');
        const std::uint64_t dim = static_cast<std::uint64_t>(config.hash_dim);
        if (padded.size() <= n) {
            buckets[static_cast<std::uint32_t>(fnv1a64(padded) % dim)] += 1.0;
        } else {
            for (std::size_t i = 0; i + n <= padded.size(); ++i) {
                const std::string_view gram(padded.data() + i, n);
                buckets[static_cast<std::uint32_t>(fnv1a64(gram) % dim)] += 1.0;
            }
        }
    }
    SparseFeatures features;
    features.counts.assign(buckets.begin(), buckets.end());
    std::sort(features.counts.begin(), features.counts.end());
    return features;
}

SparseFeatures featurize(std::string_view text, const EncoderConfig& config) {
    return hash_features(tokenize_truncate(text, config.max_seq_len), config);
}

Embedding embed(const EncoderParams& params, const SparseFeatures& features) {
    Embedding result;
    result.vector = Eigen::VectorXd::Zero(params.projection.cols());
    if (features.empty()) {
        result.degenerate = true;
        return result;
    }
    for (const auto& [bucket, count] : features.counts) {
        if (static_cast<Eigen::Index>(bucket) >= params.projection.rows()) {
            throw ContractViolation("feature bucket " + std::to_string(bucket) +
                                    " out of range for projection with " +
                                    std::to_string(params.projection.rows()) + " rows");
        }
        result.vector.noalias() += count * params.projection.row(bucket).transpose();
    }
    const double norm = result.vector.norm();
    if (norm == 0.0) {
        result.vector.setZero();
        result.degenerate = true;
        return result;
    }
    result.vector /= norm;
    return result;
}

CorpusEmbeddings embed_corpus(const EncoderParams& params, const Corpus& corpus,
                              const EncoderConfig& config, int threads) {
    CorpusEmbeddings out;
    out.topics.setZero(static_cast<Eigen::Index>(corpus.topics.size()), params.projection.cols());
    out.contents.setZero(static_cast<Eigen::Index>(corpus.contents.size()),
                         params.projection.cols());
    parallel_for(corpus.topics.size(), threads, [&](std::size_t i) {
        const auto features = featurize(topic_breadcrumb_text(corpus, corpus.topics[i].id), config);
        out.topics.row(static_cast<Eigen::Index>(i)) = embed(params, features).vector.transpose();
    });
    parallel_for(corpus.contents.size(), threads, [&](std::size_t i) {
        const auto features = featurize(content_item_text(corpus.contents[i]), config);
        out.contents.row(static_cast<Eigen::Index>(i)) = embed(params, features).vector.transpose();
    });
    return out;
}

EncoderParams init_params(const EncoderConfig& config) {
    validate(config);
    EncoderParams params;
    params.config = config;
    params.projection.resize(config.hash_dim, config.embed_dim);
    const double bound = 1.0 / std::sqrt(static_cast<double>(config.hash_dim));
    Rng rng(config.seed);
    for (Eigen::Index i = 0; i < params.projection.rows(); ++i) {
        for (Eigen::Index j = 0; j < params.projection.cols(); ++j) {
            params.projection(i, j) = uniform_real(rng, -bound, bound);
        }
    }
    return params;
}

void save_params(const EncoderParams& params, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IngestError("cannot write checkpoint: " + path.string());
    out.write(kMagic, sizeof(kMagic));
    put_u32_le(out, static_cast<std::uint32_t>(params.config.hash_dim));
    put_u32_le(out, static_cast<std::uint32_t>(params.config.embed_dim));
    put_u32_le(out, static_cast<std::uint32_t>(params.config.ngram_size));
    put_u32_le(out, static_cast<std::uint32_t>(params.config.max_seq_len));
    for (Eigen::Index i = 0; i < params.projection.rows(); ++i) {
        for (Eigen::Index j = 0; j < params.projection.cols(); ++j) {
            put_f64_le(out, params.projection(i, j));
        }
    }
    if (!out) throw IngestError("short write to checkpoint: " + path.string());
}

EncoderParams load_params(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IngestError("cannot open checkpoint: " + path.string());
    char magic[8] = {};
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
        throw IngestError("bad checkpoint magic in " + path.string());
    }
    EncoderParams params;
    params.config.hash_dim = static_cast<int>(get_u32_le(in));
    params.config.embed_dim = static_cast<int>(get_u32_le(in));
    params.config.ngram_size = static_cast<int>(get_u32_le(in));
    params.config.max_seq_len = static_cast<int>(get_u32_le(in));
    if (!in) throw IngestError("truncated checkpoint header in " + path.string());
    validate(params.config);
    params.projection.resize(params.config.hash_dim, params.config.embed_dim);
    for (Eigen::Index i = 0; i < params.projection.rows(); ++i) {
        for (Eigen::Index j = 0; j < params.projection.cols(); ++j) {
            params.projection(i, j) = get_f64_le(in);
        }
    }
    if (!in) throw IngestError("truncated checkpoint payload in " + path.string());
    in.peek();
    if (!in.eof()) throw IngestError("trailing bytes in checkpoint " + path.string());
    return params;
}

}  // namespace curricula
