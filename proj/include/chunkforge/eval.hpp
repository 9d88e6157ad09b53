#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "chunkforge/corpus.hpp"
#include "chunkforge/svm.hpp"

namespace chunkforge {

/// Sentences with at most this many tokens fall into the short bucket.
inline constexpr std::size_t kShortSentenceLimit = 20;

struct ChunkCounts {
    std::size_t true_positive = 0;
    std::size_t false_positive = 0;
    std::size_t false_negative = 0;

    ChunkCounts& operator+=(const ChunkCounts& other) {
        true_positive += other.true_positive;
        false_positive += other.false_positive;
        false_negative += other.false_negative;
        return *this;
    }

    bool operator==(const ChunkCounts&) const = default;
};

struct Metrics {
    double precision = 0.0;
    double recall = 0.0;
    double f_score = 0.0;
};

/// Exact-match chunk scoring: a prediction is a true positive iff a gold
/// chunk has the same (start, end, label).  Matching is one-to-one.
ChunkCounts score_chunks(std::span<const Chunk> gold,
                         std::span<const Chunk> predicted);

/// P = TP/(TP+FP), R = TP/(TP+FN), F = harmonic mean; 0/0 counts as 0.
Metrics prf(const ChunkCounts& counts);

struct BucketMetrics {
    ChunkCounts counts;
    Metrics metrics;
};

struct HoldoutResult {
    std::size_t total_sentences = 0;
    std::size_t train_sentences = 0;
    std::size_t test_sentences = 0;
    std::size_t rule_count = 0;
    std::size_t hyperplane_count = 0;
    std::size_t skipped_long = 0;
    ChunkCounts counts;
    Metrics metrics;
    BucketMetrics short_bucket;  // sentences of <= 20 tokens
    BucketMetrics long_bucket;   // sentences of > 20 tokens
};

/// Seeded shuffle, train on the first ceil(fraction * n) sentences, parse
/// and score the rest.  Rules and model are trained on the train part; the
/// symbol vocabulary covers the whole corpus so held-out tags stay known.
HoldoutResult holdout_evaluate(const Corpus& corpus, double train_fraction,
                               std::uint64_t seed, const TrainConfig& config);

struct FoldResult {
    Metrics metrics;
    ChunkCounts counts;
    std::size_t rule_count = 0;
    std::size_t hyperplane_count = 0;
    std::size_t skipped_long = 0;
};

struct KfoldResult {
    std::size_t total_sentences = 0;
    std::vector<FoldResult> folds;
    Metrics mean;                // arithmetic mean over folds
    BucketMetrics short_bucket;  // aggregated over all folds
    BucketMetrics long_bucket;
};

/// Seeded shuffle into k contiguous folds (sizes differing by at most 1);
/// fold i tests on fold i and trains on the rest.
KfoldResult kfold_cross_validate(const Corpus& corpus, std::size_t k,
                                 std::uint64_t seed, const TrainConfig& config);

enum class ReportStyle { text, kv };

void write_holdout_report(std::ostream& out, const HoldoutResult& result,
                          ReportStyle style);
void write_kfold_report(std::ostream& out, const KfoldResult& result,
                        ReportStyle style);

}  // namespace chunkforge
