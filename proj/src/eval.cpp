#include "chunkforge/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <set>
#include <tuple>

#include "chunkforge/error.hpp"
#include "chunkforge/features.hpp"
#include "chunkforge/parser.hpp"
#include "chunkforge/rng.hpp"
#include "chunkforge/rules.hpp"

namespace chunkforge {

namespace {

void check_disjoint(std::span<const Chunk> chunks, const char* which) {
    std::size_t previous_end = 0;
    for (std::size_t i = 0; i < chunks.size(); ++i) {
        if (chunks[i].start >= chunks[i].end) {
            throw Error(std::string(which) + " chunk has an empty span");
        }
        if (i > 0 && chunks[i].start < previous_end) {
            throw Error(std::string(which) +
                        " chunks overlap or are out of order");
        }
        previous_end = chunks[i].end;
    }
}

}  // namespace

ChunkCounts score_chunks(std::span<const Chunk> gold,
                         std::span<const Chunk> predicted) {
    check_disjoint(gold, "gold");
    check_disjoint(predicted, "predicted");

    std::set<std::tuple<std::size_t, std::size_t, std::string>> gold_set;
    for (const Chunk& chunk : gold) {
        gold_set.emplace(chunk.start, chunk.end, chunk.label.name());
    }
    ChunkCounts counts;
    for (const Chunk& chunk : predicted) {
        if (gold_set.count({chunk.start, chunk.end, chunk.label.name()})) {
            ++counts.true_positive;
        } else {
            ++counts.false_positive;
        }
    }
    counts.false_negative = gold.size() - counts.true_positive;
    return counts;
}

Metrics prf(const ChunkCounts& counts) {
    auto ratio = [](std::size_t num, std::size_t den) {
        return den == 0 ? 0.0
                        : static_cast<double>(num) / static_cast<double>(den);
    };
    Metrics m;
    m.precision =
        ratio(counts.true_positive, counts.true_positive + counts.false_positive);
    m.recall =
        ratio(counts.true_positive, counts.true_positive + counts.false_negative);
    m.f_score = (m.precision + m.recall) == 0.0
                    ? 0.0
                    : 2.0 * m.precision * m.recall / (m.precision + m.recall);
    return m;
}

namespace {

struct TrainedPipeline {
    RuleSet rules;
    MulticlassModel model;
};

// The vocabulary is built over the full corpus so held-out sentences never
// carry out-of-vocabulary tags; rules and hyperplanes see only the train
// sentences.
TrainedPipeline fit(const std::vector<Sentence>& train_sentences,
                    const Vocabulary& vocab, const TrainConfig& config) {
    Corpus train_corpus(train_sentences);
    RuleSet rules = extract_rules(train_corpus);
    std::vector<EncodedSample> encoded;
    for (const Sentence& sentence : train_corpus.sentences()) {
        for (auto& [tags, label] : extract_chunk_sequences(sentence)) {
            if (tags.size() > 5) continue;
            ExtractionVector vector = build_vector(tags);
            vector.label = label;
            encoded.push_back(encode(vector, vocab));
        }
    }
    MulticlassModel model = train_multiclass(encoded, vocab, config);
    return TrainedPipeline{std::move(rules), std::move(model)};
}

struct ScoreAccumulator {
    ChunkCounts total;
    ChunkCounts short_bucket;
    ChunkCounts long_bucket;

    void add(const Sentence& sentence, const ChunkCounts& counts) {
        total += counts;
        if (sentence.size() <= kShortSentenceLimit) {
            short_bucket += counts;
        } else {
            long_bucket += counts;
        }
    }
};

void evaluate_sentences(const TrainedPipeline& pipeline,
                        const std::vector<const Sentence*>& test,
                        ScoreAccumulator& accumulator) {
    for (const Sentence* sentence : test) {
        std::vector<Chunk> predicted =
            predict_chunks(sentence->tokens(), pipeline.model, pipeline.rules);
        accumulator.add(*sentence, score_chunks(sentence->chunks(), predicted));
    }
}

std::vector<std::size_t> shuffled_order(std::size_t n, std::uint64_t seed) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed);
    rng.shuffle(order);
    return order;
}

}  // namespace

HoldoutResult holdout_evaluate(const Corpus& corpus, double train_fraction,
                               std::uint64_t seed, const TrainConfig& config) {
    std::size_t n = corpus.sentences().size();
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw Error("train fraction must be strictly between 0 and 1");
    }
    std::size_t train_n = static_cast<std::size_t>(
        std::ceil(train_fraction * static_cast<double>(n)));
    if (train_n == 0 || train_n >= n) {
        throw Error("degenerate split: " + std::to_string(train_n) +
                    " train / " + std::to_string(n - train_n) +
                    " test sentences");
    }

    std::vector<std::size_t> order = shuffled_order(n, seed);
    std::vector<Sentence> train;
    train.reserve(train_n);
    std::vector<const Sentence*> test;
    test.reserve(n - train_n);
    for (std::size_t i = 0; i < n; ++i) {
        if (i < train_n) {
            train.push_back(corpus.sentences()[order[i]]);
        } else {
            test.push_back(&corpus.sentences()[order[i]]);
        }
    }

    Vocabulary vocab = build_vocabulary(corpus);
    TrainedPipeline pipeline = fit(train, vocab, config);
    ScoreAccumulator accumulator;
    evaluate_sentences(pipeline, test, accumulator);

    HoldoutResult result;
    result.total_sentences = n;
    result.train_sentences = train_n;
    result.test_sentences = n - train_n;
    result.rule_count = pipeline.rules.size();
    result.hyperplane_count = pipeline.model.hyperplanes.size();
    result.skipped_long = pipeline.rules.skipped_long();
    result.counts = accumulator.total;
    result.metrics = prf(accumulator.total);
    result.short_bucket = {accumulator.short_bucket, prf(accumulator.short_bucket)};
    result.long_bucket = {accumulator.long_bucket, prf(accumulator.long_bucket)};
    return result;
}

KfoldResult kfold_cross_validate(const Corpus& corpus, std::size_t k,
                                 std::uint64_t seed, const TrainConfig& config) {
    std::size_t n = corpus.sentences().size();
    if (k < 2) throw Error("k must be at least 2");
    if (k > n) {
        throw Error("k = " + std::to_string(k) + " exceeds the corpus size " +
                    std::to_string(n));
    }

    std::vector<std::size_t> order = shuffled_order(n, seed);
    std::vector<std::size_t> fold_sizes(k, n / k);
    for (std::size_t i = 0; i < n % k; ++i) ++fold_sizes[i];

    KfoldResult result;
    result.total_sentences = n;
    Vocabulary vocab = build_vocabulary(corpus);
    ScoreAccumulator buckets;
    Metrics sum;
    std::size_t fold_begin = 0;
    for (std::size_t fold = 0; fold < k; ++fold) {
        std::size_t fold_end = fold_begin + fold_sizes[fold];
        std::vector<Sentence> train;
        train.reserve(n - fold_sizes[fold]);
        std::vector<const Sentence*> test;
        test.reserve(fold_sizes[fold]);
        for (std::size_t i = 0; i < n; ++i) {
            if (i >= fold_begin && i < fold_end) {
                test.push_back(&corpus.sentences()[order[i]]);
            } else {
                train.push_back(corpus.sentences()[order[i]]);
            }
        }
        fold_begin = fold_end;

        TrainedPipeline pipeline = fit(train, vocab, config);
        ScoreAccumulator fold_accumulator;
        evaluate_sentences(pipeline, test, fold_accumulator);
        buckets.total += fold_accumulator.total;
        buckets.short_bucket += fold_accumulator.short_bucket;
        buckets.long_bucket += fold_accumulator.long_bucket;

        FoldResult fold_result;
        fold_result.counts = fold_accumulator.total;
        fold_result.metrics = prf(fold_accumulator.total);
        fold_result.rule_count = pipeline.rules.size();
        fold_result.hyperplane_count = pipeline.model.hyperplanes.size();
        fold_result.skipped_long = pipeline.rules.skipped_long();
        sum.precision += fold_result.metrics.precision;
        sum.recall += fold_result.metrics.recall;
        sum.f_score += fold_result.metrics.f_score;
        result.folds.push_back(std::move(fold_result));
    }

    double kd = static_cast<double>(k);
    result.mean = Metrics{sum.precision / kd, sum.recall / kd, sum.f_score / kd};
    result.short_bucket = {buckets.short_bucket, prf(buckets.short_bucket)};
    result.long_bucket = {buckets.long_bucket, prf(buckets.long_bucket)};
    return result;
}

namespace {

std::string pct(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.2f", value * 100.0);
    return buffer;
}

void write_bucket_lines(std::ostream& out, const HoldoutResult* holdout,
                        const KfoldResult* kfold, ReportStyle style) {
    const BucketMetrics& short_bucket =
        holdout ? holdout->short_bucket : kfold->short_bucket;
    const BucketMetrics& long_bucket =
        holdout ? holdout->long_bucket : kfold->long_bucket;
    if (style == ReportStyle::text) {
        out << "bucket <=20: precision: " << pct(short_bucket.metrics.precision)
            << "% recall: " << pct(short_bucket.metrics.recall)
            << "% f_score: " << pct(short_bucket.metrics.f_score) << "%\n";
        out << "bucket >20: precision: " << pct(long_bucket.metrics.precision)
            << "% recall: " << pct(long_bucket.metrics.recall)
            << "% f_score: " << pct(long_bucket.metrics.f_score) << "%\n";
    } else {
        out << "bucket_short_precision=" << pct(short_bucket.metrics.precision)
            << "\n";
        out << "bucket_short_recall=" << pct(short_bucket.metrics.recall) << "\n";
        out << "bucket_short_f_score=" << pct(short_bucket.metrics.f_score)
            << "\n";
        out << "bucket_long_precision=" << pct(long_bucket.metrics.precision)
            << "\n";
        out << "bucket_long_recall=" << pct(long_bucket.metrics.recall) << "\n";
        out << "bucket_long_f_score=" << pct(long_bucket.metrics.f_score) << "\n";
    }
}

}  // namespace

void write_holdout_report(std::ostream& out, const HoldoutResult& result,
                          ReportStyle style) {
    if (style == ReportStyle::text) {
        out << "sentences: " << result.total_sentences << " (train "
            << result.train_sentences << ", test " << result.test_sentences
            << ")\n";
        out << "rules: " << result.rule_count << "\n";
        out << "hyperplanes: " << result.hyperplane_count << "\n";
        out << "skipped_long: " << result.skipped_long << "\n";
        out << "precision: " << pct(result.metrics.precision) << "%\n";
        out << "recall: " << pct(result.metrics.recall) << "%\n";
        out << "f_score: " << pct(result.metrics.f_score) << "%\n";
    } else {
        out << "sentences=" << result.total_sentences << "\n";
        out << "train_sentences=" << result.train_sentences << "\n";
        out << "test_sentences=" << result.test_sentences << "\n";
        out << "rules=" << result.rule_count << "\n";
        out << "hyperplanes=" << result.hyperplane_count << "\n";
        out << "skipped_long=" << result.skipped_long << "\n";
        out << "precision=" << pct(result.metrics.precision) << "\n";
        out << "recall=" << pct(result.metrics.recall) << "\n";
        out << "f_score=" << pct(result.metrics.f_score) << "\n";
    }
    write_bucket_lines(out, &result, nullptr, style);
}

void write_kfold_report(std::ostream& out, const KfoldResult& result,
                        ReportStyle style) {
    if (style == ReportStyle::text) {
        out << "sentences: " << result.total_sentences << "\n";
        out << "folds: " << result.folds.size() << "\n";
        for (std::size_t i = 0; i < result.folds.size(); ++i) {
            const FoldResult& fold = result.folds[i];
            out << "fold " << (i + 1) << ": precision: "
                << pct(fold.metrics.precision) << "% recall: "
                << pct(fold.metrics.recall) << "% f_score: "
                << pct(fold.metrics.f_score) << "% (rules " << fold.rule_count
                << ", hyperplanes " << fold.hyperplane_count
                << ", skipped_long " << fold.skipped_long << ")\n";
        }
        out << "mean: precision: " << pct(result.mean.precision)
            << "% recall: " << pct(result.mean.recall) << "% f_score: "
            << pct(result.mean.f_score) << "%\n";
    } else {
        out << "sentences=" << result.total_sentences << "\n";
        out << "folds=" << result.folds.size() << "\n";
        for (std::size_t i = 0; i < result.folds.size(); ++i) {
            const FoldResult& fold = result.folds[i];
            std::string prefix = "fold_" + std::to_string(i + 1) + "_";
            out << prefix << "precision=" << pct(fold.metrics.precision) << "\n";
            out << prefix << "recall=" << pct(fold.metrics.recall) << "\n";
            out << prefix << "f_score=" << pct(fold.metrics.f_score) << "\n";
            out << prefix << "rules=" << fold.rule_count << "\n";
            out << prefix << "hyperplanes=" << fold.hyperplane_count << "\n";
            out << prefix << "skipped_long=" << fold.skipped_long << "\n";
        }
        out << "mean_precision=" << pct(result.mean.precision) << "\n";
        out << "mean_recall=" << pct(result.mean.recall) << "\n";
        out << "mean_f_score=" << pct(result.mean.f_score) << "\n";
    }
    write_bucket_lines(out, nullptr, &result, style);
}

}  // namespace chunkforge
