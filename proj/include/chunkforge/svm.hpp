#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "chunkforge/corpus.hpp"
#include "chunkforge/features.hpp"

namespace chunkforge {

/// Soft-margin training knobs.  `max_passes` is the number of consecutive
/// full sweeps without an alpha update before the solver stops.
struct TrainConfig {
    double c = 1.0;
    double tolerance = 1e-3;
    int max_passes = 100;
};

/// One pairwise linear decision function w.x + b.  A positive score votes
/// class_pos, a negative score votes class_neg.
struct Hyperplane {
    std::vector<double> weights;
    double bias = 0.0;
    SyntacticClass class_pos;
    SyntacticClass class_neg;
};

/// Weights, bias and the dual variables of one trained binary problem.
/// The alphas are per input sample, for KKT verification.
struct BinarySolution {
    std::vector<double> weights;
    double bias = 0.0;
    std::vector<double> alpha;
};

/// Trains a soft-margin linear SVM by sequential minimal optimization.
/// Deterministic for a fixed sample order and config.  Labels are +/-1;
/// both signs must be present.
BinarySolution train_binary(std::span<const std::vector<double>> samples,
                            std::span<const int> labels,
                            const TrainConfig& config);

double decision_score(const Hyperplane& hyperplane, std::span<const double> x);

/// One-vs-one decomposition: one hyperplane per unordered pair of classes
/// that have at least one training sample.
struct MulticlassModel {
    std::vector<Hyperplane> hyperplanes;
    Vocabulary vocab;
    TrainConfig config;
};

MulticlassModel train_multiclass(std::span<const EncodedSample> samples,
                                 const Vocabulary& vocab,
                                 const TrainConfig& config);

struct PairScore {
    SyntacticClass class_pos;
    SyntacticClass class_neg;
    double score = 0.0;
};

struct Classification {
    SyntacticClass winner;
    std::vector<PairScore> scores;
};

/// Encodes the vector and lets every hyperplane vote by score sign (an
/// exact zero votes class_pos).  Ties are broken by the largest sum of
/// |score| over the tied class's hyperplanes, then by smallest class name.
Classification classify(const MulticlassModel& model,
                        const ExtractionVector& vector);

/// Text model format, decimals in shortest round-trip form.
void save_model(std::ostream& out, const MulticlassModel& model);
MulticlassModel load_model(std::istream& in);

}  // namespace chunkforge
