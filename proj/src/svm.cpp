#include "chunkforge/svm.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <utility>

#include "chunkforge/error.hpp"
#include "chunkforge/text.hpp"

namespace chunkforge {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
    return sum;
}

// Identical (sample, label) pairs are folded into one point whose box
// constraint is scaled by the multiplicity; the dual is unchanged and the
// solver sees a much smaller problem on heavily repeated nominal data.
struct DedupProblem {
    std::vector<std::vector<double>> x;
    std::vector<int> y;
    std::vector<double> box;
    std::vector<std::size_t> multiplicity;
    std::vector<std::size_t> dedup_of;  // original sample -> dedup index
};

DedupProblem deduplicate(std::span<const std::vector<double>> samples,
                         std::span<const int> labels, double c) {
    DedupProblem p;
    p.dedup_of.resize(samples.size());
    std::map<std::pair<std::vector<double>, int>, std::size_t> seen;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        auto key = std::make_pair(samples[i], labels[i]);
        auto it = seen.find(key);
        if (it == seen.end()) {
            it = seen.emplace(std::move(key), p.x.size()).first;
            p.x.push_back(samples[i]);
            p.y.push_back(labels[i]);
            p.box.push_back(0.0);
            p.multiplicity.push_back(0);
        }
        p.dedup_of[i] = it->second;
        ++p.multiplicity[it->second];
    }
    for (std::size_t k = 0; k < p.box.size(); ++k) {
        p.box[k] = c * static_cast<double>(p.multiplicity[k]);
    }
    return p;
}

// Sequential minimal optimization over the soft-margin dual with a linear
// kernel and an explicit primal weight vector.  Pair selection is Platt's
// second-choice heuristic (largest |E_i - E_j|) with an in-order fallback
// scan; every choice is index-ordered, so training is deterministic.
class SmoSolver {
public:
    SmoSolver(const DedupProblem& p, const TrainConfig& config)
        : x_(p.x),
          y_(p.y),
          box_(p.box),
          tol_(config.tolerance),
          max_passes_(config.max_passes),
          n_(p.x.size()),
          dim_(p.x.empty() ? 0 : p.x.front().size()) {
        alpha_.assign(n_, 0.0);
        weights_.assign(dim_, 0.0);
        if (n_ <= kGramLimit) {
            gram_.assign(n_ * n_, 0.0);
            for (std::size_t i = 0; i < n_; ++i) {
                for (std::size_t j = 0; j <= i; ++j) {
                    gram_[i * n_ + j] = gram_[j * n_ + i] = dot(x_[i], x_[j]);
                }
            }
        }
    }

    void solve() {
        int clean_passes = 0;
        std::size_t sweeps = 0;
        while (clean_passes < max_passes_ && sweeps < kMaxSweeps) {
            ++sweeps;
            std::size_t changed = 0;
            for (std::size_t i = 0; i < n_; ++i) {
                double error_i = predict(i) - y_[i];
                double r = y_[i] * error_i;
                bool violates = (r < -tol_ && alpha_[i] < box_[i]) ||
                                (r > tol_ && alpha_[i] > 0.0);
                if (!violates) continue;

                std::size_t best_j = n_;
                double best_gap = -1.0;
                for (std::size_t j = 0; j < n_; ++j) {
                    if (j == i) continue;
                    double gap = std::abs(error_i - (predict(j) - y_[j]));
                    if (gap > best_gap) {
                        best_gap = gap;
                        best_j = j;
                    }
                }
                if (best_j < n_ && try_step(i, best_j)) {
                    ++changed;
                    continue;
                }
                for (std::size_t j = 0; j < n_; ++j) {
                    if (j == i || j == best_j) continue;
                    if (try_step(i, j)) {
                        ++changed;
                        break;
                    }
                }
            }
            if (changed == 0) {
                ++clean_passes;
            } else {
                clean_passes = 0;
            }
        }
    }

    const std::vector<double>& weights() const { return weights_; }
    double bias() const { return bias_; }
    const std::vector<double>& alpha() const { return alpha_; }

private:
    static constexpr std::size_t kGramLimit = 4096;
    static constexpr std::size_t kMaxSweeps = 100000;

    double kernel(std::size_t i, std::size_t j) const {
        if (!gram_.empty()) return gram_[i * n_ + j];
        return dot(x_[i], x_[j]);
    }

    double predict(std::size_t i) const { return dot(weights_, x_[i]) + bias_; }

    bool try_step(std::size_t i, std::size_t j) {
        if (i == j) return false;
        double error_i = predict(i) - y_[i];
        double error_j = predict(j) - y_[j];
        double ai = alpha_[i];
        double aj = alpha_[j];

        double low, high;
        if (y_[i] != y_[j]) {
            low = std::max(0.0, aj - ai);
            high = std::min(box_[j], box_[i] + aj - ai);
        } else {
            low = std::max(0.0, ai + aj - box_[i]);
            high = std::min(box_[j], ai + aj);
        }
        if (high - low < 1e-12) return false;

        double eta = 2.0 * kernel(i, j) - kernel(i, i) - kernel(j, j);
        if (eta >= 0.0) return false;

        double aj_new = aj - y_[j] * (error_i - error_j) / eta;
        aj_new = std::clamp(aj_new, low, high);
        if (aj_new < 1e-8) aj_new = 0.0;
        if (aj_new > box_[j] - 1e-8) aj_new = box_[j];

        double min_step = std::min(1e-5, 1e-4 * (box_[i] + box_[j]));
        if (std::abs(aj_new - aj) < min_step) return false;

        double ai_new = ai + y_[i] * y_[j] * (aj - aj_new);
        ai_new = std::clamp(ai_new, 0.0, box_[i]);
        if (ai_new < 1e-8) ai_new = 0.0;
        if (ai_new > box_[i] - 1e-8) ai_new = box_[i];

        double di = y_[i] * (ai_new - ai);
        double dj = y_[j] * (aj_new - aj);
        double b1 = bias_ - error_i - di * kernel(i, i) - dj * kernel(i, j);
        double b2 = bias_ - error_j - di * kernel(i, j) - dj * kernel(j, j);
        if (ai_new > 0.0 && ai_new < box_[i]) {
            bias_ = b1;
        } else if (aj_new > 0.0 && aj_new < box_[j]) {
            bias_ = b2;
        } else {
            bias_ = 0.5 * (b1 + b2);
        }
        for (std::size_t d = 0; d < dim_; ++d) {
            weights_[d] += di * x_[i][d] + dj * x_[j][d];
        }
        alpha_[i] = ai_new;
        alpha_[j] = aj_new;
        return true;
    }

    const std::vector<std::vector<double>>& x_;
    const std::vector<int>& y_;
    const std::vector<double>& box_;
    double tol_;
    int max_passes_;
    std::size_t n_;
    std::size_t dim_;
    std::vector<double> gram_;
    std::vector<double> alpha_;
    std::vector<double> weights_;
    double bias_ = 0.0;
};

void validate_config(const TrainConfig& config) {
    if (config.c <= 0.0) throw Error("penalty c must be positive");
    if (config.tolerance <= 0.0) throw Error("tolerance must be positive");
    if (config.max_passes <= 0) throw Error("max_passes must be positive");
}

std::string shortest(double value) {
    char buffer[64];
    auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, ptr);
}

double parse_double(std::string_view text, const std::string& context) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw Error(context + ": bad number '" + std::string(text) + "'");
    }
    return value;
}

std::string vocab_header(const char* keyword,
                         const std::vector<std::string>& entries) {
    std::string line = keyword;
    if (!entries.empty()) {
        line += ' ';
        line += join(entries, ",");
    }
    return line;
}

}  // namespace

BinarySolution train_binary(std::span<const std::vector<double>> samples,
                            std::span<const int> labels,
                            const TrainConfig& config) {
    validate_config(config);
    if (samples.size() != labels.size()) {
        throw Error("sample and label counts differ");
    }
    bool has_pos = false;
    bool has_neg = false;
    for (int label : labels) {
        if (label == 1) {
            has_pos = true;
        } else if (label == -1) {
            has_neg = true;
        } else {
            throw Error("labels must be +1 or -1");
        }
    }
    if (!has_pos || !has_neg) {
        throw Error("degenerate binary problem: both label signs are required");
    }
    std::size_t dim = samples.front().size();
    for (const auto& sample : samples) {
        if (sample.size() != dim) {
            throw Error("feature dimension mismatch: expected " +
                        std::to_string(dim) + ", got " +
                        std::to_string(sample.size()));
        }
    }

    DedupProblem problem = deduplicate(samples, labels, config.c);
    SmoSolver solver(problem, config);
    solver.solve();

    BinarySolution solution;
    solution.weights = solver.weights();
    solution.bias = solver.bias();
    solution.alpha.resize(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        std::size_t k = problem.dedup_of[i];
        solution.alpha[i] =
            solver.alpha()[k] / static_cast<double>(problem.multiplicity[k]);
    }
    return solution;
}

double decision_score(const Hyperplane& hyperplane, std::span<const double> x) {
    if (hyperplane.weights.size() != x.size()) {
        throw Error("dimension mismatch: hyperplane has " +
                    std::to_string(hyperplane.weights.size()) +
                    " weights, input has " + std::to_string(x.size()));
    }
    return dot(hyperplane.weights, x) + hyperplane.bias;
}

MulticlassModel train_multiclass(std::span<const EncodedSample> samples,
                                 const Vocabulary& vocab,
                                 const TrainConfig& config) {
    validate_config(config);
    std::size_t dim = 5 * vocab.tag_list().size();
    std::map<std::size_t, std::size_t> class_counts;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (!samples[i].label_index) {
            throw Error("sample " + std::to_string(i) + " is unlabeled");
        }
        if (*samples[i].label_index >= vocab.class_list().size()) {
            throw Error("sample " + std::to_string(i) +
                        " has an out-of-range class index");
        }
        if (samples[i].features.size() != dim) {
            throw Error("sample " + std::to_string(i) + " has dimension " +
                        std::to_string(samples[i].features.size()) +
                        ", expected " + std::to_string(dim));
        }
        ++class_counts[*samples[i].label_index];
    }

    // Classes with at least one sample, ordered by name.
    std::vector<std::pair<std::string, std::size_t>> present;
    for (const auto& [index, count] : class_counts) {
        present.emplace_back(vocab.class_list()[index], index);
    }
    std::sort(present.begin(), present.end());
    if (present.size() < 2) {
        throw Error("multiclass training needs at least 2 classes, got " +
                    std::to_string(present.size()));
    }

    MulticlassModel model{{}, vocab, config};
    for (std::size_t a = 0; a < present.size(); ++a) {
        for (std::size_t b = a + 1; b < present.size(); ++b) {
            std::vector<std::vector<double>> xs;
            std::vector<int> ys;
            for (const EncodedSample& sample : samples) {
                if (*sample.label_index == present[a].second) {
                    xs.push_back(sample.features);
                    ys.push_back(1);
                } else if (*sample.label_index == present[b].second) {
                    xs.push_back(sample.features);
                    ys.push_back(-1);
                }
            }
            BinarySolution solution = train_binary(xs, ys, config);
            model.hyperplanes.push_back(
                Hyperplane{std::move(solution.weights), solution.bias,
                           SyntacticClass(present[a].first),
                           SyntacticClass(present[b].first)});
        }
    }
    return model;
}

Classification classify(const MulticlassModel& model,
                        const ExtractionVector& vector) {
    if (model.hyperplanes.empty()) throw Error("model has no hyperplanes");
    EncodedSample sample = encode(vector, model.vocab);

    Classification result;
    result.scores.reserve(model.hyperplanes.size());
    std::map<std::string, std::size_t> votes;
    std::map<std::string, double> magnitude;
    for (const Hyperplane& h : model.hyperplanes) {
        double score = decision_score(h, sample.features);
        result.scores.push_back(PairScore{h.class_pos, h.class_neg, score});
        // an exact zero votes class_pos
        const std::string& winner =
            score >= 0.0 ? h.class_pos.name() : h.class_neg.name();
        ++votes[winner];
        votes.try_emplace(h.class_pos.name(), 0);
        votes.try_emplace(h.class_neg.name(), 0);
        magnitude[h.class_pos.name()] += std::abs(score);
        magnitude[h.class_neg.name()] += std::abs(score);
    }

    // Most votes, then largest |score| mass, then smallest name; the map
    // iterates names in ascending order, so strict comparisons do the rest.
    const std::string* best = nullptr;
    std::size_t best_votes = 0;
    double best_magnitude = 0.0;
    for (const auto& [name, count] : votes) {
        double mass = magnitude[name];
        if (best == nullptr || count > best_votes ||
            (count == best_votes && mass > best_magnitude)) {
            best = &name;
            best_votes = count;
            best_magnitude = mass;
        }
    }
    result.winner = SyntacticClass(*best);
    return result;
}

void save_model(std::ostream& out, const MulticlassModel& model) {
    out << "@model chunkforge-svm 1\n";
    out << vocab_header("@tags", model.vocab.tag_list()) << '\n';
    out << vocab_header("@classes", model.vocab.class_list()) << '\n';
    out << "@config c=" << shortest(model.config.c)
        << " tol=" << shortest(model.config.tolerance) << '\n';
    for (const Hyperplane& h : model.hyperplanes) {
        out << "@pair " << h.class_pos.name() << ' ' << h.class_neg.name()
            << '\n';
        out << "@bias " << shortest(h.bias) << '\n';
        out << "@weights";
        for (double w : h.weights) out << ' ' << shortest(w);
        out << '\n';
    }
}

namespace {

std::vector<std::string> parse_vocab_line(const std::string& line,
                                          const char* keyword,
                                          std::size_t line_number) {
    std::string bare = keyword;
    if (line == bare) return {};
    std::string prefix = bare + ' ';
    if (line.rfind(prefix, 0) != 0) {
        throw Error("line " + std::to_string(line_number) + ": expected '" +
                    keyword + "' header");
    }
    return split(line.substr(prefix.size()), ',');
}

}  // namespace

MulticlassModel load_model(std::istream& in) {
    std::string line;
    std::size_t line_number = 0;
    auto next_line = [&]() -> bool {
        if (!std::getline(in, line)) return false;
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return true;
    };
    auto require_line = [&]() {
        if (!next_line()) throw Error("truncated model file");
    };

    require_line();
    if (line != "@model chunkforge-svm 1") {
        if (line.rfind("@model chunkforge-svm ", 0) == 0) {
            throw Error("unsupported model version '" +
                        line.substr(std::string("@model chunkforge-svm ").size()) +
                        "'");
        }
        throw Error("not a chunkforge model file");
    }
    require_line();
    auto tags = parse_vocab_line(line, "@tags", line_number);
    require_line();
    auto classes = parse_vocab_line(line, "@classes", line_number);
    Vocabulary vocab(std::move(tags), std::move(classes));
    std::size_t dim = 5 * vocab.tag_list().size();

    require_line();
    if (line.rfind("@config ", 0) != 0) {
        throw Error("line " + std::to_string(line_number) +
                    ": expected '@config' header");
    }
    auto config_fields = split(line.substr(8), ' ');
    if (config_fields.size() != 2 || config_fields[0].rfind("c=", 0) != 0 ||
        config_fields[1].rfind("tol=", 0) != 0) {
        throw Error("line " + std::to_string(line_number) +
                    ": expected '@config c=<value> tol=<value>'");
    }
    TrainConfig config;
    config.c = parse_double(std::string_view(config_fields[0]).substr(2),
                            "line " + std::to_string(line_number));
    config.tolerance = parse_double(
        std::string_view(config_fields[1]).substr(4),
        "line " + std::to_string(line_number));
    if (config.c <= 0.0 || config.tolerance <= 0.0) {
        throw Error("line " + std::to_string(line_number) +
                    ": c and tol must be positive");
    }

    MulticlassModel model{{}, std::move(vocab), config};
    std::set<std::pair<std::string, std::string>> seen_pairs;
    while (next_line()) {
        auto pair_fields = split(line, ' ');
        if (pair_fields.size() != 3 || pair_fields[0] != "@pair") {
            throw Error("line " + std::to_string(line_number) +
                        ": expected '@pair <class> <class>'");
        }
        const std::string& pos = pair_fields[1];
        const std::string& neg = pair_fields[2];
        if (pos == neg) {
            throw Error("line " + std::to_string(line_number) +
                        ": pair classes must differ");
        }
        for (const std::string* name : {&pos, &neg}) {
            if (!model.vocab.class_index(*name)) {
                throw Error("line " + std::to_string(line_number) +
                            ": unknown class '" + *name + "' in @pair");
            }
        }
        auto key = std::minmax(pos, neg);
        if (!seen_pairs.insert(key).second) {
            throw Error("line " + std::to_string(line_number) +
                        ": duplicate class pair");
        }

        require_line();
        if (line.rfind("@bias ", 0) != 0) {
            throw Error("line " + std::to_string(line_number) +
                        ": expected '@bias'");
        }
        double bias = parse_double(std::string_view(line).substr(6),
                                   "line " + std::to_string(line_number));

        require_line();
        if (line.rfind("@weights ", 0) != 0) {
            throw Error("line " + std::to_string(line_number) +
                        ": expected '@weights'");
        }
        auto weight_fields = split(line.substr(9), ' ');
        if (weight_fields.size() != dim) {
            throw Error("dimension mismatch: expected " + std::to_string(dim) +
                        " weights, got " + std::to_string(weight_fields.size()));
        }
        std::vector<double> weights;
        weights.reserve(dim);
        for (const std::string& field : weight_fields) {
            weights.push_back(
                parse_double(field, "line " + std::to_string(line_number)));
        }
        model.hyperplanes.push_back(Hyperplane{std::move(weights), bias,
                                               SyntacticClass(pos),
                                               SyntacticClass(neg)});
    }
    if (model.hyperplanes.empty()) throw Error("no hyperplanes");
    return model;
}

}  // namespace chunkforge
