#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chunkforge/corpus.hpp"
#include "chunkforge/rules.hpp"

namespace chunkforge {

/// Pad mark filling unused slots of an extraction vector.
inline constexpr const char* kPadSymbol = "?";

/// The 5-slot nominal feature vector of one group: the group's tag sequence
/// padded to width 5.  Slot 1 is the group-initial tag; pads are suffix-only.
struct ExtractionVector {
    std::array<std::string, 5> slots;
    std::optional<SyntacticClass> label;

    bool operator==(const ExtractionVector&) const = default;
};

/// Fixed symbol inventories backing the numeric encoding.  The tag list
/// always contains the pad symbol.  Order is fixed at construction and
/// serialized with every artifact so encodings reproduce across runs.
class Vocabulary {
public:
    /// Minimal vocabulary: tag list {?}, no classes.
    Vocabulary();

    /// Explicit inventories (file readers). The tag list must contain the
    /// pad symbol; entries must be unique.
    Vocabulary(std::vector<std::string> tag_list,
               std::vector<std::string> class_list);

    const std::vector<std::string>& tag_list() const { return tag_list_; }
    const std::vector<std::string>& class_list() const { return class_list_; }

    std::optional<std::size_t> tag_index(const std::string& symbol) const;
    std::optional<std::size_t> class_index(const std::string& name) const;

    bool operator==(const Vocabulary& other) const {
        return tag_list_ == other.tag_list_ && class_list_ == other.class_list_;
    }

private:
    std::vector<std::string> tag_list_;
    std::vector<std::string> class_list_;
    std::map<std::string, std::size_t> tag_index_;
    std::map<std::string, std::size_t> class_index_;
};

/// Corpus inventories plus the pad symbol, sorted lexicographically.
Vocabulary build_vocabulary(const Corpus& corpus);

/// Block one-hot encoding of an extraction vector: dimension
/// 5 * |tag_list|, exactly five entries set to 1.
struct EncodedSample {
    std::vector<double> features;
    std::optional<std::size_t> label_index;
};

/// Pads a group's 1-5 tag sequence to the fixed 5-slot vector (no label).
ExtractionVector build_vector(std::span<const PosTag> group_tags);

/// Checks slot structure and symbol membership; throws Error if invalid.
void validate_vector(const ExtractionVector& vector, const Vocabulary& vocab);

/// One labeled vector per gold chunk of length <= 5, in corpus order,
/// plus the corpus vocabulary.
struct VectorizedCorpus {
    std::vector<ExtractionVector> vectors;
    Vocabulary vocab;
};
VectorizedCorpus vectorize_corpus(const Corpus& corpus, const RuleSet& ruleset);

/// Block one-hot encoding; slot s holding symbol t sets feature
/// s * |tag_list| + index(t).
EncodedSample encode(const ExtractionVector& vector, const Vocabulary& vocab);

/// Vector file: three @-headers (feature names, tag list, class list)
/// followed by one 6-field comma-separated line per vector; field 6 is the
/// class or `?` for unlabeled vectors.
void write_vector_file(std::ostream& out,
                       std::span<const ExtractionVector> vectors,
                       const Vocabulary& vocab);
VectorizedCorpus read_vector_file(std::istream& in);

}  // namespace chunkforge
