#pragma once

#include <compare>
#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace chunkforge {

/// Part-of-speech tag.  The inventory is open; names are read from data.
/// Commas, whitespace, parentheses and '?' are format metacharacters in the
/// file formats and are rejected.
class PosTag {
public:
    PosTag() = default;
    explicit PosTag(std::string name);

    const std::string& name() const { return name_; }

    auto operator<=>(const PosTag&) const = default;

private:
    std::string name_;
};

/// Syntactic class of a base-phrase group (NP, VP, PP, ...).  Open set,
/// same metacharacter exclusion as PosTag.
class SyntacticClass {
public:
    SyntacticClass() = default;
    explicit SyntacticClass(std::string name);

    const std::string& name() const { return name_; }

    auto operator<=>(const SyntacticClass&) const = default;

private:
    std::string name_;
};

/// A surface form with its tag.  Surfaces may not contain whitespace or
/// parentheses; both would break the bracketed rendering.
struct Token {
    Token() = default;
    Token(std::string surface, PosTag tag);

    std::string surface;
    PosTag tag;

    bool operator==(const Token&) const = default;
};

/// Half-open token span [start, end) labeled with a syntactic class.
struct Chunk {
    std::size_t start = 0;
    std::size_t end = 0;
    SyntacticClass label;

    bool operator==(const Chunk&) const = default;
};

/// A tagged sentence with its gold chunk spans (possibly none).
/// Chunks are sorted by start and pairwise non-overlapping.
class Sentence {
public:
    Sentence() = default;
    Sentence(std::vector<Token> tokens, std::vector<Chunk> chunks);

    const std::vector<Token>& tokens() const { return tokens_; }
    const std::vector<Chunk>& chunks() const { return chunks_; }
    std::size_t size() const { return tokens_.size(); }

    bool operator==(const Sentence&) const = default;

private:
    std::vector<Token> tokens_;
    std::vector<Chunk> chunks_;
};

/// An in-memory treebank: sentences plus the tag/class inventories that
/// actually occur in them.
class Corpus {
public:
    Corpus() = default;
    explicit Corpus(std::vector<Sentence> sentences);

    const std::vector<Sentence>& sentences() const { return sentences_; }
    const std::set<PosTag>& tag_inventory() const { return tags_; }
    const std::set<SyntacticClass>& class_inventory() const { return classes_; }

private:
    std::vector<Sentence> sentences_;
    std::set<PosTag> tags_;
    std::set<SyntacticClass> classes_;
};

/// Reads a bracketed treebank.  Each sentence is one balanced tree
/// `(S ...)`; a node whose children are all `(TAG word)` leaves becomes a
/// chunk, bare `(TAG word)` children elsewhere become chunk-less tokens,
/// and deeper structure is flattened to its lowest chunk-bearing level.
/// Throws ParseError with line/column on malformed input.
Corpus read_treebank(std::string_view text);

/// Renders a sentence back into the bracketed treebank format; the output
/// is re-ingestible by read_treebank.
std::string render_sentence(const Sentence& sentence);

/// One (tag sequence, class) pair per gold chunk, in sentence order.
std::vector<std::pair<std::vector<PosTag>, SyntacticClass>>
extract_chunk_sequences(const Sentence& sentence);

/// Deterministic synthetic treebank built from a fixed internal grammar
/// (15 chunk templates over 11 tags and 6 classes, chunk lengths 1-5,
/// 1-8 chunks per sentence).  With probability `noise` a chunk's label is
/// replaced by a uniformly chosen different class.
Corpus generate_synthetic_corpus(std::size_t n_sentences, std::uint64_t seed,
                                 double noise);

}  // namespace chunkforge
