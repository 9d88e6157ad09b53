#include "chunkforge/corpus.hpp"

#include <algorithm>
#include <array>
#include <utility>

#include "chunkforge/error.hpp"
#include "chunkforge/rng.hpp"

namespace chunkforge {

namespace {

bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
           c == '\v';
}

// Shared invariant for tag and class names: the excluded characters are
// metacharacters of the rule, vector and treebank formats.
void validate_symbol_name(const std::string& name, const char* kind) {
    if (name.empty()) throw Error(std::string(kind) + " name is empty");
    for (char c : name) {
        if (c == ',' || c == '(' || c == ')' || c == '?' || is_space(c)) {
            throw Error(std::string(kind) + " name '" + name +
                        "' contains a format metacharacter");
        }
    }
}

}  // namespace

PosTag::PosTag(std::string name) : name_(std::move(name)) {
    validate_symbol_name(name_, "tag");
}

SyntacticClass::SyntacticClass(std::string name) : name_(std::move(name)) {
    validate_symbol_name(name_, "class");
}

Token::Token(std::string surface_in, PosTag tag_in)
    : surface(std::move(surface_in)), tag(std::move(tag_in)) {
    if (surface.empty()) throw Error("token surface is empty");
    for (char c : surface) {
        if (is_space(c) || c == '(' || c == ')') {
            throw Error("token surface '" + surface +
                        "' contains whitespace or parentheses");
        }
    }
}

Sentence::Sentence(std::vector<Token> tokens, std::vector<Chunk> chunks)
    : tokens_(std::move(tokens)), chunks_(std::move(chunks)) {
    std::size_t previous_end = 0;
    for (const Chunk& chunk : chunks_) {
        if (chunk.start >= chunk.end || chunk.end > tokens_.size()) {
            throw Error("chunk span [" + std::to_string(chunk.start) + ", " +
                        std::to_string(chunk.end) + ") is invalid for a " +
                        std::to_string(tokens_.size()) + "-token sentence");
        }
        if (chunk.start < previous_end) {
            throw Error("chunks overlap or are out of order at token " +
                        std::to_string(chunk.start));
        }
        previous_end = chunk.end;
    }
}

Corpus::Corpus(std::vector<Sentence> sentences)
    : sentences_(std::move(sentences)) {
    for (const Sentence& sentence : sentences_) {
        for (const Token& token : sentence.tokens()) tags_.insert(token.tag);
        for (const Chunk& chunk : sentence.chunks()) classes_.insert(chunk.label);
    }
}

namespace {

// ---------------------------------------------------------------------------
// Treebank reader
// ---------------------------------------------------------------------------

struct RawNode {
    std::string label;
    std::size_t line = 0;
    std::size_t column = 0;
    std::vector<RawNode> children;
    std::string word;  // non-empty iff this is a (TAG word) leaf

    bool is_leaf() const { return !word.empty(); }
};

class TreebankCursor {
public:
    explicit TreebankCursor(std::string_view text) : text_(text) {}

    void skip_whitespace() {
        while (pos_ < text_.size() && is_space(text_[pos_])) advance();
    }

    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

    char take() {
        char c = text_[pos_];
        advance();
        return c;
    }

    std::string take_symbol() {
        std::size_t begin = pos_;
        while (pos_ < text_.size() && !is_space(text_[pos_]) &&
               text_[pos_] != '(' && text_[pos_] != ')') {
            advance();
        }
        return std::string(text_.substr(begin, pos_ - begin));
    }

    [[noreturn]] void fail(const std::string& message) const {
        throw ParseError(line_, column_, message);
    }

private:
    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t column_ = 1;
};

RawNode parse_node(TreebankCursor& cursor) {
    // caller consumed '('
    cursor.skip_whitespace();
    if (cursor.at_end()) cursor.fail("unexpected end of input inside a node");

    RawNode node;
    node.line = cursor.line();
    node.column = cursor.column();
    if (cursor.peek() == '(' || cursor.peek() == ')') {
        cursor.fail("expected a node label");
    }
    node.label = cursor.take_symbol();

    while (true) {
        cursor.skip_whitespace();
        if (cursor.at_end()) {
            cursor.fail("unexpected end of input: unbalanced parentheses");
        }
        char c = cursor.peek();
        if (c == ')') {
            cursor.take();
            break;
        }
        if (c == '(') {
            if (node.is_leaf()) {
                cursor.fail("node '" + node.label +
                            "' mixes a word with subtrees");
            }
            cursor.take();
            node.children.push_back(parse_node(cursor));
        } else {
            if (!node.children.empty()) {
                cursor.fail("node '" + node.label +
                            "' mixes subtrees with a word");
            }
            if (node.is_leaf()) {
                cursor.fail("node '" + node.label +
                            "' holds more than one word");
            }
            node.word = cursor.take_symbol();
        }
    }

    if (!node.is_leaf() && node.children.empty()) {
        throw ParseError(node.line, node.column,
                         "node '" + node.label + "' has no tokens");
    }
    return node;
}

Token leaf_token(const RawNode& node) {
    try {
        return Token(node.word, PosTag(node.label));
    } catch (const Error& e) {
        throw ParseError(node.line, node.column, e.what());
    }
}

bool all_children_are_leaves(const RawNode& node) {
    return std::all_of(node.children.begin(), node.children.end(),
                       [](const RawNode& child) { return child.is_leaf(); });
}

// Lowest chunk-bearing level wins: a node whose children are all leaves is a
// chunk, leaves hanging off anything higher stay chunk-less.
void flatten(const RawNode& node, std::vector<Token>& tokens,
             std::vector<Chunk>& chunks) {
    if (all_children_are_leaves(node)) {
        std::size_t start = tokens.size();
        for (const RawNode& child : node.children) {
            tokens.push_back(leaf_token(child));
        }
        try {
            chunks.push_back(Chunk{start, tokens.size(),
                                   SyntacticClass(node.label)});
        } catch (const Error& e) {
            throw ParseError(node.line, node.column, e.what());
        }
        return;
    }
    for (const RawNode& child : node.children) {
        if (child.is_leaf()) {
            tokens.push_back(leaf_token(child));
        } else {
            flatten(child, tokens, chunks);
        }
    }
}

Sentence sentence_from_tree(const RawNode& root) {
    std::vector<Token> tokens;
    std::vector<Chunk> chunks;
    if (root.is_leaf()) {
        tokens.push_back(leaf_token(root));
    } else {
        for (const RawNode& child : root.children) {
            if (child.is_leaf()) {
                tokens.push_back(leaf_token(child));
            } else {
                flatten(child, tokens, chunks);
            }
        }
    }
    return Sentence(std::move(tokens), std::move(chunks));
}

}  // namespace

Corpus read_treebank(std::string_view text) {
    TreebankCursor cursor(text);
    std::vector<Sentence> sentences;
    while (true) {
        cursor.skip_whitespace();
        if (cursor.at_end()) break;
        if (cursor.peek() != '(') {
            cursor.fail("expected '(' at the start of a tree");
        }
        cursor.take();
        sentences.push_back(sentence_from_tree(parse_node(cursor)));
    }
    return Corpus(std::move(sentences));
}

std::string render_sentence(const Sentence& sentence) {
    const auto& tokens = sentence.tokens();
    const auto& chunks = sentence.chunks();
    std::string out = "(S";
    std::size_t chunk_index = 0;
    std::size_t i = 0;
    auto append_token = [&](const Token& token) {
        out += " (" + token.tag.name() + " " + token.surface + ")";
    };
    while (i < tokens.size()) {
        if (chunk_index < chunks.size() && chunks[chunk_index].start == i) {
            const Chunk& chunk = chunks[chunk_index];
            out += " (" + chunk.label.name();
            for (std::size_t j = chunk.start; j < chunk.end; ++j) {
                append_token(tokens[j]);
            }
            out += ")";
            i = chunk.end;
            ++chunk_index;
        } else {
            append_token(tokens[i]);
            ++i;
        }
    }
    out += ")";
    return out;
}

std::vector<std::pair<std::vector<PosTag>, SyntacticClass>>
extract_chunk_sequences(const Sentence& sentence) {
    std::vector<std::pair<std::vector<PosTag>, SyntacticClass>> out;
    out.reserve(sentence.chunks().size());
    for (const Chunk& chunk : sentence.chunks()) {
        std::vector<PosTag> tags;
        tags.reserve(chunk.end - chunk.start);
        for (std::size_t i = chunk.start; i < chunk.end; ++i) {
            tags.push_back(sentence.tokens()[i].tag);
        }
        out.emplace_back(std::move(tags), chunk.label);
    }
    return out;
}

namespace {

// ---------------------------------------------------------------------------
// Synthetic treebank grammar
// ---------------------------------------------------------------------------
//
// The template set is prefix-free: no pattern is a proper prefix of another,
// so greedy longest-match segmentation recovers every gold boundary once the
// patterns have been mined, and the pattern->class mapping is a function.

struct ChunkTemplate {
    std::vector<const char*> tags;
    const char* label;
};

const std::vector<ChunkTemplate>& grammar() {
    static const std::vector<ChunkTemplate> templates = {
        {{"NOUN_PROP"}, "NP"},
        {{"VERB"}, "VP"},
        {{"ADV"}, "ADVP"},
        {{"PART"}, "PRT"},
        {{"NOUN", "ADJ"}, "NP"},
        {{"NOUN", "POSS_PRON"}, "NP"},
        {{"PREP", "NOUN"}, "PP"},
        {{"PREP", "NOUN_PROP"}, "PP"},
        {{"PREP", "PRON"}, "PP"},
        {{"ADJ", "CONJ", "ADJ"}, "ADJP"},
        {{"NOUN", "CONJ", "NOUN"}, "NP"},
        {{"NUM", "NOUN", "ADJ"}, "NP"},
        {{"NOUN", "NOUN_PROP", "CONJ", "NOUN_PROP"}, "NP"},
        {{"NUM", "NOUN_PROP", "CONJ", "NOUN_PROP"}, "NP"},
        {{"PREP", "NUM", "NOUN", "CONJ", "NOUN"}, "PP"},
    };
    return templates;
}

constexpr std::array<const char*, 6> kGrammarClasses = {
    "ADJP", "ADVP", "NP", "PP", "PRT", "VP"};

std::string make_word(Rng& rng) {
    static constexpr char consonants[] = "bdfhklmnqrstwyz";
    static constexpr char vowels[] = "aiu";
    std::size_t syllables = 2 + rng.below(2);
    std::string word;
    for (std::size_t s = 0; s < syllables; ++s) {
        word += consonants[rng.below(sizeof(consonants) - 1)];
        word += vowels[rng.below(sizeof(vowels) - 1)];
    }
    return word;
}

SyntacticClass noisy_label(const SyntacticClass& gold, Rng& rng) {
    std::size_t gold_index = 0;
    for (std::size_t i = 0; i < kGrammarClasses.size(); ++i) {
        if (gold.name() == kGrammarClasses[i]) gold_index = i;
    }
    std::size_t pick = rng.below(kGrammarClasses.size() - 1);
    if (pick >= gold_index) ++pick;
    return SyntacticClass(kGrammarClasses[pick]);
}

}  // namespace

Corpus generate_synthetic_corpus(std::size_t n_sentences, std::uint64_t seed,
                                 double noise) {
    if (noise < 0.0 || noise > 1.0) {
        throw Error("noise must be a probability in [0, 1]");
    }
    Rng rng(seed);
    const auto& templates = grammar();
    std::vector<Sentence> sentences;
    sentences.reserve(n_sentences);
    for (std::size_t s = 0; s < n_sentences; ++s) {
        std::size_t n_chunks = 1 + rng.below(8);
        std::vector<Token> tokens;
        std::vector<Chunk> chunks;
        for (std::size_t c = 0; c < n_chunks; ++c) {
            const ChunkTemplate& tmpl = templates[rng.below(templates.size())];
            std::size_t start = tokens.size();
            for (const char* tag : tmpl.tags) {
                tokens.emplace_back(make_word(rng), PosTag(tag));
            }
            SyntacticClass label{std::string(tmpl.label)};
            if (noise > 0.0 && rng.unit() < noise) {
                label = noisy_label(label, rng);
            }
            chunks.push_back(Chunk{start, tokens.size(), std::move(label)});
        }
        sentences.emplace_back(std::move(tokens), std::move(chunks));
    }
    return Corpus(std::move(sentences));
}

}  // namespace chunkforge
