#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chunkforge/corpus.hpp"
#include "chunkforge/rules.hpp"
#include "chunkforge/svm.hpp"

namespace chunkforge {

/// A flat one-level parse: the root is always `S`; each child is one
/// classified group covering the sentence tokens in order.
struct TreeChild {
    SyntacticClass label;
    std::vector<Token> tokens;

    bool operator==(const TreeChild&) const = default;
};

struct ShallowTree {
    std::vector<TreeChild> children;

    bool operator==(const ShallowTree&) const = default;
};

/// Segments the tag sequence with the rules, classifies each group's
/// extraction vector, and returns the predicted chunk spans.
std::vector<Chunk> predict_chunks(std::span<const Token> tokens,
                                  const MulticlassModel& model,
                                  const RuleSet& ruleset);

/// Full analysis step: predicted chunks assembled into a shallow tree.
/// Errors on an empty sentence or a tag outside the model vocabulary.
ShallowTree parse_sentence(std::span<const Token> tokens,
                           const MulticlassModel& model,
                           const RuleSet& ruleset);

/// Renders `(S (LABEL (TAG word)+)+)` — the treebank reader's own grammar,
/// so parser output is re-ingestible.
std::string render_tree(const ShallowTree& tree);

/// One `word/TAG` token per space-separated field, split on the last `/`.
/// line_number (1-based, 0 = unknown) is used in error messages.
std::vector<Token> parse_tagged_sentence(std::string_view line,
                                         std::size_t line_number = 0);

}  // namespace chunkforge
