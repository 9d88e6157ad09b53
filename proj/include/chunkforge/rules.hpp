#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "chunkforge/corpus.hpp"

namespace chunkforge {

/// A mined POS-sequence -> class rule.  Patterns are 1-5 tags long.
struct ChunkRule {
    std::vector<PosTag> pattern;
    SyntacticClass label;
    std::size_t support = 0;

    bool operator==(const ChunkRule&) const = default;
};

/// An immutable set of rules with unique patterns, kept in canonical order
/// (descending support, then pattern) with a pattern lookup index.
class RuleSet {
public:
    RuleSet() = default;
    explicit RuleSet(std::vector<ChunkRule> rules, std::size_t skipped_long = 0);

    const std::vector<ChunkRule>& rules() const { return rules_; }
    std::size_t size() const { return rules_.size(); }
    bool empty() const { return rules_.empty(); }

    /// Gold chunks longer than 5 tags seen (and skipped) while mining.
    std::size_t skipped_long() const { return skipped_long_; }

    /// Exact pattern lookup; nullptr when absent.
    const ChunkRule* find(std::span<const PosTag> pattern) const;

    bool operator==(const RuleSet& other) const { return rules_ == other.rules_; }

private:
    std::vector<ChunkRule> rules_;
    std::map<std::string, std::size_t> index_;
    std::size_t skipped_long_ = 0;
};

/// One rule per distinct gold chunk tag-sequence of length <= 5; the label is
/// the majority class (ties broken by smallest class name) and the support is
/// the total occurrence count.  Longer sequences are tallied as skipped.
RuleSet extract_rules(const Corpus& corpus);

/// Longest rule whose pattern equals tags[from .. from+k), k <= 5.
std::optional<std::pair<std::size_t, const ChunkRule*>> match_longest(
    const RuleSet& ruleset, std::span<const PosTag> tags, std::size_t from);

/// A segmented span; rule is nullptr for an unmatched singleton.
struct Group {
    std::size_t start = 0;
    std::size_t end = 0;
    const ChunkRule* rule = nullptr;
};

/// Greedy left-to-right longest-match segmentation.  Groups partition
/// [0, tags.size()) exactly.
std::vector<Group> segment(std::span<const PosTag> tags, const RuleSet& ruleset);

/// Rule file: one `TAG[,TAG...]<TAB>CLASS<TAB>support` line per rule in
/// canonical order; `#` lines are comments.
void write_rule_file(std::ostream& out, const RuleSet& ruleset);
RuleSet read_rule_file(std::istream& in);

}  // namespace chunkforge
