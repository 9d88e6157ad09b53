#include "chunkforge/rules.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>

#include "chunkforge/error.hpp"
#include "chunkforge/text.hpp"

namespace chunkforge {

namespace {

constexpr std::size_t kMaxPatternLength = 5;

std::string pattern_key(std::span<const PosTag> pattern) {
    std::string key;
    for (const PosTag& tag : pattern) {
        if (!key.empty()) key += ',';
        key += tag.name();
    }
    return key;
}

bool pattern_less(const std::vector<PosTag>& a, const std::vector<PosTag>& b) {
    return std::lexicographical_compare(
        a.begin(), a.end(), b.begin(), b.end(),
        [](const PosTag& x, const PosTag& y) { return x.name() < y.name(); });
}

}  // namespace

RuleSet::RuleSet(std::vector<ChunkRule> rules, std::size_t skipped_long)
    : rules_(std::move(rules)), skipped_long_(skipped_long) {
    for (const ChunkRule& rule : rules_) {
        if (rule.pattern.empty() || rule.pattern.size() > kMaxPatternLength) {
            throw Error("rule pattern must have 1 to 5 tags");
        }
        if (rule.support == 0) {
            throw Error("rule support must be at least 1");
        }
    }
    std::stable_sort(rules_.begin(), rules_.end(),
                     [](const ChunkRule& a, const ChunkRule& b) {
                         if (a.support != b.support) return a.support > b.support;
                         return pattern_less(a.pattern, b.pattern);
                     });
    for (std::size_t i = 0; i < rules_.size(); ++i) {
        auto [it, inserted] = index_.emplace(pattern_key(rules_[i].pattern), i);
        if (!inserted) {
            throw Error("duplicate rule pattern '" + it->first + "'");
        }
    }
}

const ChunkRule* RuleSet::find(std::span<const PosTag> pattern) const {
    auto it = index_.find(pattern_key(pattern));
    return it == index_.end() ? nullptr : &rules_[it->second];
}

RuleSet extract_rules(const Corpus& corpus) {
    // pattern key -> (tags, class name -> count)
    std::map<std::string, std::pair<std::vector<PosTag>, std::map<std::string, std::size_t>>>
        counts;
    std::size_t skipped_long = 0;
    for (const Sentence& sentence : corpus.sentences()) {
        for (auto& [tags, label] : extract_chunk_sequences(sentence)) {
            if (tags.size() > kMaxPatternLength) {
                ++skipped_long;
                continue;
            }
            auto& entry = counts[pattern_key(tags)];
            if (entry.first.empty()) entry.first = std::move(tags);
            ++entry.second[label.name()];
        }
    }

    std::vector<ChunkRule> rules;
    rules.reserve(counts.size());
    for (auto& [key, entry] : counts) {
        auto& class_counts = entry.second;
        std::size_t support = 0;
        // std::map iterates class names in ascending order, so keeping a
        // strictly greater maximum breaks ties toward the smallest name.
        std::string majority;
        std::size_t majority_count = 0;
        for (const auto& [name, count] : class_counts) {
            support += count;
            if (count > majority_count) {
                majority = name;
                majority_count = count;
            }
        }
        rules.push_back(ChunkRule{std::move(entry.first),
                                  SyntacticClass(majority), support});
    }
    return RuleSet(std::move(rules), skipped_long);
}

std::optional<std::pair<std::size_t, const ChunkRule*>> match_longest(
    const RuleSet& ruleset, std::span<const PosTag> tags, std::size_t from) {
    if (from >= tags.size()) {
        throw Error("match position " + std::to_string(from) +
                    " is out of range");
    }
    std::size_t longest = std::min(kMaxPatternLength, tags.size() - from);
    for (std::size_t k = longest; k >= 1; --k) {
        if (const ChunkRule* rule = ruleset.find(tags.subspan(from, k))) {
            return std::make_pair(k, rule);
        }
    }
    return std::nullopt;
}

std::vector<Group> segment(std::span<const PosTag> tags, const RuleSet& ruleset) {
    std::vector<Group> groups;
    std::size_t at = 0;
    while (at < tags.size()) {
        if (auto match = match_longest(ruleset, tags, at)) {
            groups.push_back(Group{at, at + match->first, match->second});
            at += match->first;
        } else {
            groups.push_back(Group{at, at + 1, nullptr});
            ++at;
        }
    }
    return groups;
}

void write_rule_file(std::ostream& out, const RuleSet& ruleset) {
    out << "# pattern\tclass\tsupport\n";
    for (const ChunkRule& rule : ruleset.rules()) {
        out << pattern_key(rule.pattern) << '\t' << rule.label.name() << '\t'
            << rule.support << '\n';
    }
}

RuleSet read_rule_file(std::istream& in) {
    std::vector<ChunkRule> rules;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto fields = split(line, '\t');
        if (fields.size() != 3) {
            throw Error("line " + std::to_string(line_number) +
                        ": expected pattern<TAB>class<TAB>support");
        }
        std::vector<PosTag> pattern;
        for (const std::string& name : split(fields[0], ',')) {
            try {
                pattern.emplace_back(name);
            } catch (const Error& e) {
                throw Error("line " + std::to_string(line_number) + ": " +
                            e.what());
            }
        }
        if (pattern.size() > kMaxPatternLength) {
            throw Error("line " + std::to_string(line_number) +
                        ": pattern longer than 5 tags");
        }
        std::size_t support = 0;
        auto [ptr, ec] = std::from_chars(
            fields[2].data(), fields[2].data() + fields[2].size(), support);
        if (ec != std::errc() || ptr != fields[2].data() + fields[2].size() ||
            support == 0) {
            throw Error("line " + std::to_string(line_number) +
                        ": bad support count '" + fields[2] + "'");
        }
        try {
            rules.push_back(
                ChunkRule{std::move(pattern), SyntacticClass(fields[1]), support});
        } catch (const Error& e) {
            throw Error("line " + std::to_string(line_number) + ": " + e.what());
        }
    }
    return RuleSet(std::move(rules));
}

}  // namespace chunkforge
