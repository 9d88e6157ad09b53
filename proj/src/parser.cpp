#include "chunkforge/parser.hpp"

#include "chunkforge/error.hpp"
#include "chunkforge/features.hpp"

namespace chunkforge {

std::vector<Chunk> predict_chunks(std::span<const Token> tokens,
                                  const MulticlassModel& model,
                                  const RuleSet& ruleset) {
    if (tokens.empty()) throw Error("empty sentence");

    std::vector<PosTag> tags;
    tags.reserve(tokens.size());
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (!model.vocab.tag_index(tokens[i].tag.name())) {
            throw Error("token " + std::to_string(i) + ": unknown tag " +
                        tokens[i].tag.name());
        }
        tags.push_back(tokens[i].tag);
    }

    std::vector<Chunk> chunks;
    for (const Group& group : segment(tags, ruleset)) {
        ExtractionVector vector = build_vector(
            std::span<const PosTag>(tags).subspan(group.start,
                                                  group.end - group.start));
        Classification result = classify(model, vector);
        chunks.push_back(Chunk{group.start, group.end, result.winner});
    }
    return chunks;
}

ShallowTree parse_sentence(std::span<const Token> tokens,
                           const MulticlassModel& model,
                           const RuleSet& ruleset) {
    ShallowTree tree;
    for (const Chunk& chunk : predict_chunks(tokens, model, ruleset)) {
        TreeChild child;
        child.label = chunk.label;
        child.tokens.assign(tokens.begin() + chunk.start,
                            tokens.begin() + chunk.end);
        tree.children.push_back(std::move(child));
    }
    return tree;
}

std::string render_tree(const ShallowTree& tree) {
    std::string out = "(S";
    for (const TreeChild& child : tree.children) {
        out += " (" + child.label.name();
        for (const Token& token : child.tokens) {
            out += " (" + token.tag.name() + " " + token.surface + ")";
        }
        out += ")";
    }
    out += ")";
    return out;
}

std::vector<Token> parse_tagged_sentence(std::string_view line,
                                         std::size_t line_number) {
    auto context = [&](const std::string& what) {
        if (line_number == 0) return what;
        return "line " + std::to_string(line_number) + ": " + what;
    };

    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' ||
                                   line[i] == '\r')) {
            ++i;
        }
        if (i >= line.size()) break;
        std::size_t begin = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' &&
               line[i] != '\r') {
            ++i;
        }
        std::string_view field = line.substr(begin, i - begin);
        std::size_t slash = field.rfind('/');
        if (slash == std::string_view::npos) {
            throw Error(context("token '" + std::string(field) +
                                "' is missing its /TAG suffix"));
        }
        try {
            tokens.emplace_back(std::string(field.substr(0, slash)),
                                PosTag(std::string(field.substr(slash + 1))));
        } catch (const Error& e) {
            throw Error(context("token '" + std::string(field) + "': " +
                                e.what()));
        }
    }
    return tokens;
}

}  // namespace chunkforge
