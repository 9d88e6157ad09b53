#include "chunkforge/features.hpp"

#include <algorithm>
#include <istream>
#include <ostream>

#include "chunkforge/error.hpp"
#include "chunkforge/text.hpp"

namespace chunkforge {

namespace {

constexpr std::size_t kSlotCount = 5;
constexpr const char* kFeatureHeader =
    "@features POS-W,POS-LEFT-1,POS-LEFT-2,POS-LEFT-3,POS-LEFT-4";

void index_unique(const std::vector<std::string>& entries,
                  std::map<std::string, std::size_t>& index, const char* kind) {
    for (std::size_t i = 0; i < entries.size(); ++i) {
        auto [it, inserted] = index.emplace(entries[i], i);
        if (!inserted) {
            throw Error(std::string("duplicate ") + kind + " '" + entries[i] +
                        "' in vocabulary");
        }
    }
}

}  // namespace

Vocabulary::Vocabulary() : tag_list_{kPadSymbol} {
    tag_index_.emplace(kPadSymbol, 0);
}

Vocabulary::Vocabulary(std::vector<std::string> tag_list,
                       std::vector<std::string> class_list)
    : tag_list_(std::move(tag_list)), class_list_(std::move(class_list)) {
    index_unique(tag_list_, tag_index_, "tag");
    index_unique(class_list_, class_index_, "class");
    if (tag_index_.find(kPadSymbol) == tag_index_.end()) {
        throw Error("vocabulary tag list is missing the pad symbol '?'");
    }
}

std::optional<std::size_t> Vocabulary::tag_index(const std::string& symbol) const {
    auto it = tag_index_.find(symbol);
    if (it == tag_index_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::size_t> Vocabulary::class_index(const std::string& name) const {
    auto it = class_index_.find(name);
    if (it == class_index_.end()) return std::nullopt;
    return it->second;
}

Vocabulary build_vocabulary(const Corpus& corpus) {
    std::vector<std::string> tags;
    tags.reserve(corpus.tag_inventory().size() + 1);
    tags.emplace_back(kPadSymbol);
    for (const PosTag& tag : corpus.tag_inventory()) tags.push_back(tag.name());
    std::sort(tags.begin(), tags.end());

    std::vector<std::string> classes;
    classes.reserve(corpus.class_inventory().size());
    for (const SyntacticClass& c : corpus.class_inventory()) {
        classes.push_back(c.name());
    }
    std::sort(classes.begin(), classes.end());
    return Vocabulary(std::move(tags), std::move(classes));
}

ExtractionVector build_vector(std::span<const PosTag> group_tags) {
    if (group_tags.empty()) throw Error("cannot vectorize an empty group");
    if (group_tags.size() > kSlotCount) {
        throw Error("group of " + std::to_string(group_tags.size()) +
                    " tags exceeds the 5-slot vector");
    }
    ExtractionVector vector;
    for (std::size_t s = 0; s < kSlotCount; ++s) {
        vector.slots[s] =
            s < group_tags.size() ? group_tags[s].name() : kPadSymbol;
    }
    return vector;
}

void validate_vector(const ExtractionVector& vector, const Vocabulary& vocab) {
    if (vector.slots[0] == kPadSymbol) {
        throw Error("slot 1 of an extraction vector may not be the pad");
    }
    bool padded = false;
    for (std::size_t s = 0; s < kSlotCount; ++s) {
        const std::string& symbol = vector.slots[s];
        if (symbol == kPadSymbol) {
            padded = true;
        } else if (padded) {
            throw Error("pads must be suffix-only; slot " +
                        std::to_string(s + 1) + " holds '" + symbol +
                        "' after a pad");
        }
        if (!vocab.tag_index(symbol)) {
            throw Error("slot " + std::to_string(s + 1) + ": unknown symbol " +
                        symbol);
        }
    }
    if (vector.label && !vocab.class_index(vector.label->name())) {
        throw Error("unknown class " + vector.label->name());
    }
}

VectorizedCorpus vectorize_corpus(const Corpus& corpus, const RuleSet&) {
    VectorizedCorpus out{{}, build_vocabulary(corpus)};
    for (const Sentence& sentence : corpus.sentences()) {
        for (auto& [tags, label] : extract_chunk_sequences(sentence)) {
            if (tags.size() > kSlotCount) continue;
            ExtractionVector vector = build_vector(tags);
            vector.label = label;
            out.vectors.push_back(std::move(vector));
        }
    }
    return out;
}

EncodedSample encode(const ExtractionVector& vector, const Vocabulary& vocab) {
    EncodedSample sample;
    sample.features.assign(kSlotCount * vocab.tag_list().size(), 0.0);
    for (std::size_t s = 0; s < kSlotCount; ++s) {
        auto index = vocab.tag_index(vector.slots[s]);
        if (!index) {
            throw Error("slot " + std::to_string(s + 1) + ": unknown symbol " +
                        vector.slots[s]);
        }
        sample.features[s * vocab.tag_list().size() + *index] = 1.0;
    }
    if (vector.label) {
        auto index = vocab.class_index(vector.label->name());
        if (!index) throw Error("unknown class " + vector.label->name());
        sample.label_index = *index;
    }
    return sample;
}

namespace {

std::string header_line(const char* keyword,
                        const std::vector<std::string>& entries) {
    std::string line = keyword;
    if (!entries.empty()) {
        line += ' ';
        line += join(entries, ",");
    }
    return line;
}

std::vector<std::string> parse_header_line(const std::string& line,
                                           const char* keyword,
                                           std::size_t line_number) {
    std::string prefix = keyword;
    if (line == prefix) return {};
    prefix += ' ';
    if (line.rfind(prefix, 0) != 0) {
        throw Error("line " + std::to_string(line_number) + ": expected '" +
                    keyword + "' header");
    }
    return split(line.substr(prefix.size()), ',');
}

}  // namespace

void write_vector_file(std::ostream& out,
                       std::span<const ExtractionVector> vectors,
                       const Vocabulary& vocab) {
    out << kFeatureHeader << '\n';
    out << header_line("@tags", vocab.tag_list()) << '\n';
    out << header_line("@classes", vocab.class_list()) << '\n';
    for (const ExtractionVector& vector : vectors) {
        validate_vector(vector, vocab);
        out << join(vector.slots, ",") << ','
            << (vector.label ? vector.label->name() : kPadSymbol) << '\n';
    }
}

VectorizedCorpus read_vector_file(std::istream& in) {
    std::string line;
    std::size_t line_number = 0;
    auto next_line = [&](const char* what) {
        if (!std::getline(in, line)) {
            throw Error(std::string("missing ") + what + " header");
        }
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
    };

    next_line("@features");
    if (line != kFeatureHeader) {
        throw Error("line 1: expected the feature header '" +
                    std::string(kFeatureHeader) + "'");
    }
    next_line("@tags");
    auto tags = parse_header_line(line, "@tags", line_number);
    next_line("@classes");
    auto classes = parse_header_line(line, "@classes", line_number);
    VectorizedCorpus out{{}, Vocabulary(std::move(tags), std::move(classes))};

    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split(line, ',');
        if (fields.size() != kSlotCount + 1) {
            throw Error("line " + std::to_string(line_number) + ": expected " +
                        std::to_string(kSlotCount + 1) + " fields, got " +
                        std::to_string(fields.size()));
        }
        ExtractionVector vector;
        for (std::size_t s = 0; s < kSlotCount; ++s) {
            vector.slots[s] = std::move(fields[s]);
        }
        if (fields[kSlotCount] != kPadSymbol) {
            vector.label = SyntacticClass(fields[kSlotCount]);
        }
        try {
            validate_vector(vector, out.vocab);
        } catch (const Error& e) {
            throw Error("line " + std::to_string(line_number) + ": " + e.what());
        }
        out.vectors.push_back(std::move(vector));
    }
    return out;
}

}  // namespace chunkforge
