#include "chunkforge/cli.hpp"

#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "chunkforge/corpus.hpp"
#include "chunkforge/error.hpp"
#include "chunkforge/eval.hpp"
#include "chunkforge/features.hpp"
#include "chunkforge/parser.hpp"
#include "chunkforge/rules.hpp"
#include "chunkforge/svm.hpp"

namespace chunkforge::cli {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path + "'");
    return out;
}

void finish_output(std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out) throw Error("failed while writing '" + path + "'");
}

RuleSet read_rules_from(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    try {
        return read_rule_file(in);
    } catch (const Error& e) {
        throw Error(path + ": " + e.what());
    }
}

MulticlassModel load_model_from(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    try {
        return load_model(in);
    } catch (const Error& e) {
        throw Error(path + ": " + e.what());
    }
}

Corpus read_treebank_from(const std::string& path) {
    try {
        return read_treebank(read_file(path));
    } catch (const ParseError& e) {
        throw Error(path + ": " + e.what());
    }
}

std::vector<EncodedSample> encode_labeled(const VectorizedCorpus& vectorized) {
    std::vector<EncodedSample> encoded;
    encoded.reserve(vectorized.vectors.size());
    for (const ExtractionVector& vector : vectorized.vectors) {
        encoded.push_back(encode(vector, vectorized.vocab));
    }
    return encoded;
}

struct Options {
    std::string treebank;
    std::string rules;
    std::string model;
    std::string input;
    std::string output;
    double c = 1.0;
    double tol = 1e-3;
    double holdout = 0.8;
    std::size_t kfold = 0;
    bool kfold_given = false;
    std::uint64_t seed = 0;
    std::size_t sentences = 0;
    double noise = 0.0;
    std::string report = "text";
};

int cmd_rules(const Options& opt) {
    Corpus corpus = read_treebank_from(opt.treebank);
    RuleSet rules = extract_rules(corpus);
    std::ofstream out = open_output(opt.output);
    write_rule_file(out, rules);
    finish_output(out, opt.output);
    return 0;
}

int cmd_vectors(const Options& opt) {
    Corpus corpus = read_treebank_from(opt.treebank);
    RuleSet rules = read_rules_from(opt.rules);
    VectorizedCorpus vectorized = vectorize_corpus(corpus, rules);
    std::ofstream out = open_output(opt.output);
    write_vector_file(out, vectorized.vectors, vectorized.vocab);
    finish_output(out, opt.output);
    return 0;
}

int cmd_train(const Options& opt) {
    Corpus corpus = read_treebank_from(opt.treebank);
    RuleSet rules = extract_rules(corpus);
    {
        std::ofstream out = open_output(opt.rules);
        write_rule_file(out, rules);
        finish_output(out, opt.rules);
    }
    VectorizedCorpus vectorized = vectorize_corpus(corpus, rules);
    TrainConfig config{opt.c, opt.tol, 100};
    MulticlassModel model =
        train_multiclass(encode_labeled(vectorized), vectorized.vocab, config);
    std::ofstream out = open_output(opt.model);
    save_model(out, model);
    finish_output(out, opt.model);
    return 0;
}

int cmd_parse(const Options& opt, std::ostream& console) {
    MulticlassModel model = load_model_from(opt.model);
    RuleSet rules = read_rules_from(opt.rules);
    std::string text = read_file(opt.input);

    std::string rendered;
    std::istringstream lines(text);
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(lines, line)) {
        ++line_number;
        std::vector<Token> tokens;
        try {
            tokens = parse_tagged_sentence(line, line_number);
        } catch (const Error& e) {
            throw Error(opt.input + ": " + e.what());
        }
        if (tokens.empty()) continue;
        try {
            rendered += render_tree(parse_sentence(tokens, model, rules));
            rendered += '\n';
        } catch (const Error& e) {
            throw Error(opt.input + ": line " + std::to_string(line_number) +
                        ": " + e.what());
        }
    }

    if (opt.output.empty()) {
        console << rendered;
    } else {
        std::ofstream out = open_output(opt.output);
        out << rendered;
        finish_output(out, opt.output);
    }
    return 0;
}

int cmd_eval(const Options& opt, std::ostream& console) {
    Corpus corpus = read_treebank_from(opt.treebank);
    TrainConfig config{opt.c, opt.tol, 100};
    ReportStyle style =
        opt.report == "kv" ? ReportStyle::kv : ReportStyle::text;
    if (opt.kfold_given) {
        KfoldResult result =
            kfold_cross_validate(corpus, opt.kfold, opt.seed, config);
        write_kfold_report(console, result, style);
    } else {
        HoldoutResult result =
            holdout_evaluate(corpus, opt.holdout, opt.seed, config);
        write_holdout_report(console, result, style);
    }
    return 0;
}

int cmd_synth(const Options& opt) {
    Corpus corpus = generate_synthetic_corpus(opt.sentences, opt.seed, opt.noise);
    std::ofstream out = open_output(opt.output);
    for (const Sentence& sentence : corpus.sentences()) {
        out << render_sentence(sentence) << '\n';
    }
    finish_output(out, opt.output);
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& argv, std::ostream& out,
        std::ostream& err) {
    CLI::App app{"Shallow parser: rule mining plus one-vs-one linear SVM "
                 "chunk classification for POS-tagged text",
                 "chunkforge"};
    app.require_subcommand(1);
    Options opt;

    auto* rules_cmd =
        app.add_subcommand("rules", "Mine segmentation rules from a treebank");
    rules_cmd->add_option("--treebank", opt.treebank, "Bracketed treebank file")
        ->required();
    rules_cmd->add_option("--out", opt.output, "Rule file to write")->required();

    auto* vectors_cmd = app.add_subcommand(
        "vectors", "Export the labeled extraction vectors of a treebank");
    vectors_cmd->add_option("--treebank", opt.treebank, "Bracketed treebank file")
        ->required();
    vectors_cmd->add_option("--rules", opt.rules, "Rule file")->required();
    vectors_cmd->add_option("--out", opt.output, "Vector file to write")
        ->required();

    auto* train_cmd = app.add_subcommand(
        "train", "Mine rules and train the multiclass model from a treebank");
    train_cmd->add_option("--treebank", opt.treebank, "Bracketed treebank file")
        ->required();
    train_cmd->add_option("--model", opt.model, "Model file to write")
        ->required();
    train_cmd->add_option("--rules", opt.rules, "Rule file to write")
        ->required();
    train_cmd->add_option("--c", opt.c, "Soft-margin penalty")
        ->check(CLI::PositiveNumber);
    train_cmd->add_option("--tol", opt.tol, "Solver tolerance")
        ->check(CLI::PositiveNumber);

    auto* parse_cmd = app.add_subcommand(
        "parse", "Parse POS-tagged sentences into shallow trees");
    parse_cmd->add_option("--model", opt.model, "Model file")->required();
    parse_cmd->add_option("--rules", opt.rules, "Rule file")->required();
    parse_cmd->add_option("--input", opt.input,
                          "Tagged input, one word/TAG sentence per line")
        ->required();
    parse_cmd->add_option("--out", opt.output,
                          "Output file (default: standard output)");

    auto* eval_cmd = app.add_subcommand(
        "eval", "Evaluate on a treebank with holdout or k-fold protocol");
    eval_cmd->add_option("--treebank", opt.treebank, "Bracketed treebank file")
        ->required();
    auto* holdout_opt = eval_cmd->add_option(
        "--holdout", opt.holdout, "Train fraction for a holdout split");
    auto* kfold_opt =
        eval_cmd->add_option("--kfold", opt.kfold, "Number of folds");
    holdout_opt->excludes(kfold_opt);
    kfold_opt->excludes(holdout_opt);
    eval_cmd->add_option("--seed", opt.seed, "Shuffle seed")->required();
    eval_cmd->add_option("--c", opt.c, "Soft-margin penalty")
        ->check(CLI::PositiveNumber);
    eval_cmd->add_option("--tol", opt.tol, "Solver tolerance")
        ->check(CLI::PositiveNumber);
    eval_cmd->add_option("--report", opt.report, "Report style")
        ->check(CLI::IsMember({"text", "kv"}));

    auto* synth_cmd = app.add_subcommand(
        "synth", "Generate a deterministic synthetic treebank");
    synth_cmd->add_option("--sentences", opt.sentences, "Sentence count")
        ->required();
    synth_cmd->add_option("--seed", opt.seed, "Generator seed")->required();
    synth_cmd->add_option("--noise", opt.noise, "Label noise probability")
        ->check(CLI::Range(0.0, 1.0));
    synth_cmd->add_option("--out", opt.output, "Treebank file to write")
        ->required();

    std::vector<const char*> args;
    args.reserve(argv.size());
    for (const std::string& arg : argv) args.push_back(arg.c_str());

    try {
        app.parse(static_cast<int>(args.size()), args.data());
        opt.kfold_given = kfold_opt->count() > 0;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        err << app.help();
        return 1;
    }

    try {
        if (rules_cmd->parsed()) return cmd_rules(opt);
        if (vectors_cmd->parsed()) return cmd_vectors(opt);
        if (train_cmd->parsed()) return cmd_train(opt);
        if (parse_cmd->parsed()) return cmd_parse(opt, out);
        if (eval_cmd->parsed()) return cmd_eval(opt, out);
        if (synth_cmd->parsed()) return cmd_synth(opt);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

}  // namespace chunkforge::cli
