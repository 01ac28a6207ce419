// seqpredict: sequence database utilities, predictor fitting and the
// benchmark harness behind one command-line entry point.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "seqpred/active_lezi.hpp"
#include "seqpred/alignment.hpp"
#include "seqpred/automaton_predictor.hpp"
#include "seqpred/bench.hpp"
#include "seqpred/discovery.hpp"
#include "seqpred/errors.hpp"
#include "seqpred/hmm.hpp"
#include "seqpred/markov.hpp"
#include "seqpred/model_io.hpp"
#include "seqpred/petri_predictor.hpp"
#include "seqpred/pnml.hpp"

using namespace seqpred;

namespace {

LogFormat parse_format(const std::string& name) {
    if (name == "line") return LogFormat::line;
    if (name == "csv") return LogFormat::csv;
    throw ConfigError("unknown log format: " + name);
}

std::string escape_csv(const std::string& field) {
    bool needs_quotes = field.find_first_of(",\"\n") != std::string::npos;
    if (!needs_quotes) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += "\"";
    return out;
}

std::ostream& open_output(std::ofstream& file, const std::string& path) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path, std::ios::binary);
    if (!file) throw ConfigError("cannot write file: " + path);
    return file;
}

int cmd_discover(const std::string& input, const std::string& format, double noise,
                 const std::string& output, bool print_tree) {
    SequenceDatabase db = load_database(input, parse_format(format));
    ProcessTree tree = inductive_miner(db, noise);
    if (print_tree) std::cout << tree.to_string() << "\n";
    if (!output.empty()) {
        save_pnml(tree_to_net(tree), output);
        std::cerr << "wrote " << output << "\n";
    }
    return 0;
}

int cmd_convert(const std::string& tree_path, const std::string& output) {
    std::ifstream in(tree_path);
    if (!in) throw ConfigError("cannot open tree file: " + tree_path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    ProcessTree tree = parse_process_tree(buffer.str());
    save_pnml(tree_to_net(tree), output);
    std::cerr << "wrote " << output << "\n";
    return 0;
}

int cmd_align(const std::string& model_path, const std::string& input, const std::string& format,
              const std::string& mode, const std::string& output) {
    AcceptingPetriNet apn = load_pnml(model_path);
    SequenceDatabase db = load_database(input, parse_format(format));
    AlignmentEngine engine(apn);

    std::ofstream file;
    std::ostream& out = open_output(file, output);
    out << "word,count,cost,moves\n";
    for (const auto& entry : db.entries()) {
        PrefixAlignment alignment = mode == "full" ? engine.align_full(entry.word)
                                                   : engine.prefix_align(entry.word);
        std::string moves;
        for (const Move& move : alignment.moves) {
            if (!moves.empty()) moves += " ";
            switch (move.kind) {
            case MoveKind::synchronous:
                moves += "(" + move.log_symbol->name() + "," +
                         apn.net.transition(*move.transition).id + ")";
                break;
            case MoveKind::model_move:
                moves += "(>>," + apn.net.transition(*move.transition).id + ")";
                break;
            case MoveKind::log_move:
                moves += "(" + move.log_symbol->name() + ",>>)";
                break;
            }
        }
        out << escape_csv(entry.word.to_string()) << "," << entry.count << "," << alignment.cost
            << "," << escape_csv(moves) << "\n";
    }
    return 0;
}

int cmd_fit(const MethodSpec& spec, const std::string& input, const std::string& format,
            const std::string& output, std::uint64_t seed) {
    SequenceDatabase db = load_database(input, parse_format(format));
    auto alphabet = std::make_shared<Alphabet>(db.alphabet());
    GridSearchOutcome outcome = fit_method(spec, db, alphabet, seed);
    save_model(*outcome.model, output);
    std::cerr << "fitted " << outcome.model->method();
    if (!outcome.chosen_params.empty()) std::cerr << " (" << outcome.chosen_params << ")";
    if (outcome.evaluated_configurations > 1) {
        std::cerr << " via grid search over " << outcome.evaluated_configurations
                  << " configurations";
    }
    std::cerr << "; wrote " << output << "\n";
    return 0;
}

int cmd_predict(const std::string& model_path, const std::string& input, const std::string& format,
                const std::string& output) {
    std::unique_ptr<Predictor> model = load_model(model_path);
    SequenceDatabase db = load_database(input, parse_format(format));

    std::ofstream file;
    std::ostream& out = open_output(file, output);
    out << "prefix";
    for (Symbol s : model->alphabet()) out << "," << escape_csv(s.name());
    out << "\n";
    for (const auto& entry : db.entries()) {
        NextSymbolDistribution dist = model->predict(entry.word);
        out << escape_csv(entry.word.to_string());
        char buffer[32];
        for (std::size_t i = 0; i < dist.size(); ++i) {
            std::snprintf(buffer, sizeof buffer, "%.10f", dist.at(i));
            out << "," << buffer;
        }
        out << "\n";
    }
    return 0;
}

int cmd_bench(const std::string& config_path, bool keep_going) {
    BenchConfig config = parse_bench_config(config_path);
    BenchmarkReport report = run_benchmark(config);
    write_benchmark_outputs(report, config);
    std::size_t failures = 0;
    for (const auto& cell : report.cells) failures += cell.failed ? 1 : 0;
    std::cerr << report.cells.size() << " cells, " << failures << " failed; outputs in "
              << config.output_dir.string() << "\n";
    if (failures > 0 && !keep_going) return 1;
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"probabilistic next-element prediction over symbol sequences"};
    app.require_subcommand(1);

    // discover
    auto* discover = app.add_subcommand("discover", "mine a process model from a sequence database");
    std::string discover_input, discover_format = "line", discover_output;
    double discover_noise = 0.0;
    bool discover_print_tree = false;
    discover->add_option("--input", discover_input, "sequence database")->required();
    discover->add_option("--format", discover_format, "line or csv");
    discover->add_option("--noise-threshold", discover_noise,
                         "infrequent-edge filter in [0,1]; 0 = plain miner");
    discover->add_option("--output", discover_output, "PNML file to write");
    discover->add_flag("--print-tree", discover_print_tree, "print the process tree");

    // convert
    auto* convert = app.add_subcommand("convert", "translate a process-tree file to PNML");
    std::string convert_tree, convert_output;
    convert->add_option("--tree", convert_tree, "process tree text file")->required();
    convert->add_option("--output", convert_output, "PNML file to write")->required();

    // align
    auto* align = app.add_subcommand("align", "align words of a log against an accepting Petri net");
    std::string align_model, align_input, align_format = "line", align_mode = "prefix", align_output;
    align->add_option("--model", align_model, "PNML net")->required();
    align->add_option("--input", align_input, "sequence database")->required();
    align->add_option("--format", align_format, "line or csv");
    align->add_option("--mode", align_mode, "prefix or full")
        ->check(CLI::IsMember({"prefix", "full"}));
    align->add_option("--output", align_output, "CSV output path (default stdout)");

    // fit
    auto* fit = app.add_subcommand("fit", "fit a predictor and persist it as a model file");
    std::string fit_method_name, fit_input, fit_format = "line", fit_output;
    std::uint64_t fit_seed = 1;
    std::string fit_kind, fit_regularizer, fit_model_pnml;
    std::size_t fit_order = 1;
    std::int64_t fit_kmax = -1, fit_k = -1, fit_states = -1;
    double fit_ratio = -1.0, fit_epsilon = 0.0, fit_noise = -1.0, fit_alpha = 0.5;
    std::uint64_t fit_mc = 10'000;
    fit->add_option("--method", fit_method_name,
                    "random|proportional|markov|akom|automaton|hmm|active-lezi|"
                    "petri-uniform|petri-empirical")
        ->required();
    fit->add_option("--input", fit_input, "training database")->required();
    fit->add_option("--format", fit_format, "line or csv");
    fit->add_option("--output", fit_output, "model file to write")->required();
    fit->add_option("--seed", fit_seed, "fit/grid seed");
    fit->add_option("--order", fit_order, "markov order");
    fit->add_option("--k-max", fit_kmax, "akom highest order (omit for grid search)");
    fit->add_option("--kind", fit_kind, "automaton abstraction: seq|mult|set (omit for grid)");
    fit->add_option("--k", fit_k, "automaton window (omit for grid)");
    fit->add_option("--n-states", fit_states, "hmm hidden states (omit for grid)");
    fit->add_option("--states-ratio", fit_ratio, "hmm states/|alphabet| ratio");
    fit->add_option("--regularizer", fit_regularizer, "hmm regularizer: none|additive");
    fit->add_option("--epsilon", fit_epsilon, "hmm additive smoothing mass");
    fit->add_option("--model", fit_model_pnml, "petri: PNML net to use instead of discovery");
    fit->add_option("--noise-threshold", fit_noise, "petri: discover with this IMf threshold");
    fit->add_option("--mc-iterations", fit_mc, "petri: Monte Carlo walks per marking");
    fit->add_option("--alpha", fit_alpha, "petri: empirical-mode additive smoothing");

    // predict
    auto* predict = app.add_subcommand("predict", "emit next-symbol distributions for prefixes");
    std::string predict_model, predict_input, predict_format = "line", predict_output;
    predict->add_option("--model", predict_model, "model file from `fit`")->required();
    predict->add_option("--input", predict_input, "prefixes, one sequence per line")->required();
    predict->add_option("--format", predict_format, "line or csv");
    predict->add_option("--output", predict_output, "CSV output path (default stdout)");

    // bench
    auto* bench = app.add_subcommand("bench", "run the benchmark defined by a JSON config");
    std::string bench_config;
    bool bench_keep_going = false;
    bench->add_option("--config", bench_config, "benchmark configuration file")->required();
    bench->add_flag("--keep-going", bench_keep_going, "exit 0 even when cells failed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (discover->parsed()) {
            return cmd_discover(discover_input, discover_format, discover_noise, discover_output,
                                discover_print_tree);
        }
        if (convert->parsed()) return cmd_convert(convert_tree, convert_output);
        if (align->parsed()) {
            return cmd_align(align_model, align_input, align_format, align_mode, align_output);
        }
        if (fit->parsed()) {
            MethodSpec spec;
            if (fit_method_name == "petri-uniform" || fit_method_name == "petri-empirical") {
                spec.method = "petri";
                spec.petri.mode = fit_method_name == "petri-uniform"
                                      ? PetriPredictorConfig::Mode::uniform
                                      : PetriPredictorConfig::Mode::empirical;
                spec.petri.monte_carlo_iterations = fit_mc;
                spec.petri.smoothing_alpha = fit_alpha;
                spec.petri_model_path = fit_model_pnml;
                if (fit_noise >= 0.0) spec.petri_discover_noise = fit_noise;
            } else {
                spec.method = fit_method_name;
            }
            spec.markov_order = fit_order;
            if (fit_kmax >= 0) spec.akom_k = static_cast<std::size_t>(fit_kmax);
            if (!fit_kind.empty()) spec.automaton_kind = abstraction_kind_from_name(fit_kind);
            if (fit_k >= 0) spec.automaton_k = static_cast<std::size_t>(fit_k);
            if (fit_states >= 0) spec.hmm_states = static_cast<std::size_t>(fit_states);
            if (fit_ratio >= 0.0) spec.hmm_states_ratio = fit_ratio;
            if (!fit_regularizer.empty()) {
                if (fit_regularizer == "none") spec.hmm_regularizer = HmmRegularizer::none;
                else if (fit_regularizer == "additive") spec.hmm_regularizer = HmmRegularizer::additive;
                else throw ConfigError("unknown regularizer: " + fit_regularizer);
            }
            spec.hmm_epsilon = fit_epsilon;
            return cmd_fit(spec, fit_input, fit_format, fit_output, fit_seed);
        }
        if (predict->parsed()) {
            return cmd_predict(predict_model, predict_input, predict_format, predict_output);
        }
        if (bench->parsed()) return cmd_bench(bench_config, bench_keep_going);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
