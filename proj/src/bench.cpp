#include "seqpred/bench.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "seqpred/active_lezi.hpp"
#include "seqpred/discovery.hpp"
#include "seqpred/errors.hpp"
#include "seqpred/kernels.hpp"
#include "seqpred/markov.hpp"
#include "seqpred/pnml.hpp"
#include "seqpred/rng.hpp"

namespace seqpred {

// --- splits ------------------------------------------------------------------

std::pair<SequenceDatabase, SequenceDatabase> split(const SequenceDatabase& db, double fraction,
                                                    std::uint64_t seed) {
    if (fraction <= 0.0 || fraction >= 1.0) throw EvaluationError("split fraction must be in (0,1)");
    if (db.sequence_count() < 2) throw EvaluationError("split needs at least two sequences");

    std::vector<std::size_t> instances; // index into db.entries(), one per instance
    for (std::size_t i = 0; i < db.entries().size(); ++i) {
        for (std::uint64_t c = 0; c < db.entries()[i].count; ++c) instances.push_back(i);
    }
    DetRng rng(seed);
    deterministic_shuffle(instances, rng);

    const double scaled = fraction * static_cast<double>(instances.size());
    auto train_size = static_cast<std::size_t>(std::ceil(scaled - 1e-9));
    if (train_size == 0 || train_size >= instances.size()) {
        throw EvaluationError("split would leave an empty train or test side");
    }
    SequenceDatabase train, test;
    for (std::size_t i = 0; i < instances.size(); ++i) {
        (i < train_size ? train : test).add(db.entries()[instances[i]].word, 1);
    }
    return {std::move(train), std::move(test)};
}

std::pair<SequenceDatabase, SequenceDatabase> inner_split(const SequenceDatabase& train,
                                                          std::uint64_t seed) {
    return split(train, 0.8, seed);
}

// --- scoring -------------------------------------------------------------------

double brier_event(const NextSymbolDistribution& pred, Symbol actual, const Alphabet& alphabet) {
    auto actual_index = alphabet.index_of(actual);
    if (!actual_index) throw EvaluationError("actual symbol outside the alphabet: " + actual.name());
    if (pred.size() != alphabet.size()) throw EvaluationError("prediction over a different alphabet");
    // sum_a (p_a - [a==actual])^2 = sum p^2 - 2 p_actual + 1
    const std::vector<double>& p = pred.probs();
    double sum_sq = kernels::sum_squares(p.data(), p.size());
    return (sum_sq - 2.0 * p[*actual_index] + 1.0) / static_cast<double>(alphabet.size());
}

double evaluate(const Predictor& predictor, const SequenceDatabase& test, const Alphabet& alphabet,
                bool include_empty_prefix) {
    double total = 0.0;
    std::uint64_t points = 0;
    for_each_prediction_point(test, include_empty_prefix,
                              [&](const SymbolSequence& word, std::size_t k, Symbol actual,
                                  std::uint64_t multiplicity) {
                                  NextSymbolDistribution pred = predictor.predict(word.head(k));
                                  total += static_cast<double>(multiplicity) *
                                           brier_event(pred, actual, alphabet);
                                  points += multiplicity;
                              });
    if (points == 0) throw EvaluationError("test set has no prediction points");
    return total / static_cast<double>(points);
}

// --- method fitting and grid search --------------------------------------------

std::string MethodSpec::display_label() const {
    if (!label.empty()) return label;
    if (method == "markov") return "markov" + std::to_string(markov_order);
    if (method == "petri") {
        std::string base;
        if (!petri_model_path.empty()) {
            base = "pnml";
        } else if (petri_discover_noise && *petri_discover_noise > 0.0) {
            int percent = static_cast<int>(std::lround(*petri_discover_noise * 100));
            base = "imf" + std::to_string(percent);
        } else {
            base = "im";
        }
        return base + (petri.mode == PetriPredictorConfig::Mode::uniform ? "-uniform" : "-empirical");
    }
    return method;
}

namespace {

struct Candidate {
    std::string params;
    std::function<std::unique_ptr<Predictor>(const SequenceDatabase&, std::uint64_t)> fit;
};

GridSearchOutcome run_grid(const std::vector<Candidate>& grid, const SequenceDatabase& train,
                           const Alphabet& alphabet, std::uint64_t seed,
                           bool include_empty_prefix) {
    if (grid.empty()) throw ConfigError("empty hyper-parameter grid");

    GridSearchOutcome outcome;
    outcome.evaluated_configurations = grid.size();

    std::size_t best_index = grid.size();
    double best_score = 0.0;
    std::vector<std::string> failures;

    if (grid.size() == 1) {
        best_index = 0;
    } else {
        auto [fit_part, validation] = inner_split(train, seed);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            try {
                auto model = grid[i].fit(fit_part, derive_seed(seed, i));
                double score = evaluate(*model, validation, alphabet, include_empty_prefix);
                if (best_index == grid.size() || score < best_score) { // first-in-grid wins ties
                    best_index = i;
                    best_score = score;
                }
            } catch (const Error& e) {
                failures.push_back(grid[i].params + ": " + e.what());
            }
        }
        if (best_index == grid.size()) {
            std::string detail;
            for (const auto& f : failures) detail += "\n  " + f;
            throw ConfigError("every grid configuration failed to fit:" + detail);
        }
        outcome.validation_brier = best_score;
    }

    outcome.model = grid[best_index].fit(train, derive_seed(seed, best_index));
    outcome.chosen_params = grid[best_index].params;
    return outcome;
}

std::vector<Candidate> build_grid(const MethodSpec& spec, std::shared_ptr<const Alphabet> alphabet) {
    std::vector<Candidate> grid;
    const std::string& method = spec.method;

    if (method == "random") {
        grid.push_back({"", [alphabet](const SequenceDatabase&, std::uint64_t) -> std::unique_ptr<Predictor> {
                            return RandomPredictor::fit(alphabet);
                        }});
    } else if (method == "proportional") {
        grid.push_back({"", [alphabet](const SequenceDatabase& db, std::uint64_t) -> std::unique_ptr<Predictor> {
                            return ProportionalPredictor::fit(db, alphabet);
                        }});
    } else if (method == "markov") {
        std::size_t order = spec.markov_order;
        grid.push_back({"k=" + std::to_string(order),
                        [alphabet, order](const SequenceDatabase& db, std::uint64_t) -> std::unique_ptr<Predictor> {
                            return MarkovPredictor::fit(db, alphabet, order);
                        }});
    } else if (method == "akom") {
        std::vector<std::size_t> ks;
        if (spec.akom_k) ks.push_back(*spec.akom_k);
        else for (std::size_t k = 1; k <= 19; ++k) ks.push_back(k);
        for (std::size_t k : ks) {
            grid.push_back({"k=" + std::to_string(k),
                            [alphabet, k](const SequenceDatabase& db, std::uint64_t) -> std::unique_ptr<Predictor> {
                                return AkomPredictor::fit(db, alphabet, k);
                            }});
        }
    } else if (method == "automaton") {
        std::vector<AbstractionKind> kinds;
        if (spec.automaton_kind) kinds.push_back(*spec.automaton_kind);
        else kinds = {AbstractionKind::sequence, AbstractionKind::multiset, AbstractionKind::set};
        std::vector<std::size_t> ks;
        if (spec.automaton_k) ks.push_back(*spec.automaton_k);
        else for (std::size_t k = 1; k <= 19; ++k) ks.push_back(k);
        for (AbstractionKind kind : kinds) {
            for (std::size_t k : ks) {
                std::string params =
                    std::string("kind=") + abstraction_kind_name(kind) + ";k=" + std::to_string(k);
                grid.push_back({params,
                                [alphabet, kind, k](const SequenceDatabase& db, std::uint64_t) -> std::unique_ptr<Predictor> {
                                    return AutomatonPredictor::fit(db, alphabet, kind, k);
                                }});
            }
        }
    } else if (method == "hmm") {
        struct Axis {
            std::size_t n_states;
            HmmRegularizer regularizer;
            double epsilon;
            std::string params;
        };
        std::vector<Axis> axes;
        auto states_for = [&](double ratio) {
            return std::max<std::size_t>(
                1, static_cast<std::size_t>(std::ceil(ratio * static_cast<double>(alphabet->size()))));
        };
        if (spec.hmm_states || spec.hmm_states_ratio || spec.hmm_regularizer) {
            std::size_t n = spec.hmm_states ? *spec.hmm_states
                                            : states_for(spec.hmm_states_ratio.value_or(1.0));
            HmmRegularizer reg = spec.hmm_regularizer.value_or(HmmRegularizer::none);
            axes.push_back({n, reg, spec.hmm_epsilon, "states=" + std::to_string(n)});
        } else {
            for (double ratio : {0.1, 0.5, 1.0, 1.5, 2.0, 3.0, 5.0}) {
                for (int reg = 0; reg < 3; ++reg) {
                    Axis axis;
                    axis.n_states = states_for(ratio);
                    axis.regularizer = reg == 0 ? HmmRegularizer::none : HmmRegularizer::additive;
                    axis.epsilon = reg == 0 ? 0.0 : (reg == 1 ? 1e-2 : 1e-1);
                    char buffer[96];
                    std::snprintf(buffer, sizeof buffer, "ratio=%.1f;reg=%s", ratio,
                                  reg == 0 ? "none" : (reg == 1 ? "add1e-2" : "add1e-1"));
                    axis.params = buffer;
                    axes.push_back(axis);
                }
            }
        }
        for (const Axis& axis : axes) {
            HmmOptions options;
            options.n_states = axis.n_states;
            options.regularizer = axis.regularizer;
            options.epsilon = axis.epsilon;
            options.max_iters = spec.hmm_max_iters;
            options.tol = spec.hmm_tol;
            options.restarts = spec.hmm_restarts;
            grid.push_back({axis.params,
                            [alphabet, options](const SequenceDatabase& db, std::uint64_t seed) -> std::unique_ptr<Predictor> {
                                HmmOptions seeded = options;
                                seeded.seed = seed;
                                return HmmPredictor::fit(db, alphabet, seeded);
                            }});
        }
    } else if (method == "active-lezi") {
        grid.push_back({"", [alphabet](const SequenceDatabase& db, std::uint64_t) -> std::unique_ptr<Predictor> {
                            return ActiveLeziPredictor::fit(db, alphabet);
                        }});
    } else if (method == "petri") {
        // process-discovery predictors are exempt from grid search
        PetriPredictorConfig config = spec.petri;
        std::string model_path = spec.petri_model_path;
        std::optional<double> noise = spec.petri_discover_noise;
        if (model_path.empty() && !noise) noise = 0.0;
        grid.push_back(
            {"", [alphabet, config, model_path, noise](const SequenceDatabase& db, std::uint64_t seed) -> std::unique_ptr<Predictor> {
                 PetriPredictorConfig seeded = config;
                 seeded.seed = derive_seed(seed, 0x9e77);
                 AcceptingPetriNet apn = model_path.empty()
                                             ? tree_to_net(inductive_miner(db, *noise))
                                             : load_pnml(model_path);
                 const SequenceDatabase* train_ptr =
                     seeded.mode == PetriPredictorConfig::Mode::empirical ? &db : nullptr;
                 return PetriPredictor::fit(std::move(apn), alphabet, train_ptr, seeded);
             }});
    } else {
        throw ConfigError("unknown method: " + method);
    }
    return grid;
}

} // namespace

GridSearchOutcome fit_method(const MethodSpec& spec, const SequenceDatabase& train,
                             std::shared_ptr<const Alphabet> alphabet, std::uint64_t seed,
                             bool include_empty_prefix) {
    std::vector<Candidate> grid = build_grid(spec, alphabet);
    return run_grid(grid, train, *alphabet, seed, include_empty_prefix);
}

// --- config parsing ------------------------------------------------------------

namespace {

using nlohmann::json;

MethodSpec parse_method_spec(const json& m) {
    MethodSpec spec;
    spec.method = m.at("method").get<std::string>();
    spec.label = m.value("label", std::string());
    if (spec.method == "markov") spec.markov_order = m.value("order", 1);
    if (spec.method == "akom" && m.contains("k_max")) spec.akom_k = m.at("k_max").get<std::size_t>();
    if (spec.method == "automaton") {
        if (m.contains("kind")) spec.automaton_kind = abstraction_kind_from_name(m.at("kind"));
        if (m.contains("k")) spec.automaton_k = m.at("k").get<std::size_t>();
    }
    if (spec.method == "hmm") {
        if (m.contains("n_states")) spec.hmm_states = m.at("n_states").get<std::size_t>();
        if (m.contains("states_ratio")) spec.hmm_states_ratio = m.at("states_ratio").get<double>();
        if (m.contains("regularizer")) {
            std::string reg = m.at("regularizer").get<std::string>();
            if (reg == "none") spec.hmm_regularizer = HmmRegularizer::none;
            else if (reg == "additive") spec.hmm_regularizer = HmmRegularizer::additive;
            else throw ConfigError("unknown hmm regularizer: " + reg);
        }
        spec.hmm_epsilon = m.value("epsilon", 0.0);
        spec.hmm_max_iters = m.value("max_iters", std::size_t{50});
        spec.hmm_tol = m.value("tol", 1e-4);
        spec.hmm_restarts = m.value("restarts", std::size_t{2});
    }
    if (spec.method == "petri") {
        std::string mode = m.value("mode", std::string("uniform"));
        if (mode == "uniform") spec.petri.mode = PetriPredictorConfig::Mode::uniform;
        else if (mode == "empirical") spec.petri.mode = PetriPredictorConfig::Mode::empirical;
        else throw ConfigError("unknown petri mode: " + mode);
        spec.petri.monte_carlo_iterations = m.value("monte_carlo_iterations", std::uint64_t{10'000});
        spec.petri.smoothing_alpha = m.value("smoothing_alpha", 0.5);
        if (m.contains("model")) spec.petri_model_path = m.at("model").get<std::string>();
        if (m.contains("noise_threshold")) {
            spec.petri_discover_noise = m.at("noise_threshold").get<double>();
        }
    }
    return spec;
}

} // namespace

BenchConfig parse_bench_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    try {
        BenchConfig config;
        config.train_fraction = doc.value("train_fraction", 2.0 / 3.0);
        config.repetitions = doc.value("repetitions", std::size_t{3});
        config.include_empty_prefix = doc.value("include_empty_prefix", false);
        if (doc.contains("seeds")) config.seeds = doc.at("seeds").get<std::vector<std::uint64_t>>();
        if (doc.contains("ci")) {
            std::string ci = doc.at("ci").get<std::string>();
            if (ci == "student-t") config.ci_mode = CiMode::student_t;
            else if (ci == "normal") config.ci_mode = CiMode::normal;
            else throw ConfigError("unknown ci mode: " + ci);
        }
        if (doc.contains("output_dir")) config.output_dir = doc.at("output_dir").get<std::string>();
        for (const auto& d : doc.at("datasets")) {
            BenchDataset dataset;
            dataset.name = d.at("name").get<std::string>();
            dataset.path = d.at("path").get<std::string>();
            std::string format = d.value("format", std::string("line"));
            if (format == "line") dataset.format = LogFormat::line;
            else if (format == "csv") dataset.format = LogFormat::csv;
            else throw ConfigError("unknown dataset format: " + format);
            config.datasets.push_back(std::move(dataset));
        }
        for (const auto& m : doc.at("methods")) config.methods.push_back(parse_method_spec(m));
        if (config.seeds.empty()) {
            for (std::size_t r = 0; r < config.repetitions; ++r) config.seeds.push_back(r + 1);
        }
        if (config.seeds.size() != config.repetitions) {
            throw ConfigError("seeds list must have one entry per repetition");
        }
        if (config.datasets.empty() || config.methods.empty()) {
            throw ConfigError("config needs at least one dataset and one method");
        }
        return config;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

// --- pipeline --------------------------------------------------------------------

std::vector<MethodSummary> BenchmarkReport::summarize(CiMode mode) const {
    std::vector<MethodSummary> out;
    // preserve first-appearance order of (method, dataset) pairs
    std::vector<std::pair<std::string, std::string>> order;
    std::map<std::pair<std::string, std::string>, std::vector<double>> scores;
    for (const CellResult& cell : cells) {
        auto key = std::make_pair(cell.method_label, cell.dataset);
        if (!scores.count(key)) order.push_back(key);
        if (!cell.failed) scores[key].push_back(cell.brier);
        else scores.try_emplace(key);
    }
    for (const auto& key : order) {
        const std::vector<double>& values = scores[key];
        MethodSummary summary;
        summary.method_label = key.first;
        summary.dataset = key.second;
        summary.n = values.size();
        if (values.size() >= 2) {
            auto [mean, half] = confidence_interval(values, mode);
            summary.mean = mean;
            summary.ci_half_width = half;
            summary.ci_defined = true;
        } else if (values.size() == 1) {
            summary.mean = values[0];
        }
        out.push_back(summary);
    }
    return out;
}

bool BenchmarkReport::any_failures() const {
    for (const CellResult& cell : cells) {
        if (cell.failed) return true;
    }
    return false;
}

BenchmarkReport run_benchmark(const BenchConfig& config) {
    BenchmarkReport report;
    for (const BenchDataset& dataset : config.datasets) {
        SequenceDatabase db;
        try {
            db = load_database(dataset.path, dataset.format);
        } catch (const Error& e) {
            report.warnings.push_back("dataset " + dataset.name + ": " + e.what());
            for (const MethodSpec& method : config.methods) {
                for (std::size_t r = 0; r < config.repetitions; ++r) {
                    report.cells.push_back({method.display_label(), dataset.name, r, true, 0.0, "",
                                            e.what(), 0.0});
                }
            }
            continue;
        }
        // the evaluation alphabet is the full database's, shared by both sides
        auto alphabet = std::make_shared<Alphabet>(db.alphabet());

        for (const MethodSpec& method : config.methods) {
            for (std::size_t r = 0; r < config.repetitions; ++r) {
                CellResult cell;
                cell.method_label = method.display_label();
                cell.dataset = dataset.name;
                cell.repetition = r;
                auto started = std::chrono::steady_clock::now();
                try {
                    auto [train, test] = split(db, config.train_fraction, config.seeds[r]);
                    GridSearchOutcome outcome = fit_method(
                        method, train, alphabet, derive_seed(config.seeds[r], 0xbe9c),
                        config.include_empty_prefix);
                    cell.params = outcome.chosen_params;
                    cell.brier = evaluate(*outcome.model, test, *alphabet,
                                          config.include_empty_prefix);
                } catch (const Error& e) {
                    cell.failed = true;
                    cell.error = e.what();
                    report.warnings.push_back(cell.method_label + "/" + dataset.name + "/rep" +
                                              std::to_string(r) + ": " + e.what());
                }
                cell.runtime_seconds =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
                        .count();
                report.cells.push_back(std::move(cell));
            }
        }
    }
    return report;
}

namespace {

std::string format_brier(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.10f", value);
    return buffer;
}

std::string format_report_number(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.4f", value);
    return buffer;
}

} // namespace

void write_benchmark_outputs(const BenchmarkReport& report, const BenchConfig& config) {
    std::filesystem::create_directories(config.output_dir);

    {
        std::ofstream csv(config.output_dir / "results.csv", std::ios::binary);
        csv << "method,dataset,repetition,brier,params\n";
        for (const CellResult& cell : report.cells) {
            csv << cell.method_label << "," << cell.dataset << "," << cell.repetition << ",";
            csv << (cell.failed ? "NA" : format_brier(cell.brier));
            csv << ",\"" << cell.params << "\"\n";
        }
    }

    {
        std::ofstream md(config.output_dir / "report.md", std::ios::binary);
        md << "# Benchmark report\n\n";
        md << "Mean Brier score and 95% confidence interval per method and dataset";
        md << " (" << config.repetitions << " repetitions).\n\n";

        std::vector<MethodSummary> summaries = report.summarize(config.ci_mode);
        std::vector<std::string> datasets;
        std::vector<std::string> methods;
        for (const auto& s : summaries) {
            if (std::find(datasets.begin(), datasets.end(), s.dataset) == datasets.end()) {
                datasets.push_back(s.dataset);
            }
            if (std::find(methods.begin(), methods.end(), s.method_label) == methods.end()) {
                methods.push_back(s.method_label);
            }
        }
        md << "| Method |";
        for (const auto& d : datasets) md << " " << d << " |";
        md << "\n|---|";
        for (std::size_t i = 0; i < datasets.size(); ++i) md << "---|";
        md << "\n";
        for (const auto& m : methods) {
            md << "| " << m << " |";
            for (const auto& d : datasets) {
                auto it = std::find_if(summaries.begin(), summaries.end(), [&](const MethodSummary& s) {
                    return s.method_label == m && s.dataset == d;
                });
                if (it == summaries.end() || it->n == 0) {
                    md << " failed |";
                } else if (!it->ci_defined) {
                    md << " " << format_report_number(it->mean) << " (n<2) |";
                } else {
                    md << " " << format_report_number(it->mean) << " ± "
                       << format_report_number(it->ci_half_width) << " |";
                }
            }
            md << "\n";
        }
    }

    {
        std::ofstream log(config.output_dir / "warnings.log", std::ios::binary);
        for (const auto& w : report.warnings) log << w << "\n";
    }
}

} // namespace seqpred
