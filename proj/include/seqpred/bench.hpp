#pragma once

#include <filesystem>
#include <functional>
#include <optional>

#include "seqpred/alignment.hpp"
#include "seqpred/automaton_predictor.hpp"
#include "seqpred/hmm.hpp"
#include "seqpred/petri_predictor.hpp"
#include "seqpred/predictor.hpp"

namespace seqpred {

// --- splits ----------------------------------------------------------------

/// Sequence-level random split: multiplicity-expanded instances are shuffled
/// by a seeded RNG; the first ceil(fraction * N) go to train, the rest to
/// test. Deterministic per seed; throws EvaluationError when either side
/// would be empty.
std::pair<SequenceDatabase, SequenceDatabase> split(const SequenceDatabase& db, double fraction,
                                                    std::uint64_t seed);

/// The 80/20 split of a training set used by hyper-parameter search.
std::pair<SequenceDatabase, SequenceDatabase> inner_split(const SequenceDatabase& train,
                                                          std::uint64_t seed);

// --- scoring ---------------------------------------------------------------

/// Brier score of one prediction event:
/// (1/|alphabet|) * sum_a (pred(a) - [a == actual])^2.
double brier_event(const NextSymbolDistribution& pred, Symbol actual, const Alphabet& alphabet);

/// Mean Brier score over every prediction point of the test set
/// (multiplicities respected). Throws EvaluationError when the test set has
/// no prediction points.
double evaluate(const Predictor& predictor, const SequenceDatabase& test, const Alphabet& alphabet,
                bool include_empty_prefix = false);

// --- confidence intervals ----------------------------------------------------

enum class CiMode { student_t, normal };

/// Two-sided 95% quantile used for the half-width: Student-t with n-1
/// degrees of freedom by default, the normal approximation on request.
double ci_quantile(std::size_t n, CiMode mode);

/// (mean, half-width) of the 95% confidence interval over >= 2 scores.
std::pair<double, double> confidence_interval(const std::vector<double>& scores,
                                              CiMode mode = CiMode::student_t);

// --- methods and grid search -------------------------------------------------

/// A benchmark method row. Grid-searched parameters are left unset; fixed
/// values pin them. Petri methods carry their own configuration and either a
/// PNML path or a discovery request (the paper's process-discovery rows are
/// exempt from grid search).
struct MethodSpec {
    std::string method; // random|proportional|markov|akom|automaton|hmm|active-lezi|petri
    std::string label;  // display name; derived from the method when empty

    std::size_t markov_order = 1;

    std::optional<std::size_t> akom_k;

    std::optional<AbstractionKind> automaton_kind;
    std::optional<std::size_t> automaton_k;

    std::optional<double> hmm_states_ratio;       // n_states = ceil(ratio * |alphabet|)
    std::optional<std::size_t> hmm_states;        // overrides the ratio when set
    std::optional<HmmRegularizer> hmm_regularizer;
    double hmm_epsilon = 0.0;
    std::size_t hmm_max_iters = 50;
    double hmm_tol = 1e-4;
    std::size_t hmm_restarts = 2;

    PetriPredictorConfig petri;
    std::string petri_model_path;                 // import an existing PNML
    std::optional<double> petri_discover_noise;   // or discover with IM/IMf

    std::string display_label() const;
};

struct GridSearchOutcome {
    std::unique_ptr<Predictor> model; // refit on the full training set
    std::string chosen_params;
    double validation_brier = 0.0;
    std::size_t evaluated_configurations = 0;
};

/// Fits a method, running the Table-3 grid search when the spec leaves its
/// parameters open: every configuration is fitted on the 80% inner split and
/// scored on the 20% validation split; the best Brier wins with first-in-grid
/// tie-breaking, and the winner refits on the full training set.
GridSearchOutcome fit_method(const MethodSpec& spec, const SequenceDatabase& train,
                             std::shared_ptr<const Alphabet> alphabet, std::uint64_t seed,
                             bool include_empty_prefix = false);

// --- the benchmark pipeline --------------------------------------------------

struct BenchDataset {
    std::string name;
    std::filesystem::path path;
    LogFormat format = LogFormat::line;
};

struct BenchConfig {
    double train_fraction = 2.0 / 3.0;
    std::size_t repetitions = 3;
    std::vector<std::uint64_t> seeds; // defaults to 1..repetitions
    bool include_empty_prefix = false;
    CiMode ci_mode = CiMode::student_t;
    std::vector<BenchDataset> datasets;
    std::vector<MethodSpec> methods;
    std::filesystem::path output_dir = "bench-out";
};

BenchConfig parse_bench_config(const std::filesystem::path& path);

struct CellResult {
    std::string method_label;
    std::string dataset;
    std::size_t repetition = 0;
    bool failed = false;
    double brier = 0.0;
    std::string params;
    std::string error;
    double runtime_seconds = 0.0;
};

struct MethodSummary {
    std::string method_label;
    std::string dataset;
    std::size_t n = 0;
    double mean = 0.0;
    double ci_half_width = 0.0; // 0 with a "n<2" flag when n < 2
    bool ci_defined = false;
};

struct BenchmarkReport {
    std::vector<CellResult> cells;
    std::vector<std::string> warnings;

    std::vector<MethodSummary> summarize(CiMode mode) const;
    bool any_failures() const;
};

/// Runs the full split -> (grid search) -> fit -> evaluate pipeline for every
/// (dataset x method x repetition) cell. Cell failures are isolated and
/// recorded; the run continues.
BenchmarkReport run_benchmark(const BenchConfig& config);

/// Emits results.csv, report.md and warnings.log under config.output_dir.
/// Byte-identical for identical configs and inputs.
void write_benchmark_outputs(const BenchmarkReport& report, const BenchConfig& config);

} // namespace seqpred
