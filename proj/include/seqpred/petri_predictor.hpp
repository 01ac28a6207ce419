#pragma once

#include <map>
#include <mutex>

#include "seqpred/alignment.hpp"
#include "seqpred/predictor.hpp"

namespace seqpred {

/// Per-marking firing counts harvested from prefix-alignments of the
/// training log: how often each enabled transition was fired from each
/// marking (tau transitions included, credited to the marking they fire
/// from).
class MarkingDistributionTable {
public:
    void credit(const Marking& marking, TransitionIndex transition, std::uint64_t count = 1);

    const std::map<TransitionIndex, std::uint64_t>* counts_for(const Marking& marking) const;
    std::size_t marking_count() const { return counts_.size(); }

    /// Words whose alignment failed during training (skipped with a warning).
    std::uint64_t skipped_words = 0;

    auto begin() const { return counts_.begin(); }
    auto end() const { return counts_.end(); }

private:
    std::unordered_map<Marking, std::map<TransitionIndex, std::uint64_t>, Marking::Hash> counts_;
};

struct PetriPredictorConfig {
    enum class Mode { uniform, empirical };

    Mode mode = Mode::uniform;
    std::uint64_t monte_carlo_iterations = 10'000;
    std::uint64_t seed = 1;
    double smoothing_alpha = 0.5;          // empirical mode only; 0 = raw counts
    std::uint32_t tau_chain_depth_limit = 1'000;
    /// Markings whose tau-closure is acyclic and at most this large are
    /// evaluated exactly instead of sampled; 0 forces sampling everywhere.
    std::size_t exact_closure_limit = 64;
};

/// Replays the training log with prefix-alignments and counts, per reached
/// marking, the transitions fired by each alignment's extension step.
/// Words that fail to align are skipped and counted.
MarkingDistributionTable train_marking_distributions(const AcceptingPetriNet& apn,
                                                     const SequenceDatabase& train,
                                                     MoveCostScheme costs = {},
                                                     SearchBudget budget = {});

/// Firing distribution over the transitions enabled in m: uniform mode (or a
/// marking absent from the table) gives 1/|enabled|; empirical mode gives
/// (count + alpha) / sum(count + alpha) over the enabled transitions. With
/// all-zero counts any alpha degrades to uniform. Empty on dead markings.
std::vector<std::pair<TransitionIndex, double>> marking_transition_distribution(
    const AcceptingPetriNet& apn, const Marking& m, const MarkingDistributionTable* table,
    double alpha);

struct LabelDistributionResult {
    NextSymbolDistribution distribution;
    bool exact = false;                // analytic tau-closure evaluation was used
    std::uint64_t aborted_walks = 0;   // depth-limit or dead-end resamples
    std::uint64_t total_walks = 0;
    bool dead_marking_fallback = false; // no enabled transition at the start
};

/// Distribution of the next visible label from marking m: walks sample
/// transitions by marking_transition_distribution, crediting the first
/// visible label and walking through taus. When the tau-closure of m is a
/// small DAG the distribution is computed exactly instead. Deterministic per
/// (config.seed, m): walk i uses a seed derived from both, so results do not
/// depend on evaluation or scheduling order.
LabelDistributionResult next_symbol_distribution_mc(const AcceptingPetriNet& apn, const Marking& m,
                                                    const MarkingDistributionTable* table,
                                                    const PetriPredictorConfig& config,
                                                    std::shared_ptr<const Alphabet> alphabet);

/// Accepting-Petri-net predictor: prefix -> prefix-alignment -> marking ->
/// next-label distribution (uniform or empirically trained per marking).
class PetriPredictor : public Predictor {
public:
    static std::unique_ptr<PetriPredictor> fit(AcceptingPetriNet apn,
                                               std::shared_ptr<const Alphabet> alphabet,
                                               const SequenceDatabase* train, // required in empirical mode
                                               PetriPredictorConfig config,
                                               MoveCostScheme costs = {}, SearchBudget budget = {});

    /// Wraps an existing table (persistence path).
    static std::unique_ptr<PetriPredictor> from_table(AcceptingPetriNet apn,
                                                      std::shared_ptr<const Alphabet> alphabet,
                                                      MarkingDistributionTable table,
                                                      PetriPredictorConfig config,
                                                      MoveCostScheme costs = {},
                                                      SearchBudget budget = {});

    std::string method() const override;
    std::string params_description() const override;

    NextSymbolDistribution predict(const SymbolSequence& prefix) const override;

    const AcceptingPetriNet& net() const { return apn_; }
    const MarkingDistributionTable& table() const { return table_; }
    const PetriPredictorConfig& config() const { return config_; }

    /// Aggregate Monte Carlo diagnostics over all predictions so far.
    std::uint64_t aborted_walks() const;
    std::uint64_t total_walks() const;

private:
    PetriPredictor(AcceptingPetriNet apn, std::shared_ptr<const Alphabet> alphabet,
                   PetriPredictorConfig config, MoveCostScheme costs, SearchBudget budget);

    AcceptingPetriNet apn_;
    PetriPredictorConfig config_;
    MarkingDistributionTable table_;
    AlignmentEngine engine_;

    // memo: marking -> label distribution (prefixes collapse onto few markings)
    mutable std::mutex cache_mutex_;
    mutable std::unordered_map<Marking, NextSymbolDistribution, Marking::Hash> distribution_cache_;
    mutable std::uint64_t aborted_walks_ = 0;
    mutable std::uint64_t total_walks_ = 0;
};

} // namespace seqpred
