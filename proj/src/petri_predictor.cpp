#include "seqpred/petri_predictor.hpp"

#include <algorithm>

#include "seqpred/errors.hpp"
#include "seqpred/rng.hpp"

namespace seqpred {

void MarkingDistributionTable::credit(const Marking& marking, TransitionIndex transition,
                                      std::uint64_t count) {
    counts_[marking][transition] += count;
}

const std::map<TransitionIndex, std::uint64_t>* MarkingDistributionTable::counts_for(
    const Marking& marking) const {
    auto it = counts_.find(marking);
    return it == counts_.end() ? nullptr : &it->second;
}

MarkingDistributionTable train_marking_distributions(const AcceptingPetriNet& apn,
                                                     const SequenceDatabase& train,
                                                     MoveCostScheme costs, SearchBudget budget) {
    AlignmentEngine engine(apn, costs, budget);
    MarkingDistributionTable table;

    for (const auto& entry : train.entries()) {
        const SymbolSequence& word = entry.word;
        try {
            // for each k, credit the extension step of the prefix-alignment of
            // head(word, k) relative to head(word, k-1): every transition fired
            // after the (k-1)-th consumed symbol, at the marking it fires from
            for (std::size_t k = 1; k <= word.size(); ++k) {
                PrefixAlignment alignment = engine.prefix_align(word.head(k));
                Marking marking = apn.initial_marking;
                std::size_t consumed = 0;
                for (const Move& move : alignment.moves) {
                    bool in_extension = consumed + 1 == k;
                    if (move.transition) {
                        if (in_extension) table.credit(marking, *move.transition, entry.count);
                        marking = fire(apn.net, marking, *move.transition);
                    }
                    if (move.log_symbol) ++consumed;
                }
            }
        } catch (const Error&) {
            table.skipped_words += entry.count;
        }
    }
    return table;
}

std::vector<std::pair<TransitionIndex, double>> marking_transition_distribution(
    const AcceptingPetriNet& apn, const Marking& m, const MarkingDistributionTable* table,
    double alpha) {
    std::vector<TransitionIndex> enabled = enabled_transitions(apn.net, m);
    std::vector<std::pair<TransitionIndex, double>> out;
    if (enabled.empty()) return out;

    const std::map<TransitionIndex, std::uint64_t>* counts =
        table != nullptr ? table->counts_for(m) : nullptr;

    std::vector<double> weights(enabled.size(), 0.0);
    double total = 0.0;
    if (counts != nullptr) {
        for (std::size_t i = 0; i < enabled.size(); ++i) {
            auto it = counts->find(enabled[i]);
            double w = (it != counts->end() ? static_cast<double>(it->second) : 0.0) + alpha;
            weights[i] = w;
            total += w;
        }
    }
    if (counts == nullptr || total <= 0.0) {
        // uniform mode, unseen marking, or all-zero counts with alpha 0
        double p = 1.0 / static_cast<double>(enabled.size());
        for (TransitionIndex t : enabled) out.emplace_back(t, p);
        return out;
    }
    for (std::size_t i = 0; i < enabled.size(); ++i) {
        out.emplace_back(enabled[i], weights[i] / total);
    }
    return out;
}

namespace {

/// Exact next-label distribution when the tau-closure of m is a DAG of at
/// most `limit` markings: recursive expectation over the firing distribution,
/// with dead ends contributing no mass (renormalized away, matching what
/// resampling converges to). Returns nothing when a tau-cycle appears or the
/// closure exceeds the limit.
class ExactEvaluator {
public:
    ExactEvaluator(const AcceptingPetriNet& apn, const MarkingDistributionTable* table,
                   double alpha, std::size_t n_labels,
                   const std::unordered_map<std::uint32_t, std::size_t>& label_index,
                   std::size_t limit)
        : apn_(apn), table_(table), alpha_(alpha), n_labels_(n_labels), label_index_(label_index),
          limit_(limit) {}

    std::optional<std::vector<double>> evaluate(const Marking& m) {
        auto result = visit(m);
        if (!result) return std::nullopt;
        // drop the dead-end mass and renormalize
        double live = 0.0;
        for (double p : *result) live += p;
        if (live <= 0.0) return std::nullopt; // everything dead: caller falls back
        for (double& p : *result) p /= live;
        return result;
    }

private:
    // distribution over labels (possibly sub-stochastic when dead ends eat
    // mass); nullopt on cycle or size overflow
    std::optional<std::vector<double>> visit(const Marking& m) {
        auto it = memo_.find(m);
        if (it != memo_.end()) {
            if (!it->second) return std::nullopt; // on the recursion stack: tau cycle
            return *it->second;
        }
        if (memo_.size() >= limit_) return std::nullopt;
        memo_.emplace(m, std::nullopt);

        std::vector<double> out(n_labels_, 0.0);
        for (const auto& [t, p] : marking_transition_distribution(apn_, m, table_, alpha_)) {
            const auto& transition = apn_.net.transition(t);
            if (transition.label) {
                out[label_index_.at(transition.label->id())] += p;
            } else {
                auto sub = visit(fire(apn_.net, m, t));
                if (!sub) {
                    memo_.erase(m);
                    return std::nullopt;
                }
                for (std::size_t i = 0; i < n_labels_; ++i) out[i] += p * (*sub)[i];
            }
        }
        memo_[m] = out;
        return out;
    }

    const AcceptingPetriNet& apn_;
    const MarkingDistributionTable* table_;
    double alpha_;
    std::size_t n_labels_;
    const std::unordered_map<std::uint32_t, std::size_t>& label_index_;
    std::size_t limit_;
    std::unordered_map<Marking, std::optional<std::vector<double>>, Marking::Hash> memo_;
};

} // namespace

LabelDistributionResult next_symbol_distribution_mc(const AcceptingPetriNet& apn, const Marking& m,
                                                    const MarkingDistributionTable* table,
                                                    const PetriPredictorConfig& config,
                                                    std::shared_ptr<const Alphabet> alphabet) {
    LabelDistributionResult result{NextSymbolDistribution::uniform(alphabet), false, 0, 0, false};

    std::unordered_map<std::uint32_t, std::size_t> label_index;
    for (std::size_t i = 0; i < alphabet->size(); ++i) label_index.emplace(alphabet->at(i).id(), i);

    const MarkingDistributionTable* effective_table =
        config.mode == PetriPredictorConfig::Mode::empirical ? table : nullptr;
    const double alpha =
        config.mode == PetriPredictorConfig::Mode::empirical ? config.smoothing_alpha : 0.0;

    if (enabled_transitions(apn.net, m).empty()) {
        // dead marking: nothing the model can say; uniform with a flag
        result.dead_marking_fallback = true;
        return result;
    }

    if (config.exact_closure_limit > 0) {
        ExactEvaluator evaluator(apn, effective_table, alpha, alphabet->size(), label_index,
                                 config.exact_closure_limit);
        if (auto exact = evaluator.evaluate(m)) {
            result.distribution = NextSymbolDistribution(alphabet, std::move(*exact));
            result.exact = true;
            return result;
        }
    }

    // Monte Carlo: K independent walks with per-walk derived seeds
    const std::uint64_t marking_salt = Marking::Hash{}(m);
    std::vector<double> counts(alphabet->size(), 0.0);
    std::uint64_t credited = 0;
    for (std::uint64_t walk = 0; walk < config.monte_carlo_iterations; ++walk) {
        DetRng rng(derive_seed(derive_seed(config.seed, marking_salt), walk));
        Marking current = m;
        bool done = false;
        for (std::uint32_t depth = 0; depth < config.tau_chain_depth_limit && !done; ++depth) {
            auto dist = marking_transition_distribution(apn, current, effective_table, alpha);
            if (dist.empty()) break; // dead end mid-walk: abort and resample
            double r = rng.next_double();
            TransitionIndex chosen = dist.back().first;
            for (const auto& [t, p] : dist) {
                if (r < p) {
                    chosen = t;
                    break;
                }
                r -= p;
            }
            const auto& transition = apn.net.transition(chosen);
            if (transition.label) {
                counts[label_index.at(transition.label->id())] += 1.0;
                credited += 1;
                done = true;
            } else {
                current = fire(apn.net, current, chosen);
            }
        }
        if (!done) result.aborted_walks += 1;
    }
    result.total_walks = config.monte_carlo_iterations;
    if (credited == 0) {
        result.dead_marking_fallback = true;
        return result; // uniform fallback
    }
    for (double& c : counts) c /= static_cast<double>(credited);
    result.distribution = NextSymbolDistribution(alphabet, std::move(counts));
    return result;
}

PetriPredictor::PetriPredictor(AcceptingPetriNet apn, std::shared_ptr<const Alphabet> alphabet,
                               PetriPredictorConfig config, MoveCostScheme costs,
                               SearchBudget budget)
    : Predictor(std::move(alphabet)), apn_(std::move(apn)), config_(config),
      engine_(apn_, costs, budget) {}

std::unique_ptr<PetriPredictor> PetriPredictor::fit(AcceptingPetriNet apn,
                                                    std::shared_ptr<const Alphabet> alphabet,
                                                    const SequenceDatabase* train,
                                                    PetriPredictorConfig config,
                                                    MoveCostScheme costs, SearchBudget budget) {
    auto predictor = std::unique_ptr<PetriPredictor>(
        new PetriPredictor(std::move(apn), std::move(alphabet), config, costs, budget));
    if (config.mode == PetriPredictorConfig::Mode::empirical) {
        if (train == nullptr) throw FitError("empirical mode needs a training database");
        predictor->table_ = train_marking_distributions(predictor->apn_, *train, costs, budget);
    }
    return predictor;
}

std::unique_ptr<PetriPredictor> PetriPredictor::from_table(AcceptingPetriNet apn,
                                                           std::shared_ptr<const Alphabet> alphabet,
                                                           MarkingDistributionTable table,
                                                           PetriPredictorConfig config,
                                                           MoveCostScheme costs,
                                                           SearchBudget budget) {
    auto predictor = std::unique_ptr<PetriPredictor>(
        new PetriPredictor(std::move(apn), std::move(alphabet), config, costs, budget));
    predictor->table_ = std::move(table);
    return predictor;
}

std::string PetriPredictor::method() const {
    return config_.mode == PetriPredictorConfig::Mode::uniform ? "petri-uniform"
                                                               : "petri-empirical";
}

std::string PetriPredictor::params_description() const {
    std::string out = "K=" + std::to_string(config_.monte_carlo_iterations);
    if (config_.mode == PetriPredictorConfig::Mode::empirical) {
        out += ";alpha=" + std::to_string(config_.smoothing_alpha);
    }
    return out;
}

NextSymbolDistribution PetriPredictor::predict(const SymbolSequence& prefix) const {
    Marking marking = engine_.prefix_align(prefix).final_marking;
    {
        std::lock_guard<std::mutex> lock(cache_mutex_);
        auto it = distribution_cache_.find(marking);
        if (it != distribution_cache_.end()) return it->second;
    }
    LabelDistributionResult result =
        next_symbol_distribution_mc(apn_, marking, &table_, config_, alphabet_);
    std::lock_guard<std::mutex> lock(cache_mutex_);
    aborted_walks_ += result.aborted_walks;
    total_walks_ += result.total_walks;
    distribution_cache_.emplace(std::move(marking), result.distribution);
    return result.distribution;
}

std::uint64_t PetriPredictor::aborted_walks() const {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    return aborted_walks_;
}

std::uint64_t PetriPredictor::total_walks() const {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    return total_walks_;
}

} // namespace seqpred
