#pragma once

#include <unordered_map>

#include "seqpred/predictor.hpp"

namespace seqpred {

/// k-th order Markov chain over exact-length windows of the last k symbols.
/// Prefixes shorter than k form their own shorter states (including the empty
/// state), mirroring what the predictor sees near sequence starts. Unseen
/// states fall back to the proportional distribution.
class MarkovPredictor : public Predictor {
public:
    static std::unique_ptr<MarkovPredictor> fit(const SequenceDatabase& train,
                                                std::shared_ptr<const Alphabet> alphabet,
                                                std::size_t order);

    std::string method() const override { return "markov"; }
    std::string params_description() const override { return "k=" + std::to_string(order_); }

    NextSymbolDistribution predict(const SymbolSequence& prefix) const override;

    std::size_t order() const { return order_; }
    bool has_state(const SymbolSequence& state) const { return counts_.count(state) > 0; }

    /// Raw successor counts of a state (empty when unseen); exact rationals
    /// behind the emitted probabilities.
    std::vector<std::pair<Symbol, std::uint64_t>> state_counts(const SymbolSequence& state) const;

    const std::vector<double>& fallback() const { return fallback_; }

    using ExportedState = std::pair<SymbolSequence, std::vector<std::pair<std::uint32_t, std::uint64_t>>>;
    /// Deterministically ordered (state, successor-count) dump for persistence.
    std::vector<ExportedState> export_states() const;
    static std::unique_ptr<MarkovPredictor> from_parts(std::shared_ptr<const Alphabet> alphabet,
                                                       std::size_t order,
                                                       std::vector<ExportedState> states,
                                                       std::vector<double> fallback);

private:
    friend class AkomPredictor;
    MarkovPredictor(std::shared_ptr<const Alphabet> alphabet, std::size_t order);

    using CountVector = std::vector<std::pair<std::uint32_t, std::uint64_t>>; // (alphabet idx, n)
    std::size_t order_;
    std::unordered_map<SymbolSequence, CountVector, SymbolSequence::Hash> counts_;
    std::vector<double> fallback_;
};

/// All-k-order Markov models: predicts with the highest-order model whose
/// state matches the prefix, scanning k_max down to 1, with the proportional
/// fallback when no order matches.
class AkomPredictor : public Predictor {
public:
    static std::unique_ptr<AkomPredictor> fit(const SequenceDatabase& train,
                                              std::shared_ptr<const Alphabet> alphabet,
                                              std::size_t k_max);

    std::string method() const override { return "akom"; }
    std::string params_description() const override { return "k=" + std::to_string(k_max_); }

    NextSymbolDistribution predict(const SymbolSequence& prefix) const override;

    std::size_t k_max() const { return k_max_; }
    const MarkovPredictor& order_model(std::size_t k) const; // 1-based

    static std::unique_ptr<AkomPredictor> from_parts(
        std::shared_ptr<const Alphabet> alphabet, std::size_t k_max,
        std::vector<std::unique_ptr<MarkovPredictor>> models, std::vector<double> fallback);

private:
    AkomPredictor(std::shared_ptr<const Alphabet> alphabet, std::size_t k_max);
    std::size_t k_max_;
    std::vector<std::unique_ptr<MarkovPredictor>> models_; // [0] = order 1
    std::vector<double> fallback_;
};

} // namespace seqpred
