#pragma once

#include <memory>
#include <string>

#include "seqpred/database.hpp"
#include "seqpred/distribution.hpp"

namespace seqpred {

/// The universal probabilistic-predictor contract: fit once against a
/// training database and a fixed alphabet, then map any prefix to a
/// distribution over the next symbol. Fitted predictors are immutable and
/// predict is pure (Monte Carlo predictors are seeded, so deterministic per
/// seed).
class Predictor {
public:
    virtual ~Predictor() = default;

    virtual std::string method() const = 0;
    /// Human-readable parameter summary, e.g. "k=2" ("" when parameter-free).
    virtual std::string params_description() const { return ""; }

    virtual NextSymbolDistribution predict(const SymbolSequence& prefix) const = 0;

    const Alphabet& alphabet() const { return *alphabet_; }
    std::shared_ptr<const Alphabet> alphabet_ptr() const { return alphabet_; }

protected:
    explicit Predictor(std::shared_ptr<const Alphabet> alphabet);
    std::shared_ptr<const Alphabet> alphabet_;
};

/// Event frequencies of the training database over `alphabet`; the shared
/// fallback of every predictor that can meet an unknown state.
/// Throws FitError when the database has no events.
std::vector<double> proportional_frequencies(const SequenceDatabase& train,
                                             const Alphabet& alphabet);

/// Uniform 1/|Σ| regardless of the prefix.
class RandomPredictor : public Predictor {
public:
    static std::unique_ptr<RandomPredictor> fit(std::shared_ptr<const Alphabet> alphabet);

    std::string method() const override { return "random"; }
    NextSymbolDistribution predict(const SymbolSequence& prefix) const override;

private:
    explicit RandomPredictor(std::shared_ptr<const Alphabet> alphabet);
};

/// Training-event frequency distribution regardless of the prefix.
class ProportionalPredictor : public Predictor {
public:
    static std::unique_ptr<ProportionalPredictor> fit(const SequenceDatabase& train,
                                                      std::shared_ptr<const Alphabet> alphabet);

    static std::unique_ptr<ProportionalPredictor> from_frequencies(
        std::shared_ptr<const Alphabet> alphabet, std::vector<double> freqs);

    std::string method() const override { return "proportional"; }
    NextSymbolDistribution predict(const SymbolSequence& prefix) const override;

    const std::vector<double>& frequencies() const { return frequencies_; }

private:
    ProportionalPredictor(std::shared_ptr<const Alphabet> alphabet, std::vector<double> freqs);
    std::vector<double> frequencies_;
};

} // namespace seqpred
