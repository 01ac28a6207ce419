#pragma once

#include <memory>
#include <vector>

#include "seqpred/symbol.hpp"

namespace seqpred {

/// A categorical distribution over a fixed alphabet; the universal predictor
/// output. Probabilities are index-aligned with the alphabet and sum to 1
/// within 1e-9.
class NextSymbolDistribution {
public:
    static constexpr double sum_tolerance = 1e-9;

    NextSymbolDistribution() = default;
    NextSymbolDistribution(std::shared_ptr<const Alphabet> alphabet, std::vector<double> probs);

    /// Uniform 1/|Σ| over the alphabet.
    static NextSymbolDistribution uniform(std::shared_ptr<const Alphabet> alphabet);

    /// Normalizes non-negative weights; all-zero weights degrade to uniform.
    static NextSymbolDistribution from_weights(std::shared_ptr<const Alphabet> alphabet,
                                               std::vector<double> weights);

    const Alphabet& alphabet() const { return *alphabet_; }
    std::shared_ptr<const Alphabet> alphabet_ptr() const { return alphabet_; }

    std::size_t size() const { return probs_.size(); }
    double at(std::size_t index) const { return probs_.at(index); }
    double prob(Symbol s) const;
    const std::vector<double>& probs() const { return probs_; }

    /// True when probabilities are in [0,1] and sum to 1 within tolerance.
    bool is_valid(double tolerance = sum_tolerance) const;

private:
    std::shared_ptr<const Alphabet> alphabet_;
    std::vector<double> probs_;
};

} // namespace seqpred
