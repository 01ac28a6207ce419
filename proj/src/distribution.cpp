#include "seqpred/distribution.hpp"

#include <cmath>

#include "seqpred/errors.hpp"
#include "seqpred/kernels.hpp"

namespace seqpred {

NextSymbolDistribution::NextSymbolDistribution(std::shared_ptr<const Alphabet> alphabet,
                                               std::vector<double> probs)
    : alphabet_(std::move(alphabet)), probs_(std::move(probs)) {
    if (!alphabet_ || probs_.size() != alphabet_->size()) {
        throw Error("distribution size does not match alphabet");
    }
}

NextSymbolDistribution NextSymbolDistribution::uniform(std::shared_ptr<const Alphabet> alphabet) {
    if (!alphabet || alphabet->empty()) throw Error("uniform distribution needs a nonempty alphabet");
    std::size_t n = alphabet->size();
    return NextSymbolDistribution(std::move(alphabet),
                                  std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

NextSymbolDistribution NextSymbolDistribution::from_weights(std::shared_ptr<const Alphabet> alphabet,
                                                            std::vector<double> weights) {
    if (!alphabet || weights.size() != alphabet->size()) {
        throw Error("weight vector size does not match alphabet");
    }
    double total = kernels::sum(weights.data(), weights.size());
    if (total <= 0.0) return uniform(std::move(alphabet));
    kernels::scale(weights.data(), weights.size(), 1.0 / total);
    return NextSymbolDistribution(std::move(alphabet), std::move(weights));
}

double NextSymbolDistribution::prob(Symbol s) const {
    auto idx = alphabet_->index_of(s);
    return idx ? probs_[*idx] : 0.0;
}

bool NextSymbolDistribution::is_valid(double tolerance) const {
    if (!alphabet_ || probs_.size() != alphabet_->size()) return false;
    double total = 0.0;
    for (double p : probs_) {
        if (!(p >= 0.0) || !(p <= 1.0 + tolerance) || std::isnan(p)) return false;
        total += p;
    }
    return std::abs(total - 1.0) <= tolerance;
}

} // namespace seqpred
