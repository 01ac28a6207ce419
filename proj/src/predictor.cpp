#include "seqpred/predictor.hpp"

#include "seqpred/errors.hpp"

namespace seqpred {

Predictor::Predictor(std::shared_ptr<const Alphabet> alphabet) : alphabet_(std::move(alphabet)) {
    if (!alphabet_ || alphabet_->empty()) throw FitError("predictor needs a nonempty alphabet");
}

std::vector<double> proportional_frequencies(const SequenceDatabase& train,
                                             const Alphabet& alphabet) {
    if (train.event_count() == 0) {
        throw FitError("proportional frequencies need at least one training event");
    }
    std::vector<double> freqs(alphabet.size(), 0.0);
    for (const auto& entry : train.entries()) {
        for (Symbol s : entry.word) {
            auto idx = alphabet.index_of(s);
            if (!idx) throw FitError("training symbol outside the alphabet: " + s.name());
            freqs[*idx] += static_cast<double>(entry.count);
        }
    }
    const double total = static_cast<double>(train.event_count());
    for (double& f : freqs) f /= total;
    return freqs;
}

RandomPredictor::RandomPredictor(std::shared_ptr<const Alphabet> alphabet)
    : Predictor(std::move(alphabet)) {}

std::unique_ptr<RandomPredictor> RandomPredictor::fit(std::shared_ptr<const Alphabet> alphabet) {
    return std::unique_ptr<RandomPredictor>(new RandomPredictor(std::move(alphabet)));
}

NextSymbolDistribution RandomPredictor::predict(const SymbolSequence&) const {
    return NextSymbolDistribution::uniform(alphabet_);
}

ProportionalPredictor::ProportionalPredictor(std::shared_ptr<const Alphabet> alphabet,
                                             std::vector<double> freqs)
    : Predictor(std::move(alphabet)), frequencies_(std::move(freqs)) {}

std::unique_ptr<ProportionalPredictor> ProportionalPredictor::fit(
    const SequenceDatabase& train, std::shared_ptr<const Alphabet> alphabet) {
    std::vector<double> freqs = proportional_frequencies(train, *alphabet);
    return std::unique_ptr<ProportionalPredictor>(
        new ProportionalPredictor(std::move(alphabet), std::move(freqs)));
}

std::unique_ptr<ProportionalPredictor> ProportionalPredictor::from_frequencies(
    std::shared_ptr<const Alphabet> alphabet, std::vector<double> freqs) {
    if (freqs.size() != alphabet->size()) throw FitError("frequency vector does not match alphabet");
    return std::unique_ptr<ProportionalPredictor>(
        new ProportionalPredictor(std::move(alphabet), std::move(freqs)));
}

NextSymbolDistribution ProportionalPredictor::predict(const SymbolSequence&) const {
    return NextSymbolDistribution(alphabet_, frequencies_);
}

} // namespace seqpred
