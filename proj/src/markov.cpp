#include "seqpred/markov.hpp"

#include <algorithm>

#include "seqpred/errors.hpp"

namespace seqpred {

MarkovPredictor::MarkovPredictor(std::shared_ptr<const Alphabet> alphabet, std::size_t order)
    : Predictor(std::move(alphabet)), order_(order) {}

std::unique_ptr<MarkovPredictor> MarkovPredictor::fit(const SequenceDatabase& train,
                                                      std::shared_ptr<const Alphabet> alphabet,
                                                      std::size_t order) {
    if (order < 1) throw FitError("markov order must be at least 1");
    auto model = std::unique_ptr<MarkovPredictor>(new MarkovPredictor(alphabet, order));
    model->fallback_ = proportional_frequencies(train, *alphabet);

    for (const auto& entry : train.entries()) {
        const SymbolSequence& word = entry.word;
        for (std::size_t pos = 0; pos < word.size(); ++pos) {
            // window of the last `order` symbols before position pos
            std::size_t window = std::min(order, pos);
            SymbolSequence state(std::vector<Symbol>(word.begin() + static_cast<std::ptrdiff_t>(pos - window),
                                                     word.begin() + static_cast<std::ptrdiff_t>(pos)));
            auto next = alphabet->index_of(word.at(pos));
            if (!next) throw FitError("training symbol outside the alphabet: " + word.at(pos).name());
            CountVector& counts = model->counts_[std::move(state)];
            auto it = std::lower_bound(counts.begin(), counts.end(), *next,
                                       [](const auto& e, std::size_t idx) { return e.first < idx; });
            if (it != counts.end() && it->first == *next) it->second += entry.count;
            else counts.insert(it, {static_cast<std::uint32_t>(*next), entry.count});
        }
    }
    return model;
}

NextSymbolDistribution MarkovPredictor::predict(const SymbolSequence& prefix) const {
    SymbolSequence state = prefix.tail(order_);
    auto it = counts_.find(state);
    if (it == counts_.end()) return NextSymbolDistribution(alphabet_, fallback_);
    std::vector<double> weights(alphabet_->size(), 0.0);
    for (const auto& [idx, n] : it->second) weights[idx] = static_cast<double>(n);
    return NextSymbolDistribution::from_weights(alphabet_, std::move(weights));
}

std::vector<std::pair<Symbol, std::uint64_t>> MarkovPredictor::state_counts(
    const SymbolSequence& state) const {
    std::vector<std::pair<Symbol, std::uint64_t>> out;
    auto it = counts_.find(state);
    if (it == counts_.end()) return out;
    for (const auto& [idx, n] : it->second) out.emplace_back(alphabet_->at(idx), n);
    return out;
}

std::vector<MarkovPredictor::ExportedState> MarkovPredictor::export_states() const {
    std::vector<ExportedState> out;
    out.reserve(counts_.size());
    for (const auto& [state, counts] : counts_) out.emplace_back(state, counts);
    std::sort(out.begin(), out.end(), [](const ExportedState& a, const ExportedState& b) {
        if (a.first.size() != b.first.size()) return a.first.size() < b.first.size();
        for (std::size_t i = 0; i < a.first.size(); ++i) {
            const std::string& an = a.first.at(i).name();
            const std::string& bn = b.first.at(i).name();
            if (an != bn) return an < bn;
        }
        return false;
    });
    return out;
}

std::unique_ptr<MarkovPredictor> MarkovPredictor::from_parts(
    std::shared_ptr<const Alphabet> alphabet, std::size_t order,
    std::vector<ExportedState> states, std::vector<double> fallback) {
    auto model = std::unique_ptr<MarkovPredictor>(new MarkovPredictor(std::move(alphabet), order));
    model->fallback_ = std::move(fallback);
    for (auto& [state, counts] : states) model->counts_.emplace(std::move(state), std::move(counts));
    return model;
}

std::unique_ptr<AkomPredictor> AkomPredictor::from_parts(
    std::shared_ptr<const Alphabet> alphabet, std::size_t k_max,
    std::vector<std::unique_ptr<MarkovPredictor>> models, std::vector<double> fallback) {
    if (models.size() != k_max) throw FitError("akom restore: order models missing");
    auto model = std::unique_ptr<AkomPredictor>(new AkomPredictor(std::move(alphabet), k_max));
    model->models_ = std::move(models);
    model->fallback_ = std::move(fallback);
    return model;
}

AkomPredictor::AkomPredictor(std::shared_ptr<const Alphabet> alphabet, std::size_t k_max)
    : Predictor(std::move(alphabet)), k_max_(k_max) {}

std::unique_ptr<AkomPredictor> AkomPredictor::fit(const SequenceDatabase& train,
                                                  std::shared_ptr<const Alphabet> alphabet,
                                                  std::size_t k_max) {
    if (k_max < 1) throw FitError("akom needs k_max >= 1");
    auto model = std::unique_ptr<AkomPredictor>(new AkomPredictor(alphabet, k_max));
    model->fallback_ = proportional_frequencies(train, *alphabet);
    for (std::size_t k = 1; k <= k_max; ++k) {
        model->models_.push_back(MarkovPredictor::fit(train, alphabet, k));
    }
    return model;
}

const MarkovPredictor& AkomPredictor::order_model(std::size_t k) const {
    if (k < 1 || k > k_max_) throw RangeError("akom order out of range");
    return *models_[k - 1];
}

NextSymbolDistribution AkomPredictor::predict(const SymbolSequence& prefix) const {
    for (std::size_t k = k_max_; k >= 1; --k) {
        const MarkovPredictor& model = *models_[k - 1];
        SymbolSequence state = prefix.tail(k);
        if (model.has_state(state)) return model.predict(prefix);
    }
    return NextSymbolDistribution(alphabet_, fallback_);
}

} // namespace seqpred
