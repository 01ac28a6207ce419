#include "seqpred/automaton_predictor.hpp"

#include <algorithm>

#include "seqpred/errors.hpp"

namespace seqpred {

const char* abstraction_kind_name(AbstractionKind kind) {
    switch (kind) {
    case AbstractionKind::sequence: return "seq";
    case AbstractionKind::set: return "set";
    case AbstractionKind::multiset: return "mult";
    }
    return "?";
}

AbstractionKind abstraction_kind_from_name(const std::string& name) {
    if (name == "seq" || name == "sequence") return AbstractionKind::sequence;
    if (name == "set") return AbstractionKind::set;
    if (name == "mult" || name == "multiset") return AbstractionKind::multiset;
    throw ConfigError("unknown abstraction kind: " + name);
}

AbstractionState AbstractionState::of(const SymbolSequence& prefix, AbstractionKind kind,
                                      std::size_t k) {
    if (k < 1) throw RangeError("abstraction window must be at least 1");
    SymbolSequence window = prefix.tail(k); // clamped on short prefixes
    AbstractionState state;
    state.kind = kind;
    switch (kind) {
    case AbstractionKind::sequence:
        for (Symbol s : window) state.encoding.push_back(s.id());
        break;
    case AbstractionKind::set: {
        for (Symbol s : window.symbol_set()) state.encoding.push_back(s.id());
        std::sort(state.encoding.begin(), state.encoding.end());
        break;
    }
    case AbstractionKind::multiset: {
        SymbolMultiset parikh = window.parikh();
        for (const auto& [s, n] : parikh.entries()) {
            state.encoding.push_back(s.id());
            state.encoding.push_back(n);
        }
        break;
    }
    }
    return state;
}

std::string AbstractionState::to_string() const {
    std::string out;
    switch (kind) {
    case AbstractionKind::sequence: {
        out = "<";
        for (std::size_t i = 0; i < encoding.size(); ++i) {
            if (i) out += ",";
            out += Symbol::name_of(static_cast<std::uint32_t>(encoding[i]));
        }
        out += ">";
        break;
    }
    case AbstractionKind::set: {
        out = "{";
        for (std::size_t i = 0; i < encoding.size(); ++i) {
            if (i) out += ",";
            out += Symbol::name_of(static_cast<std::uint32_t>(encoding[i]));
        }
        out += "}";
        break;
    }
    case AbstractionKind::multiset: {
        out = "[";
        for (std::size_t i = 0; i + 1 < encoding.size(); i += 2) {
            if (i) out += ",";
            out += Symbol::name_of(static_cast<std::uint32_t>(encoding[i]));
            if (encoding[i + 1] > 1) out += "^" + std::to_string(encoding[i + 1]);
        }
        out += "]";
        break;
    }
    }
    return out;
}

std::size_t AbstractionState::Hash::operator()(const AbstractionState& s) const noexcept {
    std::size_t h = 0x9e3779b97f4a7c15ull ^ (static_cast<std::size_t>(s.kind) << 17);
    for (std::uint64_t v : s.encoding) {
        h ^= v + 0x9e3779b9ull + (h << 6) + (h >> 2);
    }
    return h;
}

ProbabilisticAutomaton::ProbabilisticAutomaton(AbstractionKind kind, std::size_t window,
                                               std::shared_ptr<const Alphabet> alphabet)
    : kind_(kind), window_(window), alphabet_(std::move(alphabet)) {
    initial_ = intern_state(AbstractionState::of(SymbolSequence{}, kind_, window_));
}

ProbabilisticAutomaton::StateId ProbabilisticAutomaton::intern_state(const AbstractionState& state) {
    auto it = index_.find(state);
    if (it != index_.end()) return it->second;
    auto id = static_cast<StateId>(states_.size());
    states_.push_back(state);
    accepting_.push_back(false);
    totals_.push_back(0);
    transitions_.emplace_back();
    index_.emplace(state, id);
    return id;
}

void ProbabilisticAutomaton::record(StateId from, std::uint32_t symbol_index, StateId to,
                                    std::uint64_t count) {
    auto& edges = transitions_.at(from);
    auto it = std::find_if(edges.begin(), edges.end(), [&](const Transition& t) {
        return t.symbol_index == symbol_index && t.target == to;
    });
    if (it != edges.end()) it->count += count;
    else edges.push_back({symbol_index, to, count});
    totals_.at(from) += count;
}

std::optional<ProbabilisticAutomaton::StateId> ProbabilisticAutomaton::find_state(
    const AbstractionState& state) const {
    auto it = index_.find(state);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::size_t ProbabilisticAutomaton::transition_count() const {
    std::size_t n = 0;
    for (const auto& edges : transitions_) n += edges.size();
    return n;
}

double ProbabilisticAutomaton::gamma(StateId from, Symbol symbol, StateId to) const {
    auto idx = alphabet_->index_of(symbol);
    if (!idx || totals_.at(from) == 0) return 0.0;
    for (const Transition& t : transitions_.at(from)) {
        if (t.symbol_index == *idx && t.target == to) {
            return static_cast<double>(t.count) / static_cast<double>(totals_.at(from));
        }
    }
    return 0.0;
}

std::optional<std::vector<double>> ProbabilisticAutomaton::next_symbol_probs(StateId id) const {
    const std::uint64_t total = totals_.at(id);
    if (total == 0) return std::nullopt;
    std::vector<double> probs(alphabet_->size(), 0.0);
    for (const Transition& t : transitions_.at(id)) {
        probs[t.symbol_index] += static_cast<double>(t.count) / static_cast<double>(total);
    }
    return probs;
}

AutomatonPredictor::AutomatonPredictor(std::shared_ptr<const Alphabet> alphabet,
                                       AbstractionKind kind, std::size_t k)
    : Predictor(std::move(alphabet)), kind_(kind), k_(k) {}

std::string AutomatonPredictor::params_description() const {
    return std::string("kind=") + abstraction_kind_name(kind_) + ";k=" + std::to_string(k_);
}

std::unique_ptr<AutomatonPredictor> AutomatonPredictor::fit(
    const SequenceDatabase& train, std::shared_ptr<const Alphabet> alphabet, AbstractionKind kind,
    std::size_t k) {
    if (train.empty()) throw FitError("automaton predictor needs a nonempty training database");
    auto predictor =
        std::unique_ptr<AutomatonPredictor>(new AutomatonPredictor(alphabet, kind, k));
    predictor->fallback_ = proportional_frequencies(train, *alphabet);
    predictor->automaton_ = std::make_unique<ProbabilisticAutomaton>(kind, k, alphabet);
    ProbabilisticAutomaton& automaton = *predictor->automaton_;

    for (const auto& entry : train.entries()) {
        const SymbolSequence& word = entry.word;
        ProbabilisticAutomaton::StateId current = automaton.initial_state();
        for (std::size_t pos = 0; pos < word.size(); ++pos) {
            auto symbol_index = alphabet->index_of(word.at(pos));
            if (!symbol_index) {
                throw FitError("training symbol outside the alphabet: " + word.at(pos).name());
            }
            auto next_state = automaton.intern_state(
                AbstractionState::of(word.head(pos + 1), kind, k));
            automaton.record(current, static_cast<std::uint32_t>(*symbol_index), next_state,
                             entry.count);
            current = next_state;
        }
        if (!word.empty()) automaton.mark_accepting(current);
    }
    return predictor;
}

std::unique_ptr<AutomatonPredictor> AutomatonPredictor::from_parts(
    std::shared_ptr<const Alphabet> alphabet, AbstractionKind kind, std::size_t k,
    std::unique_ptr<ProbabilisticAutomaton> automaton, std::vector<double> fallback) {
    auto predictor = std::unique_ptr<AutomatonPredictor>(
        new AutomatonPredictor(std::move(alphabet), kind, k));
    predictor->automaton_ = std::move(automaton);
    predictor->fallback_ = std::move(fallback);
    return predictor;
}

NextSymbolDistribution AutomatonPredictor::predict(const SymbolSequence& prefix) const {
    AbstractionState state = AbstractionState::of(prefix, kind_, k_);
    auto id = automaton_->find_state(state);
    if (id) {
        auto probs = automaton_->next_symbol_probs(*id);
        if (probs) return NextSymbolDistribution(alphabet_, std::move(*probs));
    }
    return NextSymbolDistribution(alphabet_, fallback_);
}

} // namespace seqpred
