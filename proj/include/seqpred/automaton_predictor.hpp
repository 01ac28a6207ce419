#pragma once

#include <unordered_map>

#include "seqpred/predictor.hpp"

namespace seqpred {

enum class AbstractionKind { sequence, set, multiset };

const char* abstraction_kind_name(AbstractionKind kind);
AbstractionKind abstraction_kind_from_name(const std::string& name);

/// The automaton state a prefix maps to: its last-k window passed through the
/// identity, set, or Parikh view. Encoded canonically so states compare and
/// hash by value.
struct AbstractionState {
    AbstractionKind kind = AbstractionKind::sequence;
    std::vector<std::uint64_t> encoding;

    static AbstractionState of(const SymbolSequence& prefix, AbstractionKind kind, std::size_t k);

    /// Human-readable payload, e.g. "<a,b>", "{a,b}" or "[a,b^2]".
    std::string to_string() const;

    bool operator==(const AbstractionState& other) const {
        return kind == other.kind && encoding == other.encoding;
    }

    struct Hash {
        std::size_t operator()(const AbstractionState& s) const noexcept;
    };
};

/// A probabilistic automaton over abstraction states: states Q, transition
/// relation delta with counted weights, derived transition probabilities
/// gamma(q,a,q') = c(q,a,q') / sum of c(q,.,.), an initial state (the
/// abstraction of the empty prefix) and accepting states (word-final states).
/// delta may be nondeterministic: distinct windows behind one abstract state
/// can step to different successors under the same symbol.
class ProbabilisticAutomaton {
public:
    using StateId = std::uint32_t;

    struct Transition {
        std::uint32_t symbol_index;
        StateId target;
        std::uint64_t count;
    };

    ProbabilisticAutomaton(AbstractionKind kind, std::size_t window,
                           std::shared_ptr<const Alphabet> alphabet);

    StateId intern_state(const AbstractionState& state);
    void record(StateId from, std::uint32_t symbol_index, StateId to, std::uint64_t count);
    void mark_accepting(StateId state) { accepting_[state] = true; }

    std::optional<StateId> find_state(const AbstractionState& state) const;
    std::size_t state_count() const { return states_.size(); }
    std::size_t transition_count() const; // distinct (q,a,q') triples
    const AbstractionState& state(StateId id) const { return states_.at(id); }
    bool is_accepting(StateId id) const { return accepting_.at(id); }
    StateId initial_state() const { return initial_; }

    std::uint64_t outgoing_total(StateId id) const { return totals_.at(id); }
    const std::vector<Transition>& outgoing(StateId id) const { return transitions_.at(id); }

    double gamma(StateId from, Symbol symbol, StateId to) const;

    /// P(a|q): per-symbol mass summed over successor states. Empty optional
    /// when the state has no outgoing mass.
    std::optional<std::vector<double>> next_symbol_probs(StateId id) const;

    AbstractionKind kind() const { return kind_; }
    std::size_t window() const { return window_; }

private:
    AbstractionKind kind_;
    std::size_t window_;
    std::shared_ptr<const Alphabet> alphabet_;
    std::vector<AbstractionState> states_;
    std::vector<bool> accepting_;
    std::vector<std::uint64_t> totals_;
    std::vector<std::vector<Transition>> transitions_;
    std::unordered_map<AbstractionState, StateId, AbstractionState::Hash> index_;
    StateId initial_ = 0;
};

/// Builds the automaton from the word-abstraction sequences of every
/// training word and predicts P(.|q) for the abstract state of a prefix,
/// falling back to the global training distribution for unknown states.
class AutomatonPredictor : public Predictor {
public:
    static std::unique_ptr<AutomatonPredictor> fit(const SequenceDatabase& train,
                                                   std::shared_ptr<const Alphabet> alphabet,
                                                   AbstractionKind kind, std::size_t k);

    static std::unique_ptr<AutomatonPredictor> from_parts(
        std::shared_ptr<const Alphabet> alphabet, AbstractionKind kind, std::size_t k,
        std::unique_ptr<ProbabilisticAutomaton> automaton, std::vector<double> fallback);

    std::string method() const override { return "automaton"; }
    std::string params_description() const override;

    NextSymbolDistribution predict(const SymbolSequence& prefix) const override;

    const ProbabilisticAutomaton& automaton() const { return *automaton_; }
    const std::vector<double>& fallback() const { return fallback_; }
    AbstractionKind kind() const { return kind_; }
    std::size_t window() const { return k_; }

private:
    AutomatonPredictor(std::shared_ptr<const Alphabet> alphabet, AbstractionKind kind,
                       std::size_t k);
    AbstractionKind kind_;
    std::size_t k_;
    std::unique_ptr<ProbabilisticAutomaton> automaton_;
    std::vector<double> fallback_;
};

} // namespace seqpred
