#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "seqpred/sequence.hpp"

namespace seqpred {

using PlaceIndex = std::uint32_t;
using TransitionIndex = std::uint32_t;

/// A labelled Petri net. Places and transitions carry string ids drawn from
/// disjoint namespaces; arcs all have weight one. Transitions are either
/// labelled with a visible symbol or unobservable (tau).
class LabeledPetriNet {
public:
    struct Place {
        std::string id;
    };
    struct Transition {
        std::string id;
        std::optional<Symbol> label;           // nullopt = tau
        std::vector<PlaceIndex> preset;        // sorted, duplicate-free
        std::vector<PlaceIndex> postset;       // sorted, duplicate-free
        bool is_tau() const { return !label.has_value(); }
    };

    PlaceIndex add_place(const std::string& id);
    TransitionIndex add_transition(const std::string& id, std::optional<Symbol> label);
    /// place -> transition arc
    void add_input_arc(const std::string& place_id, const std::string& transition_id);
    /// transition -> place arc
    void add_output_arc(const std::string& transition_id, const std::string& place_id);

    std::size_t place_count() const { return places_.size(); }
    std::size_t transition_count() const { return transitions_.size(); }
    const Place& place(PlaceIndex i) const { return places_.at(i); }
    const Transition& transition(TransitionIndex i) const { return transitions_.at(i); }
    const std::vector<Place>& places() const { return places_; }
    const std::vector<Transition>& transitions() const { return transitions_; }

    std::optional<PlaceIndex> find_place(const std::string& id) const;
    std::optional<TransitionIndex> find_transition(const std::string& id) const;

    /// Visible labels of the net, name-sorted.
    std::vector<Symbol> label_set() const;

private:
    std::vector<Place> places_;
    std::vector<Transition> transitions_;
    std::unordered_map<std::string, PlaceIndex> place_index_;
    std::unordered_map<std::string, TransitionIndex> transition_index_;
};

/// A multiset of places: the state of a Petri net. Stored densely, indexed
/// like the owning net's place list; zero entries are implicit.
class Marking {
public:
    Marking() = default;
    explicit Marking(std::size_t place_count) : tokens_(place_count, 0) {}

    static Marking from_places(const LabeledPetriNet& net,
                               const std::vector<std::pair<std::string, std::uint32_t>>& places);

    std::uint32_t count(PlaceIndex p) const { return tokens_.at(p); }
    std::uint32_t total() const { return total_; }
    std::size_t place_slots() const { return tokens_.size(); }

    void set(PlaceIndex p, std::uint32_t n);

    /// Nonzero entries as (place index, count), index-sorted.
    std::vector<std::pair<PlaceIndex, std::uint32_t>> nonzero() const;

    std::string to_string(const LabeledPetriNet& net) const; // "[p1,p2^2]"

    bool operator==(const Marking& other) const { return tokens_ == other.tokens_; }

    struct Hash {
        std::size_t operator()(const Marking& m) const noexcept;
    };

private:
    friend Marking fire(const LabeledPetriNet&, const Marking&, TransitionIndex);
    std::vector<std::uint32_t> tokens_;
    std::uint32_t total_ = 0;
};

/// A labelled Petri net with designated initial and final markings.
struct AcceptingPetriNet {
    LabeledPetriNet net;
    Marking initial_marking;
    Marking final_marking;
};

/// Transitions enabled in marking m: every input place holds at least one
/// token. Transitions with an empty preset are always enabled.
std::vector<TransitionIndex> enabled_transitions(const LabeledPetriNet& net, const Marking& m);

bool is_enabled(const LabeledPetriNet& net, const Marking& m, TransitionIndex t);

/// Fires t, consuming one token per input place and producing one per output
/// place. Throws FiringError (naming the deficient place) when t is disabled.
Marking fire(const LabeledPetriNet& net, const Marking& m, TransitionIndex t);

/// Fires a whole sequence starting from the initial marking; errors carry the
/// index of the failing step.
Marking fire_sequence(const AcceptingPetriNet& apn, const std::vector<TransitionIndex>& transitions);

/// True iff some firing sequence from the initial to the final marking has
/// visible-label projection w. The search prunes markings whose total token
/// count exceeds `token_budget`; if pruning happened and no witness was
/// found, the result is undecided and UndecidableError is thrown instead of
/// returning false.
bool language_membership(const AcceptingPetriNet& apn, const SymbolSequence& w,
                         std::uint32_t token_budget = 32);

} // namespace seqpred
