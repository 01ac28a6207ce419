#include "seqpred/petrinet.hpp"

#include <algorithm>
#include <deque>

#include "seqpred/errors.hpp"

namespace seqpred {

PlaceIndex LabeledPetriNet::add_place(const std::string& id) {
    if (place_index_.count(id) || transition_index_.count(id)) {
        throw FormatError("duplicate node id: " + id);
    }
    auto index = static_cast<PlaceIndex>(places_.size());
    places_.push_back({id});
    place_index_.emplace(id, index);
    return index;
}

TransitionIndex LabeledPetriNet::add_transition(const std::string& id, std::optional<Symbol> label) {
    if (place_index_.count(id) || transition_index_.count(id)) {
        throw FormatError("duplicate node id: " + id);
    }
    if (label && label->name() == Symbol::reserved_tau) {
        throw FormatError("transition " + id + ": label \"tau\" is reserved for unobservable transitions");
    }
    auto index = static_cast<TransitionIndex>(transitions_.size());
    transitions_.push_back({id, label, {}, {}});
    transition_index_.emplace(id, index);
    return index;
}

namespace {

void insert_sorted(std::vector<PlaceIndex>& v, PlaceIndex p, const std::string& what) {
    auto it = std::lower_bound(v.begin(), v.end(), p);
    if (it != v.end() && *it == p) throw FormatError("duplicate arc: " + what);
    v.insert(it, p);
}

} // namespace

void LabeledPetriNet::add_input_arc(const std::string& place_id, const std::string& transition_id) {
    auto p = find_place(place_id);
    auto t = find_transition(transition_id);
    if (!p || !t) throw FormatError("arc endpoint missing: " + place_id + " -> " + transition_id);
    insert_sorted(transitions_[*t].preset, *p, place_id + " -> " + transition_id);
}

void LabeledPetriNet::add_output_arc(const std::string& transition_id, const std::string& place_id) {
    auto p = find_place(place_id);
    auto t = find_transition(transition_id);
    if (!p || !t) throw FormatError("arc endpoint missing: " + transition_id + " -> " + place_id);
    insert_sorted(transitions_[*t].postset, *p, transition_id + " -> " + place_id);
}

std::optional<PlaceIndex> LabeledPetriNet::find_place(const std::string& id) const {
    auto it = place_index_.find(id);
    if (it == place_index_.end()) return std::nullopt;
    return it->second;
}

std::optional<TransitionIndex> LabeledPetriNet::find_transition(const std::string& id) const {
    auto it = transition_index_.find(id);
    if (it == transition_index_.end()) return std::nullopt;
    return it->second;
}

std::vector<Symbol> LabeledPetriNet::label_set() const {
    std::vector<Symbol> labels;
    for (const auto& t : transitions_) {
        if (t.label) labels.push_back(*t.label);
    }
    std::sort(labels.begin(), labels.end(), Symbol::NameLess{});
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    return labels;
}

Marking Marking::from_places(const LabeledPetriNet& net,
                             const std::vector<std::pair<std::string, std::uint32_t>>& places) {
    Marking m(net.place_count());
    for (const auto& [id, n] : places) {
        auto p = net.find_place(id);
        if (!p) throw FormatError("marking references unknown place: " + id);
        m.set(*p, m.count(*p) + n);
    }
    return m;
}

void Marking::set(PlaceIndex p, std::uint32_t n) {
    total_ = total_ - tokens_.at(p) + n;
    tokens_[p] = n;
}

std::vector<std::pair<PlaceIndex, std::uint32_t>> Marking::nonzero() const {
    std::vector<std::pair<PlaceIndex, std::uint32_t>> out;
    for (PlaceIndex p = 0; p < tokens_.size(); ++p) {
        if (tokens_[p] > 0) out.emplace_back(p, tokens_[p]);
    }
    return out;
}

std::string Marking::to_string(const LabeledPetriNet& net) const {
    std::string out = "[";
    bool first = true;
    for (const auto& [p, n] : nonzero()) {
        if (!first) out += ",";
        first = false;
        out += net.place(p).id;
        if (n > 1) out += "^" + std::to_string(n);
    }
    out += "]";
    return out;
}

std::size_t Marking::Hash::operator()(const Marking& m) const noexcept {
    std::size_t h = 0xcbf29ce484222325ull ^ m.tokens_.size();
    for (std::uint32_t t : m.tokens_) {
        h ^= t;
        h *= 0x100000001b3ull;
    }
    return h;
}

bool is_enabled(const LabeledPetriNet& net, const Marking& m, TransitionIndex t) {
    for (PlaceIndex p : net.transition(t).preset) {
        if (m.count(p) == 0) return false;
    }
    return true;
}

std::vector<TransitionIndex> enabled_transitions(const LabeledPetriNet& net, const Marking& m) {
    std::vector<TransitionIndex> out;
    for (TransitionIndex t = 0; t < net.transition_count(); ++t) {
        if (is_enabled(net, m, t)) out.push_back(t);
    }
    return out;
}

Marking fire(const LabeledPetriNet& net, const Marking& m, TransitionIndex t) {
    const auto& transition = net.transition(t);
    for (PlaceIndex p : transition.preset) {
        if (m.count(p) == 0) {
            throw FiringError("transition " + transition.id + " is not enabled: place " +
                              net.place(p).id + " holds no token");
        }
    }
    Marking next = m;
    for (PlaceIndex p : transition.preset) {
        next.tokens_[p] -= 1;
        next.total_ -= 1;
    }
    for (PlaceIndex p : transition.postset) {
        next.tokens_[p] += 1;
        next.total_ += 1;
    }
    return next;
}

Marking fire_sequence(const AcceptingPetriNet& apn, const std::vector<TransitionIndex>& transitions) {
    Marking m = apn.initial_marking;
    for (std::size_t i = 0; i < transitions.size(); ++i) {
        try {
            m = fire(apn.net, m, transitions[i]);
        } catch (const FiringError& e) {
            throw FiringError("step " + std::to_string(i) + ": " + e.what());
        }
    }
    return m;
}

bool language_membership(const AcceptingPetriNet& apn, const SymbolSequence& w,
                         std::uint32_t token_budget) {
    if (token_budget < apn.initial_marking.total() || token_budget < apn.final_marking.total()) {
        throw Error("language_membership: token budget below the initial or final marking size");
    }

    // BFS over (marking, consumed-prefix-length) pairs
    struct State {
        Marking marking;
        std::size_t pos;
        bool operator==(const State& o) const { return pos == o.pos && marking == o.marking; }
    };
    struct StateHash {
        std::size_t operator()(const State& s) const noexcept {
            return Marking::Hash{}(s.marking) * 1000003u + s.pos;
        }
    };

    std::unordered_map<State, bool, StateHash> visited;
    std::deque<State> queue;
    bool pruned = false;

    State start{apn.initial_marking, 0};
    visited.emplace(start, true);
    queue.push_back(start);

    while (!queue.empty()) {
        State state = queue.front();
        queue.pop_front();
        if (state.pos == w.size() && state.marking == apn.final_marking) return true;
        for (TransitionIndex t : enabled_transitions(apn.net, state.marking)) {
            const auto& transition = apn.net.transition(t);
            std::size_t next_pos = state.pos;
            if (transition.label) {
                if (state.pos >= w.size() || !(w.at(state.pos) == *transition.label)) continue;
                next_pos = state.pos + 1;
            }
            Marking next = fire(apn.net, state.marking, t);
            if (next.total() > token_budget) {
                pruned = true;
                continue;
            }
            State succ{std::move(next), next_pos};
            if (visited.emplace(succ, true).second) queue.push_back(succ);
        }
    }
    if (pruned) {
        throw UndecidableError("language membership undecided within token budget " +
                               std::to_string(token_budget));
    }
    return false;
}

} // namespace seqpred
