#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <unordered_map>
#include <vector>

#include "seqpred/database.hpp"
#include "seqpred/petrinet.hpp"

namespace seqpred {

enum class MoveKind { synchronous, log_move, model_move };

/// One alignment step. A synchronous move pairs a log symbol with a
/// transition carrying the same label; a log move skips a symbol that the
/// model cannot mirror; a model move fires a transition (visible or tau)
/// without consuming log input.
struct Move {
    MoveKind kind;
    std::optional<Symbol> log_symbol;          // absent for model moves
    std::optional<TransitionIndex> transition; // absent for log moves
};

/// A minimum-cost explanation of a prefix in terms of the model. The log
/// projection of the moves equals the aligned prefix exactly; the transition
/// projection is a valid firing sequence from the initial marking ending in
/// `final_marking`, and the net's final marking stays reachable from there
/// within the token budget.
struct PrefixAlignment {
    std::vector<Move> moves;
    Marking final_marking;
    double cost = 0.0;

    std::vector<TransitionIndex> transition_projection() const;
    SymbolSequence log_projection() const;
};

/// Per-move-kind costs. Tau model moves default to zero (they are routing,
/// not deviation); synchronous moves must not cost more than either
/// deviation kind.
struct MoveCostScheme {
    double sync_cost = 0.0;
    double log_move_cost = 1.0;
    double visible_model_move_cost = 1.0;
    double tau_model_move_cost = 0.0;

    void validate() const;
};

struct SearchBudget {
    std::uint32_t token_budget = 32;
    std::uint64_t max_expanded_states = 5'000'000;
};

/// Memoized "can the final marking still be reached from m" oracle, bounded
/// by the token budget. Concurrent lookups are serialized by a mutex so a
/// shared engine stays safe under parallel alignment calls.
class ReachabilityOracle {
public:
    ReachabilityOracle(const AcceptingPetriNet& apn, std::uint32_t token_budget);
    bool can_reach_final(const Marking& m) const;

private:
    const AcceptingPetriNet& apn_;
    std::uint32_t token_budget_;
    mutable std::mutex mutex_;
    mutable std::unordered_map<Marking, bool, Marking::Hash> cache_;
};

/// Shortest-path alignment search over the synchronous product of a prefix
/// (or word) and the net's reachability graph, Dijkstra with settled-state
/// deduplication. Zero-cost tau edges are safe because every product state
/// settles exactly once.
///
/// Ties between equal-cost solutions are broken deterministically by
/// (1) fewer log moves (equivalently: more synchronous moves, since the log
/// projection is fixed), (2) fewer total moves, (3) lexicographically
/// smallest transition-id sequence, and finally the move-kind pattern.
class AlignmentEngine {
public:
    explicit AlignmentEngine(const AcceptingPetriNet& apn, MoveCostScheme costs = {},
                             SearchBudget budget = {});

    /// Minimum-cost prefix-alignment: may stop in any marking from which the
    /// final marking is still reachable.
    PrefixAlignment prefix_align(const SymbolSequence& prefix) const;

    /// Minimum-cost full alignment: must end exactly in the final marking.
    PrefixAlignment align_full(const SymbolSequence& word) const;

    const AcceptingPetriNet& net() const { return apn_; }
    const MoveCostScheme& costs() const { return costs_; }
    const SearchBudget& budget() const { return budget_; }

private:
    PrefixAlignment search(const SymbolSequence& prefix, bool require_final_marking) const;

    const AcceptingPetriNet& apn_;
    MoveCostScheme costs_;
    SearchBudget budget_;
    std::vector<std::uint32_t> transition_rank_; // by id string, for tie-breaking
    ReachabilityOracle reach_;
};

PrefixAlignment prefix_align(const AcceptingPetriNet& apn, const SymbolSequence& prefix,
                             MoveCostScheme costs = {}, SearchBudget budget = {});

PrefixAlignment align_full(const AcceptingPetriNet& apn, const SymbolSequence& word,
                           MoveCostScheme costs = {}, SearchBudget budget = {});

/// True iff every distinct word of the database aligns with cost zero under
/// the default cost scheme. Budget errors are annotated with the word.
bool is_fitting(const AcceptingPetriNet& apn, const SequenceDatabase& db,
                SearchBudget budget = {});

} // namespace seqpred
