#include "seqpred/alignment.hpp"

#include <algorithm>
#include <deque>
#include <queue>

#include "seqpred/errors.hpp"

namespace seqpred {

std::vector<TransitionIndex> PrefixAlignment::transition_projection() const {
    std::vector<TransitionIndex> out;
    for (const Move& move : moves) {
        if (move.transition) out.push_back(*move.transition);
    }
    return out;
}

SymbolSequence PrefixAlignment::log_projection() const {
    std::vector<Symbol> out;
    for (const Move& move : moves) {
        if (move.log_symbol) out.push_back(*move.log_symbol);
    }
    return SymbolSequence(std::move(out));
}

void MoveCostScheme::validate() const {
    if (sync_cost < 0 || log_move_cost < 0 || visible_model_move_cost < 0 || tau_model_move_cost < 0) {
        throw ConfigError("move costs must be non-negative");
    }
    if (sync_cost > log_move_cost || sync_cost > visible_model_move_cost) {
        throw ConfigError("synchronous moves must not cost more than deviations");
    }
}

ReachabilityOracle::ReachabilityOracle(const AcceptingPetriNet& apn, std::uint32_t token_budget)
    : apn_(apn), token_budget_(token_budget) {}

bool ReachabilityOracle::can_reach_final(const Marking& m) const {
    if (m == apn_.final_marking) return true;
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = cache_.find(m);
        if (it != cache_.end()) return it->second;
    }

    // bounded forward BFS with parent tracking so the witness path can be
    // cached positively as well
    std::unordered_map<Marking, Marking, Marking::Hash> parent;
    std::deque<Marking> queue;
    bool pruned = false;
    bool found = false;
    parent.emplace(m, m);
    queue.push_back(m);
    Marking witness;

    while (!queue.empty() && !found) {
        Marking current = queue.front();
        queue.pop_front();
        for (TransitionIndex t : enabled_transitions(apn_.net, current)) {
            Marking next = fire(apn_.net, current, t);
            if (next.total() > token_budget_) {
                pruned = true;
                continue;
            }
            if (parent.count(next)) continue;
            parent.emplace(next, current);
            if (next == apn_.final_marking) {
                witness = next;
                found = true;
                break;
            }
            queue.push_back(next);
        }
    }

    std::lock_guard<std::mutex> lock(mutex_);
    if (found) {
        // every marking on the witness path reaches the final marking
        Marking step = witness;
        for (;;) {
            cache_[step] = true;
            const Marking& up = parent.at(step);
            if (up == step) break;
            step = up;
        }
        return true;
    }
    if (!pruned) {
        // exhaustive: nothing visited can reach the final marking
        for (const auto& [marking, ignored] : parent) cache_[marking] = false;
    } else {
        // undecided within the budget counts as unreachable for goal checks
        cache_[m] = false;
    }
    return false;
}

AlignmentEngine::AlignmentEngine(const AcceptingPetriNet& apn, MoveCostScheme costs,
                                 SearchBudget budget)
    : apn_(apn), costs_(costs), budget_(budget), reach_(apn, budget.token_budget) {
    costs_.validate();
    // rank transitions by id string so tie-breaking is independent of
    // construction order
    std::vector<TransitionIndex> order(apn.net.transition_count());
    for (TransitionIndex t = 0; t < order.size(); ++t) order[t] = t;
    std::sort(order.begin(), order.end(), [&](TransitionIndex a, TransitionIndex b) {
        return apn.net.transition(a).id < apn.net.transition(b).id;
    });
    transition_rank_.resize(order.size());
    for (std::uint32_t rank = 0; rank < order.size(); ++rank) {
        transition_rank_[order[rank]] = rank;
    }
}

namespace {

constexpr TransitionIndex kNoTransition = UINT32_MAX;

struct EdgeMove {
    MoveKind kind;
    TransitionIndex transition; // kNoTransition for log moves
};

struct SearchKey {
    double cost = 0.0;
    std::uint64_t log_moves = 0;
    std::uint64_t total_moves = 0;

    friend bool operator<(const SearchKey& a, const SearchKey& b) {
        if (a.cost != b.cost) return a.cost < b.cost;
        if (a.log_moves != b.log_moves) return a.log_moves < b.log_moves;
        return a.total_moves < b.total_moves;
    }
    friend bool operator==(const SearchKey& a, const SearchKey& b) {
        return a.cost == b.cost && a.log_moves == b.log_moves && a.total_moves == b.total_moves;
    }
};

struct NodeRecord {
    SearchKey key;
    std::uint64_t parent = UINT64_MAX; // packed state key, UINT64_MAX = start
    EdgeMove arriving{MoveKind::log_move, kNoTransition};
    bool settled = false;
};

struct QueueEntry {
    SearchKey key;
    std::uint64_t state;

    friend bool operator>(const QueueEntry& a, const QueueEntry& b) {
        if (!(a.key == b.key)) return b.key < a.key;
        return a.state > b.state; // deterministic pop order inside a plateau
    }
};

std::uint64_t pack(std::uint32_t marking_id, std::uint32_t pos) {
    return (static_cast<std::uint64_t>(marking_id) << 32) | pos;
}

int kind_order(MoveKind kind) {
    switch (kind) {
    case MoveKind::synchronous: return 0;
    case MoveKind::model_move: return 1;
    case MoveKind::log_move: return 2;
    }
    return 3;
}

} // namespace

PrefixAlignment AlignmentEngine::search(const SymbolSequence& prefix,
                                        bool require_final_marking) const {
    const std::size_t len = prefix.size();

    // marking pool: dense ids for product states
    std::vector<Marking> markings;
    std::unordered_map<Marking, std::uint32_t, Marking::Hash> marking_ids;
    auto intern_marking = [&](const Marking& m) -> std::uint32_t {
        auto it = marking_ids.find(m);
        if (it != marking_ids.end()) return it->second;
        auto id = static_cast<std::uint32_t>(markings.size());
        markings.push_back(m);
        marking_ids.emplace(m, id);
        return id;
    };

    std::unordered_map<std::uint64_t, NodeRecord> nodes;
    std::priority_queue<QueueEntry, std::vector<QueueEntry>, std::greater<QueueEntry>> queue;

    auto reconstruct_edges = [&](std::uint64_t state) {
        std::vector<EdgeMove> edges;
        std::uint64_t cursor = state;
        while (cursor != UINT64_MAX) {
            const NodeRecord& rec = nodes.at(cursor);
            if (rec.parent == UINT64_MAX && rec.key.total_moves == 0) break;
            edges.push_back(rec.arriving);
            cursor = rec.parent;
        }
        std::reverse(edges.begin(), edges.end());
        return edges;
    };

    // true when candidate (head + edge) orders before the incumbent path:
    // transition-id projection first, then the move-kind pattern
    auto candidate_beats = [&](std::uint64_t cand_parent, const EdgeMove& cand_edge,
                               std::uint64_t incumbent_state) {
        std::vector<EdgeMove> a = reconstruct_edges(cand_parent);
        a.push_back(cand_edge);
        std::vector<EdgeMove> b = reconstruct_edges(incumbent_state);
        auto project = [&](const std::vector<EdgeMove>& edges) {
            std::vector<std::uint32_t> ranks;
            for (const EdgeMove& e : edges) {
                if (e.transition != kNoTransition) ranks.push_back(transition_rank_[e.transition]);
            }
            return ranks;
        };
        std::vector<std::uint32_t> pa = project(a), pb = project(b);
        if (pa != pb) return std::lexicographical_compare(pa.begin(), pa.end(), pb.begin(), pb.end());
        for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
            int ka = kind_order(a[i].kind), kb = kind_order(b[i].kind);
            if (ka != kb) return ka < kb;
        }
        return false;
    };

    auto relax = [&](std::uint64_t state, const SearchKey& key, std::uint64_t from,
                     const EdgeMove& edge) {
        auto [it, inserted] = nodes.try_emplace(state);
        NodeRecord& rec = it->second;
        if (inserted) {
            rec.key = key;
            rec.parent = from;
            rec.arriving = edge;
            queue.push({key, state});
            return;
        }
        if (rec.settled) return; // final by the plateau argument
        if (key < rec.key) {
            rec.key = key;
            rec.parent = from;
            rec.arriving = edge;
            queue.push({key, state});
        } else if (key == rec.key && candidate_beats(from, edge, state)) {
            rec.parent = from;
            rec.arriving = edge;
        }
    };

    const std::uint32_t start_marking = intern_marking(apn_.initial_marking);
    const std::uint64_t start = pack(start_marking, 0);
    {
        NodeRecord rec;
        rec.key = SearchKey{};
        rec.parent = UINT64_MAX;
        nodes.emplace(start, rec);
        queue.push({SearchKey{}, start});
    }

    std::uint64_t expanded = 0;
    bool goal_found = false;
    SearchKey goal_key;
    std::uint64_t goal_state = 0;

    auto is_goal = [&](std::uint32_t marking_id, std::uint32_t pos) {
        if (pos != len) return false;
        if (require_final_marking) return markings[marking_id] == apn_.final_marking;
        return reach_.can_reach_final(markings[marking_id]);
    };

    while (!queue.empty()) {
        QueueEntry top = queue.top();
        queue.pop();
        auto& rec = nodes.at(top.state);
        if (rec.settled || !(top.key == rec.key)) continue; // stale entry
        if (goal_found && goal_key < top.key) break;        // drained the goal plateau
        rec.settled = true;

        const auto marking_id = static_cast<std::uint32_t>(top.state >> 32);
        const auto pos = static_cast<std::uint32_t>(top.state & 0xffffffffu);

        if (is_goal(marking_id, pos)) {
            if (!goal_found) {
                goal_found = true;
                goal_key = top.key;
                goal_state = top.state;
            } else if (top.key == goal_key &&
                       candidate_beats(nodes.at(top.state).parent, nodes.at(top.state).arriving,
                                       goal_state)) {
                goal_state = top.state;
            }
            continue; // successors of a plateau goal cannot beat it
        }
        if (goal_found) continue; // same-key non-goal states cannot improve the goal

        if (++expanded > budget_.max_expanded_states) {
            throw BudgetError("alignment search exceeded " +
                              std::to_string(budget_.max_expanded_states) + " expanded states");
        }

        const Marking current = markings[marking_id]; // copy: pool may reallocate
        const bool have_symbol = pos < len;

        for (TransitionIndex t : enabled_transitions(apn_.net, current)) {
            const auto& transition = apn_.net.transition(t);
            Marking fired = fire(apn_.net, current, t);
            if (fired.total() > budget_.token_budget) continue;
            const std::uint32_t fired_id = intern_marking(fired);

            if (have_symbol && transition.label && *transition.label == prefix.at(pos)) {
                SearchKey key{top.key.cost + costs_.sync_cost, top.key.log_moves,
                              top.key.total_moves + 1};
                relax(pack(fired_id, pos + 1), key, top.state, {MoveKind::synchronous, t});
            }
            const double model_cost =
                transition.is_tau() ? costs_.tau_model_move_cost : costs_.visible_model_move_cost;
            SearchKey key{top.key.cost + model_cost, top.key.log_moves, top.key.total_moves + 1};
            relax(pack(fired_id, pos), key, top.state, {MoveKind::model_move, t});
        }
        if (have_symbol) {
            SearchKey key{top.key.cost + costs_.log_move_cost, top.key.log_moves + 1,
                          top.key.total_moves + 1};
            relax(pack(marking_id, pos + 1), key, top.state, {MoveKind::log_move, kNoTransition});
        }
    }

    if (!goal_found) {
        throw InfeasibilityError(
            require_final_marking
                ? "no alignment reaches the final marking within the token budget"
                : "final marking unreachable from every candidate marking within the token budget");
    }

    // rebuild the move list, attributing consumed prefix symbols
    PrefixAlignment result;
    result.cost = goal_key.cost;
    result.final_marking = markings[static_cast<std::uint32_t>(goal_state >> 32)];
    std::vector<EdgeMove> edges = reconstruct_edges(goal_state);
    std::size_t consumed = 0;
    for (const EdgeMove& edge : edges) {
        Move move;
        move.kind = edge.kind;
        if (edge.kind != MoveKind::model_move) move.log_symbol = prefix.at(consumed++);
        if (edge.transition != kNoTransition) move.transition = edge.transition;
        result.moves.push_back(move);
    }
    return result;
}

PrefixAlignment AlignmentEngine::prefix_align(const SymbolSequence& prefix) const {
    return search(prefix, /*require_final_marking=*/false);
}

PrefixAlignment AlignmentEngine::align_full(const SymbolSequence& word) const {
    return search(word, /*require_final_marking=*/true);
}

PrefixAlignment prefix_align(const AcceptingPetriNet& apn, const SymbolSequence& prefix,
                             MoveCostScheme costs, SearchBudget budget) {
    return AlignmentEngine(apn, costs, budget).prefix_align(prefix);
}

PrefixAlignment align_full(const AcceptingPetriNet& apn, const SymbolSequence& word,
                           MoveCostScheme costs, SearchBudget budget) {
    return AlignmentEngine(apn, costs, budget).align_full(word);
}

bool is_fitting(const AcceptingPetriNet& apn, const SequenceDatabase& db, SearchBudget budget) {
    AlignmentEngine engine(apn, MoveCostScheme{}, budget);
    for (const auto& entry : db.entries()) {
        try {
            if (engine.align_full(entry.word).cost != 0.0) return false;
        } catch (const InfeasibilityError&) {
            return false;
        } catch (const BudgetError& e) {
            throw BudgetError(std::string(e.what()) + " while aligning " + entry.word.to_string());
        }
    }
    return true;
}

} // namespace seqpred
