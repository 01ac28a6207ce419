#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "seqpred/database.hpp"
#include "seqpred/petrinet.hpp"

namespace seqpred {

/// Immediate-succession counts between symbols, plus how often each symbol
/// starts or ends a sequence. Multiplicities are respected.
struct DirectlyFollowsGraph {
    struct PairKey {
        Symbol from;
        Symbol to;
        bool operator==(const PairKey& o) const { return from == o.from && to == o.to; }
        bool operator<(const PairKey& o) const {
            if (!(from == o.from)) return Symbol::NameLess{}(from, o.from);
            return Symbol::NameLess{}(to, o.to);
        }
    };

    std::vector<Symbol> nodes; // name-sorted
    std::map<PairKey, std::uint64_t> edge_weight;
    std::map<Symbol, std::uint64_t, Symbol::NameLess> start_weight;
    std::map<Symbol, std::uint64_t, Symbol::NameLess> end_weight;

    std::uint64_t edge(Symbol from, Symbol to) const;
    bool has_edge(Symbol from, Symbol to) const { return edge(from, to) > 0; }
};

DirectlyFollowsGraph build_dfg(const SequenceDatabase& db);

/// Removes, per node, outgoing edges whose weight is below
/// noise_threshold x (that node's strongest outgoing edge); start and end
/// weights are filtered the same way against their own maxima. Threshold 0
/// is the identity.
DirectlyFollowsGraph filter_dfg(const DirectlyFollowsGraph& dfg, double noise_threshold);

/// Block-structured process model: a leaf (symbol or tau) or an operator over
/// ordered children. For a loop the first child is the body and the remaining
/// children are redo parts.
struct ProcessTree {
    enum class Kind { leaf, tau, sequence, exclusive_choice, parallel, loop };

    Kind kind = Kind::tau;
    Symbol label = Symbol::intern("tau"); // meaningful only for Kind::leaf
    std::vector<ProcessTree> children;

    static ProcessTree make_leaf(Symbol s);
    static ProcessTree make_tau();
    static ProcessTree make_operator(Kind kind, std::vector<ProcessTree> children);

    bool operator==(const ProcessTree& other) const;

    /// Textual rendering, e.g. "seq(a, par(b, c))"; parses back with
    /// parse_process_tree.
    std::string to_string() const;
};

ProcessTree parse_process_tree(const std::string& text);

/// Inductive Miner: recursive cut detection over the (noise-filtered)
/// directly-follows graph in the order exclusive-choice, sequence, parallel,
/// loop, with a flower-model fall-through. noise_threshold 0 is the plain
/// miner whose output is guaranteed to fit the log; positive thresholds give
/// the infrequent variant.
ProcessTree inductive_miner(const SequenceDatabase& db, double noise_threshold = 0.0);

/// Standard compositional translation to an accepting Petri net: one token in
/// the entry place initially, one token in the exit place finally.
AcceptingPetriNet tree_to_net(const ProcessTree& tree);

} // namespace seqpred
