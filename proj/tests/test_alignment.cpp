#include <doctest.h>

#include <deque>
#include <limits>

#include "alignment_oracle.hpp"
#include "helpers.hpp"
#include "seqpred/alignment.hpp"
#include "seqpred/errors.hpp"
#include "seqpred/rng.hpp"

using namespace seqpred;
using namespace seqpred::test;

namespace {

std::string moves_signature(const PrefixAlignment& alignment, const AcceptingPetriNet& apn) {
    std::string out;
    for (const Move& move : alignment.moves) {
        if (!out.empty()) out += " ";
        switch (move.kind) {
        case MoveKind::synchronous:
            out += "(" + move.log_symbol->name() + "," + apn.net.transition(*move.transition).id + ")";
            break;
        case MoveKind::model_move:
            out += "(>>," + apn.net.transition(*move.transition).id + ")";
            break;
        case MoveKind::log_move:
            out += "(" + move.log_symbol->name() + ",>>)";
            break;
        }
    }
    return out;
}

} // namespace

TEST_SUITE("alignments") {

TEST_CASE("fitting prefix aligns synchronously at cost zero") {
    auto apn = compensation_net();
    AlignmentEngine engine(apn);
    PrefixAlignment a = engine.prefix_align(seq({"a", "b"}));
    CHECK(a.cost == 0.0);
    CHECK(a.final_marking == marking_of(apn, {"p3", "p4"}));
    CHECK(moves_signature(a, apn) == "(a,t1) (b,t2)");
}

TEST_CASE("skipped model step is inserted rather than logging the symbol away") {
    auto apn = compensation_net();
    AlignmentEngine engine(apn);
    PrefixAlignment a = engine.prefix_align(seq({"a", "b", "e"}));
    CHECK(a.cost == 1.0);
    CHECK(a.final_marking == marking_of(apn, {"p6"}));
    CHECK(moves_signature(a, apn) == "(a,t1) (b,t2) (>>,t4) (e,t6)");
}

TEST_CASE("empty prefix aligns trivially") {
    auto apn = compensation_net();
    PrefixAlignment a = prefix_align(apn, {});
    CHECK(a.cost == 0.0);
    CHECK(a.moves.empty());
    CHECK(a.final_marking == apn.initial_marking);
}

TEST_CASE("full alignment of a deviating word") {
    auto apn = compensation_net();
    AlignmentEngine engine(apn);
    PrefixAlignment a = engine.align_full(seq({"a", "b", "e", "e", "g"}));
    CHECK(a.cost == 2.0);
    CHECK(a.final_marking == apn.final_marking);
    // one model move on the skipped check, one log move on the duplicate e
    CHECK(moves_signature(a, apn) == "(a,t1) (b,t2) (>>,t4) (e,t6) (e,>>) (g,t8)");
}

TEST_CASE("full alignment of a fitting word costs zero") {
    auto apn = compensation_net();
    PrefixAlignment a = align_full(apn, seq({"a", "b", "d", "e", "g"}));
    CHECK(a.cost == 0.0);
}

TEST_CASE("empty word requires the cheapest visible run to the final marking") {
    auto apn = compensation_net();
    PrefixAlignment a = align_full(apn, {});
    // a, one examination, the check, the tau-skip of e, then pay or reject
    CHECK(a.cost == 4.0);
    CHECK(a.final_marking == apn.final_marking);
}

TEST_CASE("alignment invariants hold on returned values") {
    auto apn = compensation_net();
    AlignmentEngine engine(apn);
    for (auto prefix : {seq({"a", "b"}), seq({"a", "b", "e"}), seq({"x", "a"}), seq({"a", "c", "d"}),
                        seq({"f", "f"})}) {
        PrefixAlignment a = engine.prefix_align(prefix);
        CHECK(a.log_projection() == prefix);
        CHECK(fire_sequence(apn, a.transition_projection()) == a.final_marking);
        CHECK(oracle_reaches_final(apn, a.final_marking, engine.budget().token_budget));
    }
}

TEST_CASE("symbols outside the net label set become log moves") {
    auto apn = compensation_net();
    PrefixAlignment a = prefix_align(apn, seq({"a", "zz"}));
    CHECK(a.cost == 1.0);
    REQUIRE(a.moves.size() == 2);
    CHECK(a.moves[1].kind == MoveKind::log_move);
}

TEST_CASE("cost is monotone in prefix length") {
    auto apn = compensation_net();
    AlignmentEngine engine(apn);
    SymbolSequence word = seq({"a", "e", "b", "d", "g", "x"});
    double prev = 0.0;
    for (std::size_t k = 0; k <= word.size(); ++k) {
        double cost = engine.prefix_align(word.head(k)).cost;
        CHECK(cost >= prev);
        prev = cost;
    }
}

TEST_CASE("repeated calls return identical move lists") {
    auto apn = compensation_net();
    AlignmentEngine engine(apn);
    SymbolSequence prefix = seq({"a", "e", "b"});
    std::string first = moves_signature(engine.prefix_align(prefix), apn);
    for (int i = 0; i < 5; ++i) {
        CHECK(moves_signature(engine.prefix_align(prefix), apn) == first);
    }
}

TEST_CASE("budget exhaustion raises a budget error") {
    auto apn = compensation_net();
    SearchBudget tiny;
    tiny.max_expanded_states = 3;
    CHECK_THROWS_AS(prefix_align(apn, seq({"a", "b", "e", "e"}), MoveCostScheme{}, tiny),
                    BudgetError);
}

TEST_CASE("infeasibility when the final marking cannot be reached") {
    // net whose final marking is disconnected from everything
    AcceptingPetriNet apn;
    apn.net.add_place("p");
    apn.net.add_place("island");
    apn.net.add_transition("t", Symbol::intern("a"));
    apn.net.add_input_arc("p", "t");
    apn.net.add_output_arc("t", "p");
    apn.initial_marking = Marking::from_places(apn.net, {{"p", 1}});
    apn.final_marking = Marking::from_places(apn.net, {{"island", 1}});
    CHECK_THROWS_AS(prefix_align(apn, seq({"a"})), InfeasibilityError);
}

TEST_CASE("invalid cost schemes are rejected") {
    MoveCostScheme negative;
    negative.log_move_cost = -1.0;
    CHECK_THROWS_AS(negative.validate(), ConfigError);
    MoveCostScheme sync_expensive;
    sync_expensive.sync_cost = 2.0;
    CHECK_THROWS_AS(sync_expensive.validate(), ConfigError);
}

TEST_CASE("is_fitting distinguishes fitting from deviating logs") {
    auto apn = compensation_net();
    SequenceDatabase fitting;
    fitting.add(seq({"a", "b", "d", "e", "g"}));
    fitting.add(seq({"a", "c", "d", "h"}));
    CHECK(is_fitting(apn, fitting));

    SequenceDatabase deviating;
    deviating.add(seq({"a", "b", "e", "e", "g"}));
    CHECK_FALSE(is_fitting(apn, deviating));
}

TEST_CASE("prefix alignment cost matches the brute-force oracle on random nets") {
    DetRng rng(20240817);
    MoveCostScheme costs;
    SearchBudget budget;
    budget.token_budget = 12;
    int compared = 0;
    while (compared < 300) {
        AcceptingPetriNet apn = random_accepting_net(rng, budget.token_budget);
        AlignmentEngine engine(apn, costs, budget);
        SymbolSequence prefix = random_prefix_abcd(rng, 6);
        PrefixAlignment got = engine.prefix_align(prefix);
        if (got.moves.size() > 12) continue; // outside the oracle horizon
        double oracle = oracle_prefix_cost(apn, prefix, costs, 12, budget.token_budget);
        REQUIRE(oracle < std::numeric_limits<double>::infinity());
        CHECK(got.cost == doctest::Approx(oracle).epsilon(1e-12));
        ++compared;
    }
}

} // TEST_SUITE
