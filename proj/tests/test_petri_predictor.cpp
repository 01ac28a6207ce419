#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "seqpred/petri_predictor.hpp"

using namespace seqpred;
using namespace seqpred::test;

namespace {

Symbol sym(const char* name) { return Symbol::intern(name); }

std::shared_ptr<const Alphabet> net_alphabet() {
    std::vector<Symbol> symbols;
    for (const char* name : {"a", "b", "c", "d", "e", "f", "g", "h"}) {
        symbols.push_back(sym(name));
    }
    return std::make_shared<Alphabet>(std::move(symbols));
}

std::uint64_t count_at(const MarkingDistributionTable& table, const AcceptingPetriNet& apn,
                       std::initializer_list<const char*> places, const char* transition) {
    const auto* counts = table.counts_for(marking_of(apn, places));
    if (counts == nullptr) return 0;
    auto it = counts->find(tr(apn, transition));
    return it == counts->end() ? 0 : it->second;
}

} // namespace

TEST_SUITE("petri predictor") {

TEST_CASE("training credits fired transitions at their markings") {
    auto apn = compensation_net();
    SequenceDatabase train;
    train.add(seq({"a", "b", "d", "e", "g"}));
    MarkingDistributionTable table = train_marking_distributions(apn, train);

    CHECK(count_at(table, apn, {"p1"}, "t1") == 1);
    CHECK(count_at(table, apn, {"p2", "p3"}, "t2") == 1);
    CHECK(count_at(table, apn, {"p3", "p4"}, "t4") == 1);
    CHECK(count_at(table, apn, {"p4", "p5"}, "t6") == 1); // e syncs directly
    CHECK(count_at(table, apn, {"p6"}, "t8") == 1);
    CHECK(table.skipped_words == 0);
}

TEST_CASE("training counts branch frequencies") {
    auto apn = compensation_net();
    SequenceDatabase train;
    train.add(seq({"a", "b", "d", "e", "g"}), 9);
    train.add(seq({"a", "b", "d", "e", "h"}), 1);
    MarkingDistributionTable table = train_marking_distributions(apn, train);
    CHECK(count_at(table, apn, {"p6"}, "t8") == 9);
    CHECK(count_at(table, apn, {"p6"}, "t9") == 1);
    CHECK(count_at(table, apn, {"p6"}, "t7") == 0);
}

TEST_CASE("deviating words credit the tau insertions of their alignments") {
    auto apn = compensation_net();
    SequenceDatabase train;
    train.add(seq({"a", "b", "e"})); // alignment inserts the model move on t4
    MarkingDistributionTable table = train_marking_distributions(apn, train);
    CHECK(count_at(table, apn, {"p3", "p4"}, "t4") == 1);
    CHECK(count_at(table, apn, {"p4", "p5"}, "t6") == 1);
}

TEST_CASE("an empty table behaves uniformly") {
    auto apn = compensation_net();
    MarkingDistributionTable empty;
    auto dist = marking_transition_distribution(apn, marking_of(apn, {"p4", "p5"}), &empty, 0.5);
    REQUIRE(dist.size() == 2);
    CHECK(dist[0].second == doctest::Approx(0.5));
    CHECK(dist[1].second == doctest::Approx(0.5));
}

TEST_CASE("empirical distribution with and without smoothing") {
    auto apn = compensation_net();
    MarkingDistributionTable table;
    Marking decision = marking_of(apn, {"p6"});
    table.credit(decision, tr(apn, "t8"), 9);
    table.credit(decision, tr(apn, "t9"), 1);

    auto raw = marking_transition_distribution(apn, decision, &table, 0.0);
    REQUIRE(raw.size() == 3); // t7, t8, t9 enabled
    auto prob_of = [&](const std::vector<std::pair<TransitionIndex, double>>& dist, const char* id) {
        for (const auto& [t, p] : dist) {
            if (apn.net.transition(t).id == id) return p;
        }
        return -1.0;
    };
    CHECK(prob_of(raw, "t8") == doctest::Approx(0.9));
    CHECK(prob_of(raw, "t9") == doctest::Approx(0.1));
    CHECK(prob_of(raw, "t7") == doctest::Approx(0.0));

    auto smoothed = marking_transition_distribution(apn, decision, &table, 0.5);
    CHECK(prob_of(smoothed, "t8") == doctest::Approx(9.5 / 11.5));
    CHECK(prob_of(smoothed, "t9") == doctest::Approx(1.5 / 11.5));
    CHECK(prob_of(smoothed, "t7") == doctest::Approx(0.5 / 11.5));
}

TEST_CASE("all-zero counts degrade to uniform regardless of alpha") {
    auto apn = compensation_net();
    MarkingDistributionTable table;
    Marking decision = marking_of(apn, {"p6"});
    table.credit(decision, tr(apn, "t8"), 0); // no-op credit keeps the marking absent
    for (double alpha : {0.0, 0.5, 2.0}) {
        auto dist = marking_transition_distribution(apn, decision, &table, alpha);
        for (const auto& [t, p] : dist) CHECK(p == doctest::Approx(1.0 / 3.0));
    }
}

TEST_CASE("single enabled labelled transition predicts with certainty") {
    auto apn = compensation_net();
    PetriPredictorConfig config;
    auto result = next_symbol_distribution_mc(apn, marking_of(apn, {"p3", "p4"}), nullptr, config,
                                              net_alphabet());
    CHECK(result.exact);
    CHECK(result.distribution.prob(sym("d")) == doctest::Approx(1.0));
}

TEST_CASE("tau branching yields the mixed label distribution exactly") {
    auto apn = compensation_net();
    PetriPredictorConfig config;
    auto result = next_symbol_distribution_mc(apn, marking_of(apn, {"p4", "p5"}), nullptr, config,
                                              net_alphabet());
    CHECK(result.exact);
    CHECK(result.distribution.prob(sym("e")) == doctest::Approx(0.5));
    CHECK(result.distribution.prob(sym("f")) == doctest::Approx(1.0 / 6.0));
    CHECK(result.distribution.prob(sym("g")) == doctest::Approx(1.0 / 6.0));
    CHECK(result.distribution.prob(sym("h")) == doctest::Approx(1.0 / 6.0));
}

TEST_CASE("forced tau chain to a single label") {
    // entry -tau-> mid -x-> exit
    AcceptingPetriNet apn;
    apn.net.add_place("entry");
    apn.net.add_place("mid");
    apn.net.add_place("exit");
    apn.net.add_transition("skip", std::nullopt);
    apn.net.add_transition("emit", sym("x"));
    apn.net.add_input_arc("entry", "skip");
    apn.net.add_output_arc("skip", "mid");
    apn.net.add_input_arc("mid", "emit");
    apn.net.add_output_arc("emit", "exit");
    apn.initial_marking = Marking::from_places(apn.net, {{"entry", 1}});
    apn.final_marking = Marking::from_places(apn.net, {{"exit", 1}});

    auto alphabet = std::make_shared<Alphabet>(std::vector<Symbol>{sym("x"), sym("y")});
    PetriPredictorConfig config;
    auto result = next_symbol_distribution_mc(apn, apn.initial_marking, nullptr, config, alphabet);
    CHECK(result.distribution.prob(sym("x")) == doctest::Approx(1.0));
}

TEST_CASE("monte carlo stays within the binomial envelope of the exact value") {
    auto apn = compensation_net();
    Marking start = marking_of(apn, {"p4", "p5"});
    const double exact[] = {0.5, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0};
    const char* labels[] = {"e", "f", "g", "h"};

    std::size_t violations = 0;
    const std::uint64_t walks = 10'000;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        PetriPredictorConfig config;
        config.exact_closure_limit = 0; // force sampling
        config.monte_carlo_iterations = walks;
        config.seed = seed;
        auto result = next_symbol_distribution_mc(apn, start, nullptr, config, net_alphabet());
        CHECK_FALSE(result.exact);
        CHECK(result.total_walks == walks);
        for (int i = 0; i < 4; ++i) {
            double p = exact[i];
            double bound = 3.0 * std::sqrt(p * (1 - p) / static_cast<double>(walks));
            if (std::abs(result.distribution.prob(sym(labels[i])) - p) > bound) ++violations;
        }
    }
    CHECK(violations <= 1); // 3-sigma budget over 80 checks
}

TEST_CASE("sampling is bitwise deterministic per seed") {
    auto apn = compensation_net();
    Marking start = marking_of(apn, {"p4", "p5"});
    PetriPredictorConfig config;
    config.exact_closure_limit = 0;
    config.monte_carlo_iterations = 2'000;
    config.seed = 42;
    auto a = next_symbol_distribution_mc(apn, start, nullptr, config, net_alphabet());
    auto b = next_symbol_distribution_mc(apn, start, nullptr, config, net_alphabet());
    CHECK(a.distribution.probs() == b.distribution.probs());
}

TEST_CASE("monte carlo agrees with the exact shortcut") {
    auto apn = compensation_net();
    Marking start = marking_of(apn, {"p4", "p5"});
    PetriPredictorConfig exact_config;
    auto exact = next_symbol_distribution_mc(apn, start, nullptr, exact_config, net_alphabet());
    PetriPredictorConfig mc_config;
    mc_config.exact_closure_limit = 0;
    mc_config.monte_carlo_iterations = 100'000;
    mc_config.seed = 7;
    auto sampled = next_symbol_distribution_mc(apn, start, nullptr, mc_config, net_alphabet());
    for (std::size_t i = 0; i < exact.distribution.size(); ++i) {
        CHECK(sampled.distribution.at(i) == doctest::Approx(exact.distribution.at(i)).epsilon(0.02));
    }
}

TEST_CASE("dead markings fall back to uniform with a flag") {
    auto apn = compensation_net();
    PetriPredictorConfig config;
    auto result = next_symbol_distribution_mc(apn, marking_of(apn, {"p7"}), nullptr, config,
                                              net_alphabet());
    CHECK(result.dead_marking_fallback);
    for (std::size_t i = 0; i < result.distribution.size(); ++i) {
        CHECK(result.distribution.at(i) == doctest::Approx(1.0 / 8.0));
    }
}

TEST_CASE("tau cycles are aborted by the depth limit and resampled") {
    // tau loop with a rare visible exit: walks that spin past the depth cap
    // abort; credited walks still normalize to the exit label
    AcceptingPetriNet apn;
    apn.net.add_place("hub");
    apn.net.add_place("done");
    apn.net.add_transition("spin", std::nullopt);
    apn.net.add_input_arc("hub", "spin");
    apn.net.add_output_arc("spin", "hub");
    apn.net.add_transition("leave", sym("x"));
    apn.net.add_input_arc("hub", "leave");
    apn.net.add_output_arc("leave", "done");
    apn.initial_marking = Marking::from_places(apn.net, {{"hub", 1}});
    apn.final_marking = Marking::from_places(apn.net, {{"done", 1}});

    auto alphabet = std::make_shared<Alphabet>(std::vector<Symbol>{sym("x")});
    PetriPredictorConfig config;
    config.tau_chain_depth_limit = 4; // tiny: many walks abort
    config.monte_carlo_iterations = 2'000;
    auto result = next_symbol_distribution_mc(apn, apn.initial_marking, nullptr, config, alphabet);
    CHECK_FALSE(result.exact); // the tau closure cycles
    CHECK(result.aborted_walks > 0);
    CHECK(result.distribution.prob(sym("x")) == doctest::Approx(1.0));
}

TEST_CASE("end-to-end prediction through prefix alignment") {
    auto alphabet = net_alphabet();
    PetriPredictorConfig config;
    auto model = PetriPredictor::fit(compensation_net(), alphabet, nullptr, config);

    NextSymbolDistribution after_ab = model->predict(seq({"a", "b"}));
    CHECK(after_ab.prob(sym("d")) == doctest::Approx(1.0));

    NextSymbolDistribution after_abd = model->predict(seq({"a", "b", "d"}));
    CHECK(after_abd.prob(sym("e")) == doctest::Approx(0.5));
    CHECK(after_abd.prob(sym("f")) == doctest::Approx(1.0 / 6.0));

    // deviating prefix: the alignment inserts the check and lands at the
    // decision marking
    NextSymbolDistribution after_abe = model->predict(seq({"a", "b", "e"}));
    CHECK(after_abe.prob(sym("f")) == doctest::Approx(1.0 / 3.0));
    CHECK(after_abe.prob(sym("g")) == doctest::Approx(1.0 / 3.0));
    CHECK(after_abe.prob(sym("h")) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("empirical mode sharpens predictions toward the data") {
    auto alphabet = net_alphabet();
    SequenceDatabase train;
    train.add(seq({"a", "b", "d", "e", "g"}), 9);
    train.add(seq({"a", "b", "d", "e", "h"}), 1);

    PetriPredictorConfig config;
    config.mode = PetriPredictorConfig::Mode::empirical;
    config.smoothing_alpha = 0.0;
    auto model = PetriPredictor::fit(compensation_net(), alphabet, &train, config);

    NextSymbolDistribution d = model->predict(seq({"a", "b", "d", "e"}));
    CHECK(d.prob(sym("g")) == doctest::Approx(0.9));
    CHECK(d.prob(sym("h")) == doctest::Approx(0.1));
    CHECK(d.prob(sym("f")) == doctest::Approx(0.0));
}

} // TEST_SUITE
