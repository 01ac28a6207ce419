#pragma once

#include <initializer_list>

#include "seqpred/database.hpp"
#include "seqpred/petrinet.hpp"

namespace seqpred::test {

inline SymbolSequence seq(std::initializer_list<const char*> names) {
    return SymbolSequence::of_names(names);
}

/// The ticket-compensation example net: register (a), then in parallel an
/// examination (casual b / thorough c) and a ticket check (d), then an
/// optional decision (e, skippable via a tau), then restart (f), pay (g) or
/// reject (h).
///
///   p1 -a(t1)-> {p2,p3};  p2 -b(t2)|c(t3)-> p4;  p3 -d(t4)-> p5
///   {p4,p5} -tau(t5)|e(t6)-> p6
///   p6 -f(t7)-> {p2,p3};  p6 -g(t8)-> p7;  p6 -h(t9)-> p7
inline AcceptingPetriNet compensation_net() {
    LabeledPetriNet net;
    for (const char* p : {"p1", "p2", "p3", "p4", "p5", "p6", "p7"}) net.add_place(p);
    auto label = [](const char* name) { return std::optional<Symbol>(Symbol::intern(name)); };
    net.add_transition("t1", label("a"));
    net.add_transition("t2", label("b"));
    net.add_transition("t3", label("c"));
    net.add_transition("t4", label("d"));
    net.add_transition("t5", std::nullopt);
    net.add_transition("t6", label("e"));
    net.add_transition("t7", label("f"));
    net.add_transition("t8", label("g"));
    net.add_transition("t9", label("h"));

    net.add_input_arc("p1", "t1");
    net.add_output_arc("t1", "p2");
    net.add_output_arc("t1", "p3");
    net.add_input_arc("p2", "t2");
    net.add_output_arc("t2", "p4");
    net.add_input_arc("p2", "t3");
    net.add_output_arc("t3", "p4");
    net.add_input_arc("p3", "t4");
    net.add_output_arc("t4", "p5");
    net.add_input_arc("p4", "t5");
    net.add_input_arc("p5", "t5");
    net.add_output_arc("t5", "p6");
    net.add_input_arc("p4", "t6");
    net.add_input_arc("p5", "t6");
    net.add_output_arc("t6", "p6");
    net.add_input_arc("p6", "t7");
    net.add_output_arc("t7", "p2");
    net.add_output_arc("t7", "p3");
    net.add_input_arc("p6", "t8");
    net.add_output_arc("t8", "p7");
    net.add_input_arc("p6", "t9");
    net.add_output_arc("t9", "p7");

    Marking m0 = Marking::from_places(net, {{"p1", 1}});
    Marking mf = Marking::from_places(net, {{"p7", 1}});
    return AcceptingPetriNet{std::move(net), std::move(m0), std::move(mf)};
}

inline Marking marking_of(const AcceptingPetriNet& apn, std::initializer_list<const char*> places) {
    std::vector<std::pair<std::string, std::uint32_t>> entries;
    for (const char* p : places) entries.emplace_back(p, 1);
    return Marking::from_places(apn.net, entries);
}

inline TransitionIndex tr(const AcceptingPetriNet& apn, const char* id) {
    return *apn.net.find_transition(id);
}

} // namespace seqpred::test
