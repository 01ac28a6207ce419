#include <doctest.h>

#include "seqpred/errors.hpp"
#include "seqpred/rng.hpp"
#include "seqpred/sequence.hpp"

using namespace seqpred;

namespace {

SymbolSequence seq(std::initializer_list<const char*> names) {
    return SymbolSequence::of_names(names);
}

} // namespace

TEST_SUITE("sequence algebra") {

TEST_CASE("symbols are interned by name") {
    Symbol a1 = Symbol::intern("a");
    Symbol a2 = Symbol::intern("a");
    Symbol b = Symbol::intern("b");
    CHECK(a1 == a2);
    CHECK(a1 != b);
    CHECK(a1.name() == "a");
}

TEST_CASE("head returns prefixes") {
    SymbolSequence s = seq({"a", "b", "c", "d", "e"});
    CHECK(s.head(2) == seq({"a", "b"}));
    CHECK(seq({"a", "b"}).head(0) == SymbolSequence{});
    CHECK(seq({"a", "b"}).head(2) == seq({"a", "b"}));
    CHECK_THROWS_AS(s.head(6), RangeError);
}

TEST_CASE("tail clamps by default and is strict on demand") {
    CHECK(seq({"a", "b", "b"}).tail(2) == seq({"b", "b"}));
    CHECK(seq({"a", "b"}).tail(5) == seq({"a", "b"}));
    CHECK(SymbolSequence{}.tail(1) == SymbolSequence{});
    CHECK_THROWS_AS(seq({"a"}).tail(2, TailMode::strict), RangeError);
}

TEST_CASE("symbol_set collects distinct symbols") {
    auto set = seq({"a", "b", "b", "c"}).symbol_set();
    REQUIRE(set.size() == 3);
    CHECK(set[0].name() == "a");
    CHECK(set[1].name() == "b");
    CHECK(set[2].name() == "c");
    CHECK(SymbolSequence{}.symbol_set().empty());
    CHECK(seq({"a", "a", "a"}).symbol_set().size() == 1);
}

TEST_CASE("parikh counts occurrences") {
    SymbolMultiset m = seq({"a", "b", "b", "c"}).parikh();
    CHECK(m.count(Symbol::intern("a")) == 1);
    CHECK(m.count(Symbol::intern("b")) == 2);
    CHECK(m.count(Symbol::intern("c")) == 1);
    CHECK(m.total() == 4);
    CHECK(SymbolSequence{}.parikh().total() == 0);
    CHECK(seq({"c", "c"}).parikh().count(Symbol::intern("c")) == 2);
}

TEST_CASE("head and tail partition the sequence") {
    DetRng rng(42);
    const char* names[] = {"a", "b", "c", "d"};
    for (int round = 0; round < 200; ++round) {
        std::vector<Symbol> elems;
        auto len = rng.next_below(10);
        for (std::uint64_t i = 0; i < len; ++i) {
            elems.push_back(Symbol::intern(names[rng.next_below(4)]));
        }
        SymbolSequence s{elems};
        for (std::size_t k = 0; k <= s.size(); ++k) {
            CHECK(s.head(k).concat(s.tail(s.size() - k)) == s);
        }
        // parikh total and support match the sequence
        CHECK(s.parikh().total() == s.size());
        CHECK(s.parikh().support() == s.symbol_set());
    }
}

} // TEST_SUITE
