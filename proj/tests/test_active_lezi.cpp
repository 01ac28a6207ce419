#include <doctest.h>

#include "helpers.hpp"
#include "seqpred/active_lezi.hpp"

using namespace seqpred;
using namespace seqpred::test;

namespace {

Symbol sym(const char* name) { return Symbol::intern(name); }

std::shared_ptr<const Alphabet> alphabet_of(const SequenceDatabase& db) {
    return std::make_shared<Alphabet>(db.alphabet());
}

} // namespace

TEST_SUITE("active lezi") {

TEST_CASE("the compression parse matches a hand trace") {
    // feeding <a,a,b,a,b>:
    //   a  -> new phrase "a"            window [a]    counts: a=1
    //   a  -> inside "a"                window [a]    counts: a=2
    //   b  -> new phrase "ab" (len 2)   window [a,b]  counts: ab=1, b=1
    //   a  -> inside "a"                window [b,a]  counts: ba=1, a=3
    //   b  -> inside "ab"               window [a,b]  counts: ab=2, b=2
    SequenceDatabase db;
    db.add(seq({"a", "a", "b", "a", "b"}));
    auto model = ActiveLeziPredictor::fit(db, alphabet_of(db));

    CHECK(model->dictionary_size() == 2);
    CHECK(model->dictionary_contains(seq({"a"})));
    CHECK(model->dictionary_contains(seq({"a", "b"})));
    CHECK_FALSE(model->dictionary_contains(seq({"b"})));
    CHECK(model->window_length() == 2);

    CHECK(model->substring_count(seq({"a"})) == 3);
    CHECK(model->substring_count(seq({"b"})) == 2);
    CHECK(model->substring_count(seq({"a", "b"})) == 2);
    CHECK(model->substring_count(seq({"b", "a"})) == 1);
    CHECK(model->substring_count(seq({"b", "b"})) == 0);
}

TEST_CASE("blend weights follow the documented escape chain") {
    SequenceDatabase db;
    db.add(seq({"a", "a", "b", "a", "b"}));
    auto model = ActiveLeziPredictor::fit(db, alphabet_of(db));

    // context "a" has the single child "ab" (count 2): mu1 = 2/3, P1(b) = 1
    // order 0 children a=3, b=2: mu0 = 5/7, P0 = (3/5, 2/5)
    // residue handled uniformly over {a, b}
    double mu1 = 2.0 / 3.0;
    double mu0 = 5.0 / 7.0;
    double expected_b = mu1 * 1.0 + (1 - mu1) * mu0 * (2.0 / 5.0) + (1 - mu1) * (1 - mu0) * 0.5;
    double expected_a = (1 - mu1) * mu0 * (3.0 / 5.0) + (1 - mu1) * (1 - mu0) * 0.5;

    NextSymbolDistribution d = model->predict(seq({"b", "a"}));
    CHECK(d.prob(sym("b")) == doctest::Approx(expected_b).epsilon(1e-12));
    CHECK(d.prob(sym("a")) == doctest::Approx(expected_a).epsilon(1e-12));
    CHECK(d.prob(sym("a")) + d.prob(sym("b")) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("the order-0 component is the in-window symbol frequency") {
    SequenceDatabase db;
    db.add(seq({"a", "a", "b", "a", "b"}));
    auto model = ActiveLeziPredictor::fit(db, alphabet_of(db));

    // a prefix whose tail matches no deeper context: only order 0 plus
    // the uniform residue contribute
    NextSymbolDistribution d = model->predict(seq({"c?" /* unseen */}));
    double mu0 = 5.0 / 7.0;
    CHECK(d.prob(sym("a")) == doctest::Approx(mu0 * 0.6 + (1 - mu0) * 0.5).epsilon(1e-12));
    CHECK(d.prob(sym("b")) == doctest::Approx(mu0 * 0.4 + (1 - mu0) * 0.5).epsilon(1e-12));
}

TEST_CASE("single-symbol training data pins the prediction") {
    SequenceDatabase db;
    db.add(seq({"a", "a", "a", "a"}));
    auto model = ActiveLeziPredictor::fit(db, alphabet_of(db));
    for (std::size_t len = 0; len <= 3; ++len) {
        std::vector<Symbol> prefix(len, sym("a"));
        NextSymbolDistribution d = model->predict(SymbolSequence(prefix));
        CHECK(d.prob(sym("a")) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("window resets between sequences") {
    // the first word grows the window to 2 via the phrase "ab"; the second
    // word must not join across the boundary
    SequenceDatabase db;
    db.add(seq({"a", "b", "a", "b"}));
    db.add(seq({"c", "d"}));
    auto model = ActiveLeziPredictor::fit(db, alphabet_of(db));
    CHECK(model->window_length() == 2);
    CHECK(model->substring_count(seq({"a", "b"})) == 1);
    // "b,c" straddles the sequence boundary: never counted
    CHECK(model->substring_count(seq({"b", "c"})) == 0);
    CHECK(model->substring_count(seq({"c", "d"})) == 1);
}

TEST_CASE("multiplicities repeat the pass") {
    SequenceDatabase once;
    once.add(seq({"a", "b", "a"}));
    SequenceDatabase twice;
    twice.add(seq({"a", "b", "a"}), 2);
    auto m1 = ActiveLeziPredictor::fit(once, alphabet_of(once));
    auto m2 = ActiveLeziPredictor::fit(twice, alphabet_of(twice));
    CHECK(m2->substring_count(seq({"a"})) == 2 * m1->substring_count(seq({"a"})));
}

} // TEST_SUITE
