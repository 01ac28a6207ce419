#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "seqpred/database.hpp"
#include "seqpred/errors.hpp"

using namespace seqpred;

namespace {

SymbolSequence seq(std::initializer_list<const char*> names) {
    return SymbolSequence::of_names(names);
}

struct TempFile {
    std::filesystem::path path;
    explicit TempFile(const std::string& contents) {
        path = std::filesystem::temp_directory_path() /
               ("seqpred_test_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)) + ".tmp");
        std::ofstream out(path, std::ios::binary);
        out << contents;
    }
    ~TempFile() { std::filesystem::remove(path); }
};

} // namespace

TEST_SUITE("sequence database") {

TEST_CASE("line format groups duplicate words as a multiset") {
    SequenceDatabase db = parse_line_format("a b c\na b c\nb a c\nb a c\nb a c");
    CHECK(db.sequence_count() == 5);
    CHECK(db.event_count() == 15);
    REQUIRE(db.entries().size() == 2);
    CHECK(db.entries()[0].word == seq({"a", "b", "c"}));
    CHECK(db.entries()[0].count == 2);
    CHECK(db.entries()[1].word == seq({"b", "a", "c"}));
    CHECK(db.entries()[1].count == 3);
    CHECK(db.alphabet().size() == 3);
}

TEST_CASE("line format skips blanks and comments, rejects tau") {
    SequenceDatabase db = parse_line_format("# header\n\na b\n   \nb a\n");
    CHECK(db.sequence_count() == 2);
    CHECK_THROWS_AS(parse_line_format("a tau b"), ParseError);
    CHECK_THROWS_AS(parse_line_format("# only a comment\n\n"), EmptyDatabaseError);
    CHECK_THROWS_AS(parse_line_format(""), EmptyDatabaseError);
}

TEST_CASE("csv rows group by case ordered by timestamp then file order") {
    // case 1337 events appear interleaved with other cases and out of order
    std::string text =
        "case,activity,timestamp\n"
        "1337,a,2018-07-30T11:02:00Z\n"
        "1338,a,2018-07-30T11:32:00Z\n"
        "1337,d,2018-07-30T12:12:00Z\n"
        "1338,c,2018-07-30T14:16:00Z\n"
        "1337,b,2018-08-03T11:18:00Z\n"
        "1337,e,2018-08-03T15:34:00Z\n"
        "1338,d,2018-08-03T15:50:00Z\n"
        "1337,h,2018-08-03T16:50:00Z\n"
        "1338,g,2018-08-03T16:59:00Z\n";
    SequenceDatabase db = parse_csv_format(text);
    REQUIRE(db.entries().size() == 2);
    CHECK(db.entries()[0].word == seq({"a", "d", "b", "e", "h"}));
    CHECK(db.entries()[1].word == seq({"a", "c", "d", "g"}));
}

TEST_CASE("csv timestamp ties break by file order and offsets are respected") {
    std::string text =
        "case,activity,timestamp\n"
        "c1,x,2020-01-01T10:00:00+01:00\n" // = 09:00Z
        "c1,y,2020-01-01T09:00:00Z\n"      // tie with x -> file order keeps x first
        "c1,z,2020-01-01T08:59:59.5Z\n";   // earliest
    SequenceDatabase db = parse_csv_format(text);
    REQUIRE(db.entries().size() == 1);
    CHECK(db.entries()[0].word == seq({"z", "x", "y"}));
}

TEST_CASE("csv quoting per RFC 4180") {
    std::string text =
        "case,activity\n"
        "\"c,1\",\"say \"\"hi\"\"\"\n"
        "\"c,1\",b\n";
    SequenceDatabase db = parse_csv_format(text);
    REQUIRE(db.entries().size() == 1);
    CHECK(db.entries()[0].word.at(0).name() == "say \"hi\"");
}

TEST_CASE("csv errors") {
    CHECK_THROWS_AS(parse_csv_format("case,activity\n,a\n"), ParseError);       // missing case
    CHECK_THROWS_AS(parse_csv_format("case,activity\nc1,\n"), ParseError);      // missing activity
    CHECK_THROWS_AS(parse_csv_format("id,activity\nc1,a\n"), ParseError);       // missing header column
    CHECK_THROWS_AS(parse_csv_format("case,activity,timestamp\nc1,a,yesterday\n"), ParseError);
    CHECK_THROWS_AS(parse_csv_format(""), EmptyDatabaseError);
    CHECK_THROWS_AS(parse_csv_format("case,activity\n"), EmptyDatabaseError);
}

TEST_CASE("loading identical bytes twice yields equal databases") {
    std::string contents = "a b c\nb c\n# comment\nc\n";
    TempFile f1(contents);
    TempFile f2(contents);
    SequenceDatabase a = load_database(f1.path, LogFormat::line);
    SequenceDatabase b = load_database(f2.path, LogFormat::line);
    CHECK(a == b);
}

TEST_CASE("prediction points unroll prefixes") {
    SequenceDatabase db;
    db.add(seq({"a", "b", "c"}));
    auto points = enumerate_prediction_points(db);
    REQUIRE(points.size() == 2);
    CHECK(points[0].prefix == seq({"a"}));
    CHECK(points[0].actual == Symbol::intern("b"));
    CHECK(points[1].prefix == seq({"a", "b"}));
    CHECK(points[1].actual == Symbol::intern("c"));
}

TEST_CASE("prediction points: short sequences and multiplicities") {
    SequenceDatabase single;
    single.add(seq({"a"}));
    CHECK(enumerate_prediction_points(single).empty());
    CHECK(enumerate_prediction_points(single, /*include_empty_prefix=*/true).size() == 1);

    SequenceDatabase doubled;
    doubled.add(seq({"a", "b"}), 2);
    auto points = enumerate_prediction_points(doubled);
    REQUIRE(points.size() == 2);
    CHECK(points[0].prefix == seq({"a"}));
    CHECK(points[1].prefix == seq({"a"}));
}

TEST_CASE("total points equal events minus sequences") {
    SequenceDatabase db = parse_line_format("a b c\na b c\nb a c\nx\ny z y z y\n");
    auto points = enumerate_prediction_points(db);
    CHECK(points.size() == db.event_count() - db.sequence_count());
}

} // TEST_SUITE
