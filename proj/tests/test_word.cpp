#include <doctest.h>

#include "zpa/errors.hpp"
#include "zpa/word.hpp"

#include "oracles.hpp"

using zpa::Word;
using zpa::input_error;

TEST_CASE("parse, print, significance of leading zeros") {
    Word w = Word::parse("0101", 2);
    CHECK(w.length() == 4);
    CHECK(w.to_string() == "0101");
    CHECK(w.letter(0) == 1); // rightmost letter is fed first
    CHECK(w.letter(3) == 0);

    CHECK(Word::parse("01", 2) != Word::parse("1", 2));
    CHECK(Word(2).empty());
    CHECK(Word(2).to_string() == "");
    CHECK_THROWS_AS(Word::parse("012", 2), input_error);
}

TEST_CASE("concatenation") {
    CHECK(zpa::concat(Word::parse("10", 2), Word::parse("1", 2)).to_string() == "101");

    Word w = Word::parse("1101", 2), empty(2);
    CHECK(zpa::concat(w, empty) == w);
    CHECK(zpa::concat(empty, w) == w);

    // value(concat(a,b)) = value(b) + p^len(b) * value(a)
    Word a = Word::parse("11", 2), b = Word::parse("01", 2);
    CHECK(zpa::concat(a, b).to_string() == "1101");
    CHECK(zpa::concat(a, b).value() == b.value() + 4 * a.value());
    CHECK(zpa::concat(a, b).value() == 13);

    CHECK_THROWS_AS(zpa::concat(Word(2), Word(3)), input_error);
}

TEST_CASE("concat length additivity and associativity") {
    auto gen = oracle::rng(21);
    for (int trial = 0; trial < 200; ++trial) {
        unsigned p = trial % 2 ? 2 : 3;
        auto random_word = [&](unsigned maxlen) {
            unsigned n = static_cast<unsigned>(gen() % (maxlen + 1));
            return Word::from_value(oracle::random_below(gen, oracle::pow_z(p, n)), n, p);
        };
        Word a = random_word(6), b = random_word(6), c = random_word(6);
        CHECK(zpa::concat(a, b).length() == a.length() + b.length());
        CHECK(zpa::concat(zpa::concat(a, b), c) == zpa::concat(a, zpa::concat(b, c)));
    }
}

TEST_CASE("shortlex rank basics") {
    CHECK(zpa::shortlex_rank(Word::parse("0", 2)) == 1);
    CHECK(zpa::shortlex_rank(Word::parse("1", 2)) == 2);
    CHECK(zpa::shortlex_rank(Word::parse("00", 2)) == 3);
    CHECK(zpa::shortlex_rank(Word::parse("01", 2)) == 4);
    CHECK(zpa::shortlex_rank(Word::parse("10", 2)) == 5);
    CHECK(zpa::shortlex_rank(Word::parse("11", 2)) == 6);

    // p = 3 order: 0,1,2,00,01,02,...
    CHECK(zpa::shortlex_rank(Word::parse("02", 3)) == 6);

    CHECK_THROWS_AS(zpa::shortlex_rank(Word(2)), input_error);
}

TEST_CASE("shortlex unrank basics") {
    CHECK(zpa::shortlex_unrank(0, 2).empty());
    CHECK(zpa::shortlex_unrank(5, 2) == Word::parse("10", 2));
    CHECK(zpa::shortlex_unrank(3, 2) == Word::parse("00", 2));
    CHECK(zpa::shortlex_unrank(4, 2) == Word::parse("01", 2));
    CHECK(zpa::shortlex_unrank(6, 2) == Word::parse("11", 2));
}

TEST_CASE("rank/unrank agree with plain enumeration, lengths <= 8") {
    for (unsigned p : {2u, 3u, 5u}) {
        auto order = oracle::shortlex_order(p, p == 5 ? 6 : 8);
        mpz_class rank = 1;
        for (const auto& [n, v] : order) {
            Word w = Word::from_value(mpz_class(static_cast<unsigned long>(v)), n, p);
            CHECK(zpa::shortlex_rank(w) == rank);
            CHECK(zpa::shortlex_unrank(rank, p) == w);
            ++rank;
        }
    }
}

TEST_CASE("unrank round trip on random long words") {
    auto gen = oracle::rng(22);
    for (int trial = 0; trial < 1000; ++trial) {
        unsigned p = trial % 2 ? 2 : 3;
        unsigned n = 1 + static_cast<unsigned>(gen() % 12);
        Word w = Word::from_value(oracle::random_below(gen, oracle::pow_z(p, n)), n, p);
        CHECK(zpa::shortlex_unrank(zpa::shortlex_rank(w), p) == w);
    }
}

TEST_CASE("rank of a length-n word stays inside its block") {
    auto gen = oracle::rng(23);
    for (int trial = 0; trial < 300; ++trial) {
        unsigned p = trial % 3 == 0 ? 2 : trial % 3 == 1 ? 3 : 5;
        unsigned n = 1 + static_cast<unsigned>(gen() % 10);
        Word w = Word::from_value(oracle::random_below(gen, oracle::pow_z(p, n)), n, p);
        mpz_class lo = (oracle::pow_z(p, n) - p) / (p - 1) + 1;
        mpz_class hi = (oracle::pow_z(p, n + 1) - p) / (p - 1);
        mpz_class r = zpa::shortlex_rank(w);
        CHECK(r >= lo);
        CHECK(r <= hi);
    }
}

TEST_CASE("value/from_value round trip and overflow") {
    CHECK(Word::parse("011", 2).value() == 3);
    CHECK(Word::from_value(2, 2, 2).to_string() == "10");
    CHECK_THROWS_AS(Word::from_value(4, 2, 2), input_error);

    auto gen = oracle::rng(24);
    for (int trial = 0; trial < 300; ++trial) {
        unsigned p = trial % 2 ? 2 : 5;
        unsigned n = static_cast<unsigned>(gen() % 10);
        mpz_class v = oracle::random_below(gen, oracle::pow_z(p, n));
        Word w = Word::from_value(v, n, p);
        CHECK(w.value() == v);
        CHECK(Word::from_value(w.value(), w.length(), p) == w);
    }
}
