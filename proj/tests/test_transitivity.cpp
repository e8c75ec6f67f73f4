#include <doctest.h>

#include "zpa/errors.hpp"
#include "zpa/parser.hpp"
#include "zpa/numutil.hpp"
#include "zpa/padic_int.hpp"
#include "zpa/transitivity.hpp"

#include "oracles.hpp"

using namespace zpa;

namespace {

Expr quadratic() { return parse_expr("2*x^2+3*x+1", 2); }

// independent recheck of a found witness: the wanted block appears at the
// prefix offset of an evaluation done from scratch
bool recheck(const Expr& e, const WitnessResult& r) {
    if (!r.prefix) return false;
    unsigned p = e->prime();
    unsigned l = static_cast<unsigned>(r.prefix->length());
    unsigned n = static_cast<unsigned>(r.input.length());
    mpz_class x = r.prefix->value() + oracle::pow_z(p, l) * r.input.value();
    mpz_class out = eval_mod(e, x, l + n);
    return out / oracle::pow_z(p, l) == r.wanted.value();
}

} // namespace

TEST_CASE("odometer is transitive at every checked level") {
    Expr inc = parse_expr("x+1", 2);
    CHECK(is_n_word_transitive(inc, 4).transitive);
    TransitivityReport report = word_transitive_up_to(inc, 12);
    CHECK(report.all_transitive);
    CHECK(report.levels.size() == 12);
    for (const auto& lv : report.levels)
        CHECK(lv.status == TransitivityReport::Status::Transitive);
}

TEST_CASE("the quadratic walks a single cycle mod 8") {
    Expr q = quadratic();
    CHECK(is_n_word_transitive(q, 3).transitive);
    std::vector<std::uint64_t> orbit;
    mpz_class x = 0;
    for (int i = 0; i < 8; ++i) {
        orbit.push_back(x.get_ui());
        x = eval_mod(q, x, 3);
    }
    CHECK(orbit == std::vector<std::uint64_t>{0, 1, 6, 3, 4, 5, 2, 7});
    CHECK(x == 0);
}

TEST_CASE("non-bijective and multi-cycle diagnoses") {
    NWordCheck constant = is_n_word_transitive(parse_expr("5", 2), 3);
    CHECK(!constant.transitive);
    CHECK(!constant.bijective);
    CHECK(constant.cycles == 2); // orbit of 0 visits {0, 5}

    NWordCheck ident = is_n_word_transitive(parse_expr("x", 2), 3);
    CHECK(!ident.transitive);
    CHECK(ident.bijective);
    CHECK(ident.cycles == 8); // fixed points

    CHECK_THROWS_AS(is_n_word_transitive(parse_expr("x", 2), 40), guard_error);
}

TEST_CASE("levels after a failure are skipped") {
    TransitivityReport report = word_transitive_up_to(parse_expr("5", 2), 4);
    CHECK(!report.all_transitive);
    CHECK(report.first_failure == 1u);
    CHECK(report.levels[0].status == TransitivityReport::Status::NotTransitive);
    for (std::size_t i = 1; i < report.levels.size(); ++i)
        CHECK(report.levels[i].status == TransitivityReport::Status::Skipped);
}

TEST_CASE("monotone failure: a failed level never recovers") {
    auto gen = oracle::rng(61);
    for (int trial = 0; trial < 40; ++trial) {
        unsigned deg = static_cast<unsigned>(gen() % 5);
        std::vector<mpz_class> cs;
        for (unsigned i = 0; i <= deg; ++i)
            cs.push_back(oracle::random_below(gen, 41) - 20);
        Expr e = poly(2, cs);
        for (unsigned n = 1; n <= 6; ++n) {
            if (!is_n_word_transitive(e, n).transitive)
                CHECK(!is_n_word_transitive(e, n + 1).transitive);
        }
    }
}

TEST_CASE("the mod-8 criterion decides all binary polynomial levels") {
    CHECK(poly_word_transitive_z2({1, 3, 2}));
    CHECK(!poly_word_transitive_z2({0, 1}));

    auto gen = oracle::rng(62);
    for (int trial = 0; trial < 50; ++trial) {
        unsigned deg = static_cast<unsigned>(gen() % 6);
        std::vector<mpz_class> cs;
        for (unsigned i = 0; i <= deg; ++i)
            cs.push_back(oracle::random_below(gen, 41) - 20);
        bool by_criterion = poly_word_transitive_z2(cs);
        bool by_orbits = word_transitive_up_to(poly(2, cs), 14).all_transitive;
        CHECK(by_criterion == by_orbits);
    }
}

TEST_CASE("ergodic form") {
    // g = 0 collapses to the odometer
    Expr f0 = ergodic_form(constant(2, 0));
    auto gen = oracle::rng(63);
    for (int trial = 0; trial < 50; ++trial) {
        unsigned k = 1 + static_cast<unsigned>(gen() % 12);
        mpz_class x = oracle::random_below(gen, oracle::pow_z(2, k));
        CHECK(eval_mod(f0, x, k) == oracle::mod_pos(x + 1, oracle::pow_z(2, k)));
    }

    // g = x^2 gives 5x+3
    Expr f1 = ergodic_form(poly(2, {0, 0, 1}));
    auto cs = as_polynomial(f1);
    REQUIRE(cs);
    CHECK(*cs == std::vector<mpz_class>{3, 5});
    CHECK(is_n_word_transitive(f1, 10).transitive);

    // g = 3^x gives 1+x+4*3^x
    Expr f2 = ergodic_form(exp_base(2, 3));
    for (int trial = 0; trial < 50; ++trial) {
        unsigned k = 1 + static_cast<unsigned>(gen() % 12);
        mpz_class x = oracle::random_below(gen, oracle::pow_z(2, k));
        mpz_class want = oracle::mod_pos(1 + x + 4 * pow_exp(3, x, 2, k), oracle::pow_z(2, k));
        CHECK(eval_mod(f2, x, k) == want);
    }
    CHECK(word_transitive_up_to(f2, 8).all_transitive);

    CHECK_THROWS_AS(ergodic_form(poly(3, {0, 1})), input_error);
}

TEST_CASE("witness search outcomes") {
    Word w00 = Word::parse("00", 2), w10 = Word::parse("10", 2);

    // the odometer never writes 10 above 00
    WitnessResult none = complete_transitivity_witness(parse_expr("x+1", 2), w00, w10, 16);
    CHECK(!none.prefix);
    CHECK(none.exhausted_up_to == 16);

    WitnessResult found = complete_transitivity_witness(quadratic(), w00, w10, 16);
    REQUIRE(found.prefix);
    CHECK(recheck(quadratic(), found));
    CHECK(found.prefix->length() == 4); // first witness in search order

    // identity fixes every block at the empty prefix
    WitnessResult trivial = complete_transitivity_witness(parse_expr("x", 2), w10, w10, 4);
    REQUIRE(trivial.prefix);
    CHECK(trivial.prefix->empty());

    CHECK_THROWS_AS(complete_transitivity_witness(quadratic(), w00, Word::parse("1", 2), 4),
                    input_error);
}

TEST_CASE("complete transitivity: search and exact refutation") {
    CompleteCheck search = check_complete_transitive(quadratic(), 2, 16, 2);
    CHECK(search.verdict == CompleteCheck::Verdict::WitnessedAllPairs);
    CHECK(search.table.size() == 16);
    for (const auto& r : search.table) CHECK(recheck(quadratic(), r));

    FiniteAutomaton odo = FiniteAutomaton::adding_machine();
    CompleteCheck level1 = check_complete_transitive(odo, 1);
    CHECK(level1.verdict == CompleteCheck::Verdict::WitnessedAllPairs);

    CompleteCheck refuted = check_complete_transitive(odo, 2);
    CHECK(refuted.verdict == CompleteCheck::Verdict::Refuted);
    REQUIRE(!refuted.missing.empty());
    CHECK(refuted.missing[0].first.to_string() == "00");
    CHECK(refuted.missing[0].second.to_string() == "10");

    // a finite machine keeps failing at higher levels
    for (unsigned n = 2; n <= 4; ++n)
        CHECK(check_complete_transitive(odo, n).verdict == CompleteCheck::Verdict::Refuted);

    // searches cannot refute: a miss is inconclusive
    CompleteCheck stuck = check_complete_transitive(parse_expr("x+1", 2), 2, 6);
    CHECK(stuck.verdict == CompleteCheck::Verdict::Inconclusive);
    CHECK(!stuck.missing.empty());
}

TEST_CASE("pair enumeration is independent of the job count") {
    CompleteCheck serial = check_complete_transitive(quadratic(), 2, 12, 1);
    CompleteCheck parallel = check_complete_transitive(quadratic(), 2, 12, 4);
    REQUIRE(serial.table.size() == parallel.table.size());
    for (std::size_t i = 0; i < serial.table.size(); ++i) {
        REQUIRE(serial.table[i].prefix.has_value());
        REQUIRE(parallel.table[i].prefix.has_value());
        CHECK(*serial.table[i].prefix == *parallel.table[i].prefix);
    }
}

TEST_CASE("absolute transitivity search") {
    Expr e = parse_expr("1+x+(x^2|5)", 2);
    AbsoluteCheck w = check_absolute_transitive(e, 1, 1, 12, 2);
    CHECK(w.verdict == AbsoluteCheck::Verdict::Witnessed);
    CHECK(w.table.size() == 8);

    AbsoluteCheck cube = check_absolute_transitive(parse_expr("x^2+x^3", 2), 1, 1, 12);
    CHECK(cube.verdict == AbsoluteCheck::Verdict::Witnessed);

    // the digit stream of 7 is ...000111: the block "10" never occurs, so
    // pairs wanting it stay unwitnessed
    AbsoluteCheck stuck = check_absolute_transitive(parse_expr("7", 2), 2, 1, 8);
    CHECK(stuck.verdict == AbsoluteCheck::Verdict::Inconclusive);
    CHECK(!stuck.missing.empty());
    for (const auto& label : stuck.missing)
        CHECK(label.find("->10") != std::string::npos);
}

TEST_CASE("absolute witnesses recheck at their offsets") {
    Expr e = parse_expr("1+x+(x^2|5)", 2);
    AbsoluteCheck w = check_absolute_transitive(e, 2, 1, 14);
    REQUIRE(w.verdict == AbsoluteCheck::Verdict::Witnessed);
    for (const auto& entry : w.table) {
        REQUIRE(entry.search.prefix);
        unsigned xlen = static_cast<unsigned>(entry.start.length());
        unsigned l = static_cast<unsigned>(entry.search.prefix->length());
        unsigned n = static_cast<unsigned>(entry.search.input.length());
        mpz_class x = entry.start.value() + oracle::pow_z(2, xlen) * entry.search.prefix->value() +
                      oracle::pow_z(2, xlen + l) * entry.search.input.value();
        mpz_class out = eval_mod(e, x, xlen + l + n);
        CHECK(out / oracle::pow_z(2, xlen + l) == entry.search.wanted.value());
    }
}

TEST_CASE("p-adic logarithm valuation and unit against finite differences") {
    // (c^h - 1)/h converges to log c; compare valuation and unit digits
    {
        auto [s, xi] = padic_log_unit(3, 2, 24);
        CHECK(s == 2); // ord_2(log 3) = ord_2(3^2 - 1) - 1
        unsigned L = 16;
        mpz_class h = oracle::pow_z(2, L);
        mpz_class chm1;
        mpz_pow_ui(chm1.get_mpz_t(), mpz_class(3).get_mpz_t(), h.get_ui());
        chm1 -= 1;
        CHECK(zpa::valuation(chm1, 2) == L + static_cast<unsigned long>(s));
        mpz_class unit_approx = chm1 / oracle::pow_z(2, L + static_cast<unsigned>(s));
        CHECK(oracle::mod_pos(unit_approx, oracle::pow_z(2, 10)) ==
              oracle::mod_pos(xi, oracle::pow_z(2, 10)));
    }
    {
        auto [s, xi] = padic_log_unit(4, 3, 12);
        CHECK(s == 1);
        unsigned L = 8;
        mpz_class h = oracle::pow_z(3, L);
        mpz_class chm1;
        mpz_pow_ui(chm1.get_mpz_t(), mpz_class(4).get_mpz_t(), h.get_ui());
        chm1 -= 1;
        CHECK(zpa::valuation(chm1, 3) == L + static_cast<unsigned long>(s));
        mpz_class unit_approx = chm1 / oracle::pow_z(3, L + 1);
        CHECK(oracle::mod_pos(unit_approx, oracle::pow_z(3, 6)) ==
              oracle::mod_pos(xi, oracle::pow_z(3, 6)));
    }
    CHECK_THROWS_AS(padic_log_unit(2, 2, 8), input_error);
}

TEST_CASE("sufficiency certificates") {
    SufficiencyCertificate quad = sufficient_condition_certificate(quadratic(), 64);
    CHECK(quad.cls == SufficiencyCertificate::Class::PolyDegreeGe2);
    CHECK(quad.witness_point == 0);
    REQUIRE(quad.exact_second);
    CHECK(*quad.exact_second == 4);
    CHECK(quad.valuation == 2);
    CHECK(quad.unit_residue == 1);
    CHECK(quad.nonneg_exact);

    SufficiencyCertificate exp = sufficient_condition_certificate(parse_expr("3*x+3^x", 2), 64);
    CHECK(exp.cls == SufficiencyCertificate::Class::CxPlusCx);
    CHECK(exp.valuation == 4); // twice ord_2(log 3)
    CHECK(oracle::mod_pos(exp.unit_residue, 2) == 1);
    CHECK(exp.nonneg_exact);
    {
        // independent check through second differences of the exact function:
        // f(2h) - 2f(h) + f(0) = (3^h - 1)^2 for f = 3x + 3^x
        unsigned L = 12;
        mpz_class h = oracle::pow_z(2, L);
        mpz_class pw;
        mpz_pow_ui(pw.get_mpz_t(), mpz_class(3).get_mpz_t(), h.get_ui());
        mpz_class second = (pw - 1) * (pw - 1);
        CHECK(zpa::valuation(second, 2) == 2 * L + static_cast<unsigned long>(exp.valuation));
        mpz_class unit_approx = second / oracle::pow_z(2, 2 * L + 4);
        CHECK(oracle::mod_pos(unit_approx, oracle::pow_z(2, 8)) ==
              oracle::mod_pos(exp.unit_residue, oracle::pow_z(2, 8)));
    }

    SufficiencyCertificate orc = sufficient_condition_certificate(parse_expr("1+x+(x^2|5)", 2), 64);
    CHECK(orc.cls == SufficiencyCertificate::Class::PolyPlusOrC);
    REQUIRE(orc.exact_second);
    CHECK(*orc.exact_second == 2);
    CHECK(orc.valuation == 1);
    CHECK(orc.nonneg_exact);

    CHECK(sufficient_condition_certificate(parse_expr("x", 2), 64).cls ==
          SufficiencyCertificate::Class::Unsupported);
    CHECK(sufficient_condition_certificate(parse_expr("x+x^2|-131065", 2), 64).cls ==
          SufficiencyCertificate::Class::Unsupported);
    CHECK(sufficient_condition_certificate(parse_expr("(x&5)+(x^2|5)", 2), 64).cls ==
          SufficiencyCertificate::Class::Unsupported);

    SufficiencyCertificate flipped =
        sufficient_condition_certificate(parse_expr("-(2*x^2+3*x+1)", 2), 64);
    CHECK(flipped.cls == SufficiencyCertificate::Class::PolyDegreeGe2);
    CHECK(flipped.sign_flipped);
}

TEST_CASE("certified functions pass the pair search") {
    std::vector<Expr> certified = {quadratic(), parse_expr("1+x+(x^2|5)", 2),
                                   parse_expr("3*x+3^x", 2)};
    for (const auto& e : certified) {
        CHECK(sufficient_condition_certificate(e, 64).cls !=
              SufficiencyCertificate::Class::Unsupported);
        CHECK(check_complete_transitive(e, 2, 20, 2).verdict ==
              CompleteCheck::Verdict::WitnessedAllPairs);
    }
}
