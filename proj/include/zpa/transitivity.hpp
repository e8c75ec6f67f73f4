#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "zpa/automaton.hpp"
#include "zpa/expr.hpp"
#include "zpa/word.hpp"

namespace zpa {

// Default ceiling for exhaustive level checks: p^n may not exceed this.
inline constexpr std::uint64_t default_orbit_guard = std::uint64_t{1} << 26;

// Default ceiling for pair/suffix enumerations (p^{2n}, p^{xlen+2n}).
inline constexpr std::uint64_t default_pair_guard = std::uint64_t{1} << 16;

// Single-mapping transitivity of f mod p^n, decided by walking the orbit of
// 0 with a visited bitmap: the map cyclically permutes the p^n residues iff
// that orbit closes exactly after p^n steps.
struct NWordCheck {
    bool transitive;
    bool bijective;       // meaningful when !transitive
    std::uint64_t cycles; // permutation cycle count, or the size of the
                          // orbit of 0 up to its first revisit when the map
                          // is not a permutation
};
NWordCheck is_n_word_transitive(const Expr& e, unsigned n,
                                std::uint64_t guard = default_orbit_guard);

struct TransitivityReport {
    enum class Status { Transitive, NotTransitive, Skipped };
    struct Level {
        unsigned n;
        Status status;
        std::uint64_t cycles = 0;
    };
    std::vector<Level> levels;
    bool all_transitive = false;
    std::optional<unsigned> first_failure;
};

// Levels n = 1..max_n with early stop; once a level fails, higher levels are
// reported Skipped (a single cycle mod p^m reduces to a single cycle mod
// p^n for n < m, so they cannot pass).
TransitivityReport word_transitive_up_to(const Expr& e, unsigned max_n,
                                         std::uint64_t guard = default_orbit_guard);

// For integer polynomials over p = 2, the single-cycle check mod 2^3 decides
// transitivity at every word length.
bool poly_word_transitive_z2(const std::vector<mpz_class>& coeffs);

// 1 + x + 2*(g(x+1) - g(x)) over p = 2; the result is word transitive for
// every 1-Lipschitz g.
Expr ergodic_form(const Expr& g);

// Searches prefixes y (shortest first, numerically ascending within a
// length) such that feeding w after y reproduces wanted as the output block
// at y's offset: floor(f(value(y) + p^len(y) * value(w)) mod p^{len(y)+n} /
// p^len(y)) = value(wanted).
struct WitnessResult {
    Word input;
    Word wanted;
    std::optional<Word> prefix;     // found witness
    unsigned exhausted_up_to = 0;   // meaningful when no witness was found
};
WitnessResult complete_transitivity_witness(const Expr& e, const Word& w,
                                            const Word& wanted, unsigned lmax);

struct CompleteCheck {
    enum class Verdict { WitnessedAllPairs, Refuted, Inconclusive };
    Verdict verdict;
    unsigned n = 0;
    std::vector<WitnessResult> table;               // one entry per pair
    std::vector<std::pair<Word, Word>> missing;     // unwitnessed / refuted pairs
};

// Witness search over all p^{2n} pairs. Exhaustion yields Inconclusive,
// never a refutation: for an infinite machine absence of short witnesses
// proves nothing. Guarded by pair-enumeration size.
CompleteCheck check_complete_transitive(const Expr& e, unsigned n, unsigned lmax,
                                        unsigned jobs = 1,
                                        std::uint64_t guard = default_pair_guard);

// Exact decision for a finite machine at word length n: the family of
// word maps {run from s : s reachable} either covers every pair or provably
// misses one.
CompleteCheck check_complete_transitive(const FiniteAutomaton& a, unsigned n,
                                        std::uint64_t guard = default_pair_guard);

struct AbsoluteCheck {
    enum class Verdict { Witnessed, Inconclusive };
    struct Entry {
        Word start; // suffix fed before the search, i.e. the machine warm-up
        WitnessResult search;
    };
    Verdict verdict;
    unsigned n = 0, xlen = 0;
    std::vector<Entry> table;
    std::vector<std::string> missing; // "start:w->wanted" labels of unwitnessed combos
};

// For every start word of length xlen and every pair (w, wanted), searches a
// prefix y with the wanted block at offset xlen + len(y) of
// f(value(w . y . start)) mod p^{xlen+len(y)+n}.
AbsoluteCheck check_absolute_transitive(const Expr& e, unsigned n, unsigned xlen,
                                        unsigned lmax, unsigned jobs = 1,
                                        std::uint64_t guard = default_pair_guard);

// (valuation, unit residue mod p^k) of the p-adic logarithm of c, for
// c = 1 (mod p), c != 1.
std::pair<long, mpz_class> padic_log_unit(const mpz_class& c, unsigned p, unsigned k);

/**
 * Certificate that a function falls in a recognized completely transitive
 * class: its plot meets every grid cell, witnessed here by (i) mapping
 * nonnegative integers to nonnegative integers (exactly where an argument
 * applies, sampled otherwise) and (ii) an exact nonzero second derivative
 * at a nonnegative point v, recorded as f''(v) = p^s * xi with xi a unit.
 */
struct SufficiencyCertificate {
    enum class Class { PolyDegreeGe2, CxPlusCx, PolyPlusOrC, Unsupported };
    Class cls = Class::Unsupported;
    mpz_class witness_point;               // v
    std::optional<mpz_class> exact_second; // f''(v) when it is a rational integer
    long valuation = 0;                    // s
    mpz_class unit_residue;                // xi mod p^residue_precision
    unsigned residue_precision = 0;
    bool nonneg_exact = false;  // condition (i) proved, not sampled
    bool sign_flipped = false;  // certified via -f (mirror-symmetric measure)
    std::vector<std::string> checked; // condition log, for reports
};

SufficiencyCertificate sufficient_condition_certificate(const Expr& e,
                                                        const mpz_class& search_bound);

} // namespace zpa
