#pragma once

// Test-only oracles, kept independent of the library code paths they check.

#include <cstdint>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace oracle {

// Extended gcd route to a modular inverse (the library uses mpz_invert).
inline mpz_class egcd_inverse(const mpz_class& a, const mpz_class& m) {
    mpz_class old_r = a % m, r = m, old_s = 1, s = 0;
    if (old_r < 0) old_r += m;
    while (r != 0) {
        mpz_class q = old_r / r;
        mpz_class tmp = old_r - q * r;
        old_r = r; r = tmp;
        tmp = old_s - q * s;
        old_s = s; s = tmp;
    }
    mpz_class inv = old_s % m;
    if (inv < 0) inv += m;
    return inv;
}

inline mpz_class pow_z(unsigned base, unsigned exp) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), base, exp);
    return r;
}

inline mpz_class mod_pos(const mpz_class& v, const mpz_class& m) {
    mpz_class r = v % m;
    if (r < 0) r += m;
    return r;
}

// Term-by-term polynomial evaluation (the library uses Horner).
inline mpz_class poly_eval(const std::vector<mpz_class>& coeffs, const mpz_class& x) {
    mpz_class acc = 0, xp = 1;
    for (const auto& c : coeffs) {
        acc += c * xp;
        xp *= x;
    }
    return acc;
}

// All words over {0..p-1} of length <= maxlen in shortlex order, as
// (length, value) pairs; index i holds the word of rank i+1.
inline std::vector<std::pair<unsigned, std::uint64_t>> shortlex_order(unsigned p, unsigned maxlen) {
    std::vector<std::pair<unsigned, std::uint64_t>> order;
    std::uint64_t count = 1;
    for (unsigned n = 1; n <= maxlen; ++n) {
        count *= p;
        for (std::uint64_t v = 0; v < count; ++v) order.emplace_back(n, v);
    }
    return order;
}

// Straight-loop rasterizer over a callable y(x); cells keyed by top-m digit
// truncation. Independent of the PlotGrid bitmap path.
template <typename F>
std::set<std::pair<std::uint64_t, std::uint64_t>> raster_cells(F&& f, unsigned p,
                                                               unsigned k, unsigned m) {
    std::set<std::pair<std::uint64_t, std::uint64_t>> cells;
    mpz_class mod = pow_z(p, k), scale = pow_z(p, k - m);
    for (mpz_class x = 0; x < mod; ++x) {
        mpz_class y = mod_pos(f(x), mod);
        cells.emplace(mpz_class(x / scale).get_ui(), mpz_class(y / scale).get_ui());
    }
    return cells;
}

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline mpz_class random_below(std::mt19937_64& gen, const mpz_class& bound) {
    // rejection-free: chain 32-bit draws and reduce; fine for test data
    mpz_class acc = 0;
    std::size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2) + 32;
    for (std::size_t i = 0; i < bits; i += 32) {
        acc <<= 32;
        acc += static_cast<unsigned long>(gen() & 0xffffffffu);
    }
    return mod_pos(acc, bound);
}

} // namespace oracle
