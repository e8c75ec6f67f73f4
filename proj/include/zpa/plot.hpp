#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "zpa/expr.hpp"

namespace zpa {

// Enumeration guards: residues materialized / streamed, and grid bits held.
inline constexpr std::uint64_t default_point_guard = std::uint64_t{1} << 24;
inline constexpr std::uint64_t default_stream_guard = std::uint64_t{1} << 28;
inline constexpr std::uint64_t default_cell_guard = std::uint64_t{1} << 26;

/**
 * Occupancy raster of the unit-square plot of f at point level k: one point
 * (x mod p^k, f(x) mod p^k) per residue, binned into a p^m x p^m grid by the
 * top m digits of each coordinate. The bitmap is the only memory of order
 * p^{2m}; points are streamed.
 */
struct PlotGrid {
    unsigned p = 2;
    unsigned k = 0;
    unsigned m = 0;
    std::uint64_t side = 0;        // p^m
    std::uint64_t occupied = 0;
    mpz_class total_points;        // p^k
    std::vector<std::uint64_t> bits;

    bool cell(std::uint64_t i, std::uint64_t j) const {
        std::uint64_t idx = i * side + j;
        return (bits[idx >> 6] >> (idx & 63)) & 1;
    }
    double alpha_hat() const {
        return static_cast<double>(occupied) /
               (static_cast<double>(side) * static_cast<double>(side));
    }
};

// Streams all p^k points in ascending x. No materialization guard applies;
// the stream guard still bounds the enumeration itself.
void for_each_point(const Expr& e, unsigned k,
                    const std::function<void(const mpz_class& x, const mpz_class& y)>& fn,
                    std::uint64_t guard = default_stream_guard);

// Materializes the point list; guarded more tightly than streaming.
std::vector<std::pair<mpz_class, mpz_class>> generate_points(
    const Expr& e, unsigned k, std::uint64_t guard = default_point_guard);

PlotGrid occupancy(const Expr& e, unsigned k, unsigned m, unsigned jobs = 1,
                   std::uint64_t stream_guard = default_stream_guard,
                   std::uint64_t cell_guard = default_cell_guard);

struct TrendEntry {
    unsigned k = 0, m = 0;
    std::uint64_t occupied = 0;
    double alpha_hat = 0.0;
};

struct TrendSeries {
    std::vector<TrendEntry> fixed_m;    // alpha_hat at the caller's grid level
    std::vector<TrendEntry> refinement; // alpha_hat at m(k) = floor(k/2)
};

TrendSeries occupancy_trend(const Expr& e, const std::vector<unsigned>& ks, unsigned m,
                            unsigned jobs = 1);

struct ClassifyPolicy {
    std::vector<unsigned> ks{12, 16, 20};
    unsigned m = 6;
    double drop_factor = 2.0; // refinement shrink across the ladder => measure-0 lean
};

struct Classification {
    enum class Verdict { Measure1Candidate, Measure0Candidate, Undetermined };
    Verdict verdict = Verdict::Undetermined;
    TrendSeries series;
};

// Finite-sample classifier for the dense/vanishing alternative. Heuristic by
// construction; the verdict is labeled as such everywhere it is printed.
Classification classify(const Expr& e, const ClassifyPolicy& policy = {}, unsigned jobs = 1);

struct MirrorReport {
    unsigned k = 0;
    std::uint64_t mismatches = 0;          // points violating the mirror identity
    std::uint64_t boundary_exceptions = 0; // points with f(x) = 0 mod p^k
};

// Pointwise check that the plot of -f is the reflection of the plot of f
// across the horizontal midline: for f(x) != 0 mod p^k the reflected point
// is (x, p^k - f(x)); zeros land on the boundary and are counted apart.
MirrorReport mirror_check(const Expr& e, unsigned k,
                          std::uint64_t guard = default_stream_guard);

// Binary PGM (P5), one pixel per cell, black = occupied, row 0 = top row
// j = p^m - 1. Deterministic bytes.
std::string render_pgm(const PlotGrid& grid);

// "i,j" lines of occupied cells, i ascending then j.
std::string render_csv(const PlotGrid& grid);

} // namespace zpa
