#include "zpa/plot.hpp"

#include <algorithm>
#include <bit>
#include <mutex>
#include <sstream>

#include "zpa/errors.hpp"
#include "zpa/numutil.hpp"
#include "zpa/parallel.hpp"

namespace zpa {

namespace {

std::uint64_t guarded_pow(unsigned p, unsigned exp, std::uint64_t guard, const char* what) {
    mpz_class v = pow_int(p, exp);
    if (v > guard)
        throw guard_error(std::string(what) + " exceeds the guard (p^" +
                          std::to_string(exp) + ")");
    return v.get_ui();
}

} // namespace

void for_each_point(const Expr& e, unsigned k,
                    const std::function<void(const mpz_class&, const mpz_class&)>& fn,
                    std::uint64_t guard) {
    if (k == 0) throw input_error("point level must be at least 1");
    guarded_pow(e->prime(), k, guard, "point enumeration");
    mpz_class mod = pow_int(e->prime(), k);
    for (mpz_class x = 0; x < mod; ++x)
        fn(x, eval_mod(e, x, k));
}

std::vector<std::pair<mpz_class, mpz_class>> generate_points(const Expr& e, unsigned k,
                                                             std::uint64_t guard) {
    guarded_pow(e->prime(), k, guard, "materialized point list");
    std::vector<std::pair<mpz_class, mpz_class>> out;
    for_each_point(e, k, [&](const mpz_class& x, const mpz_class& y) {
        out.emplace_back(x, y);
    });
    return out;
}

PlotGrid occupancy(const Expr& e, unsigned k, unsigned m, unsigned jobs,
                   std::uint64_t stream_guard, std::uint64_t cell_guard) {
    if (m > k) throw input_error("grid level m must not exceed point level k");
    unsigned p = e->prime();
    std::uint64_t points = guarded_pow(p, k, stream_guard, "point enumeration");
    std::uint64_t cells = guarded_pow(p, 2 * m, cell_guard, "grid bitmap");
    std::uint64_t side = pow_int(p, m).get_ui();

    PlotGrid grid;
    grid.p = p;
    grid.k = k;
    grid.m = m;
    grid.side = side;
    grid.total_points = pow_int(p, k);
    grid.bits.assign((cells + 63) / 64, 0);

    mpz_class scale = pow_int(p, k - m); // cell index = top m digits = value / p^{k-m}

    if (jobs <= 1) {
        mpz_class x = 0;
        for (std::uint64_t xi = 0; xi < points; ++xi, ++x) {
            mpz_class y = eval_mod(e, x, k);
            std::uint64_t i = mpz_class(x / scale).get_ui();
            std::uint64_t j = mpz_class(y / scale).get_ui();
            std::uint64_t idx = i * side + j;
            grid.bits[idx >> 6] |= std::uint64_t{1} << (idx & 63);
        }
    } else {
        // Disjoint x-ranges fill private bitmaps that or-merge; the merged
        // grid is independent of the partition.
        std::vector<std::vector<std::uint64_t>> partial;
        std::mutex merge_mutex;
        parallel_ranges(points, jobs, [&](std::size_t begin, std::size_t end) {
            std::vector<std::uint64_t> local((cells + 63) / 64, 0);
            mpz_class x = static_cast<unsigned long>(begin);
            for (std::size_t xi = begin; xi < end; ++xi, ++x) {
                mpz_class y = eval_mod(e, x, k);
                std::uint64_t i = mpz_class(x / scale).get_ui();
                std::uint64_t j = mpz_class(y / scale).get_ui();
                std::uint64_t idx = i * side + j;
                local[idx >> 6] |= std::uint64_t{1} << (idx & 63);
            }
            std::lock_guard<std::mutex> lock(merge_mutex);
            partial.push_back(std::move(local));
        });
        for (const auto& local : partial)
            for (std::size_t w = 0; w < grid.bits.size(); ++w)
                grid.bits[w] |= local[w];
    }

    grid.occupied = 0;
    for (std::uint64_t w : grid.bits) grid.occupied += static_cast<std::uint64_t>(std::popcount(w));
    return grid;
}

TrendSeries occupancy_trend(const Expr& e, const std::vector<unsigned>& ks, unsigned m,
                            unsigned jobs) {
    TrendSeries series;
    for (unsigned k : ks) {
        PlotGrid g = occupancy(e, k, std::min(m, k), jobs);
        series.fixed_m.push_back({g.k, g.m, g.occupied, g.alpha_hat()});
        unsigned mk = std::max(1u, k / 2);
        PlotGrid r = occupancy(e, k, mk, jobs);
        series.refinement.push_back({r.k, r.m, r.occupied, r.alpha_hat()});
    }
    return series;
}

Classification classify(const Expr& e, const ClassifyPolicy& policy, unsigned jobs) {
    if (policy.ks.empty()) throw input_error("classification needs a k ladder");
    Classification result;
    result.series = occupancy_trend(e, policy.ks, policy.m, jobs);

    const auto& fixed = result.series.fixed_m;
    const auto& refine = result.series.refinement;
    bool full_at_top = fixed.back().alpha_hat >= 1.0;
    bool shrinking = refine.front().alpha_hat >=
                     policy.drop_factor * refine.back().alpha_hat;

    if (full_at_top) result.verdict = Classification::Verdict::Measure1Candidate;
    else if (shrinking) result.verdict = Classification::Verdict::Measure0Candidate;
    else result.verdict = Classification::Verdict::Undetermined;
    return result;
}

MirrorReport mirror_check(const Expr& e, unsigned k, std::uint64_t guard) {
    MirrorReport report;
    report.k = k;
    Expr mirrored = neg(e);
    mpz_class mod = pow_int(e->prime(), k);
    for_each_point(e, k, [&](const mpz_class& x, const mpz_class& y) {
        mpz_class yn = eval_mod(mirrored, x, k);
        if (y == 0) {
            ++report.boundary_exceptions;
            if (yn != 0) ++report.mismatches;
        } else if (yn != mod - y) {
            ++report.mismatches;
        }
    }, guard);
    return report;
}

std::string render_pgm(const PlotGrid& grid) {
    std::ostringstream os;
    os << "P5\n" << grid.side << " " << grid.side << "\n255\n";
    std::string row(grid.side, '\0');
    for (std::uint64_t r = 0; r < grid.side; ++r) {
        std::uint64_t j = grid.side - 1 - r; // y axis points up
        for (std::uint64_t i = 0; i < grid.side; ++i)
            row[i] = grid.cell(i, j) ? '\x00' : '\xff';
        os.write(row.data(), static_cast<std::streamsize>(row.size()));
    }
    return os.str();
}

std::string render_csv(const PlotGrid& grid) {
    std::ostringstream os;
    os << "i,j\n";
    for (std::uint64_t i = 0; i < grid.side; ++i)
        for (std::uint64_t j = 0; j < grid.side; ++j)
            if (grid.cell(i, j)) os << i << "," << j << "\n";
    return os.str();
}

} // namespace zpa
