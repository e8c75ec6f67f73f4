#include "zpa/transitivity.hpp"

#include <algorithm>

#include "zpa/errors.hpp"
#include "zpa/numutil.hpp"
#include "zpa/parallel.hpp"

namespace zpa {

namespace {

std::uint64_t guarded_size(unsigned p, unsigned exponent, std::uint64_t guard,
                           const char* what) {
    mpz_class size = pow_int(p, exponent);
    if (size > guard)
        throw guard_error(std::string(what) + " too large for exhaustive check (p^" +
                          std::to_string(exponent) + " exceeds the guard)");
    return size.get_ui();
}

} // namespace

NWordCheck is_n_word_transitive(const Expr& e, unsigned n, std::uint64_t guard) {
    if (n == 0) throw input_error("word length must be at least 1");
    unsigned p = e->prime();
    std::uint64_t size = guarded_size(p, n, guard, "level");

    std::vector<bool> visited(size, false);
    mpz_class x = 0;
    std::uint64_t orbit = 0;
    while (!visited[x.get_ui()]) {
        visited[x.get_ui()] = true;
        ++orbit;
        x = eval_mod(e, x, n);
    }
    if (orbit == size && x == 0) return {true, true, 1};

    // Diagnose: bijective but multi-cycle, or not a permutation at all.
    std::vector<bool> image(size, false);
    bool bijective = true;
    for (std::uint64_t v = 0; v < size && bijective; ++v) {
        std::uint64_t y = eval_mod(e, mpz_class(static_cast<unsigned long>(v)), n).get_ui();
        if (image[y]) bijective = false;
        image[y] = true;
    }
    if (!bijective) return {false, false, orbit};

    std::fill(visited.begin(), visited.end(), false);
    std::uint64_t cycles = 0;
    for (std::uint64_t v = 0; v < size; ++v) {
        if (visited[v]) continue;
        ++cycles;
        mpz_class c = static_cast<unsigned long>(v);
        while (!visited[c.get_ui()]) {
            visited[c.get_ui()] = true;
            c = eval_mod(e, c, n);
        }
    }
    return {false, true, cycles};
}

TransitivityReport word_transitive_up_to(const Expr& e, unsigned max_n,
                                         std::uint64_t guard) {
    TransitivityReport report;
    report.all_transitive = true;
    for (unsigned n = 1; n <= max_n; ++n) {
        if (report.first_failure) {
            report.levels.push_back({n, TransitivityReport::Status::Skipped, 0});
            continue;
        }
        NWordCheck c = is_n_word_transitive(e, n, guard);
        if (c.transitive) {
            report.levels.push_back({n, TransitivityReport::Status::Transitive, 1});
        } else {
            report.levels.push_back({n, TransitivityReport::Status::NotTransitive, c.cycles});
            report.first_failure = n;
            report.all_transitive = false;
        }
    }
    return report;
}

bool poly_word_transitive_z2(const std::vector<mpz_class>& coeffs) {
    return is_n_word_transitive(poly(2, coeffs), 3).transitive;
}

Expr ergodic_form(const Expr& g) {
    if (g->prime() != 2)
        throw input_error("the ergodic form 1+x+2(g(x+1)-g(x)) is defined over p = 2");
    Expr x = identity(2);
    Expr shifted = compose(g, add(x, constant(2, 1)));
    return add(add(constant(2, 1), x), mul(constant(2, 2), sub(shifted, g)));
}

WitnessResult complete_transitivity_witness(const Expr& e, const Word& w,
                                            const Word& wanted, unsigned lmax) {
    unsigned p = e->prime();
    if (w.prime() != p || wanted.prime() != p)
        throw input_error("word alphabet does not match the expression");
    if (w.length() != wanted.length())
        throw input_error("witness search needs words of equal length");
    if (w.empty()) throw input_error("witness search needs nonempty words");

    unsigned n = static_cast<unsigned>(w.length());
    mpz_class wv = w.value(), target = wanted.value();
    for (unsigned l = 0; l <= lmax; ++l) {
        mpz_class offset = pow_int(p, l);
        mpz_class base = wv * offset;
        mpz_class xval = base;
        for (mpz_class yv = 0; yv < offset; ++yv, ++xval) {
            mpz_class out = eval_mod(e, xval, l + n);
            if (out / offset == target)
                return WitnessResult{w, wanted, Word::from_value(yv, l, p), 0};
        }
    }
    return WitnessResult{w, wanted, std::nullopt, lmax};
}

CompleteCheck check_complete_transitive(const Expr& e, unsigned n, unsigned lmax,
                                        unsigned jobs, std::uint64_t guard) {
    if (n == 0) throw input_error("word length must be at least 1");
    unsigned p = e->prime();
    std::uint64_t pairs = guarded_size(p, 2 * n, guard, "pair enumeration");
    std::uint64_t block = pairs; // p^n
    {
        mpz_class b = pow_int(p, n);
        block = b.get_ui();
    }

    CompleteCheck result;
    result.n = n;
    result.table.assign(pairs, WitnessResult{Word(p), Word(p), std::nullopt, 0});
    parallel_ranges(pairs, jobs, [&](std::size_t begin, std::size_t end) {
        for (std::size_t idx = begin; idx < end; ++idx) {
            Word w = Word::from_value(mpz_class(static_cast<unsigned long>(idx / block)), n, p);
            Word wanted = Word::from_value(mpz_class(static_cast<unsigned long>(idx % block)), n, p);
            result.table[idx] = complete_transitivity_witness(e, w, wanted, lmax);
        }
    });
    for (const auto& r : result.table)
        if (!r.prefix) result.missing.emplace_back(r.input, r.wanted);
    result.verdict = result.missing.empty() ? CompleteCheck::Verdict::WitnessedAllPairs
                                            : CompleteCheck::Verdict::Inconclusive;
    return result;
}

CompleteCheck check_complete_transitive(const FiniteAutomaton& a, unsigned n,
                                        std::uint64_t guard) {
    if (n == 0) throw input_error("word length must be at least 1");
    unsigned p = a.prime();
    std::uint64_t block = guarded_size(p, n, guard, "word enumeration");

    // The per-state word maps form a finite family; cover or refute exactly.
    std::vector<bool> covered(block * block, false);
    for (std::size_t s : a.reachable_states()) {
        State from(mpz_class(static_cast<unsigned long>(s)));
        for (std::uint64_t v = 0; v < block; ++v) {
            Word in = Word::from_value(mpz_class(v), n, p);
            mpz_class out = a.run(from, in).value();
            covered[v * block + out.get_ui()] = true;
        }
    }

    CompleteCheck result;
    result.n = n;
    for (std::uint64_t v = 0; v < block * block && result.missing.empty(); ++v)
        if (!covered[v])
            result.missing.emplace_back(Word::from_value(mpz_class(v / block), n, p),
                                        Word::from_value(mpz_class(v % block), n, p));
    result.verdict = result.missing.empty() ? CompleteCheck::Verdict::WitnessedAllPairs
                                            : CompleteCheck::Verdict::Refuted;
    return result;
}

AbsoluteCheck check_absolute_transitive(const Expr& e, unsigned n, unsigned xlen,
                                        unsigned lmax, unsigned jobs,
                                        std::uint64_t guard) {
    if (n == 0) throw input_error("word length must be at least 1");
    unsigned p = e->prime();
    std::uint64_t combos = guarded_size(p, xlen + 2 * n, guard, "suffix/pair enumeration");
    std::uint64_t block = pow_int(p, n).get_ui();
    std::uint64_t starts = pow_int(p, xlen).get_ui();

    AbsoluteCheck result;
    result.n = n;
    result.xlen = xlen;
    result.table.assign(combos, {Word(p), WitnessResult{Word(p), Word(p), std::nullopt, 0}});
    mpz_class start_scale = pow_int(p, xlen);

    parallel_ranges(combos, jobs, [&](std::size_t begin, std::size_t end) {
        for (std::size_t idx = begin; idx < end; ++idx) {
            std::uint64_t si = idx / (block * block);
            std::uint64_t wi = (idx / block) % block;
            std::uint64_t ti = idx % block;
            Word start = Word::from_value(mpz_class(si), xlen, p);
            Word w = Word::from_value(mpz_class(wi), n, p);
            Word wanted = Word::from_value(mpz_class(ti), n, p);

            WitnessResult search{w, wanted, std::nullopt, lmax};
            for (unsigned l = 0; l <= lmax && !search.prefix; ++l) {
                mpz_class ylen = pow_int(p, l);
                mpz_class woff = start_scale * ylen; // w sits above start and y
                mpz_class base = mpz_class(si) + woff * wi;
                for (mpz_class yv = 0; yv < ylen; ++yv) {
                    mpz_class xval = base + yv * start_scale;
                    mpz_class out = eval_mod(e, xval, xlen + l + n);
                    if (out / woff == wanted.value()) {
                        search.prefix = Word::from_value(yv, l, p);
                        break;
                    }
                }
            }
            result.table[idx] = {std::move(start), std::move(search)};
        }
    });

    for (const auto& entry : result.table)
        if (!entry.search.prefix)
            result.missing.push_back(entry.start.to_string() + ":" +
                                     entry.search.input.to_string() + "->" +
                                     entry.search.wanted.to_string());
    result.verdict = result.missing.empty() ? AbsoluteCheck::Verdict::Witnessed
                                            : AbsoluteCheck::Verdict::Inconclusive;
    (void)starts;
    return result;
}

std::pair<long, mpz_class> padic_log_unit(const mpz_class& c, unsigned p, unsigned k) {
    require_prime(p);
    if (k == 0) throw input_error("precision must be at least 1");
    if (c <= 0 || c == 1 || mod_nonneg(c, p) != 1)
        throw input_error("p-adic log of c requires c = 1 (mod p), c != 1");
    if (p == 2 && mod_nonneg(c, 4) == 3) {
        // log c = log(c^2) / 2; c^2 = 1 (mod 8) puts the series in range
        auto [s2, xi] = padic_log_unit(c * c, 2, k);
        return {s2 - 1, xi};
    }

    mpz_class u = c - 1;
    long t = static_cast<long>(valuation(u, p));
    mpz_class mod = pow_int(p, k);
    mpz_class uhat = u / pow_int(p, static_cast<unsigned>(t));

    // sum_{j>=1} (-1)^{j+1} u^j / j; term j has valuation j*t - v_p(j), the
    // minimum t is attained only at j = 1, so the unit part is the sum of
    // p^{(j*t - v_p(j)) - t} * unit_j truncated mod p^k.
    mpz_class acc = 0;
    mpz_class upow = 1; // uhat^j mod p^k
    long jmax = static_cast<long>(k) + 2 * static_cast<long>(k) / std::max(t, 1L) + 8;
    for (long j = 1; j <= jmax; ++j) {
        upow = mod_nonneg(upow * uhat, mod);
        long vj = static_cast<long>(j == 0 ? 0 : valuation(mpz_class(j), p));
        long shift = j * t - vj - t;
        if (shift >= static_cast<long>(k)) continue;
        mpz_class jhat = mpz_class(j) / pow_int(p, static_cast<unsigned>(vj));
        mpz_class term = upow * invert_mod(jhat, mod);
        term = mod_nonneg(term * pow_int(p, static_cast<unsigned>(shift)), mod);
        if (j % 2 == 0) acc -= term;
        else acc += term;
    }
    return {t, mod_nonneg(acc, mod)};
}

namespace {

constexpr unsigned cert_precision = 32;

mpz_class poly_eval_exact(const std::vector<mpz_class>& cs, const mpz_class& x) {
    mpz_class acc = 0;
    for (auto it = cs.rbegin(); it != cs.rend(); ++it) acc = acc * x + *it;
    return acc;
}

std::vector<mpz_class> poly_derivative_vec(const std::vector<mpz_class>& a) {
    std::vector<mpz_class> r;
    for (std::size_t i = 1; i < a.size(); ++i) r.push_back(mpz_class(a[i] * static_cast<long>(i)));
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
}

// Sufficient exactness argument: if the forward differences D^j f(0) for
// j = 0..deg are all nonnegative, f maps N_0 into N_0 (Newton form with
// nonnegative binomial weights).
bool nonneg_by_finite_differences(const std::vector<mpz_class>& cs) {
    std::size_t d = cs.empty() ? 0 : cs.size() - 1;
    std::vector<mpz_class> row;
    for (std::size_t i = 0; i <= d; ++i)
        row.push_back(poly_eval_exact(cs, mpz_class(static_cast<unsigned long>(i))));
    for (std::size_t level = 0; level <= d; ++level) {
        if (row[0] < 0) return false;
        for (std::size_t i = 0; i + 1 < row.size(); ++i) row[i] = row[i + 1] - row[i];
        row.pop_back();
        if (row.empty()) break;
    }
    return true;
}

void fill_unit(SufficiencyCertificate& cert, const mpz_class& value, unsigned p) {
    cert.valuation = static_cast<long>(valuation(value, p));
    mpz_class unit = value / pow_int(p, static_cast<unsigned>(cert.valuation));
    cert.unit_residue = mod_nonneg(unit, pow_int(p, cert_precision));
    cert.residue_precision = cert_precision;
}

void split_sum_cert(const Expr& e, int sign, std::vector<std::pair<int, Expr>>& out) {
    switch (e->kind()) {
    case FuncExpr::Kind::Add:
        split_sum_cert(e->left(), sign, out);
        split_sum_cert(e->right(), sign, out);
        return;
    case FuncExpr::Kind::Sub:
        split_sum_cert(e->left(), sign, out);
        split_sum_cert(e->right(), -sign, out);
        return;
    case FuncExpr::Kind::Neg:
        split_sum_cert(e->left(), -sign, out);
        return;
    default:
        out.emplace_back(sign, e);
    }
}

} // namespace

SufficiencyCertificate sufficient_condition_certificate(const Expr& e,
                                                        const mpz_class& search_bound) {
    if (search_bound < 1) throw input_error("search bound must be positive");
    unsigned p = e->prime();
    SufficiencyCertificate cert;

    if (auto cs = as_polynomial(e)) {
        if (cs->size() < 3) {
            cert.checked.push_back("polynomial of degree < 2: second derivative vanishes");
            return cert; // Unsupported
        }
        std::vector<mpz_class> d2 = poly_derivative_vec(poly_derivative_vec(*cs));

        std::vector<mpz_class> work = *cs;
        bool flipped = false;
        // condition (i), possibly after the measure-preserving sign flip
        bool exact = nonneg_by_finite_differences(work);
        if (!exact) {
            std::vector<mpz_class> negated;
            for (const auto& c : work) negated.push_back(mpz_class(-c));
            if (nonneg_by_finite_differences(negated)) {
                work = negated;
                flipped = true;
                exact = true;
            }
        }
        bool sampled_ok = true;
        if (!exact) {
            bool all_nonneg = true, all_nonpos = true;
            for (mpz_class v = 0; v <= search_bound; ++v) {
                mpz_class y = poly_eval_exact(work, v);
                if (y < 0) all_nonneg = false;
                if (y > 0) all_nonpos = false;
                if (!all_nonneg && !all_nonpos) break;
            }
            if (all_nonpos && !all_nonneg) {
                flipped = true;
                for (auto& c : work) c = -c;
                sampled_ok = true;
            } else {
                sampled_ok = all_nonneg;
            }
        }
        if (!exact && !sampled_ok) {
            cert.checked.push_back("values on [0, bound] change sign: no N0 -> N0 certificate");
            return cert;
        }

        // locate v with f''(v) != 0; at most deg-2 roots, so the scan ends early
        std::vector<mpz_class> d2w = flipped ? [&] {
            std::vector<mpz_class> n2;
            for (const auto& c : d2) n2.push_back(mpz_class(-c));
            return n2;
        }() : d2;
        mpz_class limit = std::max(search_bound, mpz_class(static_cast<unsigned long>(cs->size())));
        for (mpz_class v = 0; v <= limit; ++v) {
            mpz_class second = poly_eval_exact(d2w, v);
            if (second != 0) {
                cert.cls = SufficiencyCertificate::Class::PolyDegreeGe2;
                cert.witness_point = v;
                cert.exact_second = second;
                cert.nonneg_exact = exact;
                cert.sign_flipped = flipped;
                fill_unit(cert, second, p);
                cert.checked.push_back("second derivative " + second.get_str() +
                                       " at v=" + v.get_str() + " (exact)");
                cert.checked.push_back(exact
                                           ? "N0 -> N0 by finite-difference positivity (exact)"
                                           : "N0 -> N0 sampled on [0, " + search_bound.get_str() + "]");
                if (flipped) cert.checked.push_back("certified via -f; plot measures agree under mirror");
                return cert;
            }
        }
        cert.checked.push_back("no nonzero second derivative located below the bound");
        return cert;
    }

    std::vector<std::pair<int, Expr>> summands;
    split_sum_cert(e, 1, summands);
    std::vector<mpz_class> poly_part;
    std::vector<std::pair<int, Expr>> rest;
    for (auto& [sign, s] : summands) {
        if (auto cs = as_polynomial(s)) {
            std::vector<mpz_class> r(std::max(poly_part.size(), cs->size()), mpz_class(0));
            for (std::size_t i = 0; i < poly_part.size(); ++i) r[i] += poly_part[i];
            for (std::size_t i = 0; i < cs->size(); ++i) r[i] += sign * (*cs)[i];
            while (!r.empty() && r.back() == 0) r.pop_back();
            poly_part = std::move(r);
        } else {
            rest.emplace_back(sign, s);
        }
    }

    if (rest.size() == 1 && rest[0].first == 1 &&
        rest[0].second->kind() == FuncExpr::Kind::ExpC) {
        const mpz_class& c = rest[0].second->constant();
        if (poly_part == std::vector<mpz_class>{0, c}) {
            cert.cls = SufficiencyCertificate::Class::CxPlusCx;
            cert.witness_point = 0;
            auto [s_log, xi_log] = padic_log_unit(c, p, cert_precision);
            mpz_class modk = pow_int(p, cert_precision);
            cert.valuation = 2 * s_log;
            cert.unit_residue = mod_nonneg(xi_log * xi_log, modk); // c^0 = 1
            cert.residue_precision = cert_precision;
            cert.nonneg_exact = true; // c > 0, so cx + c^x >= 0 on N0
            cert.checked.push_back("f''(v) = c^v (log c)^2, a unit times p^" +
                                   std::to_string(cert.valuation) + " at v=0");
            cert.checked.push_back("N0 -> N0 exactly: positive coefficients");
            return cert;
        }
        cert.checked.push_back("exponential summand without the matching c*x part");
        return cert;
    }

    if (rest.size() == 1 && rest[0].first == 1 &&
        rest[0].second->kind() == FuncExpr::Kind::Or &&
        rest[0].second->constant() >= 0 && poly_part.size() <= 2) {
        auto inner = as_polynomial(rest[0].second->left());
        bool a_ok = poly_part.empty() || poly_part[0] >= 0;
        bool b_ok = poly_part.size() < 2 || poly_part[1] >= 0;
        if (inner && *inner == std::vector<mpz_class>{0, 0, 1} && a_ok && b_ok) {
            cert.cls = SufficiencyCertificate::Class::PolyPlusOrC;
            cert.witness_point = 0;
            cert.exact_second = 2;
            cert.nonneg_exact = true;
            fill_unit(cert, mpz_class(2), p);
            cert.checked.push_back("second derivative 2 everywhere: the or-masked square");
            cert.checked.push_back("N0 -> N0 exactly: nonnegative a, b, c");
            return cert;
        }
        cert.checked.push_back("or-masked summand outside the a+bx+(x^2|c) shape with a,b,c >= 0");
        return cert;
    }

    cert.checked.push_back("expression outside the recognized certificate classes");
    return cert;
}

} // namespace zpa
