#include "zpa/expr.hpp"

#include <utility>

#include "zpa/errors.hpp"
#include "zpa/numutil.hpp"
#include "zpa/padic_int.hpp"

namespace zpa {

struct ExprFactory {
    static Expr build(FuncExpr::Kind kind, unsigned p, mpz_class constant = 0,
                      std::vector<mpz_class> coeffs = {}, Expr left = nullptr,
                      Expr right = nullptr, unsigned shift = 0, DigitFn oracle = {}) {
        require_prime(p);
        auto n = std::shared_ptr<FuncExpr>(new FuncExpr(kind, p));
        n->constant_ = std::move(constant);
        n->coeffs_ = std::move(coeffs);
        n->left_ = std::move(left);
        n->right_ = std::move(right);
        n->shift_ = shift;
        n->oracle_ = std::move(oracle);
        return n;
    }
};

namespace {

using Kind = FuncExpr::Kind;

void require_same_prime(const Expr& a, const Expr& b) {
    if (a->prime() != b->prime())
        throw input_error("incompatible rings: subexpressions have different primes");
}

void require_binary_alphabet(unsigned p, const char* what) {
    if (p != 2)
        throw input_error(std::string(what) + " is only defined over p = 2");
}

Expr binary_node(Kind kind, Expr a, Expr b) {
    require_same_prime(a, b);
    unsigned p = a->prime();
    return ExprFactory::build(kind, p, 0, {}, std::move(a), std::move(b));
}

Expr bit_node(Kind kind, Expr e, mpz_class c, const char* what) {
    require_binary_alphabet(e->prime(), what);
    unsigned p = e->prime();
    return ExprFactory::build(kind, p, std::move(c), {}, std::move(e));
}

std::vector<mpz_class> trimmed(std::vector<mpz_class> cs) {
    while (!cs.empty() && cs.back() == 0) cs.pop_back();
    return cs;
}

} // namespace

Expr constant(unsigned p, mpz_class c) {
    return ExprFactory::build(Kind::Const, p, std::move(c));
}

Expr identity(unsigned p) { return ExprFactory::build(Kind::Identity, p); }

Expr add(Expr a, Expr b) { return binary_node(Kind::Add, std::move(a), std::move(b)); }
Expr sub(Expr a, Expr b) { return binary_node(Kind::Sub, std::move(a), std::move(b)); }
Expr mul(Expr a, Expr b) { return binary_node(Kind::Mul, std::move(a), std::move(b)); }

Expr neg(Expr a) {
    unsigned p = a->prime();
    return ExprFactory::build(Kind::Neg, p, 0, {}, std::move(a));
}

Expr compose(Expr outer, Expr inner) {
    return binary_node(Kind::Compose, std::move(outer), std::move(inner));
}

Expr poly(unsigned p, std::vector<mpz_class> coeffs) {
    return ExprFactory::build(Kind::Poly, p, 0, std::move(coeffs));
}

Expr exp_base(unsigned p, mpz_class c) {
    require_prime(p);
    if (c <= 0 || c == 1 || mod_nonneg(c, p) != 1)
        throw input_error("exponential not 1-Lipschitz here: need c = 1 (mod p), c != 1");
    return ExprFactory::build(Kind::ExpC, p, std::move(c));
}

Expr bit_and(Expr e, mpz_class c) { return bit_node(Kind::And, std::move(e), std::move(c), "bitwise and"); }
Expr bit_or(Expr e, mpz_class c) { return bit_node(Kind::Or, std::move(e), std::move(c), "bitwise or"); }
Expr bit_xor(Expr e, mpz_class c) { return bit_node(Kind::Xor, std::move(e), std::move(c), "bitwise xor"); }
Expr bit_mask(Expr e, mpz_class c) { return bit_node(Kind::Mask, std::move(e), std::move(c), "masking"); }

Expr bit_not(Expr e) {
    require_binary_alphabet(e->prime(), "bitwise not");
    unsigned p = e->prime();
    return ExprFactory::build(Kind::Not, p, 0, {}, std::move(e));
}

Expr shift_up(Expr e, unsigned amount) {
    require_binary_alphabet(e->prime(), "shift");
    unsigned p = e->prime();
    return ExprFactory::build(Kind::ShiftUp, p, 0, {}, std::move(e), nullptr, amount);
}

Expr digit_oracle(unsigned p, DigitFn fn) {
    if (!fn) throw input_error("digit oracle must be callable");
    return ExprFactory::build(Kind::DigitOracle, p, 0, {}, nullptr, nullptr, 0, std::move(fn));
}

namespace {

struct EvalCtx {
    unsigned p;
    unsigned k;
    mpz_class mod;
};

mpz_class eval_node(const FuncExpr& e, const mpz_class& x, const EvalCtx& ctx) {
    switch (e.kind()) {
    case Kind::Const:
        return mod_nonneg(e.constant(), ctx.mod);
    case Kind::Identity:
        return x;
    case Kind::Add: {
        mpz_class v = eval_node(*e.left(), x, ctx) + eval_node(*e.right(), x, ctx);
        if (v >= ctx.mod) v -= ctx.mod;
        return v;
    }
    case Kind::Sub: {
        mpz_class v = eval_node(*e.left(), x, ctx) - eval_node(*e.right(), x, ctx);
        if (v < 0) v += ctx.mod;
        return v;
    }
    case Kind::Mul:
        return mod_nonneg(eval_node(*e.left(), x, ctx) * eval_node(*e.right(), x, ctx), ctx.mod);
    case Kind::Neg: {
        mpz_class v = eval_node(*e.left(), x, ctx);
        if (v == 0) return v;
        return ctx.mod - v;
    }
    case Kind::Compose:
        return eval_node(*e.left(), eval_node(*e.right(), x, ctx), ctx);
    case Kind::Poly: {
        mpz_class acc = 0;
        for (auto it = e.coeffs().rbegin(); it != e.coeffs().rend(); ++it)
            acc = mod_nonneg(acc * x + *it, ctx.mod);
        return acc;
    }
    case Kind::ExpC:
        return pow_exp(e.constant(), x, ctx.p, ctx.k);
    case Kind::And:
    case Kind::Mask: {
        mpz_class v = eval_node(*e.left(), x, ctx) & mod_nonneg(e.constant(), ctx.mod);
        return v;
    }
    case Kind::Or:
        return eval_node(*e.left(), x, ctx) | mod_nonneg(e.constant(), ctx.mod);
    case Kind::Xor:
        return eval_node(*e.left(), x, ctx) ^ mod_nonneg(e.constant(), ctx.mod);
    case Kind::Not:
        return (ctx.mod - 1) ^ eval_node(*e.left(), x, ctx);
    case Kind::ShiftUp: {
        mpz_class v = eval_node(*e.left(), x, ctx) << e.shift_amount();
        return mod_nonneg(v, ctx.mod);
    }
    case Kind::DigitOracle: {
        std::vector<std::uint32_t> digits(ctx.k);
        mpz_class rest = x;
        for (unsigned i = 0; i < ctx.k; ++i) {
            digits[i] = static_cast<std::uint32_t>(mpz_fdiv_ui(rest.get_mpz_t(), ctx.p));
            rest /= ctx.p;
        }
        mpz_class acc = 0, scale = 1;
        for (unsigned i = 0; i < ctx.k; ++i) {
            std::uint32_t d = e.oracle()(i, digits);
            if (d >= ctx.p) throw input_error("digit oracle produced an out-of-range digit");
            acc += scale * d;
            scale *= ctx.p;
        }
        return acc;
    }
    }
    throw input_error("unknown expression node");
}

} // namespace

mpz_class eval_mod(const Expr& e, const mpz_class& x, unsigned k) {
    if (!e) throw input_error("empty expression");
    if (k == 0) throw input_error("evaluation level must be at least 1");
    EvalCtx ctx{e->prime(), k, pow_int(e->prime(), k)};
    if (x < 0 || x >= ctx.mod)
        throw input_error("argument must be a residue in [0, p^k)");
    return eval_node(*e, x, ctx);
}

std::optional<mpz_class> eval_exact(const Expr& e, const mpz_class& x) {
    switch (e->kind()) {
    case Kind::Const: return e->constant();
    case Kind::Identity: return x;
    case Kind::Add: {
        auto l = eval_exact(e->left(), x), r = eval_exact(e->right(), x);
        if (!l || !r) return std::nullopt;
        return *l + *r;
    }
    case Kind::Sub: {
        auto l = eval_exact(e->left(), x), r = eval_exact(e->right(), x);
        if (!l || !r) return std::nullopt;
        return *l - *r;
    }
    case Kind::Mul: {
        auto l = eval_exact(e->left(), x), r = eval_exact(e->right(), x);
        if (!l || !r) return std::nullopt;
        return *l * *r;
    }
    case Kind::Neg: {
        auto l = eval_exact(e->left(), x);
        if (!l) return std::nullopt;
        return -*l;
    }
    case Kind::Compose: {
        auto inner = eval_exact(e->right(), x);
        if (!inner) return std::nullopt;
        return eval_exact(e->left(), *inner);
    }
    case Kind::Poly: {
        mpz_class acc = 0;
        for (auto it = e->coeffs().rbegin(); it != e->coeffs().rend(); ++it)
            acc = acc * x + *it;
        return acc;
    }
    case Kind::ExpC: {
        if (x < 0) return std::nullopt; // not a rational integer
        if (x > 1'000'000) throw guard_error("exact exponential with huge exponent");
        mpz_class r;
        mpz_pow_ui(r.get_mpz_t(), e->constant().get_mpz_t(), x.get_ui());
        return r;
    }
    case Kind::And:
    case Kind::Mask: {
        auto l = eval_exact(e->left(), x);
        if (!l) return std::nullopt;
        return *l & e->constant();
    }
    case Kind::Or: {
        auto l = eval_exact(e->left(), x);
        if (!l) return std::nullopt;
        return *l | e->constant();
    }
    case Kind::Xor: {
        auto l = eval_exact(e->left(), x);
        if (!l) return std::nullopt;
        return *l ^ e->constant();
    }
    case Kind::Not: {
        auto l = eval_exact(e->left(), x);
        if (!l) return std::nullopt;
        mpz_class r;
        mpz_com(r.get_mpz_t(), l->get_mpz_t());
        return r;
    }
    case Kind::ShiftUp: {
        auto l = eval_exact(e->left(), x);
        if (!l) return std::nullopt;
        return *l << e->shift_amount();
    }
    case Kind::DigitOracle:
        return std::nullopt;
    }
    throw input_error("unknown expression node");
}

LipschitzCheck check_lipschitz(const Expr& e, unsigned k, std::size_t trials,
                               std::uint64_t seed) {
    if (k < 2) throw input_error("lipschitz check needs k >= 2");
    unsigned p = e->prime();
    mpz_class mod = pow_int(p, k);
    gmp_randclass rng(gmp_randinit_mt);
    rng.seed(static_cast<unsigned long>(seed));

    for (std::size_t t = 0; t < trials; ++t) {
        unsigned m = 1 + static_cast<unsigned>(t % (k - 1)); // stratified over levels
        mpz_class pm = pow_int(p, m);
        mpz_class x = rng.get_z_range(mod);
        mpz_class delta = rng.get_z_range(mod / pm - 1) + 1;
        mpz_class y = mod_nonneg(x + delta * pm, mod);
        mpz_class fx = mod_nonneg(eval_mod(e, x, k), pm);
        mpz_class fy = mod_nonneg(eval_mod(e, y, k), pm);
        if (fx != fy)
            return LipschitzCheck{false, 0, x, y, m};
    }
    return LipschitzCheck{true, k, 0, 0, 0};
}

namespace {

std::vector<mpz_class> poly_add(const std::vector<mpz_class>& a,
                                const std::vector<mpz_class>& b, int sign) {
    std::vector<mpz_class> r(std::max(a.size(), b.size()), mpz_class(0));
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] += sign * b[i];
    return trimmed(std::move(r));
}

std::vector<mpz_class> poly_mul(const std::vector<mpz_class>& a,
                                const std::vector<mpz_class>& b) {
    if (a.empty() || b.empty()) return {};
    std::vector<mpz_class> r(a.size() + b.size() - 1, mpz_class(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] += a[i] * b[j];
    return trimmed(std::move(r));
}

std::vector<mpz_class> poly_derivative(const std::vector<mpz_class>& a) {
    std::vector<mpz_class> r;
    for (std::size_t i = 1; i < a.size(); ++i)
        r.push_back(mpz_class(a[i] * static_cast<long>(i)));
    return trimmed(std::move(r));
}

} // namespace

std::optional<std::vector<mpz_class>> as_polynomial(const Expr& e) {
    switch (e->kind()) {
    case Kind::Const: return trimmed({e->constant()});
    case Kind::Identity: return std::vector<mpz_class>{0, 1};
    case Kind::Poly: return trimmed(e->coeffs());
    case Kind::Add:
    case Kind::Sub: {
        auto l = as_polynomial(e->left()), r = as_polynomial(e->right());
        if (!l || !r) return std::nullopt;
        return poly_add(*l, *r, e->kind() == Kind::Add ? 1 : -1);
    }
    case Kind::Mul: {
        auto l = as_polynomial(e->left()), r = as_polynomial(e->right());
        if (!l || !r) return std::nullopt;
        return poly_mul(*l, *r);
    }
    case Kind::Neg: {
        auto l = as_polynomial(e->left());
        if (!l) return std::nullopt;
        return poly_add({}, *l, -1);
    }
    case Kind::Compose: {
        auto outer = as_polynomial(e->left()), inner = as_polynomial(e->right());
        if (!outer || !inner) return std::nullopt;
        std::vector<mpz_class> acc;
        for (auto it = outer->rbegin(); it != outer->rend(); ++it) {
            acc = poly_mul(acc, *inner);
            if (acc.empty()) acc.push_back(*it);
            else acc[0] += *it;
            acc = trimmed(std::move(acc));
        }
        return acc;
    }
    default:
        return std::nullopt;
    }
}

namespace {

void split_sum(const Expr& e, int sign, std::vector<std::pair<int, Expr>>& out) {
    switch (e->kind()) {
    case Kind::Add:
        split_sum(e->left(), sign, out);
        split_sum(e->right(), sign, out);
        return;
    case Kind::Sub:
        split_sum(e->left(), sign, out);
        split_sum(e->right(), -sign, out);
        return;
    case Kind::Neg:
        split_sum(e->left(), -sign, out);
        return;
    default:
        out.emplace_back(sign, e);
    }
}

bool is_x_squared(const Expr& e) {
    auto p = as_polynomial(e);
    return p && *p == std::vector<mpz_class>{0, 0, 1};
}

} // namespace

DerivativeReport differentiate(const Expr& e) {
    unsigned p = e->prime();
    if (auto whole = as_polynomial(e)) {
        auto d1 = poly_derivative(*whole);
        auto d2 = poly_derivative(d1);
        return DerivativeReport{DerivativeReport::Class::Polynomial,
                                poly(p, d1), poly(p, d2)};
    }

    std::vector<std::pair<int, Expr>> summands;
    split_sum(e, 1, summands);
    std::vector<mpz_class> poly_part;
    std::vector<std::pair<int, Expr>> rest;
    for (auto& [sign, s] : summands) {
        if (auto cs = as_polynomial(s)) poly_part = poly_add(poly_part, *cs, sign);
        else rest.emplace_back(sign, s);
    }

    if (rest.size() == 1 && rest[0].first == 1) {
        const Expr& odd = rest[0].second;
        if (odd->kind() == Kind::ExpC)
            return DerivativeReport{DerivativeReport::Class::PolyPlusExp,
                                    std::nullopt, std::nullopt};
        // affine + (x^2 | c) with c >= 0: the or-correction is locally
        // constant, so only the square contributes to the derivatives.
        if (odd->kind() == Kind::Or && odd->constant() >= 0 &&
            is_x_squared(odd->left()) && poly_part.size() <= 2) {
            auto d1 = poly_add(poly_derivative(poly_part), {0, 2}, 1);
            return DerivativeReport{DerivativeReport::Class::Pattern,
                                    poly(p, d1), constant(p, 2)};
        }
    }
    return DerivativeReport{DerivativeReport::Class::Unsupported,
                            std::nullopt, std::nullopt};
}

namespace {

std::string poly_string(const std::vector<mpz_class>& cs) {
    if (cs.empty()) return "0";
    std::string s;
    for (std::size_t i = cs.size(); i > 0; --i) {
        const mpz_class& c = cs[i - 1];
        if (c == 0) continue;
        std::size_t deg = i - 1;
        if (!s.empty()) s += c < 0 ? "-" : "+";
        else if (c < 0) s += "-";
        mpz_class a = abs(c);
        if (a != 1 || deg == 0) s += a.get_str();
        if (deg > 0) {
            if (a != 1) s += "*";
            s += "x";
            if (deg > 1) s += "^" + std::to_string(deg);
        }
    }
    return s.empty() ? "0" : s;
}

} // namespace

std::string to_string(const Expr& e) {
    switch (e->kind()) {
    case Kind::Const: return e->constant().get_str();
    case Kind::Identity: return "x";
    case Kind::Add: return "(" + to_string(e->left()) + "+" + to_string(e->right()) + ")";
    case Kind::Sub: return "(" + to_string(e->left()) + "-" + to_string(e->right()) + ")";
    case Kind::Mul: return "(" + to_string(e->left()) + "*" + to_string(e->right()) + ")";
    case Kind::Neg: return "-(" + to_string(e->left()) + ")";
    case Kind::Compose: return "compose(" + to_string(e->left()) + "," + to_string(e->right()) + ")";
    case Kind::Poly: return poly_string(e->coeffs());
    case Kind::ExpC: return e->constant().get_str() + "^x";
    case Kind::And: return "(" + to_string(e->left()) + "&" + e->constant().get_str() + ")";
    case Kind::Or: return "(" + to_string(e->left()) + "|" + e->constant().get_str() + ")";
    case Kind::Xor: return "(" + to_string(e->left()) + " xor " + e->constant().get_str() + ")";
    case Kind::Mask: return "mask(" + to_string(e->left()) + "," + e->constant().get_str() + ")";
    case Kind::Not: return "~(" + to_string(e->left()) + ")";
    case Kind::ShiftUp: return "(" + to_string(e->left()) + "<<" + std::to_string(e->shift_amount()) + ")";
    case Kind::DigitOracle: return "oracle(...)";
    }
    return "?";
}

} // namespace zpa
