#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace zpa {

class FuncExpr;
using Expr = std::shared_ptr<const FuncExpr>;

// Externally supplied digit functions: digit(i, input_digits) produces output
// digit i from the input digits available at the evaluation precision. A
// well-behaved oracle reads only indices 0..i; one that peeks further ahead
// denotes no automaton function, which check_lipschitz can expose.
using DigitFn = std::function<std::uint32_t(std::size_t i, const std::vector<std::uint32_t>& input_digits)>;

/**
 * Expression tree denoting a 1-Lipschitz function Z_p -> Z_p.
 *
 * Construction enforces the closure properties: every built-in node kind
 * denotes a 1-Lipschitz function, bitwise kinds exist only over p = 2, and
 * subexpressions must agree on the prime. Bitwise operations take one
 * expression operand and one integer constant; negative constants act as
 * 2-adic integers (eventually-all-ones bit patterns), reduced mod 2^k at
 * each evaluation level.
 *
 * Trees are immutable and freely shareable; evaluation is pure.
 */
class FuncExpr {
public:
    enum class Kind {
        Const, Identity, Add, Sub, Mul, Neg, Compose, Poly, ExpC,
        And, Or, Xor, Not, ShiftUp, Mask, DigitOracle
    };

    Kind kind() const { return kind_; }
    unsigned prime() const { return prime_; }
    const mpz_class& constant() const { return constant_; }
    const std::vector<mpz_class>& coeffs() const { return coeffs_; }
    const Expr& left() const { return left_; }
    const Expr& right() const { return right_; }
    unsigned shift_amount() const { return shift_; }
    const DigitFn& oracle() const { return oracle_; }

private:
    FuncExpr(Kind kind, unsigned prime) : kind_(kind), prime_(prime) {}

    Kind kind_;
    unsigned prime_;
    mpz_class constant_;
    std::vector<mpz_class> coeffs_;
    Expr left_, right_;
    unsigned shift_ = 0;
    DigitFn oracle_;

    friend struct ExprFactory;
};

Expr constant(unsigned p, mpz_class c);
Expr identity(unsigned p);
Expr add(Expr a, Expr b);
Expr sub(Expr a, Expr b);
Expr mul(Expr a, Expr b);
Expr neg(Expr a);
Expr compose(Expr outer, Expr inner); // x -> outer(inner(x))
Expr poly(unsigned p, std::vector<mpz_class> coeffs); // little-endian coefficients
Expr exp_base(unsigned p, mpz_class c);               // x -> c^x, c = 1 (mod p), c != 1

// p = 2 only.
Expr bit_and(Expr e, mpz_class c);
Expr bit_or(Expr e, mpz_class c);
Expr bit_xor(Expr e, mpz_class c);
Expr bit_not(Expr e);
Expr bit_mask(Expr e, mpz_class c); // same result as bit_and; kept as its own kind
Expr shift_up(Expr e, unsigned amount); // multiply by 2^amount

Expr digit_oracle(unsigned p, DigitFn fn);

// Infix rendering for reports and error messages.
std::string to_string(const Expr& e);

// f(x) mod p^k, computed with exact arithmetic modulo p^k throughout.
// x must lie in [0, p^k).
mpz_class eval_mod(const Expr& e, const mpz_class& x, unsigned k);

// Exact evaluation over the rational integers (bitwise nodes use two's
// complement semantics on negatives). Empty when the tree contains a digit
// oracle, whose value is only defined digit-by-digit.
std::optional<mpz_class> eval_exact(const Expr& e, const mpz_class& x);

// Seeded sampling check of the defining digit-dependency property: pairs
// x = y (mod p^m) must evaluate equal mod p^m, for m = 1..k-1. A violation
// proves the expression is not an automaton function; consistency is
// evidence only.
struct LipschitzCheck {
    bool consistent;
    unsigned checked_level;       // consistent up to this level
    mpz_class witness_x, witness_y; // populated on violation
    unsigned violation_level = 0;
};
LipschitzCheck check_lipschitz(const Expr& e, unsigned k, std::size_t trials,
                               std::uint64_t seed);

// Normalizes pure ring/polynomial trees to an exact coefficient list
// (little-endian, trailing zeros trimmed). Empty for trees containing
// exponential, bitwise or oracle nodes.
std::optional<std::vector<mpz_class>> as_polynomial(const Expr& e);

struct DerivativeReport {
    enum class Class { Polynomial, PolyPlusExp, Pattern, Unsupported };
    Class supported_class = Class::Unsupported;
    std::optional<Expr> first;   // empty = unsupported
    std::optional<Expr> second;
};

// Exact symbolic derivatives for the polynomial class. The affine-plus-
// (x^2 | c) shape is recognized as Pattern: the non-polynomial summand is
// locally constant away from the mask, and the second derivative is the
// constant 2. Exponential sums report PolyPlusExp with no symbolic
// derivative. Anything containing other bitwise or oracle nodes is
// Unsupported; no numeric differentiation is attempted.
DerivativeReport differentiate(const Expr& e);

} // namespace zpa
