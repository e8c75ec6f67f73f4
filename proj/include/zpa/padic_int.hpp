#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace zpa {

/**
 * A p-adic integer truncated to a fixed working precision.
 *
 * The value is the base-p digit sequence d_0..d_{k-1} (least significant
 * first), i.e. the first k coefficients of the series sum d_i * p^i.
 * Negative rational integers and fractions with denominators coprime to p
 * have the usual complement / periodic expansions and are representable
 * exactly up to the chosen precision.
 *
 * Values are immutable. Binary operations require equal primes and carry
 * precision = min of the operand precisions; low digits of a result never
 * depend on digits discarded by the truncation.
 */
class PadicInt {
public:
    // Digits are validated against [0, p-1]; p must be a small prime; at
    // least one digit is required.
    PadicInt(unsigned prime, std::vector<std::uint32_t> digits);

    // First k digits of the p-adic expansion of an integer. Negative values
    // expand via the complement representation (value mod p^k).
    static PadicInt from_integer(const mpz_class& value, unsigned p, unsigned k);

    // The unique z with den*z = num (mod p^k); requires gcd(den, p) = 1,
    // otherwise the fraction is not a p-adic integer.
    static PadicInt from_rational(const mpz_class& num, const mpz_class& den,
                                  unsigned p, unsigned k);

    // Literal format "p:k:d_{k-1}...d_1d_0", digits most significant first,
    // letters 0-9 then a-z for primes above ten.
    static PadicInt parse(std::string_view text);
    std::string to_string() const;

    unsigned prime() const { return prime_; }
    unsigned precision() const { return static_cast<unsigned>(digits_.size()); }

    // d_i; throws beyond the working precision.
    std::uint32_t digit(unsigned i) const;

    // sum_{i<m} d_i p^i as a nonnegative integer; requires m <= precision.
    mpz_class reduce(unsigned m) const;

    bool operator==(const PadicInt&) const = default;

private:
    unsigned prime_;
    std::vector<std::uint32_t> digits_;
};

PadicInt add(const PadicInt& a, const PadicInt& b);
PadicInt sub(const PadicInt& a, const PadicInt& b);
PadicInt mul(const PadicInt& a, const PadicInt& b);
PadicInt neg(const PadicInt& a);

inline PadicInt operator+(const PadicInt& a, const PadicInt& b) { return add(a, b); }
inline PadicInt operator-(const PadicInt& a, const PadicInt& b) { return sub(a, b); }
inline PadicInt operator*(const PadicInt& a, const PadicInt& b) { return mul(a, b); }
inline PadicInt operator-(const PadicInt& a) { return neg(a); }

// Distance d_p(a, b) = p^{-exponent} where exponent is the least index at
// which the digit sequences differ. An empty optional means the operands are
// indistinguishable at their (shared) precision; truncated values can never
// certify exact equality in Z_p.
std::optional<unsigned> distance_exponent(const PadicInt& a, const PadicInt& b);

// c^x mod p^k for a positive integer c = 1 (mod p), c != 1. The result
// depends on x only through a residue at level <= k, so an exponent residue
// is all that is needed.
mpz_class pow_exp(const mpz_class& c, const mpz_class& x, unsigned p, unsigned k);

} // namespace zpa
