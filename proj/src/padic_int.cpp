#include "zpa/padic_int.hpp"

#include <algorithm>

#include "zpa/errors.hpp"
#include "zpa/numutil.hpp"

namespace zpa {

namespace {

char digit_char(std::uint32_t d) {
    return d < 10 ? static_cast<char>('0' + d) : static_cast<char>('a' + (d - 10));
}

std::uint32_t char_digit(char c) {
    if (c >= '0' && c <= '9') return static_cast<std::uint32_t>(c - '0');
    if (c >= 'a' && c <= 'z') return static_cast<std::uint32_t>(c - 'a' + 10);
    throw input_error(std::string("invalid digit character '") + c + "'");
}

std::vector<std::uint32_t> decompose(mpz_class residue, unsigned p, unsigned k) {
    std::vector<std::uint32_t> digits(k);
    for (unsigned i = 0; i < k; ++i) {
        digits[i] = static_cast<std::uint32_t>(mpz_fdiv_ui(residue.get_mpz_t(), p));
        residue /= p;
    }
    return digits;
}

} // namespace

PadicInt::PadicInt(unsigned prime, std::vector<std::uint32_t> digits)
    : prime_(prime), digits_(std::move(digits)) {
    require_prime(prime_);
    if (digits_.empty()) throw input_error("precision must be at least 1");
    for (auto d : digits_)
        if (d >= prime_) throw input_error("digit out of range for prime");
}

PadicInt PadicInt::from_integer(const mpz_class& value, unsigned p, unsigned k) {
    require_prime(p);
    if (k == 0) throw input_error("precision must be at least 1");
    return PadicInt(p, decompose(mod_nonneg(value, pow_int(p, k)), p, k));
}

PadicInt PadicInt::from_rational(const mpz_class& num, const mpz_class& den,
                                 unsigned p, unsigned k) {
    require_prime(p);
    if (k == 0) throw input_error("precision must be at least 1");
    if (den <= 0) throw input_error("denominator must be positive");
    if (mpz_divisible_ui_p(den.get_mpz_t(), p))
        throw input_error("not a p-adic integer: denominator divisible by p");
    mpz_class mod = pow_int(p, k);
    mpz_class z = mod_nonneg(num * invert_mod(den, mod), mod);
    return PadicInt(p, decompose(z, p, k));
}

PadicInt PadicInt::parse(std::string_view text) {
    auto c1 = text.find(':');
    auto c2 = text.find(':', c1 == std::string_view::npos ? c1 : c1 + 1);
    if (c1 == std::string_view::npos || c2 == std::string_view::npos)
        throw input_error("p-adic literal must look like \"p:k:digits\"");
    unsigned p = 0, k = 0;
    try {
        p = static_cast<unsigned>(std::stoul(std::string(text.substr(0, c1))));
        k = static_cast<unsigned>(std::stoul(std::string(text.substr(c1 + 1, c2 - c1 - 1))));
    } catch (const std::exception&) {
        throw input_error("p-adic literal has malformed p or k");
    }
    std::string_view body = text.substr(c2 + 1);
    if (body.size() != k)
        throw input_error("p-adic literal digit count does not match k");
    std::vector<std::uint32_t> digits(k);
    for (unsigned i = 0; i < k; ++i)
        digits[i] = char_digit(body[k - 1 - i]);
    return PadicInt(p, std::move(digits));
}

std::string PadicInt::to_string() const {
    std::string s = std::to_string(prime_) + ":" + std::to_string(precision()) + ":";
    for (unsigned i = precision(); i > 0; --i)
        s += digit_char(digits_[i - 1]);
    return s;
}

std::uint32_t PadicInt::digit(unsigned i) const {
    if (i >= digits_.size()) throw input_error("digit index beyond precision");
    return digits_[i];
}

mpz_class PadicInt::reduce(unsigned m) const {
    if (m > digits_.size()) throw input_error("reduction level beyond precision");
    mpz_class acc = 0;
    for (unsigned i = m; i > 0; --i) {
        acc *= prime_;
        acc += digits_[i - 1];
    }
    return acc;
}

namespace {

PadicInt ring_op(const PadicInt& a, const PadicInt& b, char op) {
    if (a.prime() != b.prime()) throw input_error("incompatible rings: primes differ");
    unsigned k = std::min(a.precision(), b.precision());
    mpz_class x = a.reduce(k), y = b.reduce(k);
    mpz_class r;
    if (op == '+') r = x + y;
    else if (op == '-') r = x - y;
    else r = x * y;
    return PadicInt::from_integer(r, a.prime(), k);
}

} // namespace

PadicInt add(const PadicInt& a, const PadicInt& b) { return ring_op(a, b, '+'); }
PadicInt sub(const PadicInt& a, const PadicInt& b) { return ring_op(a, b, '-'); }
PadicInt mul(const PadicInt& a, const PadicInt& b) { return ring_op(a, b, '*'); }

PadicInt neg(const PadicInt& a) {
    return PadicInt::from_integer(-a.reduce(a.precision()), a.prime(), a.precision());
}

std::optional<unsigned> distance_exponent(const PadicInt& a, const PadicInt& b) {
    if (a.prime() != b.prime()) throw input_error("incompatible rings: primes differ");
    if (a.precision() != b.precision())
        throw input_error("distance requires equal precisions");
    for (unsigned i = 0; i < a.precision(); ++i)
        if (a.digit(i) != b.digit(i)) return i;
    return std::nullopt;
}

mpz_class pow_exp(const mpz_class& c, const mpz_class& x, unsigned p, unsigned k) {
    require_prime(p);
    if (k == 0) throw input_error("precision must be at least 1");
    if (c <= 0 || c == 1 || mod_nonneg(c, p) != 1)
        throw input_error("exponential not 1-Lipschitz here: need c = 1 (mod p), c != 1");
    mpz_class mod = pow_int(p, k);
    mpz_class e = mod_nonneg(x, mod);
    mpz_class r;
    mpz_powm(r.get_mpz_t(), c.get_mpz_t(), e.get_mpz_t(), mod.get_mpz_t());
    return r;
}

} // namespace zpa
