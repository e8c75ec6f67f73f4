#include "zpa/numutil.hpp"

#include "zpa/errors.hpp"

namespace zpa {

mpz_class pow_int(unsigned base, unsigned exp) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), base, exp);
    return r;
}

bool is_small_prime(unsigned p) {
    if (p < 2) return false;
    if (p < 4) return true;
    if (p % 2 == 0) return false;
    for (unsigned d = 3; d * d <= p; d += 2)
        if (p % d == 0) return false;
    return true;
}

void require_prime(unsigned p) {
    if (!is_small_prime(p))
        throw input_error("p must be a prime >= 2, got " + std::to_string(p));
}

mpz_class mod_nonneg(const mpz_class& v, const mpz_class& modulus) {
    mpz_class r;
    mpz_mod(r.get_mpz_t(), v.get_mpz_t(), modulus.get_mpz_t());
    return r;
}

unsigned long valuation(const mpz_class& v, unsigned p) {
    if (v == 0) throw input_error("valuation of zero is undefined");
    mpz_class rest;
    return mpz_remove(rest.get_mpz_t(), v.get_mpz_t(), mpz_class(p).get_mpz_t());
}

mpz_class invert_mod(const mpz_class& a, const mpz_class& modulus) {
    mpz_class r;
    if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), modulus.get_mpz_t()) == 0)
        throw input_error("value is not invertible modulo the given modulus");
    return r;
}

} // namespace zpa
