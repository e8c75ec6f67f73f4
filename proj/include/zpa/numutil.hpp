#pragma once

#include <cstdint>
#include <gmpxx.h>

namespace zpa {

// p^k as an exact integer.
mpz_class pow_int(unsigned base, unsigned exp);

// Trial division; p is expected to be small.
bool is_small_prime(unsigned p);

// Throws input_error unless p is a small prime >= 2.
void require_prime(unsigned p);

// v reduced into [0, modulus).
mpz_class mod_nonneg(const mpz_class& v, const mpz_class& modulus);

// p-adic valuation of v != 0.
unsigned long valuation(const mpz_class& v, unsigned p);

// Inverse of a modulo m; throws input_error when gcd(a, m) != 1.
mpz_class invert_mod(const mpz_class& a, const mpz_class& modulus);

} // namespace zpa
