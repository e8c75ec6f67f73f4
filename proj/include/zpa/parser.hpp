#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>

#include "zpa/errors.hpp"
#include "zpa/expr.hpp"

namespace zpa {

struct parse_error : input_error {
    parse_error(const std::string& message, std::size_t position)
        : input_error(message + " (at position " + std::to_string(position + 1) + ")"),
          position(position) {}
    std::size_t position;
};

// Infix grammar for 1-Lipschitz expressions, e.g. "2*x^2+3*x+1",
// "x+x^2|-131065", "c^x" with named constants supplied by the caller.
//
// Precedence, loosest first:  + -  |  xor  &  <<  *  unary - ~  ^
// "x^n" with a constant n is an integer power; "c^x" with constant c is the
// exponential (requires c = 1 mod p). Bitwise operators and shifts need one
// constant operand and are available over p = 2 only.
Expr parse_expr(std::string_view text, unsigned p,
                const std::map<std::string, mpz_class>& constants = {});

} // namespace zpa
