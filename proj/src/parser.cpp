#include "zpa/parser.hpp"

#include <cctype>

#include "zpa/numutil.hpp"

namespace zpa {

namespace {

using Kind = FuncExpr::Kind;

class Parser {
public:
    Parser(std::string_view text, unsigned p,
           const std::map<std::string, mpz_class>& constants)
        : text_(text), p_(p), consts_(constants) {}

    Expr parse() {
        Expr e = parse_sum();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return e;
    }

private:
    std::string_view text_;
    unsigned p_;
    const std::map<std::string, mpz_class>& consts_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const { throw parse_error(msg, pos_); }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    bool consume(char c) {
        if (peek() == c) { ++pos_; return true; }
        return false;
    }

    bool consume_word(std::string_view w) {
        skip_ws();
        if (text_.substr(pos_, w.size()) != w) return false;
        std::size_t after = pos_ + w.size();
        if (after < text_.size()) {
            char c = text_[after];
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') return false;
        }
        pos_ = after;
        return true;
    }

    static bool is_const(const Expr& e) { return e->kind() == Kind::Const; }

    Expr parse_sum() {
        Expr e = parse_bitor();
        for (;;) {
            if (consume('+')) e = combine('+', e, parse_bitor());
            else if (consume('-')) e = combine('-', e, parse_bitor());
            else return e;
        }
    }

    Expr combine(char op, Expr a, Expr b) {
        if (is_const(a) && is_const(b)) {
            mpz_class v;
            if (op == '+') v = a->constant() + b->constant();
            else if (op == '-') v = a->constant() - b->constant();
            else v = a->constant() * b->constant();
            return constant(p_, v);
        }
        return op == '+' ? add(std::move(a), std::move(b))
             : op == '-' ? sub(std::move(a), std::move(b))
                         : mul(std::move(a), std::move(b));
    }

    Expr parse_bitor() {
        Expr e = parse_bitxor();
        while (consume('|')) e = bit_combine(Kind::Or, e, parse_bitxor());
        return e;
    }

    Expr parse_bitxor() {
        Expr e = parse_bitand();
        while (consume_word("xor")) e = bit_combine(Kind::Xor, e, parse_bitand());
        return e;
    }

    Expr parse_bitand() {
        Expr e = parse_shift();
        while (consume('&')) e = bit_combine(Kind::And, e, parse_shift());
        return e;
    }

    Expr bit_combine(Kind kind, Expr a, Expr b) {
        std::size_t at = pos_;
        if (is_const(a) && is_const(b)) {
            mpz_class v;
            if (kind == Kind::Or) v = a->constant() | b->constant();
            else if (kind == Kind::Xor) v = a->constant() ^ b->constant();
            else v = a->constant() & b->constant();
            return constant(p_, v);
        }
        if (is_const(a)) std::swap(a, b); // bitwise ops with a constant are symmetric
        if (!is_const(b)) throw parse_error("bitwise operations need a constant operand", at);
        try {
            switch (kind) {
            case Kind::Or: return bit_or(std::move(a), b->constant());
            case Kind::Xor: return bit_xor(std::move(a), b->constant());
            default: return bit_and(std::move(a), b->constant());
            }
        } catch (const input_error& err) {
            throw parse_error(err.what(), at);
        }
    }

    Expr parse_shift() {
        Expr e = parse_product();
        for (;;) {
            skip_ws();
            if (text_.substr(pos_, 2) == "<<") {
                std::size_t at = pos_;
                pos_ += 2;
                Expr amount = parse_product();
                if (!is_const(amount) || amount->constant() < 0 || amount->constant() > 64)
                    throw parse_error("shift amount must be a constant in [0, 64]", at);
                unsigned m = static_cast<unsigned>(amount->constant().get_ui());
                if (is_const(e)) e = constant(p_, e->constant() << m);
                else {
                    try { e = shift_up(std::move(e), m); }
                    catch (const input_error& err) { throw parse_error(err.what(), at); }
                }
            } else return e;
        }
    }

    Expr parse_product() {
        Expr e = parse_unary();
        while (consume('*')) e = combine('*', e, parse_unary());
        return e;
    }

    Expr parse_unary() {
        if (consume('-')) {
            Expr e = parse_unary();
            if (is_const(e)) return constant(p_, -e->constant());
            return neg(std::move(e));
        }
        if (consume('~')) {
            std::size_t at = pos_;
            Expr e = parse_unary();
            if (is_const(e)) return constant(p_, -e->constant() - 1);
            try { return bit_not(std::move(e)); }
            catch (const input_error& err) { throw parse_error(err.what(), at); }
        }
        return parse_power();
    }

    Expr parse_power() {
        Expr base = parse_atom();
        if (!consume('^')) return base;
        std::size_t at = pos_;
        Expr exponent = parse_unary();
        if (exponent->kind() == Kind::Identity) {
            if (!is_const(base)) throw parse_error("exponential base must be a constant", at);
            try { return exp_base(p_, base->constant()); }
            catch (const input_error& err) { throw parse_error(err.what(), at); }
        }
        if (!is_const(exponent) || exponent->constant() < 0 || exponent->constant() > 64)
            throw parse_error("power needs a constant exponent in [0, 64] or the form c^x", at);
        unsigned long n = exponent->constant().get_ui();
        if (is_const(base)) {
            mpz_class r;
            mpz_pow_ui(r.get_mpz_t(), base->constant().get_mpz_t(), n);
            return constant(p_, r);
        }
        if (n == 0) return constant(p_, 1);
        Expr e = base;
        for (unsigned long i = 1; i < n; ++i) e = mul(e, base);
        return e;
    }

    Expr parse_atom() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of expression");
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Expr e = parse_sum();
            if (!consume(')')) fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            return constant(p_, mpz_class(std::string(text_.substr(start, pos_ - start)), 10));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
            std::string name(text_.substr(start, pos_ - start));
            if (name == "x") return identity(p_);
            auto it = consts_.find(name);
            if (it == consts_.end())
                throw parse_error("unknown name '" + name + "' (bind it with --const)", start);
            return constant(p_, it->second);
        }
        fail(std::string("unexpected character '") + c + "'");
    }
};

} // namespace

Expr parse_expr(std::string_view text, unsigned p,
                const std::map<std::string, mpz_class>& constants) {
    require_prime(p);
    return Parser(text, p, constants).parse();
}

} // namespace zpa
