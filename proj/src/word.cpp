#include "zpa/word.hpp"

#include "zpa/errors.hpp"
#include "zpa/numutil.hpp"

namespace zpa {

namespace {

// Rank of the first length-n word: (p^n - p)/(p - 1) + 1, n >= 1.
mpz_class block_start(std::size_t n, unsigned p) {
    mpz_class r = (pow_int(p, static_cast<unsigned>(n)) - p) / (p - 1);
    return r + 1;
}

} // namespace

Word::Word(unsigned prime) : prime_(prime) { require_prime(prime_); }

Word::Word(unsigned prime, std::vector<std::uint32_t> letters)
    : prime_(prime), letters_(std::move(letters)) {
    require_prime(prime_);
    for (auto a : letters_)
        if (a >= prime_) throw input_error("letter out of range for prime");
}

Word Word::parse(std::string_view text, unsigned p) {
    std::vector<std::uint32_t> letters(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[text.size() - 1 - i];
        std::uint32_t d;
        if (c >= '0' && c <= '9') d = static_cast<std::uint32_t>(c - '0');
        else if (c >= 'a' && c <= 'z') d = static_cast<std::uint32_t>(c - 'a' + 10);
        else throw input_error(std::string("invalid letter '") + c + "' in word");
        letters[i] = d;
    }
    return Word(p, std::move(letters));
}

Word Word::from_value(const mpz_class& v, std::size_t length, unsigned p) {
    require_prime(p);
    if (v < 0 || v >= pow_int(p, static_cast<unsigned>(length)))
        throw input_error("value does not fit in a word of the requested length");
    std::vector<std::uint32_t> letters(length);
    mpz_class rest = v;
    for (std::size_t i = 0; i < length; ++i) {
        letters[i] = static_cast<std::uint32_t>(mpz_fdiv_ui(rest.get_mpz_t(), p));
        rest /= p;
    }
    return Word(p, std::move(letters));
}

std::uint32_t Word::letter(std::size_t i) const {
    if (i >= letters_.size()) throw input_error("letter index beyond word length");
    return letters_[i];
}

mpz_class Word::value() const {
    mpz_class acc = 0;
    for (std::size_t i = letters_.size(); i > 0; --i) {
        acc *= prime_;
        acc += letters_[i - 1];
    }
    return acc;
}

std::string Word::to_string() const {
    std::string s;
    s.reserve(letters_.size());
    for (std::size_t i = letters_.size(); i > 0; --i) {
        std::uint32_t d = letters_[i - 1];
        s += d < 10 ? static_cast<char>('0' + d) : static_cast<char>('a' + (d - 10));
    }
    return s;
}

Word concat(const Word& a, const Word& b) {
    if (a.prime() != b.prime()) throw input_error("cannot concatenate words over different alphabets");
    std::vector<std::uint32_t> letters;
    letters.reserve(a.length() + b.length());
    for (std::size_t i = 0; i < b.length(); ++i) letters.push_back(b.letter(i));
    for (std::size_t i = 0; i < a.length(); ++i) letters.push_back(a.letter(i));
    return Word(a.prime(), std::move(letters));
}

mpz_class shortlex_rank(const Word& w) {
    if (w.empty()) throw input_error("shortlex rank is undefined on the empty word");
    return block_start(w.length(), w.prime()) + w.value();
}

Word shortlex_unrank(const mpz_class& rank, unsigned p) {
    require_prime(p);
    if (rank < 0) throw input_error("rank must be nonnegative");
    if (rank == 0) return Word(p);
    std::size_t n = 1;
    while (block_start(n + 1, p) <= rank) ++n;
    return Word::from_value(rank - block_start(n, p), n, p);
}

} // namespace zpa
