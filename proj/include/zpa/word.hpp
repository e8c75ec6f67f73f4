#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace zpa {

// A finite word over the alphabet {0..p-1}. Letter 0 is the rightmost letter
// of the printed form and the first one fed to an automaton; leading
// (leftmost) zeros are significant, so "01" != "1". The empty word is a
// first-class value.
class Word {
public:
    explicit Word(unsigned prime);
    Word(unsigned prime, std::vector<std::uint32_t> letters);

    // Text is most-significant-letter first, e.g. "0101".
    static Word parse(std::string_view text, unsigned p);

    // Length-n base-p expansion of v, zero-padded on the left; v < p^n.
    static Word from_value(const mpz_class& v, std::size_t length, unsigned p);

    unsigned prime() const { return prime_; }
    std::size_t length() const { return letters_.size(); }
    bool empty() const { return letters_.empty(); }
    std::uint32_t letter(std::size_t i) const;

    // Base-p value of the word.
    mpz_class value() const;

    std::string to_string() const; // most significant letter first; "" when empty

    bool operator==(const Word&) const = default;

private:
    unsigned prime_;
    std::vector<std::uint32_t> letters_;
};

// a followed by b, with b occupying the low (first-fed) positions:
// value(concat(a, b)) = value(b) + p^len(b) * value(a).
Word concat(const Word& a, const Word& b);

// 1-based position of a nonempty word in shortlex order (shorter words
// first, same-length words by numeric value). Ranks of length-n words form
// the block [(p^n - p)/(p - 1) + 1, (p^{n+1} - p)/(p - 1)].
mpz_class shortlex_rank(const Word& w);

// Inverse of shortlex_rank; rank 0 names the empty word.
Word shortlex_unrank(const mpz_class& rank, unsigned p);

} // namespace zpa
