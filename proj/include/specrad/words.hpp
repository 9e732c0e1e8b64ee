#pragma once

#include "specrad/types.hpp"

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace specrad::fg {

inline constexpr unsigned kMaxRank = 26;

// A generator or its inverse. Encoded as 2*gen for the positive letter and
// 2*gen+1 for its inverse, so code order is a < a^-1 < b < b^-1 < ... .
// That order is the canonical letter order used everywhere (BFS numbering,
// shortlex word order, slot layout of labeled graphs).
class Letter {
public:
    constexpr explicit Letter(unsigned code) : code_(static_cast<std::uint8_t>(code)) {}

    static constexpr Letter positive(unsigned gen) { return Letter(2 * gen); }
    static constexpr Letter negative(unsigned gen) { return Letter(2 * gen + 1); }

    constexpr unsigned generator() const { return code_ >> 1; }
    constexpr bool is_inverse() const { return (code_ & 1u) != 0; }
    constexpr Letter inverse() const { return Letter(code_ ^ 1u); }
    constexpr unsigned code() const { return code_; }

    friend constexpr auto operator<=>(Letter a, Letter b) = default;

    // 'a'..'z' positive, 'A'..'Z' inverse.
    char to_char() const;
    static Letter from_char(char c);

private:
    std::uint8_t code_;
};

// Freely reduced word over the rank-k alphabet; the empty word is the identity.
// Reduction is a class invariant: every constructor reduces.
class Word {
public:
    Word() = default;
    explicit Word(std::span<const Letter> raw);
    explicit Word(std::initializer_list<Letter> raw);

    // Parses "aBa" = a b^-1 a. Throws on characters outside [a-zA-Z].
    static Word parse(std::string_view text);

    const std::vector<Letter>& letters() const { return letters_; }
    std::size_t length() const { return letters_.size(); }
    bool is_identity() const { return letters_.empty(); }

    Word inverse() const;
    Word operator*(const Word& rhs) const;  // concatenation followed by reduction
    Word conjugated_by(const Word& g) const { return g.inverse() * (*this) * g; }

    bool operator==(const Word&) const = default;

    // shortlex: by length, then letter codes
    std::strong_ordering operator<=>(const Word& rhs) const;

    std::string str() const;  // "" rendered as "e" by callers that want display text

private:
    friend Word reduce(std::span<const Letter> raw);
    std::vector<Letter> letters_;
};

// Free reduction of a raw letter sequence; idempotent, length-nonincreasing.
Word reduce(std::span<const Letter> raw);

// The symmetric generating set S of the rank-k free group together with the
// power radius m defining the derived set S^(m): all nonidentity reduced
// words of length <= m (closed under inversion).
struct GeneratorSet {
    unsigned rank = 1;
    unsigned power_radius = 1;

    std::vector<Letter> letters() const;           // the 2k letters in code order
    std::vector<Word> power_ball() const;          // S^(power_radius), shortlex sorted
    std::size_t power_ball_size() const;           // sum over l<=m of 2k(2k-1)^(l-1)
};

// All nonidentity reduced words of length <= m over rank k, shortlex sorted.
std::vector<Word> power_ball_words(unsigned rank, unsigned m);

}  // namespace specrad::fg
