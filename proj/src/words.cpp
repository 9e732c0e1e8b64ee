#include "specrad/words.hpp"

#include <algorithm>

namespace specrad::fg {

char Letter::to_char() const {
    const char base = is_inverse() ? 'A' : 'a';
    return static_cast<char>(base + generator());
}

Letter Letter::from_char(char c) {
    if (c >= 'a' && c <= 'z') return Letter::positive(static_cast<unsigned>(c - 'a'));
    if (c >= 'A' && c <= 'Z') return Letter::negative(static_cast<unsigned>(c - 'A'));
    fail(std::string("invalid generator character '") + c + "'");
}

Word reduce(std::span<const Letter> raw) {
    std::vector<Letter> out;
    out.reserve(raw.size());
    for (Letter s : raw) {
        if (!out.empty() && out.back() == s.inverse()) {
            out.pop_back();
        } else {
            out.push_back(s);
        }
    }
    Word w;
    w.letters_ = std::move(out);  // stack result is already reduced
    return w;
}

Word::Word(std::span<const Letter> raw) { *this = reduce(raw); }

Word::Word(std::initializer_list<Letter> raw) {
    *this = reduce(std::span<const Letter>(raw.begin(), raw.size()));
}

Word Word::parse(std::string_view text) {
    std::vector<Letter> raw;
    raw.reserve(text.size());
    for (char c : text) {
        if (c == ' ' || c == '\t') continue;
        raw.push_back(Letter::from_char(c));
    }
    return Word(std::span<const Letter>(raw));
}

Word Word::inverse() const {
    std::vector<Letter> raw;
    raw.reserve(letters_.size());
    for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) raw.push_back(it->inverse());
    return Word(std::span<const Letter>(raw));
}

Word Word::operator*(const Word& rhs) const {
    std::vector<Letter> raw;
    raw.reserve(letters_.size() + rhs.letters_.size());
    raw.insert(raw.end(), letters_.begin(), letters_.end());
    raw.insert(raw.end(), rhs.letters_.begin(), rhs.letters_.end());
    return Word(std::span<const Letter>(raw));
}

std::strong_ordering Word::operator<=>(const Word& rhs) const {
    if (auto c = letters_.size() <=> rhs.letters_.size(); c != 0) return c;
    for (std::size_t i = 0; i < letters_.size(); ++i) {
        if (auto c = letters_[i].code() <=> rhs.letters_[i].code(); c != 0) return c;
    }
    return std::strong_ordering::equal;
}

std::string Word::str() const {
    std::string s;
    s.reserve(letters_.size());
    for (Letter l : letters_) s.push_back(l.to_char());
    return s;
}

std::vector<Letter> GeneratorSet::letters() const {
    std::vector<Letter> out;
    out.reserve(2 * rank);
    for (unsigned c = 0; c < 2 * rank; ++c) out.push_back(Letter(c));
    return out;
}

std::vector<Word> GeneratorSet::power_ball() const { return power_ball_words(rank, power_radius); }

std::size_t GeneratorSet::power_ball_size() const {
    std::size_t total = 0, layer = 2 * rank;
    for (unsigned l = 1; l <= power_radius; ++l) {
        total += layer;
        layer *= 2 * rank - 1;
    }
    return total;
}

std::vector<Word> power_ball_words(unsigned rank, unsigned m) {
    require(rank >= 1 && rank <= kMaxRank, "rank out of range");
    require(m >= 1, "power radius must be >= 1");
    std::vector<Word> out;
    std::vector<Letter> prefix;
    // depth-first in letter-code order yields shortlex order per length layer;
    // emit layer by layer to get global shortlex
    auto extend = [&](auto&& self, unsigned target_len) -> void {
        if (prefix.size() == target_len) {
            out.push_back(Word(std::span<const Letter>(prefix)));
            return;
        }
        for (unsigned c = 0; c < 2 * rank; ++c) {
            Letter s{c};
            if (!prefix.empty() && prefix.back() == s.inverse()) continue;
            prefix.push_back(s);
            self(self, target_len);
            prefix.pop_back();
        }
    };
    for (unsigned len = 1; len <= m; ++len) extend(extend, len);
    return out;
}

}  // namespace specrad::fg
