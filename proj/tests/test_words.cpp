#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "specrad/words.hpp"

#include <random>

using namespace specrad;
using namespace specrad::fg;

namespace {

Word W(const char* s) { return Word::parse(s); }

// uniformly random raw letter sequence, not necessarily reduced
std::vector<Letter> random_raw(std::mt19937& rng, unsigned rank, std::size_t len) {
    std::vector<Letter> out;
    for (std::size_t i = 0; i < len; ++i) out.push_back(Letter(rng() % (2 * rank)));
    return out;
}

}  // namespace

TEST_CASE("letter encoding and order") {
    Letter a = Letter::positive(0);
    CHECK(a.to_char() == 'a');
    CHECK(a.inverse().to_char() == 'A');
    CHECK(a.inverse().inverse() == a);
    CHECK(Letter::from_char('B') == Letter::negative(1));
    CHECK(a < a.inverse());
    CHECK(a.inverse() < Letter::positive(1));
}

TEST_CASE("reduce cancels adjacent inverses") {
    CHECK(W("aA").is_identity());
    CHECK(W("abBa") == W("aa"));
    CHECK(W("aba") == W("aba"));  // already reduced stays put
}

TEST_CASE("reduce is idempotent and length-nonincreasing") {
    std::mt19937 rng(20240811);
    for (int trial = 0; trial < 500; ++trial) {
        auto raw = random_raw(rng, 3, rng() % 20);
        Word once = reduce(raw);
        Word twice = reduce(std::span<const Letter>(once.letters()));
        CHECK(once == twice);
        CHECK(once.length() <= raw.size());
        // parity of length is preserved by cancellation
        CHECK((once.length() % 2) == (raw.size() % 2));
    }
}

TEST_CASE("word algebra") {
    CHECK(W("ab") * W("Ba") == W("aa"));
    CHECK(W("aBa").inverse() == W("AbA"));
    CHECK((W("ab") * W("ab").inverse()).is_identity());
    CHECK(W("aBa").str() == "aBa");
}

TEST_CASE("shortlex order") {
    CHECK(W("") < W("a"));
    CHECK(W("a") < W("A"));
    CHECK(W("A") < W("b"));
    CHECK(W("B") < W("aa"));
    CHECK(W("aa") < W("ab"));
}

TEST_CASE("power ball words") {
    auto s1 = power_ball_words(3, 1);
    REQUIRE(s1.size() == 6);
    CHECK(s1[0] == W("a"));
    CHECK(s1[5] == W("C"));

    auto s2 = power_ball_words(2, 2);
    CHECK(s2.size() == 4 + 12);  // nonidentity reduced words of length <= 2
    GeneratorSet gs{2, 2};
    CHECK(gs.power_ball_size() == s2.size());
    // inversion-closed, identity-free, shortlex sorted
    for (const Word& w : s2) {
        CHECK(!w.is_identity());
        CHECK(std::find(s2.begin(), s2.end(), w.inverse()) != s2.end());
    }
    CHECK(std::is_sorted(s2.begin(), s2.end()));
}
