#pragma once

#include "specrad/words.hpp"

#include <cstdint>
#include <vector>

namespace specrad::fg {

inline constexpr std::uint32_t kNoState = 0xffffffffu;

// Letters encode generators in 7 bits; parsing (a..z/A..Z) caps at kMaxRank,
// internal alphabets (fundamental-group bases) may go up to kMaxFoldRank.
inline constexpr unsigned kMaxFoldRank = 120;

// A finitely generated subgroup given by a (possibly redundant) generator list.
// The list order is part of the value; folding is deterministic anyway.
struct SubgroupSpec {
    std::vector<Word> generators;

    static SubgroupSpec parse(std::string_view comma_separated);
    std::string str() const;
};

// H^g = g^-1 H g, generator by generator.
SubgroupSpec conjugate(const SubgroupSpec& H, const Word& g);

// Folded core automaton of a finitely generated subgroup of the rank-k free
// group. State 0 is the base; states are numbered canonically by BFS from the
// base in letter-code order, so equal subgroups give structurally equal
// automata. Transitions are involutive: t(u, s) = v implies t(v, s^-1) = u.
class CoreAutomaton {
public:
    unsigned rank() const { return rank_; }
    std::uint32_t state_count() const { return static_cast<std::uint32_t>(table_.size() / (2 * rank_)); }
    std::uint32_t base() const { return 0; }

    std::uint32_t transition(std::uint32_t state, Letter s) const {
        return table_[static_cast<std::size_t>(state) * 2 * rank_ + s.code()];
    }
    bool has_transition(std::uint32_t state, Letter s) const {
        return transition(state, s) != kNoState;
    }

    // runs the word from the base; kNoState if it falls off the core
    std::uint32_t read(const Word& w) const;
    std::uint32_t read_from(std::uint32_t state, const Word& w) const;

    std::size_t directed_edge_count() const;

    bool operator==(const CoreAutomaton&) const = default;

private:
    friend CoreAutomaton fold(const SubgroupSpec&, unsigned rank);
    unsigned rank_ = 1;
    std::vector<std::uint32_t> table_;  // state * 2k + letter code
};

// Stallings folding of the wedge of generator loops, followed by canonical
// BFS renumbering. Generators must be reduced (Word guarantees it); identity
// generators are ignored.
CoreAutomaton fold(const SubgroupSpec& H, unsigned rank);

// w in H, for reduced w: the path from the base must stay defined and end at
// the base.
bool member(const CoreAutomaton& A, const Word& w);

// { w in S^(m) : member(A, w) }, shortlex sorted. Inversion-closed and
// identity-free by construction.
std::vector<Word> intersect_power_ball(const CoreAutomaton& A, unsigned m);

// Rank of the (free) subgroup: undirected edges - states + 1.
unsigned free_rank(const CoreAutomaton& A);

}  // namespace specrad::fg
