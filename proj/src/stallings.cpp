#include "specrad/stallings.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <queue>
#include <sstream>

namespace specrad::fg {

SubgroupSpec SubgroupSpec::parse(std::string_view text) {
    SubgroupSpec spec;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t comma = text.find(',', start);
        std::string_view piece = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
        // trim spaces
        while (!piece.empty() && piece.front() == ' ') piece.remove_prefix(1);
        while (!piece.empty() && piece.back() == ' ') piece.remove_suffix(1);
        if (!piece.empty() && piece != "e") spec.generators.push_back(Word::parse(piece));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return spec;
}

std::string SubgroupSpec::str() const {
    std::string out;
    for (std::size_t i = 0; i < generators.size(); ++i) {
        if (i) out += ",";
        out += generators[i].is_identity() ? "e" : generators[i].str();
    }
    return out;
}

SubgroupSpec conjugate(const SubgroupSpec& H, const Word& g) {
    SubgroupSpec out;
    out.generators.reserve(H.generators.size());
    for (const Word& w : H.generators) out.generators.push_back(w.conjugated_by(g));
    return out;
}

namespace {

// Mutable multigraph used during folding: per state, a list of (letter, target)
// directed half-edges, kept involutively (adding u -s-> v also adds v -s^-1-> u).
struct FoldBuilder {
    unsigned rank;
    std::vector<std::uint32_t> parent;                                   // union-find
    std::vector<std::vector<std::pair<std::uint8_t, std::uint32_t>>> adj;

    explicit FoldBuilder(unsigned k) : rank(k) {}

    std::uint32_t make_state() {
        parent.push_back(static_cast<std::uint32_t>(parent.size()));
        adj.emplace_back();
        return parent.back();
    }

    std::uint32_t find(std::uint32_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }

    void add_edge(std::uint32_t u, Letter s, std::uint32_t v) {
        adj[u].emplace_back(static_cast<std::uint8_t>(s.code()), v);
        adj[v].emplace_back(static_cast<std::uint8_t>(s.inverse().code()), u);
    }

    // Merge the classes of a and b; returns the surviving representative.
    std::uint32_t merge(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return a;
        if (adj[a].size() < adj[b].size()) std::swap(a, b);
        parent[b] = a;
        adj[a].insert(adj[a].end(), adj[b].begin(), adj[b].end());
        adj[b].clear();
        adj[b].shrink_to_fit();
        return a;
    }
};

}  // namespace

CoreAutomaton fold(const SubgroupSpec& H, unsigned rank) {
    require(rank >= 1 && rank <= kMaxFoldRank, "rank out of range");
    for (const Word& w : H.generators) {
        for (Letter s : w.letters()) {
            require(s.generator() < rank, "generator word '" + w.str() + "' uses a letter outside rank " + std::to_string(rank));
        }
    }

    FoldBuilder b(rank);
    const std::uint32_t base = b.make_state();

    // wedge of generator loops
    for (const Word& w : H.generators) {
        if (w.is_identity()) continue;
        std::uint32_t cur = base;
        const auto& ls = w.letters();
        for (std::size_t i = 0; i < ls.size(); ++i) {
            std::uint32_t nxt = (i + 1 == ls.size()) ? base : b.make_state();
            b.add_edge(cur, ls[i], nxt);
            cur = nxt;
        }
    }

    // fold until deterministic: any state with two equal-label out-edges to
    // distinct targets forces a merge of the targets
    std::deque<std::uint32_t> work;
    for (std::uint32_t s = 0; s < b.parent.size(); ++s) work.push_back(s);
    while (!work.empty()) {
        std::uint32_t u = b.find(work.front());
        work.pop_front();
        std::uint32_t seen[2 * kMaxFoldRank];
        std::fill(seen, seen + 2 * rank, kNoState);
        bool merged_here = false;
        auto& edges = b.adj[u];
        for (std::size_t i = 0; i < edges.size(); ++i) {
            std::uint8_t code = edges[i].first;
            std::uint32_t t = b.find(edges[i].second);
            edges[i].second = t;
            if (seen[code] == kNoState) {
                seen[code] = t;
            } else if (seen[code] != t) {
                std::uint32_t kept = b.merge(seen[code], t);
                work.push_back(kept);
                work.push_back(u);  // u may still have duplicates (or == kept)
                merged_here = true;
                break;
            }
        }
        if (merged_here) continue;
    }

    // canonical BFS renumbering from the base in letter order
    const std::uint32_t root = b.find(base);
    std::vector<std::uint32_t> order;
    std::map<std::uint32_t, std::uint32_t> id_of;
    std::queue<std::uint32_t> q;
    id_of[root] = 0;
    order.push_back(root);
    q.push(root);
    // deterministic per-state transition lookup: smallest target wins is not
    // needed (folding made them unique); collect into letter-indexed slots
    auto slots_of = [&](std::uint32_t rep) {
        std::vector<std::uint32_t> slots(2 * rank, kNoState);
        for (auto [code, t] : b.adj[rep]) {
            std::uint32_t ft = b.find(t);
            check_internal(slots[code] == kNoState || slots[code] == ft, "folding left a nondeterministic state");
            slots[code] = ft;
        }
        return slots;
    };
    while (!q.empty()) {
        std::uint32_t u = q.front();
        q.pop();
        for (std::uint32_t t : slots_of(u)) {
            if (t == kNoState) continue;
            if (id_of.emplace(t, static_cast<std::uint32_t>(order.size())).second) {
                order.push_back(t);
                q.push(t);
            }
        }
    }

    CoreAutomaton A;
    A.rank_ = rank;
    A.table_.assign(static_cast<std::size_t>(order.size()) * 2 * rank, kNoState);
    for (std::uint32_t new_id = 0; new_id < order.size(); ++new_id) {
        auto slots = slots_of(order[new_id]);
        for (unsigned c = 0; c < 2 * rank; ++c) {
            if (slots[c] != kNoState) A.table_[static_cast<std::size_t>(new_id) * 2 * rank + c] = id_of.at(slots[c]);
        }
    }
    return A;
}

std::uint32_t CoreAutomaton::read_from(std::uint32_t state, const Word& w) const {
    std::uint32_t cur = state;
    for (Letter s : w.letters()) {
        cur = transition(cur, s);
        if (cur == kNoState) return kNoState;
    }
    return cur;
}

std::uint32_t CoreAutomaton::read(const Word& w) const { return read_from(base(), w); }

std::size_t CoreAutomaton::directed_edge_count() const {
    std::size_t n = 0;
    for (std::uint32_t t : table_) {
        if (t != kNoState) ++n;
    }
    return n;
}

bool member(const CoreAutomaton& A, const Word& w) { return A.read(w) == A.base(); }

std::vector<Word> intersect_power_ball(const CoreAutomaton& A, unsigned m) {
    require(m >= 1, "power radius must be >= 1");
    std::vector<Word> out;
    std::vector<Letter> prefix;
    // DFS over reduced words whose path stays inside the core; a prefix that
    // falls off the core cannot be extended to a member, so prune there
    auto walk = [&](auto&& self, std::uint32_t state) -> void {
        if (!prefix.empty() && state == A.base()) out.push_back(Word(std::span<const Letter>(prefix)));
        if (prefix.size() == m) return;
        for (unsigned c = 0; c < 2 * A.rank(); ++c) {
            Letter s{c};
            if (!prefix.empty() && prefix.back() == s.inverse()) continue;
            std::uint32_t nxt = A.transition(state, s);
            if (nxt == kNoState) continue;
            prefix.push_back(s);
            self(self, nxt);
            prefix.pop_back();
        }
    };
    walk(walk, A.base());
    std::sort(out.begin(), out.end());
    return out;
}

unsigned free_rank(const CoreAutomaton& A) {
    std::size_t undirected = A.directed_edge_count() / 2;
    return static_cast<unsigned>(undirected - A.state_count() + 1);
}

}  // namespace specrad::fg
