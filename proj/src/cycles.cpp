#include "specrad/cycles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <sstream>

namespace specrad::cycles {

namespace {

std::size_t edge_index(const LabeledGraph& g, EdgeRef e) {
    return static_cast<std::size_t>(e.v) * g.degree() + e.slot;
}

void check_nb_radius(const LabeledGraph& g, VertexId x, unsigned k) {
    if (g.complete()) return;
    if (g.depth(x) + k > *g.ball_radius()) {
        fail("ball radius " + std::to_string(*g.ball_radius()) + " too small for " + std::to_string(k) +
             " non-backtracking steps from a vertex at depth " + std::to_string(g.depth(x)));
    }
}

}  // namespace

Int nb_walk_count(const LabeledGraph& g, VertexId u, VertexId v, unsigned k) {
    require(k >= 1, "walk length must be >= 1");
    check_nb_radius(g, u, k);
    const std::size_t E = g.vertex_count() * g.degree();
    std::vector<Int> cur(E, 0), next(E, 0);
    for (std::uint32_t s = 0; s < g.degree(); ++s) {
        if (g.has_edge(u, s)) cur[edge_index(g, EdgeRef{u, s})] = 1;
    }
    for (unsigned step = 1; step < k; ++step) {
        std::fill(next.begin(), next.end(), Int(0));
        for (VertexId w = 0; w < g.vertex_count(); ++w) {
            for (std::uint32_t s = 0; s < g.degree(); ++s) {
                EdgeRef e{w, s};
                if (!g.has_edge(w, s)) continue;
                const Int& c = cur[edge_index(g, e)];
                if (c == 0) continue;
                const VertexId t = g.target(w, s);
                const EdgeRef back = g.reverse(e);
                for (std::uint32_t s2 = 0; s2 < g.degree(); ++s2) {
                    EdgeRef e2{t, s2};
                    if (!g.has_edge(t, s2) || e2 == back) continue;
                    next[edge_index(g, e2)] += c;
                }
            }
        }
        cur.swap(next);
    }
    Int total = 0;
    for (VertexId w = 0; w < g.vertex_count(); ++w) {
        for (std::uint32_t s = 0; s < g.degree(); ++s) {
            if (g.has_edge(w, s) && g.target(w, s) == v) total += cur[edge_index(g, EdgeRef{w, s})];
        }
    }
    return total;
}

Int PowerGraph::power_degree() const {
    Int deg = base_degree_;
    for (unsigned i = 1; i < k_; ++i) deg *= base_degree_ - 1;
    return deg;
}

Int PowerGraph::multiplicity(VertexId v1, VertexId v2) const {
    auto it = rows_[v1].find(v2);
    return it == rows_[v1].end() ? Int(0) : it->second;
}

PowerGraph graph_power(const LabeledGraph& g, unsigned k) {
    require(k >= 1, "power order must be >= 1");
    require(g.degree() >= 2, "power graph needs degree >= 2");
    PowerGraph p;
    p.k_ = k;
    p.base_degree_ = g.degree();
    p.rows_.assign(g.vertex_count(), {});
    p.exact_.assign(g.vertex_count(), 0);
    const Int expected = p.power_degree();

    // per-source edge DP, as in nb_walk_count but collecting a full row
    const std::size_t E = g.vertex_count() * g.degree();
    std::vector<Int> cur(E), next(E);
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        const bool exact = g.complete() || (g.depth(v) + k <= *g.ball_radius());
        if (!exact) continue;
        p.exact_[v] = 1;
        std::fill(cur.begin(), cur.end(), Int(0));
        for (std::uint32_t s = 0; s < g.degree(); ++s) {
            if (g.has_edge(v, s)) cur[edge_index(g, EdgeRef{v, s})] = 1;
        }
        for (unsigned step = 1; step < k; ++step) {
            std::fill(next.begin(), next.end(), Int(0));
            for (VertexId w = 0; w < g.vertex_count(); ++w) {
                for (std::uint32_t s = 0; s < g.degree(); ++s) {
                    EdgeRef e{w, s};
                    if (!g.has_edge(w, s)) continue;
                    const Int& c = cur[edge_index(g, e)];
                    if (c == 0) continue;
                    const VertexId t = g.target(w, s);
                    const EdgeRef back = g.reverse(e);
                    for (std::uint32_t s2 = 0; s2 < g.degree(); ++s2) {
                        if (!g.has_edge(t, s2) || EdgeRef{t, s2} == back) continue;
                        next[edge_index(g, EdgeRef{t, s2})] += c;
                    }
                }
            }
            cur.swap(next);
        }
        auto& row = p.rows_[v];
        for (VertexId w = 0; w < g.vertex_count(); ++w) {
            for (std::uint32_t s = 0; s < g.degree(); ++s) {
                if (!g.has_edge(w, s)) continue;
                const Int& c = cur[edge_index(g, EdgeRef{w, s})];
                if (c != 0) row[g.target(w, s)] += c;
            }
        }
        Int sum = 0;
        for (auto& [t, m] : row) sum += m;
        check_internal(sum == expected, "power graph row sum violates d(d-1)^(k-1) regularity");
    }
    return p;
}

std::string power_graph_to_string(const PowerGraph& p) {
    std::ostringstream out;
    out << "vertices " << p.vertex_count() << " degree " << p.power_degree() << "\n";
    bool has_loops = false;
    for (VertexId v = 0; v < p.vertex_count(); ++v) {
        if (p.multiplicity(v, v) > 0) has_loops = true;
    }
    // power loops count once toward the degree, which is the half-loop
    // convention of the file format
    if (has_loops) out << "loops half\n";
    for (VertexId v = 0; v < p.vertex_count(); ++v) {
        for (auto& [u, m] : p.row(v)) {
            if (u >= v) out << v << " " << u << " " << m << "\n";
        }
    }
    return out.str();
}

spectral::Spectrum eigenvalues_power(const PowerGraph& p) {
    const std::size_t n = p.vertex_count();
    for (VertexId v = 0; v < n; ++v) {
        require(p.row_exact(v), "power graph has inexact rows; finite complete base required");
    }
    std::vector<double> dense(n * n, 0.0);
    double trace = 0.0, frob = 0.0;
    for (VertexId v = 0; v < n; ++v) {
        for (auto& [u, m] : p.row(v)) {
            const double mv = m.convert_to<double>();
            dense[static_cast<std::size_t>(v) * n + u] = mv;
            if (u == v) trace += mv;
            frob += mv * mv;
        }
    }
    const double scale = p.power_degree().convert_to<double>();
    return spectral::eigenvalues_symmetric(dense, n, trace, frob, scale);
}

RamanujanPowerReport ramanujan_power_check(const LabeledGraph& g, unsigned k, double tol) {
    require(g.complete(), "ramanujan power check needs a finite graph");
    RamanujanPowerReport rep;
    rep.base = spectral::is_ramanujan_finite(g, tol);

    PowerGraph p = graph_power(g, k);
    // connectivity of the power graph from its own adjacency
    const std::size_t n = p.vertex_count();
    std::vector<char> seen(n, 0);
    std::queue<VertexId> q;
    q.push(0);
    seen[0] = 1;
    std::size_t visited = 1;
    while (!q.empty()) {
        VertexId v = q.front();
        q.pop();
        for (auto& [u, m] : p.row(v)) {
            if (!seen[u]) {
                seen[u] = 1;
                ++visited;
                q.push(u);
            }
        }
    }
    const unsigned d_power = static_cast<unsigned>(p.power_degree().convert_to<std::uint64_t>());
    rep.powered = spectral::ramanujan_from_spectrum(eigenvalues_power(p), d_power, visited == n, tol);
    rep.agree = rep.base.ramanujan == rep.powered.ramanujan;
    return rep;
}

std::optional<CycleWitness> cycle_indicator(const LabeledGraph& g, VertexId x, unsigned k) {
    require(k >= 1, "cycle length must be >= 1");
    check_nb_radius(g, x, k);
    std::vector<EdgeRef> path;
    path.reserve(k);
    auto dfs = [&](auto&& self, VertexId at) -> bool {
        if (path.size() == k) {
            if (at != x) return false;
            // cyclic closure: the first edge must not reverse the last
            return path.front() != g.reverse(path.back());
        }
        for (std::uint32_t s = 0; s < g.degree(); ++s) {
            EdgeRef e{at, s};
            if (!g.has_edge(at, s)) continue;
            if (!path.empty() && e == g.reverse(path.back())) continue;
            path.push_back(e);
            if (self(self, g.target(at, s))) return true;
            path.pop_back();
        }
        return false;
    };
    if (dfs(dfs, x)) return CycleWitness{path};
    return std::nullopt;
}

bool verify_cycle(const LabeledGraph& g, VertexId x, unsigned k, const CycleWitness& w) {
    if (w.edges.size() != k) return false;
    VertexId at = x;
    for (std::size_t i = 0; i < k; ++i) {
        EdgeRef e = w.edges[i];
        if (e.v != at || !g.has_edge(e.v, e.slot)) return false;
        if (i > 0 && e == g.reverse(w.edges[i - 1])) return false;
        at = g.target(e.v, e.slot);
    }
    return at == x && w.edges.front() != g.reverse(w.edges.back());
}

namespace {

// Fundamental-group word of a closed walk: BFS spanning tree of the window;
// each non-tree undirected edge gets a letter, tree edges read as identity.
// The induced map on closed walks at any base point is an injective
// homomorphism into the free group on the non-tree edges, so subgroup ranks
// are preserved.
struct Pi1Chart {
    std::vector<std::int32_t> letter_of;  // per directed edge: letter code, -1 tree/absent
    unsigned basis_size = 0;
    bool overflow = false;

    explicit Pi1Chart(const LabeledGraph& g) {
        const std::size_t E = g.vertex_count() * g.degree();
        letter_of.assign(E, -1);
        std::vector<char> in_tree_edge(E, 0);
        std::vector<char> visited(g.vertex_count(), 0);
        std::queue<VertexId> q;
        visited[g.root()] = 1;
        q.push(g.root());
        while (!q.empty()) {
            VertexId v = q.front();
            q.pop();
            for (std::uint32_t s = 0; s < g.degree(); ++s) {
                if (!g.has_edge(v, s)) continue;
                VertexId u = g.target(v, s);
                if (visited[u]) continue;
                visited[u] = 1;
                EdgeRef e{v, s};
                in_tree_edge[edge_index(g, e)] = 1;
                in_tree_edge[edge_index(g, g.reverse(e))] = 1;
                q.push(u);
            }
        }
        for (VertexId v = 0; v < g.vertex_count(); ++v) {
            for (std::uint32_t s = 0; s < g.degree(); ++s) {
                EdgeRef e{v, s};
                const std::size_t idx = edge_index(g, e);
                if (!g.has_edge(v, s) || in_tree_edge[idx] || letter_of[idx] >= 0) continue;
                if (basis_size >= fg::kMaxFoldRank) {
                    overflow = true;
                    return;
                }
                const EdgeRef r = g.reverse(e);
                letter_of[idx] = static_cast<std::int32_t>(fg::Letter::positive(basis_size).code());
                if (!(r == e)) letter_of[edge_index(g, r)] = static_cast<std::int32_t>(fg::Letter::negative(basis_size).code());
                ++basis_size;
            }
        }
    }

    fg::Word word_of(const LabeledGraph& g, const CycleWitness& c) const {
        std::vector<fg::Letter> raw;
        for (EdgeRef e : c.edges) {
            std::int32_t code = letter_of[edge_index(g, e)];
            if (code >= 0) raw.push_back(fg::Letter(static_cast<unsigned>(code)));
        }
        return fg::Word(std::span<const fg::Letter>(raw));
    }
};

}  // namespace

IndependenceResult independent_cycles(const LabeledGraph& g, VertexId x, unsigned k,
                                      std::size_t enumeration_cap) {
    require(k >= 1, "cycle length must be >= 1");
    check_nb_radius(g, x, k);

    IndependenceResult out;
    std::vector<CycleWitness> cycles;
    bool capped = false;
    std::vector<EdgeRef> path;
    auto dfs = [&](auto&& self, VertexId at) -> bool {  // returns true when capped
        if (path.size() == k) {
            if (at == x && path.front() != g.reverse(path.back())) {
                cycles.push_back(CycleWitness{path});
                if (cycles.size() > enumeration_cap) return true;
            }
            return false;
        }
        for (std::uint32_t s = 0; s < g.degree(); ++s) {
            EdgeRef e{at, s};
            if (!g.has_edge(at, s)) continue;
            if (!path.empty() && e == g.reverse(path.back())) continue;
            path.push_back(e);
            const bool stop = self(self, g.target(at, s));
            path.pop_back();
            if (stop) return true;
        }
        return false;
    };
    capped = dfs(dfs, x);
    out.cycles_enumerated = cycles.size();
    if (capped) {
        out.status = TriState::inconclusive;
        return out;
    }
    if (cycles.empty()) {
        out.status = TriState::no;
        return out;
    }

    Pi1Chart chart(g);
    if (chart.overflow) {
        out.status = TriState::inconclusive;
        return out;
    }
    std::vector<fg::Word> words;
    words.reserve(cycles.size());
    for (const auto& c : cycles) words.push_back(chart.word_of(g, c));
    std::sort(words.begin(), words.end());
    words.erase(std::unique(words.begin(), words.end()), words.end());

    const unsigned rank = std::max(chart.basis_size, 1u);
    for (std::size_t i = 0; i < words.size(); ++i) {
        for (std::size_t j = i + 1; j < words.size(); ++j) {
            if (words[j] == words[i].inverse()) continue;
            fg::SubgroupSpec pair;
            pair.generators = {words[i], words[j]};
            const unsigned r = fg::free_rank(fg::fold(pair, rank));
            if (r == 2) {
                out.status = TriState::yes;
                out.certificate = IndependenceCertificate{words[i], words[j], r};
                return out;
            }
        }
    }
    out.status = TriState::no;
    return out;
}

namespace {

// C(v, <=k) = max over k' <= k of the cycle indicator at v.
bool has_short_cycle(const LabeledGraph& g, VertexId v, unsigned k) {
    for (unsigned kk = 1; kk <= k; ++kk) {
        if (cycle_indicator(g, v, kk).has_value()) return true;
    }
    return false;
}

std::vector<Rat> density_from_counts(const std::vector<std::vector<Int>>& hits, unsigned degree) {
    std::vector<Rat> q;
    q.reserve(hits.size());
    Int denom = 1;
    for (const auto& layer : hits) {
        Int num = 0;
        for (const Int& c : layer) num += c;
        q.emplace_back(num, denom);
        denom *= degree;
    }
    return q;
}

}  // namespace

namespace {

// Extend the window to core_radius + k, re-reading core_radius as deeper core
// cosets get discovered, until it stabilizes. The core is connected, so each
// extension reaches the next core layer if one exists.
std::uint32_t ensure_core_window(BallView& space, unsigned k) {
    std::uint32_t window = space.core_radius() + k;
    for (;;) {
        space.ensure_radius(window);
        const std::uint32_t next = space.core_radius() + k;
        if (next <= window) return window;
        window = next;
    }
}

}  // namespace

std::vector<Rat> cycle_density_dp(BallView& space, unsigned k, unsigned n_max) {
    require(k >= 1, "cycle length must be >= 1");
    const std::uint32_t d = space.graph().degree();
    // The window must cover the core plus k extra levels: all cycles live in
    // the core (a cyclically non-backtracking walk cannot enter the hanging
    // forest, where its deepest step would backtrack), so indicators are
    // decidable and everything beyond the frontier is a forest of (d-1)-ary
    // cones where the indicator vanishes.
    ensure_core_window(space, k);
    const LabeledGraph& g = space.graph();
    const std::size_t V = g.vertex_count();

    std::vector<char> indicator(V, 0);
    for (VertexId v = 0; v < V; ++v) {
        if (space.is_core(v)) indicator[v] = has_short_cycle(g, v, k) ? 1 : 0;
    }

    // integer walk counts: window vertices exactly, cone levels lumped per
    // frontier vertex (every cone vertex at a level has one parent edge and
    // d-1 child edges, so level aggregates evolve exactly)
    std::vector<VertexId> frontier = g.frontier();
    std::vector<std::uint32_t> frontier_children(frontier.size());
    std::vector<std::size_t> frontier_pos(V, SIZE_MAX);
    for (std::size_t i = 0; i < frontier.size(); ++i) {
        std::uint32_t present = 0;
        for (std::uint32_t s = 0; s < d; ++s) {
            if (g.has_edge(frontier[i], s)) ++present;
        }
        frontier_children[i] = d - present;
        frontier_pos[frontier[i]] = i;
    }

    const unsigned tail_len = n_max + 1;
    std::vector<Int> cnt(V, 0), cnt_next(V, 0);
    std::vector<std::vector<Int>> tail(frontier.size(), std::vector<Int>(tail_len + 2, 0));
    std::vector<std::vector<Int>> tail_next = tail;
    cnt[g.root()] = 1;

    std::vector<std::vector<Int>> hits;
    auto record = [&]() {
        std::vector<Int> layer;
        layer.reserve(V);
        for (VertexId v = 0; v < V; ++v) layer.push_back(indicator[v] ? cnt[v] : Int(0));
        hits.push_back(std::move(layer));
    };
    record();

    for (unsigned j = 1; j <= n_max; ++j) {
        for (VertexId v = 0; v < V; ++v) {
            Int acc = 0;
            for (std::uint32_t s = 0; s < d; ++s) {
                VertexId t = g.target(v, s);
                if (t != graph::kNoVertex) acc += cnt[t];
            }
            if (frontier_pos[v] != SIZE_MAX) acc += tail[frontier_pos[v]][1];
            cnt_next[v] = std::move(acc);
        }
        for (std::size_t i = 0; i < frontier.size(); ++i) {
            auto& src = tail[i];
            auto& dst = tail_next[i];
            dst[1] = Int(frontier_children[i]) * cnt[frontier[i]] + src[2];
            for (unsigned l = 2; l <= tail_len; ++l) dst[l] = Int(d - 1) * src[l - 1] + src[l + 1];
        }
        cnt.swap(cnt_next);
        tail.swap(tail_next);
        record();
    }
    return density_from_counts(hits, d);
}

std::vector<Rat> cycle_density_dp(const LabeledGraph& finite, unsigned k, unsigned n_max) {
    require(finite.complete(), "use the BallView overload for infinite graphs");
    require(k >= 1, "cycle length must be >= 1");
    const std::size_t V = finite.vertex_count();
    std::vector<char> indicator(V, 0);
    for (VertexId v = 0; v < V; ++v) indicator[v] = has_short_cycle(finite, v, k) ? 1 : 0;

    std::vector<Int> cnt(V, 0), cnt_next(V, 0);
    cnt[finite.root()] = 1;
    std::vector<std::vector<Int>> hits;
    auto record = [&]() {
        std::vector<Int> layer;
        for (VertexId v = 0; v < V; ++v) layer.push_back(indicator[v] ? cnt[v] : Int(0));
        hits.push_back(std::move(layer));
    };
    record();
    for (unsigned j = 1; j <= n_max; ++j) {
        for (VertexId v = 0; v < V; ++v) {
            Int acc = 0;
            for (std::uint32_t s = 0; s < finite.degree(); ++s) {
                VertexId t = finite.target(v, s);
                if (t != graph::kNoVertex) acc += cnt[t];
            }
            cnt_next[v] = std::move(acc);
        }
        cnt.swap(cnt_next);
        record();
    }
    return density_from_counts(hits, finite.degree());
}

namespace {

// splitmix64: walker index -> independent stream seed
std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

struct WalkerRng {
    std::uint64_t state;
    explicit WalkerRng(std::uint64_t s) : state(s) {}
    std::uint64_t next() {
        state = splitmix64(state);
        return state;
    }
    // rejection sampling on a power-of-two mask: portable and unbiased
    std::uint32_t uniform(std::uint32_t bound) {
        std::uint32_t mask = 1;
        while (mask < bound) mask <<= 1;
        --mask;
        for (;;) {
            std::uint32_t r = static_cast<std::uint32_t>(next()) & mask;
            if (r < bound) return r;
        }
    }
};

McSeries mc_common(unsigned k, unsigned n, unsigned walkers, std::uint64_t seed,
                   const std::vector<char>& indicator, VertexId root,
                   const std::function<VertexId(VertexId, std::uint32_t)>& step, std::uint32_t degree) {
    McSeries out;
    out.walkers = walkers;
    out.seed = seed;
    (void)k;
    std::vector<std::uint64_t> hits(n + 1, 0);
    for (unsigned w = 0; w < walkers; ++w) {
        WalkerRng rng(splitmix64(seed ^ (0x517cc1b727220a95ull * (w + 1))));
        VertexId pos = root;
        if (pos < indicator.size() && indicator[pos]) ++hits[0];
        for (unsigned j = 1; j <= n; ++j) {
            pos = step(pos, rng.uniform(degree));
            if (pos < indicator.size() && indicator[pos]) ++hits[j];
        }
    }
    out.estimate.resize(n + 1);
    out.std_error.resize(n + 1);
    for (unsigned j = 0; j <= n; ++j) {
        const double q = static_cast<double>(hits[j]) / walkers;
        out.estimate[j] = q;
        out.std_error[j] = std::sqrt(q * (1.0 - q) / walkers);
    }
    return out;
}

}  // namespace

McSeries cycle_density_mc(BallView& space, unsigned k, unsigned n, unsigned walkers, std::uint64_t seed) {
    require(k >= 1 && walkers >= 1, "need k >= 1 and at least one walker");
    ensure_core_window(space, k);
    const LabeledGraph& g = space.graph();
    std::vector<char> indicator(g.vertex_count(), 0);
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        if (space.is_core(v)) indicator[v] = has_short_cycle(g, v, k) ? 1 : 0;
    }
    // beyond the window the graph is a forest: the indicator is identically 0
    auto step = [&space](VertexId v, std::uint32_t slot) { return space.step(v, fg::Letter(slot)); };
    return mc_common(k, n, walkers, seed, indicator, g.root(), step, g.degree());
}

McSeries cycle_density_mc(const LabeledGraph& finite, unsigned k, unsigned n, unsigned walkers,
                          std::uint64_t seed) {
    require(finite.complete(), "use the BallView overload for infinite graphs");
    require(k >= 1 && walkers >= 1, "need k >= 1 and at least one walker");
    std::vector<char> indicator(finite.vertex_count(), 0);
    for (VertexId v = 0; v < finite.vertex_count(); ++v) {
        indicator[v] = has_short_cycle(finite, v, k) ? 1 : 0;
    }
    auto step = [&finite](VertexId v, std::uint32_t slot) { return finite.target(v, slot); };
    return mc_common(k, n, walkers, seed, indicator, finite.root(), step, finite.degree());
}

StationarityReport stationarity_check_finite(const LabeledGraph& g, unsigned k, unsigned steps) {
    require(g.complete(), "stationarity check needs a finite graph");
    StationarityReport rep;
    rep.steps = steps;
    const std::size_t V = g.vertex_count();

    auto preserved_base = [&]() {
        std::vector<Rat> pi(V, Rat(1, static_cast<long>(V))), next(V);
        for (unsigned t = 0; t < steps; ++t) {
            for (VertexId v = 0; v < V; ++v) {
                Rat acc(0);
                for (std::uint32_t s = 0; s < g.degree(); ++s) acc += pi[g.target(v, s)];
                next[v] = acc / g.degree();
            }
            if (next != pi) return false;
            pi.swap(next);
        }
        return true;
    };
    rep.base_preserved = preserved_base();

    PowerGraph p = graph_power(g, k);
    const Rat dp(p.power_degree());
    auto preserved_power = [&]() {
        std::vector<Rat> pi(V, Rat(1, static_cast<long>(V))), next(V);
        for (unsigned t = 0; t < steps; ++t) {
            for (VertexId v = 0; v < V; ++v) {
                Rat acc(0);
                for (auto& [u, m] : p.row(v)) acc += Rat(m) * pi[u];
                next[v] = acc / dp;
            }
            if (next != pi) return false;
            pi.swap(next);
        }
        return true;
    };
    rep.power_preserved = preserved_power();
    return rep;
}

namespace {

struct UndirectedEdge {
    VertexId u, v;  // u <= v
};

// Deterministic Euler orientation + bipartite perfect matching peel one
// oriented 2-factor (a permutation) off the remaining multigraph.
struct FactorPeeler {
    std::size_t V;
    std::vector<UndirectedEdge> edges;              // all edges ever
    std::vector<char> removed;                      // per edge id
    std::vector<std::vector<std::size_t>> incident;  // vertex -> edge ids (ascending)

    explicit FactorPeeler(const LabeledGraph& g) : V(g.vertex_count()) {
        incident.resize(V);
        for (VertexId v = 0; v < V; ++v) {
            for (std::uint32_t s = 0; s < g.degree(); ++s) {
                EdgeRef e{v, s};
                EdgeRef r = g.reverse(e);
                // keep one direction per undirected edge: loops keep the
                // lower slot of the pair
                if (g.target(v, s) < v) continue;
                if (g.target(v, s) == v && r.slot < s) continue;
                std::size_t id = edges.size();
                edges.push_back(UndirectedEdge{v, g.target(v, s)});
                incident[v].push_back(id);
                if (g.target(v, s) != v) incident[g.target(v, s)].push_back(id);
            }
        }
        removed.assign(edges.size(), 0);
    }

    std::size_t remaining_degree(VertexId v) const {
        std::size_t d = 0;
        for (std::size_t id : incident[v]) {
            if (!removed[id]) d += (edges[id].u == edges[id].v) ? 2 : 1;
        }
        return d;
    }

    // Euler circuits per component over the remaining edges; orientation is
    // the traversal direction. Hierholzer with smallest-id edge choice.
    std::vector<std::pair<VertexId, VertexId>> orient() {
        std::vector<std::pair<VertexId, VertexId>> oriented(edges.size(), {graph::kNoVertex, graph::kNoVertex});
        std::vector<char> used(edges.size(), 0);
        std::vector<std::size_t> cursor(V, 0);
        for (VertexId start = 0; start < V; ++start) {
            if (remaining_degree(start) == 0) continue;
            bool fresh = false;
            for (std::size_t id : incident[start]) {
                if (!removed[id] && !used[id]) fresh = true;
            }
            if (!fresh) continue;
            // iterative Hierholzer from `start`
            std::vector<VertexId> stack{start};
            while (!stack.empty()) {
                VertexId v = stack.back();
                std::size_t& cur = cursor[v];
                while (cur < incident[v].size() && (removed[incident[v][cur]] || used[incident[v][cur]])) ++cur;
                if (cur == incident[v].size()) {
                    stack.pop_back();
                    continue;
                }
                std::size_t id = incident[v][cur];
                used[id] = 1;
                VertexId to = edges[id].u == v ? edges[id].v : edges[id].u;
                oriented[id] = {v, to};
                stack.push_back(to);
            }
        }
        return oriented;
    }

    // one perfect matching on the r-regular bipartite out/in graph
    std::vector<VertexId> match_permutation(const std::vector<std::pair<VertexId, VertexId>>& oriented,
                                            std::vector<std::size_t>& matched_edge_out) {
        std::vector<std::vector<std::size_t>> out_edges(V);
        for (std::size_t id = 0; id < edges.size(); ++id) {
            if (!removed[id]) {
                check_internal(oriented[id].first != graph::kNoVertex, "unoriented remaining edge");
                out_edges[oriented[id].first].push_back(id);
            }
        }
        std::vector<std::size_t> match_of_in(V, SIZE_MAX);   // in-vertex -> edge id
        std::vector<std::size_t> match_of_out(V, SIZE_MAX);  // out-vertex -> edge id
        std::vector<char> visited(V, 0);
        auto augment = [&](auto&& self, VertexId v) -> bool {
            for (std::size_t id : out_edges[v]) {
                VertexId to = oriented[id].second;
                if (visited[to]) continue;
                visited[to] = 1;
                if (match_of_in[to] == SIZE_MAX ||
                    self(self, oriented[match_of_in[to]].first)) {
                    match_of_in[to] = id;
                    match_of_out[v] = id;
                    return true;
                }
            }
            return false;
        };
        for (VertexId v = 0; v < V; ++v) {
            std::fill(visited.begin(), visited.end(), 0);
            check_internal(augment(augment, v), "regular bipartite graph must have a perfect matching");
        }
        std::vector<VertexId> sigma(V);
        matched_edge_out.resize(V);
        for (VertexId v = 0; v < V; ++v) {
            sigma[v] = oriented[match_of_out[v]].second;
            matched_edge_out[v] = match_of_out[v];
        }
        return sigma;
    }
};

}  // namespace

RealizationResult schreier_realization(const LabeledGraph& g) {
    require(g.complete(), "realization needs a finite complete graph");
    require(g.connected(), "realization needs a connected graph");
    require(g.degree() % 2 == 0, "realization needs even degree");
    require(g.half_loop_count() == 0, "half-loops cannot be 2-factorized");

    const unsigned d = g.degree() / 2;
    const std::size_t V = g.vertex_count();
    FactorPeeler peeler(g);

    std::vector<std::vector<VertexId>> sigma;  // generator index -> permutation
    for (unsigned i = 0; i < d; ++i) {
        auto oriented = peeler.orient();
        std::vector<std::size_t> matched;
        sigma.push_back(peeler.match_permutation(oriented, matched));
        for (std::size_t id : matched) peeler.removed[id] = 1;
    }
    for (VertexId v = 0; v < V; ++v) {
        check_internal(peeler.remaining_degree(v) == 0, "2-factorization left edges behind");
    }

    // action of F_d on vertices; Schreier generators of the root stabilizer
    auto act = [&](VertexId v, fg::Letter s) {
        const auto& perm = sigma[s.generator()];
        if (!s.is_inverse()) return perm[v];
        for (VertexId u = 0; u < V; ++u) {
            if (perm[u] == v) return u;
        }
        check_internal(false, "permutation not invertible");
        return graph::kNoVertex;
    };

    std::vector<fg::Word> rep_word(V);
    std::vector<char> visited(V, 0);
    std::queue<VertexId> q;
    visited[0] = 1;
    q.push(0);
    while (!q.empty()) {
        VertexId v = q.front();
        q.pop();
        for (unsigned c = 0; c < 2 * d; ++c) {
            fg::Letter s{c};
            VertexId u = act(v, s);
            if (!visited[u]) {
                visited[u] = 1;
                std::vector<fg::Letter> ls = rep_word[v].letters();
                ls.push_back(s);
                rep_word[u] = fg::Word(std::span<const fg::Letter>(ls));
                q.push(u);
            }
        }
    }

    RealizationResult res;
    res.rank = d;
    for (VertexId v = 0; v < V; ++v) {
        for (unsigned i = 0; i < d; ++i) {
            fg::Letter s = fg::Letter::positive(i);
            fg::Word w = rep_word[v] * fg::Word({s}) * rep_word[act(v, s)].inverse();
            if (!w.is_identity() &&
                std::find(res.subgroup.generators.begin(), res.subgroup.generators.end(), w) ==
                    res.subgroup.generators.end()) {
                res.subgroup.generators.push_back(w);
            }
        }
    }

    res.core = fg::fold(res.subgroup, d);
    // finite-index stabilizer: the core must be the whole coset graph
    if (res.core.state_count() == V &&
        res.core.directed_edge_count() == static_cast<std::size_t>(V) * 2 * d) {
        auto window = graph::schreier_ball(res.core, d, static_cast<std::uint32_t>(V));
        res.verified = window.vertex_count() == V && graph::multigraph_isomorphic(window, g);
    }
    return res;
}

}  // namespace specrad::cycles
