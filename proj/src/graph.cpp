#include "specrad/graph.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <queue>
#include <sstream>

namespace specrad::graph {

std::vector<VertexId> LabeledGraph::frontier() const {
    std::vector<VertexId> out;
    if (!radius_) return out;
    for (VertexId v = 0; v < vertex_count(); ++v) {
        if (depth_[v] == *radius_) out.push_back(v);
    }
    return out;
}

std::vector<std::pair<VertexId, std::uint32_t>> LabeledGraph::adjacency_row(VertexId v) const {
    std::map<VertexId, std::uint32_t> mult;
    for (std::uint32_t s = 0; s < degree_; ++s) {
        VertexId u = target(v, s);
        if (u != kNoVertex) ++mult[u];
    }
    return {mult.begin(), mult.end()};
}

bool LabeledGraph::connected() const {
    std::vector<char> seen(vertex_count(), 0);
    std::queue<VertexId> q;
    q.push(root());
    seen[root()] = 1;
    std::size_t visited = 1;
    while (!q.empty()) {
        VertexId v = q.front();
        q.pop();
        for (std::uint32_t s = 0; s < degree_; ++s) {
            VertexId u = target(v, s);
            if (u != kNoVertex && !seen[u]) {
                seen[u] = 1;
                ++visited;
                q.push(u);
            }
        }
    }
    return visited == vertex_count();
}

std::size_t LabeledGraph::half_loop_count() const {
    std::size_t n = 0;
    for (VertexId v = 0; v < vertex_count(); ++v) {
        for (std::uint32_t s = 0; s < degree_; ++s) {
            if (has_edge(v, s) && is_half_loop(EdgeRef{v, s})) ++n;
        }
    }
    return n;
}

BallView::BallView(fg::CoreAutomaton core, unsigned rank) : core_(std::move(core)), rank_(rank) {
    require(core_.rank() == rank_, "core automaton rank mismatch");
    g_.degree_ = 2 * rank_;
    g_.labeled_ = true;
    g_.radius_ = 0;
    state_of_.clear();
    vertex_of_state_.assign(core_.state_count(), kNoVertex);
    g_.targets_.assign(g_.degree_, kNoVertex);
    g_.rev_.assign(g_.degree_, 0);
    g_.depth_.assign(1, 0);
    state_of_.push_back(core_.base());
    vertex_of_state_[core_.base()] = 0;
    parent_.push_back(EdgeRef{});
    core_saturated_ = core_.state_count() == 1 && core_.directed_edge_count() == g_.degree_;
}

VertexId BallView::new_vertex(std::uint32_t state, std::uint32_t depth, EdgeRef parent) {
    VertexId v = static_cast<VertexId>(g_.vertex_count());
    g_.targets_.resize(g_.targets_.size() + g_.degree_, kNoVertex);
    g_.rev_.resize(g_.rev_.size() + g_.degree_, 0);
    g_.depth_.push_back(depth);
    state_of_.push_back(state);
    parent_.push_back(parent);
    if (state != fg::kNoState) {
        vertex_of_state_[state] = v;
        core_radius_ = std::max(core_radius_, depth);
        if (++discovered_core_ == core_.state_count()) {
            // every core coset reached; the graph is finite iff no transition
            // is missing anywhere in the core
            core_saturated_ = core_.directed_edge_count() == static_cast<std::size_t>(core_.state_count()) * g_.degree_;
        }
    }
    return v;
}

VertexId BallView::fill_slot(VertexId v, fg::Letter s) {
    const std::size_t idx = static_cast<std::size_t>(v) * g_.degree_ + s.code();
    if (g_.targets_[idx] != kNoVertex) return g_.targets_[idx];

    VertexId u = kNoVertex;
    const std::uint32_t st = state_of_[v];
    if (st != fg::kNoState && core_.has_transition(st, s)) {
        const std::uint32_t t = core_.transition(st, s);
        u = vertex_of_state_[t];
        if (u == kNoVertex) u = new_vertex(t, g_.depth_[v] + 1, EdgeRef{v, s.code()});
    } else if (st == fg::kNoState && parent_[v].v != kNoVertex &&
               fg::Letter(parent_[v].slot).inverse() == s) {
        // tree coset: the inverse of the arrival letter goes back to the parent
        u = parent_[v].v;
    } else {
        // missing transition: spawn a fresh tree coset
        u = new_vertex(fg::kNoState, g_.depth_[v] + 1, EdgeRef{v, s.code()});
    }
    if (!in_bfs_ && g_.depth_[u] > *g_.radius_ + 1) lazy_extended_ = true;

    const std::size_t ridx = static_cast<std::size_t>(u) * g_.degree_ + s.inverse().code();
    check_internal(g_.targets_[ridx] == kNoVertex || g_.targets_[ridx] == v, "involution clash while materializing");
    g_.targets_[idx] = u;
    g_.rev_[idx] = s.inverse().code();
    g_.targets_[ridx] = v;
    g_.rev_[ridx] = s.code();
    return u;
}

VertexId BallView::step(VertexId v, fg::Letter s) { return fill_slot(v, s); }

VertexId BallView::trace(const fg::Word& w) {
    VertexId v = g_.root();
    for (fg::Letter s : w.letters()) v = step(v, s);
    return v;
}

void BallView::ensure_radius(std::uint32_t R) {
    // Deep lazy stepping can discover core cosets along non-geodesic paths,
    // which would record too-large depths; extending the BFS window afterwards
    // would then be unsound.
    require(!lazy_extended_, "ensure_radius after deep lazy stepping is not supported; extend first");
    in_bfs_ = true;
    while (*g_.radius_ < R) {
        const std::uint32_t level = *g_.radius_;
        const std::size_t count_before = g_.vertex_count();
        for (VertexId v = 0; v < count_before; ++v) {
            if (g_.depth_[v] != level) continue;
            for (unsigned c = 0; c < g_.degree_; ++c) fill_slot(v, fg::Letter(c));
        }
        g_.radius_ = level + 1;
    }
    in_bfs_ = false;
}

fg::Word BallView::vertex_word(VertexId v) const {
    std::vector<fg::Letter> rev_letters;
    while (v != g_.root()) {
        EdgeRef p = parent_[v];
        check_internal(p.v != kNoVertex, "vertex without parent");
        rev_letters.push_back(fg::Letter(p.slot));
        v = p.v;
    }
    std::reverse(rev_letters.begin(), rev_letters.end());
    return fg::Word(std::span<const fg::Letter>(rev_letters));
}

LabeledGraph cayley_ball(unsigned rank, std::uint32_t radius) {
    BallView b = cayley_space(rank);
    b.ensure_radius(radius);
    return b.graph();
}

BallView cayley_space(unsigned rank) {
    return BallView(fg::fold(fg::SubgroupSpec{}, rank), rank);
}

LabeledGraph schreier_ball(const fg::CoreAutomaton& H, unsigned rank, std::uint32_t radius) {
    BallView b = schreier_space(H, rank);
    b.ensure_radius(radius);
    return b.graph();
}

BallView schreier_space(const fg::CoreAutomaton& H, unsigned rank) { return BallView(H, rank); }

LabeledGraph ball_from_layers(const std::vector<std::vector<VertexId>>& slots,
                              const std::vector<std::uint32_t>& depth,
                              const std::vector<std::uint32_t>& inv_slot,
                              std::uint32_t radius) {
    const std::size_t V = slots.size();
    const std::uint32_t d = static_cast<std::uint32_t>(inv_slot.size());
    LabeledGraph g;
    g.degree_ = d;
    g.labeled_ = true;
    g.radius_ = radius;
    g.depth_ = depth;
    g.targets_.assign(V * d, kNoVertex);
    g.rev_.assign(V * d, 0);
    for (VertexId v = 0; v < V; ++v) {
        require(slots[v].size() == d, "ragged slot table");
        for (std::uint32_t s = 0; s < d; ++s) {
            VertexId u = slots[v][s];
            if (u == kNoVertex) continue;
            g.targets_[static_cast<std::size_t>(v) * d + s] = u;
            g.rev_[static_cast<std::size_t>(v) * d + s] = inv_slot[s];
            check_internal(slots[u][inv_slot[s]] == v, "slot involution violated");
        }
    }
    return g;
}

LabeledGraph finite_from_pairs(std::size_t n, std::uint32_t d,
                               const std::vector<std::pair<VertexId, VertexId>>& edges,
                               bool half_loops) {
    LabeledGraph g;
    g.degree_ = d;
    g.labeled_ = false;
    g.radius_ = std::nullopt;
    g.targets_.assign(n * d, kNoVertex);
    g.rev_.assign(n * d, 0);
    g.depth_.assign(n, 0);

    std::vector<std::uint32_t> used(n, 0);
    auto next_slot = [&](VertexId v) -> std::uint32_t {
        if (used[v] >= d) fail("vertex " + std::to_string(v) + " exceeds degree " + std::to_string(d));
        return used[v]++;
    };
    auto put = [&](VertexId v, std::uint32_t slot, VertexId u, std::uint32_t rslot) {
        g.targets_[static_cast<std::size_t>(v) * d + slot] = u;
        g.rev_[static_cast<std::size_t>(v) * d + slot] = rslot;
    };

    for (auto [u, v] : edges) {
        require(u < n && v < n, "edge endpoint out of range");
        if (u == v) {
            if (half_loops) {
                std::uint32_t s = next_slot(u);
                put(u, s, u, s);
            } else {
                std::uint32_t s1 = next_slot(u);
                std::uint32_t s2 = next_slot(u);
                put(u, s1, u, s2);
                put(u, s2, u, s1);
            }
        } else {
            std::uint32_t su = next_slot(u);
            std::uint32_t sv = next_slot(v);
            put(u, su, v, sv);
            put(v, sv, u, su);
        }
    }
    for (VertexId v = 0; v < n; ++v) {
        if (used[v] != d) {
            fail("graph is not " + std::to_string(d) + "-regular: vertex " + std::to_string(v) +
                 " has degree " + std::to_string(used[v]));
        }
    }

    // depths from the root (for radius policies on finite graphs they are
    // informational only)
    std::vector<std::uint32_t>& depth = g.depth_;
    std::fill(depth.begin(), depth.end(), 0xffffffffu);
    std::queue<VertexId> q;
    depth[0] = 0;
    q.push(0);
    while (!q.empty()) {
        VertexId v = q.front();
        q.pop();
        for (std::uint32_t s = 0; s < d; ++s) {
            VertexId u = g.target(v, s);
            if (u != kNoVertex && depth[u] == 0xffffffffu) {
                depth[u] = depth[v] + 1;
                q.push(u);
            }
        }
    }
    for (auto& dv : depth) {
        if (dv == 0xffffffffu) dv = 0;  // unreachable component
    }
    return g;
}

LabeledGraph load_finite_graph(std::istream& in) {
    std::string tok;
    std::size_t n = 0;
    std::uint32_t d = 0;
    bool half_loops = false;
    require(static_cast<bool>(in >> tok) && tok == "vertices", "expected 'vertices N' header");
    require(static_cast<bool>(in >> n), "expected vertex count");
    require(static_cast<bool>(in >> tok) && tok == "degree", "expected 'degree d' header");
    require(static_cast<bool>(in >> d), "expected degree");

    std::vector<std::pair<VertexId, VertexId>> edges;
    while (in >> tok) {
        if (tok == "loops") {
            require(static_cast<bool>(in >> tok) && (tok == "half" || tok == "full"), "loops flag must be 'half' or 'full'");
            half_loops = (tok == "half");
            continue;
        }
        VertexId u = static_cast<VertexId>(std::stoul(tok));
        VertexId v;
        std::size_t m;
        require(static_cast<bool>(in >> v >> m), "expected 'u v multiplicity' line");
        for (std::size_t i = 0; i < m; ++i) edges.emplace_back(u, v);
    }
    return finite_from_pairs(n, d, edges, half_loops);
}

LabeledGraph load_finite_graph_file(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), "cannot open graph file: " + path);
    return load_finite_graph(in);
}

std::string finite_graph_to_string(const LabeledGraph& g) {
    std::ostringstream out;
    out << "vertices " << g.vertex_count() << " degree " << g.degree() << "\n";
    if (g.half_loop_count() > 0) out << "loops half\n";
    std::map<std::pair<VertexId, VertexId>, std::size_t> mult;
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        for (std::uint32_t s = 0; s < g.degree(); ++s) {
            if (!g.has_edge(v, s)) continue;
            VertexId u = g.target(v, s);
            if (u < v) continue;
            ++mult[{v, u}];
        }
    }
    for (auto& [e, m] : mult) {
        std::size_t count = (e.first == e.second && g.half_loop_count() == 0) ? m / 2 : m;
        if (e.first == e.second && g.half_loop_count() == 0 && m % 2 != 0) {
            check_internal(false, "unpaired loop slots");
        }
        out << e.first << " " << e.second << " " << count << "\n";
    }
    return out.str();
}

LabeledGraph petersen_graph() {
    std::vector<std::pair<VertexId, VertexId>> edges;
    for (VertexId i = 0; i < 5; ++i) edges.emplace_back(i, (i + 1) % 5);      // outer cycle
    for (VertexId i = 0; i < 5; ++i) edges.emplace_back(5 + i, 5 + (i + 2) % 5);  // pentagram
    for (VertexId i = 0; i < 5; ++i) edges.emplace_back(i, 5 + i);            // spokes
    return finite_from_pairs(10, 3, edges);
}

LabeledGraph cycle_graph(std::size_t n) {
    require(n >= 3, "cycle needs at least 3 vertices");
    std::vector<std::pair<VertexId, VertexId>> edges;
    for (VertexId i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
    edges.emplace_back(static_cast<VertexId>(n - 1), 0);
    return finite_from_pairs(n, 2, edges);
}

LabeledGraph complete_graph(std::size_t n) {
    std::vector<std::pair<VertexId, VertexId>> edges;
    for (VertexId i = 0; i < n; ++i) {
        for (VertexId j = i + 1; j < n; ++j) edges.emplace_back(i, j);
    }
    return finite_from_pairs(n, static_cast<std::uint32_t>(n - 1), edges);
}

LabeledGraph doubled_cycle_graph(std::size_t n) {
    require(n >= 3, "cycle needs at least 3 vertices");
    std::vector<std::pair<VertexId, VertexId>> edges;
    for (VertexId i = 0; i < n; ++i) {
        VertexId j = (i + 1) % static_cast<VertexId>(n);
        edges.emplace_back(i, j);
        edges.emplace_back(i, j);
    }
    return finite_from_pairs(n, 4, edges);
}

std::vector<std::uint32_t> bfs_code(const LabeledGraph& g) {
    require(g.labeled(), "bfs_code requires a labeled graph");
    // canonical renumbering: BFS from the root, letter order within a vertex
    std::vector<VertexId> id_of(g.vertex_count(), kNoVertex);
    std::vector<VertexId> order;
    std::queue<VertexId> q;
    id_of[g.root()] = 0;
    order.push_back(g.root());
    q.push(g.root());
    while (!q.empty()) {
        VertexId v = q.front();
        q.pop();
        for (std::uint32_t s = 0; s < g.degree(); ++s) {
            VertexId u = g.target(v, s);
            if (u != kNoVertex && id_of[u] == kNoVertex) {
                id_of[u] = static_cast<VertexId>(order.size());
                order.push_back(u);
                q.push(u);
            }
        }
    }
    std::vector<std::uint32_t> code;
    code.push_back(g.degree());
    code.push_back(static_cast<std::uint32_t>(order.size()));
    for (VertexId v : order) {
        for (std::uint32_t s = 0; s < g.degree(); ++s) {
            VertexId u = g.target(v, s);
            code.push_back(u == kNoVertex ? kNoVertex : id_of[u]);
        }
    }
    return code;
}

namespace {

// multiplicity matrix keyed by (vertex, vertex)
std::vector<std::uint32_t> mult_matrix(const LabeledGraph& g) {
    const std::size_t n = g.vertex_count();
    std::vector<std::uint32_t> m(n * n, 0);
    for (VertexId v = 0; v < n; ++v) {
        for (auto [u, k] : g.adjacency_row(v)) m[v * n + u] += k;
    }
    return m;
}

}  // namespace

bool multigraph_isomorphic(const LabeledGraph& a, const LabeledGraph& b) {
    if (a.vertex_count() != b.vertex_count() || a.degree() != b.degree()) return false;
    const std::size_t n = a.vertex_count();
    auto ma = mult_matrix(a);
    auto mb = mult_matrix(b);

    std::vector<VertexId> map(n, kNoVertex), used(n, 0);
    auto compatible = [&](VertexId va, VertexId vb) {
        if (a.depth(va) != b.depth(vb)) return false;
        if (ma[va * n + va] != mb[vb * n + vb]) return false;
        for (VertexId w = 0; w < n; ++w) {
            if (map[w] != kNoVertex && ma[va * n + w] != mb[vb * n + map[w]]) return false;
        }
        return true;
    };
    auto dfs = [&](auto&& self, VertexId va) -> bool {
        if (va == n) return true;
        for (VertexId vb = 0; vb < n; ++vb) {
            if (used[vb] || !compatible(va, vb)) continue;
            if (va == 0 && vb != b.root()) continue;  // root-preserving
            map[va] = vb;
            used[vb] = 1;
            if (self(self, va + 1)) return true;
            map[va] = kNoVertex;
            used[vb] = 0;
        }
        return false;
    };
    return dfs(dfs, 0);
}

}  // namespace specrad::graph
