#pragma once

#include "specrad/stallings.hpp"
#include "specrad/words.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace specrad::graph {

using VertexId = std::uint32_t;
inline constexpr VertexId kNoVertex = 0xffffffffu;

// A directed half-edge: slot `slot` of vertex `v`. Every present edge has a
// reverse half-edge at its target; reverse(reverse(e)) = e. In labeled graphs
// the slot is the letter code and the reverse slot is the inverse letter.
struct EdgeRef {
    VertexId v = kNoVertex;
    std::uint32_t slot = 0;

    bool operator==(const EdgeRef&) const = default;
};

// Rooted d-regular multigraph. Vertex 0 is the root. Each vertex owns
// `degree` out-slots; a slot is either absent (ball boundary) or holds a
// target vertex and the reverse slot index at the target. Labeled graphs
// (Cayley/Schreier balls) index slots by letter code; finite ingested graphs
// are unlabeled and may carry half-loops (self-paired slots).
class LabeledGraph {
public:
    std::uint32_t degree() const { return degree_; }
    std::size_t vertex_count() const { return targets_.size() / degree_; }
    bool labeled() const { return labeled_; }
    VertexId root() const { return 0; }

    VertexId target(VertexId v, std::uint32_t slot) const {
        return targets_[static_cast<std::size_t>(v) * degree_ + slot];
    }
    bool has_edge(VertexId v, std::uint32_t slot) const { return target(v, slot) != kNoVertex; }

    EdgeRef reverse(EdgeRef e) const {
        return EdgeRef{target(e.v, e.slot), rev_[static_cast<std::size_t>(e.v) * degree_ + e.slot]};
    }
    bool is_half_loop(EdgeRef e) const { return target(e.v, e.slot) == e.v && reverse(e) == e; }

    std::uint32_t depth(VertexId v) const { return depth_[v]; }

    // Radius up to which every vertex has all slots present. nullopt means the
    // graph is finite and complete (every slot everywhere is present).
    std::optional<std::uint32_t> ball_radius() const { return radius_; }
    bool complete() const { return !radius_.has_value(); }

    // vertices with depth == ball_radius(); empty for complete graphs
    std::vector<VertexId> frontier() const;

    // walk-counting adjacency row: multiplicity of slots v -> u
    // (a full loop contributes 2, a half-loop 1)
    std::vector<std::pair<VertexId, std::uint32_t>> adjacency_row(VertexId v) const;

    bool connected() const;
    std::size_t half_loop_count() const;

    bool operator==(const LabeledGraph&) const = default;

private:
    friend class BallView;
    friend LabeledGraph load_finite_graph(std::istream& in);
    friend LabeledGraph finite_from_pairs(std::size_t n, std::uint32_t d,
                                          const std::vector<std::pair<VertexId, VertexId>>& edges,
                                          bool half_loops);
    friend LabeledGraph ball_from_layers(const std::vector<std::vector<VertexId>>& slots,
                                         const std::vector<std::uint32_t>& depth,
                                         const std::vector<std::uint32_t>& inv_slot,
                                         std::uint32_t radius);

    std::uint32_t degree_ = 0;
    bool labeled_ = false;
    std::vector<VertexId> targets_;
    std::vector<std::uint32_t> rev_;
    std::vector<std::uint32_t> depth_;
    std::optional<std::uint32_t> radius_ = 0;
};

// Lazy window onto the Schreier graph Sch(H\F_k, S) (Cayley graph when H is
// trivial). Core automaton states shadow the finitely many "core" cosets;
// every missing transition spawns a fresh tree coset on demand. Vertex ids
// are assigned in BFS discovery order (letter order within a vertex) and are
// stable under extension.
class BallView {
public:
    BallView(fg::CoreAutomaton core, unsigned rank);

    unsigned rank() const { return rank_; }
    const fg::CoreAutomaton& core() const { return core_; }
    const LabeledGraph& graph() const { return g_; }

    // materialize every vertex of the ball of radius R and all edges between
    // materialized vertices of depth < R
    void ensure_radius(std::uint32_t R);
    std::uint32_t radius() const { return *g_.ball_radius(); }

    // lazy single step; materializes the target if needed (does not advance
    // the completed radius)
    VertexId step(VertexId v, fg::Letter s);
    VertexId trace(const fg::Word& w);  // from the root

    bool is_core(VertexId v) const { return state_of_[v] != fg::kNoState; }
    std::uint32_t core_state(VertexId v) const { return state_of_[v]; }
    // max depth at which a core coset sits; 0 for Cayley balls
    std::uint32_t core_radius() const { return core_radius_; }
    bool core_saturated() const { return core_saturated_; }  // finite Schreier graph fully built

    // BFS-tree representative word of the coset (shortlex-minimal)
    fg::Word vertex_word(VertexId v) const;

private:
    VertexId fill_slot(VertexId v, fg::Letter s);
    VertexId new_vertex(std::uint32_t state, std::uint32_t depth, EdgeRef parent);

    fg::CoreAutomaton core_;
    unsigned rank_;
    LabeledGraph g_;
    std::vector<std::uint32_t> state_of_;    // automaton state or kNoState (tree coset)
    std::vector<VertexId> vertex_of_state_;  // discovered core cosets
    std::vector<EdgeRef> parent_;            // BFS-tree parent edge (root: kNoVertex)
    std::uint32_t core_radius_ = 0;
    std::uint32_t discovered_core_ = 1;
    bool core_saturated_ = false;
    bool in_bfs_ = false;
    bool lazy_extended_ = false;
};

// Ball of radius R in the 2k-regular tree rooted at the identity.
LabeledGraph cayley_ball(unsigned rank, std::uint32_t radius);
BallView cayley_space(unsigned rank);

// Ball of radius R around the base coset of Sch(H\F_k, S).
LabeledGraph schreier_ball(const fg::CoreAutomaton& H, unsigned rank, std::uint32_t radius);
BallView schreier_space(const fg::CoreAutomaton& H, unsigned rank);

// Assemble a slot-regular ball window from explicit per-vertex slot targets.
// Slots carry a global involution: the reverse of slot i is slot inv_slot[i]
// at the target. Used for Cayley balls of subgroups in a word-set metric.
LabeledGraph ball_from_layers(const std::vector<std::vector<VertexId>>& slots,
                              const std::vector<std::uint32_t>& depth,
                              const std::vector<std::uint32_t>& inv_slot,
                              std::uint32_t radius);

// Finite-graph file: header "vertices N degree d", optional "loops half",
// then lines "u v m" (loops "u u m"). Non-regular input is rejected naming an
// offending vertex.
LabeledGraph load_finite_graph(std::istream& in);
LabeledGraph load_finite_graph_file(const std::string& path);
LabeledGraph finite_from_pairs(std::size_t n, std::uint32_t d,
                               const std::vector<std::pair<VertexId, VertexId>>& edges,
                               bool half_loops = false);
std::string finite_graph_to_string(const LabeledGraph& g);

// canned instances
LabeledGraph petersen_graph();
LabeledGraph cycle_graph(std::size_t n);
LabeledGraph complete_graph(std::size_t n);
LabeledGraph doubled_cycle_graph(std::size_t n);

// Canonical BFS code of a deterministically labeled graph window; equal codes
// iff the windows are label-isomorphic as rooted graphs.
std::vector<std::uint32_t> bfs_code(const LabeledGraph& g);

// Root-preserving multigraph isomorphism for small finite graphs
// (backtracking over depth-compatible bijections).
bool multigraph_isomorphic(const LabeledGraph& a, const LabeledGraph& b);

}  // namespace specrad::graph
