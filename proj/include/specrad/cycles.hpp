#pragma once

#include "specrad/graph.hpp"
#include "specrad/spectral.hpp"
#include "specrad/stallings.hpp"
#include "specrad/types.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace specrad::cycles {

using graph::BallView;
using graph::EdgeRef;
using graph::LabeledGraph;
using graph::VertexId;

// Exact count of non-backtracking walks of k edges from u to v
// (no step reverses its predecessor).
Int nb_walk_count(const LabeledGraph& g, VertexId u, VertexId v, unsigned k);

// G^(k): multigraph on the same vertex set whose edge multiplicity w(v1,v2)
// counts non-backtracking k-walks; d(d-1)^(k-1)-regular. On ball windows only
// interior rows (depth + k <= radius) are materialized; on finite graphs all.
class PowerGraph {
public:
    unsigned k() const { return k_; }
    std::uint32_t base_degree() const { return base_degree_; }
    Int power_degree() const;  // d(d-1)^(k-1)
    std::size_t vertex_count() const { return rows_.size(); }
    bool row_exact(VertexId v) const { return exact_[v] != 0; }
    const std::map<VertexId, Int>& row(VertexId v) const { return rows_[v]; }
    Int multiplicity(VertexId v1, VertexId v2) const;

private:
    friend PowerGraph graph_power(const LabeledGraph&, unsigned k);
    unsigned k_ = 1;
    std::uint32_t base_degree_ = 0;
    std::vector<std::map<VertexId, Int>> rows_;
    std::vector<char> exact_;
};

PowerGraph graph_power(const LabeledGraph& g, unsigned k);

// the power multigraph serialized in the finite-graph file format
std::string power_graph_to_string(const PowerGraph& p);

spectral::Spectrum eigenvalues_power(const PowerGraph& p);

struct RamanujanPowerReport {
    spectral::RamanujanReport base;
    spectral::RamanujanReport powered;
    bool agree = false;
};

// Finite-graph shadow of the power lemma: the Ramanujan property must agree
// between G and G^(k).
RamanujanPowerReport ramanujan_power_check(const LabeledGraph& g, unsigned k, double tol = 1e-9);

// A cyclically non-backtracking closed walk of k edges based at x: consecutive
// edges never reverse, including the wrap-around pair (last, first).
struct CycleWitness {
    std::vector<EdgeRef> edges;
};

// C(x,k): DFS over edge states; returns a witness when a cycle exists.
std::optional<CycleWitness> cycle_indicator(const LabeledGraph& g, VertexId x, unsigned k);

// validity check used by tests and certificates
bool verify_cycle(const LabeledGraph& g, VertexId x, unsigned k, const CycleWitness& w);

enum class TriState { no, yes, inconclusive };

struct IndependenceCertificate {
    fg::Word word1, word2;      // fundamental-group words of the two cycles
    unsigned folded_rank = 0;   // 2 certifies independence
};

struct IndependenceResult {
    TriState status = TriState::no;
    std::optional<IndependenceCertificate> certificate;
    std::size_t cycles_enumerated = 0;
};

// D(x,k): do two independent non-backtracking k-cycles start at x?
// Independence = the two cycle classes generate a rank-2 free subgroup of the
// fundamental group, decided by folding their spanning-tree words. Bounded
// enumeration; exceeding the cap yields `inconclusive`, distinct from `no`.
IndependenceResult independent_cycles(const LabeledGraph& g, VertexId x, unsigned k,
                                      std::size_t enumeration_cap = 10000);

// q_j for j = 0..n_max: probability that the standard random walk from the
// root sits at time j on a vertex carrying a non-backtracking cycle of length
// at most k. Exact rationals.
//
// The BallView overload handles infinite Schreier/Cayley graphs exactly:
// beyond the materialized window the graph is a forest of (d-1)-ary cones
// hanging off frontier vertices, where the indicator vanishes and cone levels
// lump into single states without error.
std::vector<Rat> cycle_density_dp(BallView& space, unsigned k, unsigned n_max);
std::vector<Rat> cycle_density_dp(const LabeledGraph& finite, unsigned k, unsigned n_max);

struct McSeries {
    std::vector<double> estimate;   // q-hat_j, j = 0..n
    std::vector<double> std_error;  // sqrt(q(1-q)/walkers) from the estimate
    unsigned walkers = 0;
    std::uint64_t seed = 0;
};

// Seeded walker simulation; per-walker generator streams make the result
// independent of scheduling.
McSeries cycle_density_mc(BallView& space, unsigned k, unsigned n, unsigned walkers, std::uint64_t seed);
McSeries cycle_density_mc(const LabeledGraph& finite, unsigned k, unsigned n, unsigned walkers, std::uint64_t seed);

struct StationarityReport {
    bool base_preserved = false;   // uniform root law fixed by one walk step
    bool power_preserved = false;  // same on G^(k)
    unsigned steps = 0;
};

// Exact rational check that the uniform distribution is stationary for the
// walk on a finite regular graph and on its k-th power.
StationarityReport stationarity_check_finite(const LabeledGraph& g, unsigned k, unsigned steps = 3);

struct RealizationResult {
    unsigned rank = 0;  // d: the graph is realized over the free group F_d
    fg::SubgroupSpec subgroup;
    fg::CoreAutomaton core;
    bool verified = false;  // schreier ball is multigraph-isomorphic to the input
};

// Writes a connected 2d-regular multigraph as a Schreier graph of F_d:
// repeated Euler orientation + bipartite perfect matching peel off d oriented
// 2-factors (permutations); the root stabilizer is returned with its Schreier
// generators and the round-trip isomorphism check.
RealizationResult schreier_realization(const LabeledGraph& g);

}  // namespace specrad::cycles
