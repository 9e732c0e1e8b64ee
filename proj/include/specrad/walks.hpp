#pragma once

#include "specrad/graph.hpp"
#include "specrad/types.hpp"

#include <functional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace specrad::walks {

using graph::BallView;
using graph::LabeledGraph;
using graph::VertexId;

// Walks of length n are identified with slot sequences; on labeled graphs
// those are exactly the sequences in S^n. All counts are exact.

// Per-time, per-vertex counts W_t(v) of walks of length t from the root.
// Requires ball radius >= ceil(n/2) (return walks of length n never leave
// that ball) unless the graph is finite and complete.
class CountProfile {
public:
    static CountProfile forward(const LabeledGraph& g, unsigned n);

    unsigned horizon() const { return static_cast<unsigned>(table_.size()) - 1; }
    const Int& count(unsigned t, VertexId v) const { return table_[t][v]; }
    const std::vector<Int>& layer(unsigned t) const { return table_[t]; }
    Int layer_total(unsigned t) const;

private:
    std::vector<std::vector<Int>> table_;
};

// |A(n, S)|: walks from the root returning to the root after n steps.
// Rolling-buffer DP; rejects insufficient ball radius.
Int return_count(const LabeledGraph& g, unsigned n);

// |A(t, S)| for all t <= n_max from one DP pass.
std::vector<Int> return_count_series(const LabeledGraph& g, unsigned n_max);

// N_i(v) = #(return walks of length n with w(i) = v), i = 1..n.
// N_i(v) = W_i(root->v) * W_{n-i}(v->root); the graph's edge involution makes
// the backward table equal the forward one.
class PassageTable {
public:
    static PassageTable compute(const LabeledGraph& g, unsigned n);

    unsigned n() const { return n_; }
    const Int& total_returns() const { return returns_; }
    Int passage(unsigned i, VertexId v) const;
    Int passage_row_total(unsigned i) const;  // must equal |A(n,S)| for every i

private:
    unsigned n_ = 0;
    Int returns_;
    CountProfile forward_;
    std::size_t vertex_count_ = 0;
};

// Finitely supported exact-rational probability measure on vertices.
class TraceMeasure {
public:
    TraceMeasure() = default;
    explicit TraceMeasure(std::vector<std::pair<VertexId, Rat>> entries);

    const std::vector<std::pair<VertexId, Rat>>& entries() const { return entries_; }
    Rat mass(VertexId v) const;
    Rat mass_of_set(std::span<const VertexId> vs) const;
    Rat total() const;
    std::size_t support_size() const { return entries_.size(); }

    // "element,numerator,denominator" in vertex-id order (= shortlex order of
    // representative words on ball windows); the naming callback renders ids
    std::string to_csv(const std::function<std::string(VertexId)>& name) const;

private:
    std::vector<std::pair<VertexId, Rat>> entries_;  // sorted by vertex id, masses > 0
};

// mu_n: expected occupation measure of a uniformly random length-n return
// walk; mu_n(v) = sum_i N_i(v) / (n |A(n,S)|). Undefined when |A(n,S)| = 0.
TraceMeasure trace_measure(const LabeledGraph& g, unsigned n);

// nu_n = (1/n) * sum_{k=n+1..2n} mu_{2k}; needs ball radius 2n.
TraceMeasure nu_measure(const LabeledGraph& g, unsigned n);

struct QuasiInvarianceReport {
    Rat nu_A;
    Rat nu_As;
    Rat subtrahend;  // n*nu_n(A) / ((n+1)|S|^2 rho_sq_lower) - 1/n
    Rat margin;      // nu_As - subtrahend
};

// Lemma-style quasi-invariance margin for nu_n on the space of `ball`.
// rho_sq_lower must be a (rational) certified lower bound on rho(graph)^2,
// which overestimates the subtrahend and keeps margin >= 0 a sound check.
QuasiInvarianceReport quasi_invariance_margin(BallView& ball, std::span<const VertexId> A,
                                              fg::Letter s, unsigned n, const Rat& rho_sq_lower);

// Times t in {1..n} at which the walk w does not change the H-coset.
std::set<unsigned> nonchanging_times(std::span<const fg::Letter> w, BallView& schreier);

}  // namespace specrad::walks
