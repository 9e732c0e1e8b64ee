#pragma once

#include "specrad/graph.hpp"
#include "specrad/types.hpp"

#include <string>
#include <vector>

namespace specrad::spectral {

using graph::LabeledGraph;

enum class BoundKind { certified_lower, exact_reference, heuristic };

std::string to_string(BoundKind k);

// A spectral-radius bound. certified_lower values never exceed the true rho
// by more than error_slack; the slack covers only floating-point root/log
// evaluation of exact integer counts.
struct SpectralBound {
    double value = 0.0;
    BoundKind kind = BoundKind::heuristic;
    long parameter = 0;  // the n (walk half-length) or radius that produced it
    double error_slack = 0.0;
};

inline constexpr double kEvalSlack = 1e-12;

// log of a positive big integer, accurate to a few ulps
double log_of_int(const Int& x);

// (|A(2n,S)| / |S|^(2n))^(1/2n). Fekete: log-convexity of even return
// probabilities anchored at |A(0)| = 1 makes every term a lower bound of the
// limit and the sequence nondecreasing in n.
SpectralBound rho_return_lower(const LabeledGraph& g, unsigned n);

// the full sequence for n = 1..n_half_max from one DP pass
std::vector<SpectralBound> rho_return_lower_series(const LabeledGraph& g, unsigned n_half_max);

// Power iteration on the compression Q of the Markov operator
// P f(v) = (1/|S|) sum_s f(vs) to functions supported on the radius-R ball;
// edges leaving the ball are dropped, normalization stays 1/degree. The
// deterministic start is the root indicator; the reported value is the final
// ||Q x|| / ||x|| (the root of the Rayleigh quotient of Q^2, robust to the
// parity alternation of bipartite balls), a lower bound since compressions of
// a self-adjoint contraction have norm <= ||P|| = rho.
// iterations = 0 selects the default 10*R.
struct RayleighResult {
    SpectralBound bound;
    double last_increment = 0.0;  // value increment of the final iteration
    unsigned iterations = 0;
};
RayleighResult rho_rayleigh_lower(const LabeledGraph& g, unsigned R, unsigned iterations = 0);

// Exact spectral radius 2 sqrt(d-1) / d of the d-regular tree.
SpectralBound rho_tree_exact(unsigned d);
// the exact rational square 4(d-1)/d^2
Rat rho_sq_tree_exact(unsigned d);

// Full adjacency spectrum of a finite graph, ascending with multiplicities.
// Entry (u,v) counts slots u->v, so a full loop adds 2 on the diagonal and a
// half-loop adds 1. Residuals ||Av - lambda v|| <= 1e-8 * d are enforced, as
// are the exact trace identities.
struct Spectrum {
    std::vector<double> values;  // ascending

    double min() const { return values.front(); }
    double max() const { return values.back(); }
};

Spectrum eigenvalues_finite(const LabeledGraph& g);
// spectrum of an explicit symmetric multiplicity matrix (row-major n x n)
Spectrum eigenvalues_symmetric(const std::vector<double>& dense, std::size_t n,
                               double trace_expect, double frob_sq_expect, double scale);

struct RamanujanReport {
    bool ramanujan = false;
    unsigned degree = 0;
    double bound = 0.0;                // 2 sqrt(d-1)
    double extremal_nontrivial = 0.0;  // witness
    bool connected = false;
    bool bipartite_pair_removed = false;
};

// Every eigenvalue other than one +d (and one -d when present) must satisfy
// |lambda| <= 2 sqrt(d-1) + tol. A second +d (disconnected graph) counts as
// nontrivial and fails the test.
RamanujanReport is_ramanujan_finite(const LabeledGraph& g, double tol = 1e-9);
RamanujanReport ramanujan_from_spectrum(const Spectrum& spec, unsigned d, bool connected, double tol);

}  // namespace specrad::spectral
