#pragma once

#include "specrad/spectral.hpp"
#include "specrad/stallings.hpp"
#include "specrad/types.hpp"
#include "specrad/walks.hpp"

#include <optional>
#include <vector>

namespace specrad::ineq {

using graph::VertexId;

enum class RhoMethod { automatic, free_basis_exact, return_lower, rayleigh };

// rho(H, F) = rho(<H intersect F>, F intersect H): spectral radius of the
// Cayley graph of the subgroup generated by F intersect H, with that
// intersection as generating set.
struct SubgroupRhoResult {
    bool empty_intersection = false;
    std::vector<fg::Word> intersection;  // F intersect H, shortlex
    spectral::SpectralBound bound;       // meaningless when empty_intersection
    RhoMethod used = RhoMethod::automatic;
};

// F must be symmetric and identity-free. The free-basis route applies when
// the intersection splits into r inverse pairs and the folded core of the
// generated subgroup has rank exactly r: a generating set of minimal size is
// a basis, the Cayley graph is the 2r-regular tree, and rho is exact.
// parameter = n for return_lower (walk half-length), R for rayleigh.
SubgroupRhoResult subgroup_rho(const fg::CoreAutomaton& H, const std::vector<fg::Word>& F,
                               RhoMethod method = RhoMethod::automatic, unsigned parameter = 6);

// One element of the integrand sum: g weighted by mu-mass, with the size of
// H^g intersect S^(m) and the rho bound of the generated subgroup.
struct IntegrandRow {
    VertexId element = graph::kNoVertex;
    fg::Word word;
    Rat mass;
    std::size_t intersection_size = 0;
    std::optional<spectral::SpectralBound> rho;  // absent when intersection empty
    double contribution = 0.0;                   // mass * size * max(0, -log rho)
};

struct IntegrandResult {
    std::vector<IntegrandRow> rows;  // canonical (shortlex) element order
    double total = 0.0;              // I value
    bool all_certified = true;       // every evaluated rho certified-lower or exact
};

// I over mu_{walk_len}: for every g in supp(mu_{walk_len}),
// |H^g cap S^(m)| * (-log rho(H^g, H^g cap S^(m))) integrated in g.
// walk_len must be even and positive. Rows with empty intersection contribute
// exactly zero and never evaluate rho. H^g cap S^(m) depends on g only
// through the coset Hg, so classification is memoized per Schreier coset.
IntegrandResult integrand(const fg::SubgroupSpec& H, unsigned rank, unsigned walk_len, unsigned m);

struct InequalityReport {
    unsigned n = 0;  // walk length
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;
    bool certified = false;
    double error_slack = 0.0;
    Int count_G;         // |A(n,S)|
    Int count_G_minus2;  // |A(n-2,S)|
    Int count_H;         // |A_H(n,S)|
    IntegrandResult integrand;
};

// Finite-n inequality:
//   log|A_H(n,S)| - log|A(n,S)|
//     >= ((n-2) |A(n-2,S)| / |A(n,S)|) * integral over mu_{n-2}.
// n must be even and >= 4. All counts exact; slack covers log evaluation.
InequalityReport finite_n_inequality(const fg::SubgroupSpec& H, unsigned rank, unsigned n, unsigned m = 1);

struct AsymptoticRow {
    unsigned n = 0;  // walk length
    double lhs = 0.0;          // log rho_lb(Sch, n) - log rho_tree(2k)
    double rhs = 0.0;          // I_n / (|S|^2 rho_tree(2k)^2)
    double margin = 0.0;
    bool certified = false;
    double schreier_bound = 0.0;
    double cayley_bound = 0.0;   // rho_lb(Cay, n), same exponent
    double lhs_matched = 0.0;    // log rho_lb(Sch, n) - log rho_lb(Cay, n); zero for H = {1}
    double integrand_total = 0.0;
};

// The limsup inequality reported as a finite series over even walk lengths
// n = 4, 6, ..., n_max; no extrapolation.
std::vector<AsymptoticRow> asymptotic_report(const fg::SubgroupSpec& H, unsigned rank,
                                             unsigned n_max, unsigned m = 1);

}  // namespace specrad::ineq
