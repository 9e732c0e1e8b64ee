#include "specrad/spectral.hpp"

#include "specrad/parallel.hpp"
#include "specrad/walks.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace specrad::spectral {

using graph::VertexId;

std::string to_string(BoundKind k) {
    switch (k) {
        case BoundKind::certified_lower: return "certified-lower";
        case BoundKind::exact_reference: return "exact-reference";
        case BoundKind::heuristic: return "heuristic";
    }
    return "?";
}

// split off the top 62 bits so conversion to double is exact
double log_of_int(const Int& x) {
    check_internal(x > 0, "log of nonpositive count");
    const unsigned bits = static_cast<unsigned>(boost::multiprecision::msb(x));
    if (bits <= 62) return std::log(x.convert_to<double>());
    const unsigned shift = bits - 62;
    const Int top = x >> shift;
    return std::log(top.convert_to<double>()) + shift * std::log(2.0);
}

SpectralBound rho_return_lower(const LabeledGraph& g, unsigned n) {
    require(n >= 1, "need n >= 1");
    const Int count = walks::return_count(g, 2 * n);
    if (count == 0) fail("zero return count at length " + std::to_string(2 * n));
    const double log_ratio = log_of_int(count) - 2.0 * n * std::log(static_cast<double>(g.degree()));
    return SpectralBound{std::exp(log_ratio / (2.0 * n)), BoundKind::certified_lower,
                         static_cast<long>(n), kEvalSlack};
}

std::vector<SpectralBound> rho_return_lower_series(const LabeledGraph& g, unsigned n_half_max) {
    auto counts = walks::return_count_series(g, 2 * n_half_max);
    std::vector<SpectralBound> out;
    for (unsigned n = 1; n <= n_half_max; ++n) {
        const Int& count = counts[2 * n];
        if (count == 0) fail("zero return count at length " + std::to_string(2 * n));
        const double log_ratio = log_of_int(count) - 2.0 * n * std::log(static_cast<double>(g.degree()));
        out.push_back(SpectralBound{std::exp(log_ratio / (2.0 * n)), BoundKind::certified_lower,
                                    static_cast<long>(n), kEvalSlack});
    }
    return out;
}

RayleighResult rho_rayleigh_lower(const LabeledGraph& g, unsigned R, unsigned iterations) {
    require(g.complete() || *g.ball_radius() >= R, "window smaller than requested radius");
    if (iterations == 0) iterations = 10 * std::max(R, 1u);

    // restrict to the radius-R sub-ball; deeper materialized vertices stay 0
    const std::size_t V = g.vertex_count();
    const double inv_d = 1.0 / g.degree();
    std::vector<char> inside(V, 0);
    for (VertexId v = 0; v < V; ++v) inside[v] = g.complete() || g.depth(v) <= R;

    std::vector<double> x(V, 0.0), y(V, 0.0);
    x[g.root()] = 1.0;
    // The reported value is ||Q x|| / ||x||, the square root of the Rayleigh
    // quotient of Q^2. The plain quotient of Q vanishes identically on
    // bipartite balls (the delta start alternates parity); the norm ratio is
    // still bounded by ||Q|| <= rho and converges to ||Q||.
    double value = 0.0, prev = 0.0, increment = 0.0;
    unsigned done = 0;
    for (unsigned it = 0; it < iterations; ++it) {
        parallel_for(V, [&](std::size_t vi) {
            const VertexId v = static_cast<VertexId>(vi);
            if (!inside[v]) return;
            double acc = 0.0;
            for (std::uint32_t s = 0; s < g.degree(); ++s) {
                VertexId t = g.target(v, s);
                if (t != graph::kNoVertex && inside[t]) acc += x[t];
            }
            y[v] = acc * inv_d;
        });
        // serial reductions keep results identical across thread counts
        double den = 0.0, norm_sq = 0.0;
        for (VertexId v = 0; v < V; ++v) {
            if (!inside[v]) continue;
            den += x[v] * x[v];
            norm_sq += y[v] * y[v];
        }
        prev = value;
        value = std::sqrt(norm_sq / den);
        increment = value - prev;
        ++done;
        if (norm_sq == 0.0) break;  // operator annihilated the iterate
        const double inv_norm = 1.0 / std::sqrt(norm_sq);
        for (VertexId v = 0; v < V; ++v) x[v] = inside[v] ? y[v] * inv_norm : 0.0;
    }
    RayleighResult res;
    res.bound = SpectralBound{value, BoundKind::certified_lower, static_cast<long>(R), kEvalSlack};
    res.last_increment = increment;
    res.iterations = done;
    return res;
}

SpectralBound rho_tree_exact(unsigned d) {
    require(d >= 2, "tree degree must be >= 2");
    return SpectralBound{2.0 * std::sqrt(static_cast<double>(d - 1)) / d, BoundKind::exact_reference,
                         static_cast<long>(d), 0.0};
}

Rat rho_sq_tree_exact(unsigned d) {
    require(d >= 2, "tree degree must be >= 2");
    return Rat(4 * (static_cast<long>(d) - 1), static_cast<long>(d) * d);
}

Spectrum eigenvalues_symmetric(const std::vector<double>& dense, std::size_t n,
                               double trace_expect, double frob_sq_expect, double scale) {
    require(n >= 1 && dense.size() == n * n, "bad matrix shape");
    Eigen::MatrixXd A(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) A(i, j) = dense[i * n + j];
    }
    check_internal((A - A.transpose()).cwiseAbs().maxCoeff() == 0.0, "adjacency matrix not symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(A);
    check_internal(solver.info() == Eigen::Success, "eigen solver failed");

    Spectrum spec;
    spec.values.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + n);

    // residual and exact-moment checks
    for (std::size_t j = 0; j < n; ++j) {
        const double res = (A * solver.eigenvectors().col(j) - solver.eigenvalues()[j] * solver.eigenvectors().col(j)).norm();
        check_internal(res <= 1e-8 * scale, "eigenpair residual too large");
    }
    double tr = 0.0, frob = 0.0;
    for (double l : spec.values) {
        tr += l;
        frob += l * l;
    }
    check_internal(std::abs(tr - trace_expect) <= 1e-9 * std::max(1.0, std::abs(trace_expect)) * n,
                   "spectrum trace identity violated");
    check_internal(std::abs(frob - frob_sq_expect) <= 1e-9 * std::max(1.0, frob_sq_expect) * n,
                   "spectrum moment identity violated");
    return spec;
}

Spectrum eigenvalues_finite(const LabeledGraph& g) {
    require(g.complete(), "eigenvalues_finite needs a finite complete graph");
    const std::size_t n = g.vertex_count();
    std::vector<double> dense(n * n, 0.0);
    double trace = 0.0, frob = 0.0;
    for (VertexId v = 0; v < n; ++v) {
        for (auto [u, mult] : g.adjacency_row(v)) {
            dense[static_cast<std::size_t>(v) * n + u] = static_cast<double>(mult);
            if (u == v) trace += mult;
            frob += static_cast<double>(mult) * mult;
        }
    }
    return eigenvalues_symmetric(dense, n, trace, frob, g.degree());
}

RamanujanReport ramanujan_from_spectrum(const Spectrum& spec, unsigned d, bool connected, double tol) {
    RamanujanReport rep;
    rep.degree = d;
    rep.bound = 2.0 * std::sqrt(static_cast<double>(d) - 1.0);
    rep.connected = connected;

    std::vector<double> vals = spec.values;  // ascending
    check_internal(!vals.empty() && std::abs(vals.back() - d) <= 1e-7 * std::max<double>(d, 1),
                   "regular graph must have top eigenvalue d");
    vals.pop_back();  // the Perron eigenvalue d
    if (!vals.empty() && std::abs(vals.front() + static_cast<double>(d)) <= tol) {
        vals.erase(vals.begin());  // bipartite companion -d
        rep.bipartite_pair_removed = true;
    }
    double extremal = 0.0;
    for (double l : vals) {
        if (std::abs(l) > std::abs(extremal)) extremal = l;
    }
    rep.extremal_nontrivial = extremal;
    rep.ramanujan = std::abs(extremal) <= rep.bound + tol;
    return rep;
}

RamanujanReport is_ramanujan_finite(const LabeledGraph& g, double tol) {
    return ramanujan_from_spectrum(eigenvalues_finite(g), g.degree(), g.connected(), tol);
}

}  // namespace specrad::spectral
