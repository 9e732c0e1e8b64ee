#include "specrad/walks.hpp"

#include "specrad/parallel.hpp"

#include <functional>
#include <sstream>

namespace specrad::walks {

namespace {

void check_radius(const LabeledGraph& g, unsigned n) {
    if (g.complete()) return;
    const unsigned needed = (n + 1) / 2;
    if (*g.ball_radius() < needed) {
        fail("ball radius " + std::to_string(*g.ball_radius()) + " is insufficient for walks of length " +
             std::to_string(n) + " (need " + std::to_string(needed) + "); refusing to truncate");
    }
}

// One pull step of the forward DP: next[u] = sum over slots of cur[target].
// The edge involution pairs u's out-slots with its in-edges, so pulling along
// out-slots sums exactly over walks arriving at u. Absent slots (ball
// boundary) contribute zero.
void dp_step(const LabeledGraph& g, const std::vector<Int>& cur, std::vector<Int>& next) {
    const std::size_t V = cur.size();
    const std::uint32_t d = g.degree();
    parallel_for(V, [&](std::size_t u) {
        Int acc = 0;
        for (std::uint32_t s = 0; s < d; ++s) {
            VertexId t = g.target(static_cast<VertexId>(u), s);
            if (t != graph::kNoVertex) acc += cur[t];
        }
        next[u] = std::move(acc);
    });
}

}  // namespace

CountProfile CountProfile::forward(const LabeledGraph& g, unsigned n) {
    check_radius(g, n);
    CountProfile p;
    const std::size_t V = g.vertex_count();
    p.table_.resize(n + 1);
    p.table_[0].assign(V, 0);
    p.table_[0][g.root()] = 1;
    for (unsigned t = 1; t <= n; ++t) {
        p.table_[t].assign(V, 0);
        dp_step(g, p.table_[t - 1], p.table_[t]);
    }
    return p;
}

Int CountProfile::layer_total(unsigned t) const {
    Int total = 0;
    for (const Int& c : table_[t]) total += c;
    return total;
}

Int return_count(const LabeledGraph& g, unsigned n) {
    check_radius(g, n);
    std::vector<Int> cur(g.vertex_count(), 0), next(g.vertex_count(), 0);
    cur[g.root()] = 1;
    for (unsigned t = 0; t < n; ++t) {
        dp_step(g, cur, next);
        cur.swap(next);
    }
    return cur[g.root()];
}

std::vector<Int> return_count_series(const LabeledGraph& g, unsigned n_max) {
    check_radius(g, n_max);
    std::vector<Int> series;
    series.reserve(n_max + 1);
    std::vector<Int> cur(g.vertex_count(), 0), next(g.vertex_count(), 0);
    cur[g.root()] = 1;
    series.push_back(cur[g.root()]);
    for (unsigned t = 1; t <= n_max; ++t) {
        dp_step(g, cur, next);
        cur.swap(next);
        series.push_back(cur[g.root()]);
    }
    return series;
}

PassageTable PassageTable::compute(const LabeledGraph& g, unsigned n) {
    PassageTable p;
    p.n_ = n;
    p.forward_ = CountProfile::forward(g, n);
    p.vertex_count_ = g.vertex_count();
    p.returns_ = p.forward_.count(n, g.root());
    return p;
}

Int PassageTable::passage(unsigned i, VertexId v) const {
    require(i >= 1 && i <= n_, "passage time out of range");
    return forward_.count(i, v) * forward_.count(n_ - i, v);
}

Int PassageTable::passage_row_total(unsigned i) const {
    Int total = 0;
    for (VertexId v = 0; v < vertex_count_; ++v) total += passage(i, v);
    return total;
}

TraceMeasure::TraceMeasure(std::vector<std::pair<VertexId, Rat>> entries) : entries_(std::move(entries)) {
    for (auto& [v, m] : entries_) {
        check_internal(m > 0, "trace measure with nonpositive mass");
    }
}

Rat TraceMeasure::mass(VertexId v) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), v,
                               [](const auto& e, VertexId x) { return e.first < x; });
    if (it != entries_.end() && it->first == v) return it->second;
    return Rat(0);
}

Rat TraceMeasure::mass_of_set(std::span<const VertexId> vs) const {
    Rat total(0);
    for (VertexId v : vs) total += mass(v);
    return total;
}

Rat TraceMeasure::total() const {
    Rat total(0);
    for (const auto& [v, m] : entries_) total += m;
    return total;
}

std::string TraceMeasure::to_csv(const std::function<std::string(VertexId)>& name) const {
    std::ostringstream out;
    out << "element,numerator,denominator\n";
    for (const auto& [v, m] : entries_) {
        out << name(v) << "," << boost::multiprecision::numerator(m) << ","
            << boost::multiprecision::denominator(m) << "\n";
    }
    return out.str();
}

TraceMeasure trace_measure(const LabeledGraph& g, unsigned n) {
    require(n >= 1, "trace measure needs n >= 1");
    auto table = PassageTable::compute(g, n);
    if (table.total_returns() == 0) {
        fail("no return walks of length " + std::to_string(n) + "; the trace measure is undefined");
    }
    const Int denom = Int(n) * table.total_returns();
    std::vector<std::pair<VertexId, Rat>> entries;
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        Int num = 0;
        for (unsigned i = 1; i <= n; ++i) num += table.passage(i, v);
        if (num != 0) entries.emplace_back(v, Rat(num, denom));
    }
    return TraceMeasure(std::move(entries));
}

TraceMeasure nu_measure(const LabeledGraph& g, unsigned n) {
    require(n >= 1, "nu needs n >= 1");
    check_radius(g, 4 * n);
    // one forward profile to horizon 4n serves every mu_{2k}, k = n+1..2n
    auto profile = CountProfile::forward(g, 4 * n);
    const std::size_t V = g.vertex_count();
    std::vector<Rat> acc(V, Rat(0));
    for (unsigned k = n + 1; k <= 2 * n; ++k) {
        const unsigned len = 2 * k;
        const Int returns = profile.count(len, g.root());
        check_internal(returns > 0, "even-length return count vanished");
        const Int denom = Int(len) * returns;
        for (VertexId v = 0; v < V; ++v) {
            Int num = 0;
            for (unsigned i = 1; i <= len; ++i) num += profile.count(i, v) * profile.count(len - i, v);
            if (num != 0) acc[v] += Rat(num, denom);
        }
    }
    std::vector<std::pair<VertexId, Rat>> entries;
    for (VertexId v = 0; v < V; ++v) {
        if (acc[v] != 0) entries.emplace_back(v, acc[v] / n);
    }
    return TraceMeasure(std::move(entries));
}

QuasiInvarianceReport quasi_invariance_margin(BallView& ball, std::span<const VertexId> A,
                                              fg::Letter s, unsigned n, const Rat& rho_sq_lower) {
    require(rho_sq_lower > 0, "rho^2 lower bound must be positive");
    ball.ensure_radius(2 * n + 1);
    TraceMeasure nu = nu_measure(ball.graph(), n);

    QuasiInvarianceReport rep;
    rep.nu_A = nu.mass_of_set(A);
    Rat nu_As(0);
    for (VertexId v : A) nu_As += nu.mass(ball.step(v, s));
    rep.nu_As = nu_As;
    const unsigned S2 = ball.graph().degree() * ball.graph().degree();
    rep.subtrahend = Rat(n) * rep.nu_A / (Rat(n + 1) * S2 * rho_sq_lower) - Rat(1, n);
    rep.margin = rep.nu_As - rep.subtrahend;
    return rep;
}

std::set<unsigned> nonchanging_times(std::span<const fg::Letter> w, BallView& schreier) {
    std::set<unsigned> times;
    VertexId cur = schreier.graph().root();
    for (std::size_t t = 1; t <= w.size(); ++t) {
        VertexId nxt = schreier.step(cur, w[t - 1]);
        if (nxt == cur) times.insert(static_cast<unsigned>(t));
        cur = nxt;
    }
    return times;
}

}  // namespace specrad::walks
