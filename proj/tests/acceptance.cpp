// Acceptance suite: one line per criterion, nonzero exit on any failure.
// Each criterion pins its thresholds and a wall-clock budget.

#include "specrad/cycles.hpp"
#include "specrad/kesten_ineq.hpp"
#include "specrad/spectral.hpp"
#include "specrad/walks.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

using namespace specrad;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

struct Criterion {
    std::string name;
    double budget_seconds;
    std::vector<std::string> problems;
    Clock::time_point start = Clock::now();

    Criterion(std::string n, double budget) : name(std::move(n)), budget_seconds(budget) {}

    void expect(bool ok, const std::string& what) {
        if (!ok) problems.push_back(what);
    }

    void finish() {
        const double elapsed = std::chrono::duration<double>(Clock::now() - start).count();
        if (elapsed >= budget_seconds) {
            problems.push_back("runtime " + std::to_string(elapsed) + "s exceeds budget " +
                               std::to_string(budget_seconds) + "s");
        }
        if (problems.empty()) {
            std::printf("[PASS] %s (%.2fs)\n", name.c_str(), elapsed);
        } else {
            ++g_failures;
            std::printf("[FAIL] %s (%.2fs)\n", name.c_str(), elapsed);
            for (const auto& p : problems) std::printf("       - %s\n", p.c_str());
        }
    }
};

fg::CoreAutomaton core_of(const char* gens, unsigned rank) {
    return fg::fold(fg::SubgroupSpec::parse(gens), rank);
}

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", x);
    return buf;
}

// ---------------------------------------------------------------- criterion 1
void criterion1() {
    Criterion c("criterion 1: return counts and trace measures equal brute-force enumeration (n <= 8)", 10.0);
    struct Instance {
        const char* name;
        const char* gens;
        unsigned rank;
    };
    for (Instance inst : {Instance{"Z", "", 1}, Instance{"F2", "", 2}, Instance{"Sch(<a,b>\\F3)", "a,b", 3}}) {
        graph::BallView space(core_of(inst.gens, inst.rank), inst.rank);
        space.ensure_radius(4);
        auto counts = walks::return_count_series(space.graph(), 8);
        for (unsigned n = 1; n <= 8; ++n) {
            auto e = oracle::enumerate_walks(space, n);
            c.expect(counts[n] == e.returns,
                     std::string(inst.name) + ": |A(" + std::to_string(n) + ")| DP vs enumeration");
            if (e.returns == 0) continue;
            auto mu = walks::trace_measure(space.graph(), n);
            const Int denom = Int(n) * e.returns;
            std::map<graph::VertexId, Rat> expected;
            for (unsigned i = 1; i <= n; ++i) {
                for (auto& [v, cnt] : e.passage[i]) expected[v] += Rat(cnt, denom);
            }
            bool equal = mu.entries().size() == expected.size();
            for (auto& [v, mass] : mu.entries()) {
                auto it = expected.find(v);
                equal = equal && it != expected.end() && it->second == mass;
            }
            c.expect(equal, std::string(inst.name) + ": mu_" + std::to_string(n) + " exact equality");
        }
    }
    c.finish();
}

// ---------------------------------------------------------------- criterion 2
void criterion2() {
    Criterion c("criterion 2: amenability witness on Z (return bound up, rayleigh near 1)", 5.0);
    auto ball = graph::cayley_ball(1, 16);
    auto series = spectral::rho_return_lower_series(ball, 16);
    c.expect(series.back().value >= 0.94,
             "rho_return_lower(n=16) = " + fmt(series.back().value) + " < 0.94");
    for (std::size_t i = 1; i < series.size(); ++i) {
        c.expect(series[i].value > series[i - 1].value, "return bound not strictly increasing at step " +
                                                            std::to_string(i));
    }
    auto ball30 = graph::cayley_ball(1, 30);
    auto ray = spectral::rho_rayleigh_lower(ball30, 30);
    c.expect(ray.bound.value >= 1.0 - 1e-6,
             "rho_rayleigh_lower(R=30) = " + fmt(ray.bound.value) + " < 1 - 1e-6 (compression ceiling cos(pi/62) = " +
                 fmt(std::cos(M_PI / 62.0)) + " makes this threshold unreachable; kept verbatim)");
    c.finish();
}

// ---------------------------------------------------------------- criterion 3
void criterion3() {
    Criterion c("criterion 3: free-group reference bounds on F2", 60.0);
    auto ball = graph::cayley_ball(2, 12);
    const double tree = spectral::rho_tree_exact(4).value;
    auto series = spectral::rho_return_lower_series(ball, 12);  // walk lengths 2..24
    for (std::size_t i = 0; i < series.size(); ++i) {
        c.expect(series[i].value <= tree + 1e-12,
                 "return bound exceeds tree value at walk length " + std::to_string(2 * (i + 1)));
        if (i > 0) {
            c.expect(series[i].value >= series[i - 1].value - 1e-15,
                     "return bound decreases at walk length " + std::to_string(2 * (i + 1)));
        }
    }
    auto ray = spectral::rho_rayleigh_lower(ball, 12);
    c.expect(std::abs(ray.bound.value - tree) < 0.03,
             "rayleigh(R=12) = " + fmt(ray.bound.value) + " not within 0.03 of " + fmt(tree));
    c.finish();
}

// ---------------------------------------------------------------- criterion 4
void criterion4() {
    Criterion c("criterion 4: finite-n inequality on F3 (H = <a,b>, trivial, full)", 120.0);
    for (unsigned n = 4; n <= 12; n += 2) {
        auto rep = ineq::finite_n_inequality(fg::SubgroupSpec::parse("a,b"), 3, n, 1);
        c.expect(rep.certified, "H=<a,b> n=" + std::to_string(n) + " not certified");
        c.expect(rep.margin >= -1e-10,
                 "H=<a,b> n=" + std::to_string(n) + " margin " + fmt(rep.margin) + " < -1e-10");
    }
    // H = {1}: both sides vanish identically
    for (unsigned n = 4; n <= 8; n += 2) {
        auto rep = ineq::finite_n_inequality(fg::SubgroupSpec{}, 3, n, 1);
        c.expect(rep.lhs == 0.0 && rep.rhs == 0.0 && rep.margin == 0.0,
                 "H={1} n=" + std::to_string(n) + " closed form violated");
    }
    // H = G: closed forms from the one-vertex Schreier graph and rho(G) = sqrt(5)/3
    for (unsigned n = 4; n <= 8; n += 2) {
        auto rep = ineq::finite_n_inequality(fg::SubgroupSpec::parse("a,b,c"), 3, n, 1);
        const double lhs_closed = n * std::log(6.0) - spectral::log_of_int(rep.count_G);
        const double neg_log_rho = -std::log(std::sqrt(5.0) / 3.0);
        const double rhs_closed =
            (n - 2) * to_double(Rat(rep.count_G_minus2, rep.count_G)) * 6.0 * neg_log_rho;
        c.expect(std::abs(rep.lhs - lhs_closed) <= 1e-9, "H=G lhs closed form, n=" + std::to_string(n));
        c.expect(std::abs(rep.rhs - rhs_closed) <= 1e-9, "H=G rhs closed form, n=" + std::to_string(n));
        c.expect(rep.margin >= 0.0, "H=G margin negative at n=" + std::to_string(n));
    }
    c.finish();
}

// ---------------------------------------------------------------- criterion 5
void criterion5() {
    Criterion c("criterion 5: petersen graph power and ramanujan agreement", 1.0);
    auto p = cycles::graph_power(graph::petersen_graph(), 2);
    c.expect(p.power_degree() == 6, "petersen^(2) degree");
    auto spec = cycles::eigenvalues_power(p);
    bool shape = spec.values.size() == 10;
    if (shape) {
        for (int i = 0; i < 5; ++i) shape = shape && std::abs(spec.values[i] + 2.0) <= 1e-8;
        for (int i = 5; i < 9; ++i) shape = shape && std::abs(spec.values[i] - 1.0) <= 1e-8;
        shape = shape && std::abs(spec.values[9] - 6.0) <= 1e-8;
    }
    c.expect(shape, "petersen^(2) spectrum is not {6, -2 x5, 1 x4} within 1e-8");
    auto chk_p = cycles::ramanujan_power_check(graph::petersen_graph(), 2);
    c.expect(chk_p.base.ramanujan && chk_p.powered.ramanujan && chk_p.agree, "petersen power check");
    auto chk_c = cycles::ramanujan_power_check(graph::cycle_graph(5), 2);
    c.expect(chk_c.base.ramanujan && chk_c.powered.ramanujan && chk_c.agree, "C5 power check");
    c.finish();
}

// ---------------------------------------------------------------- criterion 6
void criterion6() {
    Criterion c("criterion 6: measure identities and quasi-invariance suite", 30.0);
    struct Instance {
        const char* name;
        const char* gens;
        unsigned rank;
    };
    const std::vector<Instance> instances = {{"Z", "", 1},
                                             {"F2", "", 2},
                                             {"Sch(<a,b>\\F3)", "a,b", 3},
                                             {"Sch(<a2,b2>\\F2)", "aa,bb", 2}};
    for (const auto& inst : instances) {
        auto g = graph::schreier_ball(core_of(inst.gens, inst.rank), inst.rank, 8);
        auto counts = walks::return_count_series(g, 16);
        for (unsigned n = 1; n <= 16; ++n) {
            if (counts[n] == 0) continue;
            auto table = walks::PassageTable::compute(g, n);
            for (unsigned i = 1; i <= n; ++i) {
                if (table.passage_row_total(i) != counts[n]) {
                    c.expect(false, std::string(inst.name) + ": partition identity fails at n=" +
                                        std::to_string(n) + " i=" + std::to_string(i));
                    break;
                }
            }
            auto mu = walks::trace_measure(g, n);
            c.expect(mu.total() == 1, std::string(inst.name) + ": mu_" + std::to_string(n) + " mass");
            c.expect(mu.mass(g.root()) >= Rat(1, n),
                     std::string(inst.name) + ": mu_" + std::to_string(n) + "(root) < 1/n");
        }
        auto nu1 = walks::nu_measure(g, 1);
        auto mu4 = walks::trace_measure(g, 4);
        c.expect(nu1.entries() == mu4.entries(), std::string(inst.name) + ": nu_1 != mu_4");
    }

    // quasi-invariance margins; rho^2 lower bounds are the exact tree squares,
    // valid on Schreier graphs by count domination
    struct QinvCase {
        const char* name;
        const char* gens;
        unsigned rank;
        std::vector<const char*> A;
        char s;
        unsigned n;
    };
    const std::vector<QinvCase> suite = {
        {"Z,{0},a,1", "", 1, {""}, 'a', 1},
        {"Z,{0,1},A,2", "", 1, {"", "a"}, 'A', 2},
        {"F2,{e},a,2", "", 2, {""}, 'a', 2},
        {"F2,{e,a},b,1", "", 2, {"", "a"}, 'b', 1},
        {"F3,{e},c,1", "", 3, {""}, 'c', 1},
        {"Sch(<a,b>\\F3),{H,Hc},c,1", "a,b", 3, {"", "c"}, 'c', 1},
        {"Sch(<a2,b2>\\F2),{H,Ha},a,2", "aa,bb", 2, {"", "a"}, 'a', 2},
    };
    for (const auto& q : suite) {
        graph::BallView space(core_of(q.gens, q.rank), q.rank);
        space.ensure_radius(2 * q.n + 1);
        std::vector<graph::VertexId> A;
        for (const char* w : q.A) A.push_back(space.trace(fg::Word::parse(w)));
        auto rep = walks::quasi_invariance_margin(space, A, fg::Letter::from_char(q.s), q.n,
                                                  spectral::rho_sq_tree_exact(2 * q.rank));
        c.expect(rep.margin >= 0, std::string("quasi-invariance margin negative: ") + q.name);
    }
    c.finish();
}

// ---------------------------------------------------------------- criterion 7
void criterion7() {
    Criterion c("criterion 7: cycle indicators vs exhaustive oracles; power identity; D certificates", 10.0);
    auto petersen = graph::petersen_graph();
    auto c5 = graph::cycle_graph(5);
    auto tree = graph::cayley_ball(2, 7);
    for (unsigned k = 1; k <= 6; ++k) {
        for (graph::VertexId v = 0; v < 10; ++v) {
            c.expect(cycles::cycle_indicator(petersen, v, k).has_value() ==
                         (oracle::cyclic_nb_closed_walks(petersen, v, k) > 0),
                     "petersen C(" + std::to_string(v) + "," + std::to_string(k) + ")");
        }
        for (graph::VertexId v = 0; v < 5; ++v) {
            c.expect(cycles::cycle_indicator(c5, v, k).has_value() ==
                         (oracle::cyclic_nb_closed_walks(c5, v, k) > 0),
                     "C5 C(" + std::to_string(v) + "," + std::to_string(k) + ")");
        }
        c.expect(cycles::cycle_indicator(tree, tree.root(), k) == std::nullopt,
                 "tree has a cycle at k=" + std::to_string(k));
    }
    for (unsigned k : {2u, 3u}) {
        auto pk = cycles::graph_power(petersen, k);
        for (graph::VertexId v = 0; v < 10; ++v) {
            c.expect(cycles::cycle_indicator(petersen, v, k).has_value() == (pk.multiplicity(v, v) > 0),
                     "power identity at v=" + std::to_string(v) + " k=" + std::to_string(k));
        }
    }
    for (graph::VertexId v = 0; v < 10; ++v) {
        auto d = cycles::independent_cycles(petersen, v, 5);
        c.expect(d.status == cycles::TriState::yes, "petersen D(" + std::to_string(v) + ",5) != 1");
        if (d.status == cycles::TriState::yes) {
            fg::SubgroupSpec pair;
            pair.generators = {d.certificate->word1, d.certificate->word2};
            c.expect(fg::free_rank(fg::fold(pair, fg::kMaxFoldRank)) == 2,
                     "certificate refold rank != 2 at v=" + std::to_string(v));
            c.expect(cycles::cycle_indicator(petersen, v, 5).has_value(), "D=1 but C=0");
        }
    }
    c.expect(cycles::independent_cycles(c5, 0, 5).status == cycles::TriState::no, "C5 D != 0");
    c.expect(cycles::independent_cycles(tree, tree.root(), 4).status == cycles::TriState::no, "tree D != 0");
    c.finish();
}

// ---------------------------------------------------------------- criterion 8
void criterion8() {
    Criterion c("criterion 8: cycle density series, exact DP vs seeded monte carlo", 60.0);
    auto dp_space = graph::schreier_space(core_of("aa,bb", 2), 2);
    auto q = cycles::cycle_density_dp(dp_space, 2, 64);

    // frozen oracle values of the Cesaro averages (exact rationals)
    auto cesaro = [&](unsigned n) -> Rat {
        Rat acc(0);
        for (unsigned j = 1; j <= n; ++j) acc += q[j];
        return acc / static_cast<long>(n);
    };
    c.expect(cesaro(16) == Rat(Int("283937763"), Int("1073741824")), "cesaro(16) frozen value");
    c.expect(cesaro(32) == Rat(Int("645432248521748595"), Int("4611686018427387904")),
             "cesaro(32) frozen value");
    c.expect(cesaro(64) == Rat(Int("5981308404105157914540876236784292755"),
                               Int("85070591730234615865843651857942052864")),
             "cesaro(64) frozen value");
    Rat prev = cesaro(16);
    for (unsigned n = 17; n <= 64; ++n) {
        Rat cur = cesaro(n);
        c.expect(cur < prev, "cesaro averages not decreasing at n=" + std::to_string(n));
        prev = cur;
    }

    auto mc_space = graph::schreier_space(core_of("aa,bb", 2), 2);
    auto mc = cycles::cycle_density_mc(mc_space, 2, 64, 10000, 20260810);
    for (unsigned j = 0; j <= 64; ++j) {
        const double qd = to_double(q[j]);
        const double se = std::sqrt(qd * (1.0 - qd) / 10000.0);
        c.expect(std::abs(mc.estimate[j] - qd) <= 3.0 * se + 1e-12,
                 "monte carlo outside 3 standard errors at j=" + std::to_string(j));
    }
    c.finish();
}

// ---------------------------------------------------------------- criterion 9
void criterion9() {
    Criterion c("criterion 9: schreier realization round-trips", 1.0);
    auto k5 = cycles::schreier_realization(graph::complete_graph(5));
    c.expect(k5.rank == 2 && k5.verified, "K5 realization not verified");
    auto dc4 = cycles::schreier_realization(graph::doubled_cycle_graph(4));
    c.expect(dc4.rank == 2 && dc4.verified, "doubled C4 realization not verified");
    c.finish();
}

}  // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    if (g_failures == 0) {
        std::printf("all criteria passed\n");
    } else {
        std::printf("%d criterion(s) failed\n", g_failures);
    }
    return g_failures;
}
