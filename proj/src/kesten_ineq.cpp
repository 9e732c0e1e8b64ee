#include "specrad/kesten_ineq.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace specrad::ineq {

namespace {

// Cayley ball of <F> with respect to the word multiset F, in the F-metric.
// Vertices are reduced ambient words; slot i multiplies by F[i]; the reverse
// slot is the index of the inverse word. Loops cannot occur (F identity-free)
// and two slots never coincide as edges (distinct words move differently).
graph::LabeledGraph subgroup_cayley_ball(const std::vector<fg::Word>& F, unsigned radius) {
    // F is symmetric: locate inverse indices
    std::vector<std::uint32_t> inv_slot(F.size());
    for (std::size_t i = 0; i < F.size(); ++i) {
        auto it = std::find(F.begin(), F.end(), F[i].inverse());
        check_internal(it != F.end(), "generating set not symmetric");
        inv_slot[i] = static_cast<std::uint32_t>(it - F.begin());
    }

    std::map<fg::Word, graph::VertexId> id_of;
    std::vector<fg::Word> words;
    std::vector<std::vector<graph::VertexId>> slots;
    std::vector<std::uint32_t> depth;
    auto intern = [&](const fg::Word& w, std::uint32_t d) {
        auto [it, fresh] = id_of.emplace(w, static_cast<graph::VertexId>(words.size()));
        if (fresh) {
            words.push_back(w);
            slots.emplace_back(F.size(), graph::kNoVertex);
            depth.push_back(d);
        }
        return it->second;
    };
    intern(fg::Word(), 0);
    std::size_t head = 0;
    for (std::uint32_t level = 0; level < radius; ++level) {
        const std::size_t level_end = words.size();
        for (; head < level_end; ++head) {
            for (std::size_t i = 0; i < F.size(); ++i) {
                graph::VertexId t = intern(words[head] * F[i], depth[head] + 1);
                slots[head][i] = t;
                // write the reverse edge too, so boundary vertices see their
                // in-edges and return-walk DP stays exact at full radius
                slots[t][inv_slot[i]] = static_cast<graph::VertexId>(head);
            }
        }
    }
    return graph::ball_from_layers(slots, depth, inv_slot, radius);
}

}  // namespace

SubgroupRhoResult subgroup_rho(const fg::CoreAutomaton& H, const std::vector<fg::Word>& F,
                               RhoMethod method, unsigned parameter) {
    SubgroupRhoResult res;
    for (const fg::Word& w : F) {
        require(!w.is_identity(), "generating candidate set must be identity-free");
        if (member(H, w)) res.intersection.push_back(w);
    }
    std::sort(res.intersection.begin(), res.intersection.end());
    if (res.intersection.empty()) {
        res.empty_intersection = true;
        return res;
    }
    // symmetry of F intersect H follows from symmetry of F and H being a subgroup
    const auto& FH = res.intersection;

    if (method == RhoMethod::automatic || method == RhoMethod::free_basis_exact) {
        // inverse pairing
        bool paired = FH.size() % 2 == 0;
        if (paired) {
            for (const fg::Word& w : FH) {
                if (!std::binary_search(FH.begin(), FH.end(), w.inverse())) {
                    paired = false;
                    break;
                }
            }
        }
        if (paired) {
            const unsigned r = static_cast<unsigned>(FH.size() / 2);
            fg::SubgroupSpec gen;
            gen.generators = FH;
            const unsigned ambient_rank = H.rank();
            if (free_rank(fg::fold(gen, ambient_rank)) == r) {
                res.bound = spectral::rho_tree_exact(2 * r);
                res.used = RhoMethod::free_basis_exact;
                return res;
            }
        }
        require(method != RhoMethod::free_basis_exact, "intersection is not a free basis with inverses");
    }

    auto ball = subgroup_cayley_ball(FH, parameter);
    if (method == RhoMethod::rayleigh) {
        res.bound = spectral::rho_rayleigh_lower(ball, parameter).bound;
        res.used = RhoMethod::rayleigh;
    } else {
        res.bound = spectral::rho_return_lower(ball, parameter);
        res.used = RhoMethod::return_lower;
    }
    return res;
}

IntegrandResult integrand(const fg::SubgroupSpec& H, unsigned rank, unsigned walk_len, unsigned m) {
    require(walk_len >= 2 && walk_len % 2 == 0, "integrand needs an even positive walk length");
    require(m >= 1, "power radius must be >= 1");

    const unsigned radius = walk_len / 2;
    auto cayley = graph::cayley_space(rank);
    cayley.ensure_radius(radius);
    walks::TraceMeasure mu = walks::trace_measure(cayley.graph(), walk_len);

    auto schreier = graph::schreier_space(fg::fold(H, rank), rank);
    const auto S_m = fg::power_ball_words(rank, m);

    // H^g cap S^(m) = {w in S^(m) : (Hg) w = Hg}; depends on g only through
    // the coset Hg. Memoize rho per coset.
    struct CosetData {
        std::vector<fg::Word> loops;
        std::optional<spectral::SpectralBound> rho;
    };
    std::map<graph::VertexId, CosetData> memo;

    IntegrandResult out;
    for (const auto& [vertex, mass] : mu.entries()) {
        const fg::Word g = cayley.vertex_word(vertex);
        const graph::VertexId coset = schreier.trace(g);
        auto [it, fresh] = memo.try_emplace(coset);
        if (fresh) {
            for (const fg::Word& w : S_m) {
                graph::VertexId end = coset;
                for (fg::Letter s : w.letters()) end = schreier.step(end, s);
                if (end == coset) it->second.loops.push_back(w);
            }
            if (!it->second.loops.empty()) {
                // conjugate + fold + rho; the loop words at the coset equal
                // H^g cap S^(m) read in the conjugated subgroup
                auto rho = subgroup_rho(fg::fold(conjugate(H, g), rank), S_m);
                check_internal(!rho.empty_intersection && rho.intersection == it->second.loops,
                               "coset-loop classification disagrees with conjugate+fold+intersect");
                it->second.rho = rho.bound;
            }
        }

        IntegrandRow row;
        row.element = vertex;
        row.word = g;
        row.mass = mass;
        row.intersection_size = it->second.loops.size();
        if (row.intersection_size > 0) {
            row.rho = it->second.rho;
            const double neg_log = std::max(0.0, -std::log(row.rho->value));
            row.contribution = to_double(row.mass) * static_cast<double>(row.intersection_size) * neg_log;
            if (row.rho->kind == spectral::BoundKind::heuristic) out.all_certified = false;
        }
        out.total += row.contribution;
        out.rows.push_back(std::move(row));
    }
    return out;
}

InequalityReport finite_n_inequality(const fg::SubgroupSpec& H, unsigned rank, unsigned n, unsigned m) {
    require(n >= 4 && n % 2 == 0, "finite-n inequality needs even n >= 4");

    InequalityReport rep;
    rep.n = n;

    auto cayley = graph::cayley_ball(rank, (n + 1) / 2);
    auto counts = walks::return_count_series(cayley, n);
    rep.count_G = counts[n];
    rep.count_G_minus2 = counts[n - 2];
    auto schreier = graph::schreier_ball(fg::fold(H, rank), rank, (n + 1) / 2);
    rep.count_H = walks::return_count(schreier, n);

    rep.integrand = integrand(H, rank, n - 2, m);

    rep.lhs = spectral::log_of_int(rep.count_H) - spectral::log_of_int(rep.count_G);
    const double prefactor =
        static_cast<double>(n - 2) * to_double(Rat(rep.count_G_minus2, rep.count_G));
    rep.rhs = prefactor * rep.integrand.total;
    rep.margin = rep.lhs - rep.rhs;
    rep.certified = rep.integrand.all_certified;
    rep.error_slack = 2.0 * spectral::kEvalSlack * (1.0 + std::abs(rep.lhs) + std::abs(rep.rhs));
    return rep;
}

std::vector<AsymptoticRow> asymptotic_report(const fg::SubgroupSpec& H, unsigned rank,
                                             unsigned n_max, unsigned m) {
    require(n_max >= 4 && n_max % 2 == 0, "asymptotic report needs even n_max >= 4");

    const auto rho_G = spectral::rho_tree_exact(2 * rank);
    const double S_sq = static_cast<double>(2 * rank) * (2 * rank);

    auto schreier = graph::schreier_ball(fg::fold(H, rank), rank, n_max / 2);
    auto schreier_bounds = spectral::rho_return_lower_series(schreier, n_max / 2);
    auto cayley = graph::cayley_ball(rank, n_max / 2);
    auto cayley_bounds = spectral::rho_return_lower_series(cayley, n_max / 2);

    std::vector<AsymptoticRow> rows;
    for (unsigned n = 4; n <= n_max; n += 2) {
        AsymptoticRow row;
        row.n = n;
        const auto& sch = schreier_bounds[n / 2 - 1];
        row.schreier_bound = sch.value;
        row.cayley_bound = cayley_bounds[n / 2 - 1].value;
        row.lhs = std::log(sch.value) - std::log(rho_G.value);
        row.lhs_matched = std::log(sch.value) - std::log(row.cayley_bound);
        auto I = integrand(H, rank, n, m);
        row.integrand_total = I.total;
        row.rhs = I.total / (S_sq * rho_G.value * rho_G.value);
        row.margin = row.lhs - row.rhs;
        row.certified = I.all_certified;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace specrad::ineq
