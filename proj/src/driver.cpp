#include "specrad/driver.hpp"

#include "specrad/cycles.hpp"
#include "specrad/kesten_ineq.hpp"
#include "specrad/spectral.hpp"
#include "specrad/walks.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace specrad::cli {

namespace {

using nlohmann::json;

std::string fmt_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.15g", x);
    return buf;
}

std::string fmt_rat(const Rat& r) {
    std::ostringstream out;
    out << boost::multiprecision::numerator(r) << "/" << boost::multiprecision::denominator(r);
    return out.str();
}

json bound_json(const spectral::SpectralBound& b) {
    return json{{"value", fmt_double(b.value)},
                {"kind", spectral::to_string(b.kind)},
                {"parameter", b.parameter},
                {"error_slack", fmt_double(b.error_slack)}};
}

struct GroupOptions {
    unsigned rank = 2;
    std::string subgroup;  // comma-separated words; empty = trivial subgroup
    std::string spec_file;

    void attach(CLI::App* app, bool subgroup_required = false) {
        app->add_option("--rank", rank, "free group rank k (alphabet a..)");
        auto* sub = app->add_option("--subgroup", subgroup,
                                    "subgroup generators, comma separated; uppercase = inverse");
        app->add_option("--spec", spec_file, "group spec file with 'rank K' and 'subgroup ...' lines");
        if (subgroup_required) sub->required();
    }

    void resolve() {
        if (spec_file.empty()) return;
        std::ifstream in(spec_file);
        require(in.good(), "cannot open spec file: " + spec_file);
        std::string key;
        while (in >> key) {
            if (key == "rank") {
                require(static_cast<bool>(in >> rank), "spec file: rank needs a value");
            } else if (key == "subgroup") {
                std::getline(in, subgroup);
                while (!subgroup.empty() && subgroup.front() == ' ') subgroup.erase(subgroup.begin());
            } else {
                fail("spec file: unknown key '" + key + "'");
            }
        }
    }

    fg::SubgroupSpec parsed() const { return fg::SubgroupSpec::parse(subgroup); }
    json to_json() const { return json{{"rank", rank}, {"subgroup", subgroup}}; }
};

graph::BallView make_space(const GroupOptions& g) {
    return graph::BallView(fg::fold(g.parsed(), g.rank), g.rank);
}

std::string measure_csv(const walks::TraceMeasure& m, graph::BallView& space) {
    std::ostringstream out;
    out << "element,numerator,denominator,float\n";
    for (const auto& [v, mass] : m.entries()) {
        fg::Word w = space.vertex_word(v);
        out << (w.is_identity() ? "e" : w.str()) << "," << boost::multiprecision::numerator(mass)
            << "," << boost::multiprecision::denominator(mass) << "," << fmt_double(to_double(mass))
            << "\n";
    }
    return out.str();
}

}  // namespace

RunResult run(const std::vector<std::string>& args) {
    RunResult res;
    json summary;
    std::ostringstream table;

    CLI::App app{"spectral radii of Cayley/Schreier graphs via exact return-walk counting"};
    app.require_subcommand(1);

    // ---- walks count ----
    auto* walks_cmd = app.add_subcommand("walks", "exact walk counting");
    auto* walks_count = walks_cmd->add_subcommand("count", "|A(n,S)| return-walk count");
    GroupOptions wc_group;
    unsigned wc_n = 4;
    wc_group.attach(walks_count);
    walks_count->add_option("--n", wc_n, "walk length")->required();

    // ---- measure mu|nu ----
    auto* measure_cmd = app.add_subcommand("measure", "trace measures");
    auto* measure_mu = measure_cmd->add_subcommand("mu", "occupation measure mu_n");
    auto* measure_nu = measure_cmd->add_subcommand("nu", "averaged measure nu_n");
    GroupOptions mu_group, nu_group;
    unsigned mu_n = 4, nu_n = 1;
    mu_group.attach(measure_mu);
    measure_mu->add_option("--n", mu_n, "walk length (even)")->required();
    nu_group.attach(measure_nu);
    measure_nu->add_option("--n", nu_n, "nu index")->required();

    // ---- rho return|rayleigh|finite ----
    auto* rho_cmd = app.add_subcommand("rho", "spectral radius bounds");
    auto* rho_return = rho_cmd->add_subcommand("return", "return-count lower bound series");
    GroupOptions rr_group;
    unsigned rr_n = 8;
    rr_group.attach(rho_return);
    rho_return->add_option("--n", rr_n, "max walk length (even)")->required();

    auto* rho_rayleigh = rho_cmd->add_subcommand("rayleigh", "Rayleigh compression lower bound");
    GroupOptions ry_group;
    unsigned ry_radius = 10, ry_iters = 0;
    ry_group.attach(rho_rayleigh);
    rho_rayleigh->add_option("--radius", ry_radius, "ball radius R")->required();
    rho_rayleigh->add_option("--iterations", ry_iters, "power iterations (default 10R)");

    auto* rho_finite = rho_cmd->add_subcommand("finite", "finite graph spectrum and Ramanujan test");
    std::string rf_file;
    double rf_tol = 1e-9;
    rho_finite->add_option("--graph", rf_file, "finite graph file")->required();
    rho_finite->add_option("--tol", rf_tol, "eigenvalue tolerance");

    // ---- ineq finite-n|asymptotic ----
    auto* ineq_cmd = app.add_subcommand("ineq", "spectral radius inequality");
    auto* ineq_fn = ineq_cmd->add_subcommand("finite-n", "finite-n inequality report");
    GroupOptions fn_group;
    unsigned fn_n = 6, fn_m = 1;
    fn_group.attach(ineq_fn, true);
    ineq_fn->add_option("--n", fn_n, "even walk length >= 4")->required();
    ineq_fn->add_option("--m", fn_m, "power radius for S^(m)");

    auto* ineq_as = ineq_cmd->add_subcommand("asymptotic", "asymptotic inequality series");
    GroupOptions as_group;
    unsigned as_nmax = 8, as_m = 1;
    as_group.attach(ineq_as, true);
    ineq_as->add_option("--n-max", as_nmax, "even max walk length")->required();
    ineq_as->add_option("--m", as_m, "power radius for S^(m)");

    // ---- power ----
    auto* power_cmd = app.add_subcommand("power", "non-backtracking graph power");
    std::string pw_file;
    unsigned pw_k = 2;
    power_cmd->add_option("--graph", pw_file, "finite graph file")->required();
    power_cmd->add_option("--k", pw_k, "power order")->required();

    // ---- cycles indicator|density-dp|density-mc ----
    auto* cycles_cmd = app.add_subcommand("cycles", "non-backtracking cycle machinery");
    auto* cy_ind = cycles_cmd->add_subcommand("indicator", "C/D indicators at a vertex");
    std::string ci_file;
    GroupOptions ci_group;
    unsigned ci_k = 2;
    unsigned ci_vertex = 0;
    ci_group.attach(cy_ind);
    cy_ind->add_option("--graph", ci_file, "finite graph file (otherwise group options)");
    cy_ind->add_option("--k", ci_k, "cycle length")->required();
    cy_ind->add_option("--vertex", ci_vertex, "base vertex id");

    auto* cy_dp = cycles_cmd->add_subcommand("density-dp", "exact cycle density series");
    std::string dp_file;
    GroupOptions dp_group;
    unsigned dp_k = 2, dp_n = 16;
    dp_group.attach(cy_dp);
    cy_dp->add_option("--graph", dp_file, "finite graph file (otherwise group options)");
    cy_dp->add_option("--k", dp_k, "max cycle length")->required();
    cy_dp->add_option("--n", dp_n, "series horizon")->required();

    auto* cy_mc = cycles_cmd->add_subcommand("density-mc", "Monte Carlo cycle density series");
    std::string mc_file;
    GroupOptions mc_group;
    unsigned mc_k = 2, mc_n = 16, mc_walkers = 10000;
    std::uint64_t mc_seed = 1;
    mc_group.attach(cy_mc);
    cy_mc->add_option("--graph", mc_file, "finite graph file (otherwise group options)");
    cy_mc->add_option("--k", mc_k, "max cycle length")->required();
    cy_mc->add_option("--n", mc_n, "series horizon")->required();
    cy_mc->add_option("--walkers", mc_walkers, "number of walkers");
    cy_mc->add_option("--seed", mc_seed, "RNG seed");

    // ---- realize ----
    auto* realize_cmd = app.add_subcommand("realize", "even-regular graph as a Schreier graph");
    std::string rz_file;
    realize_cmd->add_option("--graph", rz_file, "finite graph file")->required();

    // ---- qinv ----
    auto* qinv_cmd = app.add_subcommand("qinv", "quasi-invariance margin of nu_n");
    GroupOptions qi_group;
    unsigned qi_n = 1;
    std::string qi_set = "e";
    std::string qi_letter = "a";
    qi_group.attach(qinv_cmd);
    qinv_cmd->add_option("--n", qi_n, "nu index")->required();
    qinv_cmd->add_option("--set", qi_set, "comma separated words naming the set A");
    qinv_cmd->add_option("--letter", qi_letter, "translating letter s");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        std::ostringstream msg;
        msg << e.what() << "\n";
        res.table = msg.str();
        res.exit_code = e.get_exit_code() == 0 ? 0 : 2;
        return res;
    }

    try {
        if (walks_count->parsed()) {
            wc_group.resolve();
            auto space = make_space(wc_group);
            space.ensure_radius((wc_n + 1) / 2);
            Int count = walks::return_count(space.graph(), wc_n);
            table << count << "\n";
            summary = {{"command", "walks count"}, {"group", wc_group.to_json()}, {"n", wc_n},
                       {"count", count.str()}};
        } else if (measure_mu->parsed() || measure_nu->parsed()) {
            const bool is_mu = measure_mu->parsed();
            GroupOptions& grp = is_mu ? mu_group : nu_group;
            unsigned n = is_mu ? mu_n : nu_n;
            grp.resolve();
            auto space = make_space(grp);
            space.ensure_radius(is_mu ? (n + 1) / 2 : 2 * n);
            walks::TraceMeasure m = is_mu ? walks::trace_measure(space.graph(), n)
                                          : walks::nu_measure(space.graph(), n);
            std::string csv = measure_csv(m, space);
            res.artifacts.emplace_back(is_mu ? "mu.csv" : "nu.csv", csv);
            table << csv;
            summary = {{"command", is_mu ? "measure mu" : "measure nu"},
                       {"group", grp.to_json()},
                       {"n", n},
                       {"support", m.support_size()},
                       {"total", fmt_rat(m.total())}};
        } else if (rho_return->parsed()) {
            rr_group.resolve();
            require(rr_n >= 2 && rr_n % 2 == 0, "--n must be even and >= 2");
            auto space = make_space(rr_group);
            space.ensure_radius(rr_n / 2);
            auto series = spectral::rho_return_lower_series(space.graph(), rr_n / 2);
            std::ostringstream csv;
            csv << "walk_length,value,kind,parameter,error_slack\n";
            table << "walk_length  value\n";
            json jser = json::array();
            for (const auto& b : series) {
                csv << 2 * b.parameter << "," << fmt_double(b.value) << "," << spectral::to_string(b.kind)
                    << "," << b.parameter << "," << fmt_double(b.error_slack) << "\n";
                table << 2 * b.parameter << "  " << fmt_double(b.value) << "\n";
                jser.push_back(bound_json(b));
            }
            res.artifacts.emplace_back("rho_return.csv", csv.str());
            summary = {{"command", "rho return"}, {"group", rr_group.to_json()}, {"n", rr_n},
                       {"bounds", jser}};
        } else if (rho_rayleigh->parsed()) {
            ry_group.resolve();
            auto space = make_space(ry_group);
            space.ensure_radius(ry_radius);
            auto r = spectral::rho_rayleigh_lower(space.graph(), ry_radius, ry_iters);
            table << fmt_double(r.bound.value) << "\n";
            summary = {{"command", "rho rayleigh"},
                       {"group", ry_group.to_json()},
                       {"radius", ry_radius},
                       {"iterations", r.iterations},
                       {"last_increment", fmt_double(r.last_increment)},
                       {"bound", bound_json(r.bound)}};
        } else if (rho_finite->parsed()) {
            auto g = graph::load_finite_graph_file(rf_file);
            auto spec = spectral::eigenvalues_finite(g);
            auto ram = spectral::is_ramanujan_finite(g, rf_tol);
            std::ostringstream csv;
            csv << "eigenvalue\n";
            for (double l : spec.values) csv << fmt_double(l) << "\n";
            res.artifacts.emplace_back("spectrum.csv", csv.str());
            table << "ramanujan " << (ram.ramanujan ? "true" : "false") << "  extremal "
                  << fmt_double(ram.extremal_nontrivial) << "  bound " << fmt_double(ram.bound) << "\n";
            summary = {{"command", "rho finite"},       {"graph", rf_file},
                       {"degree", ram.degree},          {"ramanujan", ram.ramanujan},
                       {"connected", ram.connected},    {"bound", fmt_double(ram.bound)},
                       {"extremal", fmt_double(ram.extremal_nontrivial)}};
        } else if (ineq_fn->parsed()) {
            fn_group.resolve();
            auto rep = ineq::finite_n_inequality(fn_group.parsed(), fn_group.rank, fn_n, fn_m);
            std::ostringstream csv;
            csv << "element,mass_num,mass_den,intersection,rho,contribution\n";
            for (const auto& row : rep.integrand.rows) {
                csv << (row.word.is_identity() ? "e" : row.word.str()) << ","
                    << boost::multiprecision::numerator(row.mass) << ","
                    << boost::multiprecision::denominator(row.mass) << "," << row.intersection_size
                    << "," << (row.rho ? fmt_double(row.rho->value) : "")
                    << "," << fmt_double(row.contribution) << "\n";
            }
            res.artifacts.emplace_back("integrand.csv", csv.str());
            table << "n " << rep.n << "  lhs " << fmt_double(rep.lhs) << "  rhs " << fmt_double(rep.rhs)
                  << "  margin " << fmt_double(rep.margin) << "  certified "
                  << (rep.certified ? "true" : "false") << "\n";
            summary = {{"command", "ineq finite-n"},
                       {"group", fn_group.to_json()},
                       {"n", fn_n},
                       {"m", fn_m},
                       {"lhs", fmt_double(rep.lhs)},
                       {"rhs", fmt_double(rep.rhs)},
                       {"margin", fmt_double(rep.margin)},
                       {"certified", rep.certified},
                       {"error_slack", fmt_double(rep.error_slack)},
                       {"count_G", rep.count_G.str()},
                       {"count_G_minus2", rep.count_G_minus2.str()},
                       {"count_H", rep.count_H.str()},
                       {"integrand_total", fmt_double(rep.integrand.total)}};
            if (rep.certified && rep.margin < -rep.error_slack) res.exit_code = 1;
        } else if (ineq_as->parsed()) {
            as_group.resolve();
            auto rows = ineq::asymptotic_report(as_group.parsed(), as_group.rank, as_nmax, as_m);
            std::ostringstream csv;
            csv << "n,lhs,rhs,margin,certified\n";
            table << "n  lhs  rhs  margin  certified\n";
            json jrows = json::array();
            for (const auto& r : rows) {
                csv << r.n << "," << fmt_double(r.lhs) << "," << fmt_double(r.rhs) << ","
                    << fmt_double(r.margin) << "," << (r.certified ? "true" : "false") << "\n";
                table << r.n << "  " << fmt_double(r.lhs) << "  " << fmt_double(r.rhs) << "  "
                      << fmt_double(r.margin) << "  " << (r.certified ? "true" : "false") << "\n";
                jrows.push_back({{"n", r.n},
                                 {"lhs", fmt_double(r.lhs)},
                                 {"rhs", fmt_double(r.rhs)},
                                 {"margin", fmt_double(r.margin)},
                                 {"certified", r.certified},
                                 {"schreier_bound", fmt_double(r.schreier_bound)},
                                 {"cayley_bound", fmt_double(r.cayley_bound)},
                                 {"lhs_matched", fmt_double(r.lhs_matched)}});
            }
            res.artifacts.emplace_back("asymptotic.csv", csv.str());
            summary = {{"command", "ineq asymptotic"}, {"group", as_group.to_json()},
                       {"n_max", as_nmax}, {"m", as_m}, {"rows", jrows}};
        } else if (power_cmd->parsed()) {
            auto g = graph::load_finite_graph_file(pw_file);
            auto p = cycles::graph_power(g, pw_k);
            std::string serialized = cycles::power_graph_to_string(p);
            res.artifacts.emplace_back("power.graph", serialized);
            auto check = cycles::ramanujan_power_check(g, pw_k);
            table << "power degree " << p.power_degree() << "  base ramanujan "
                  << (check.base.ramanujan ? "true" : "false") << "  power ramanujan "
                  << (check.powered.ramanujan ? "true" : "false") << "\n";
            summary = {{"command", "power"},
                       {"graph", pw_file},
                       {"k", pw_k},
                       {"power_degree", p.power_degree().str()},
                       {"base_ramanujan", check.base.ramanujan},
                       {"power_ramanujan", check.powered.ramanujan},
                       {"agree", check.agree}};
            if (!check.agree) res.exit_code = 1;
        } else if (cy_ind->parsed()) {
            graph::LabeledGraph g = [&]() {
                if (!ci_file.empty()) return graph::load_finite_graph_file(ci_file);
                ci_group.resolve();
                auto space = make_space(ci_group);
                space.ensure_radius(space.core_radius() + ci_k);
                return space.graph();
            }();
            auto c = cycles::cycle_indicator(g, ci_vertex, ci_k);
            auto d = cycles::independent_cycles(g, ci_vertex, ci_k);
            const char* dstr = d.status == cycles::TriState::yes
                                   ? "1"
                                   : (d.status == cycles::TriState::no ? "0" : "inconclusive");
            table << "C " << (c ? 1 : 0) << "  D " << dstr << "\n";
            summary = {{"command", "cycles indicator"}, {"k", ci_k}, {"vertex", ci_vertex},
                       {"C", c ? 1 : 0}, {"D", dstr}};
            if (d.certificate) {
                summary["certificate"] = {{"word1", d.certificate->word1.str()},
                                          {"word2", d.certificate->word2.str()},
                                          {"folded_rank", d.certificate->folded_rank}};
            }
        } else if (cy_dp->parsed()) {
            std::vector<Rat> q;
            json group_json;
            if (!dp_file.empty()) {
                q = cycles::cycle_density_dp(graph::load_finite_graph_file(dp_file), dp_k, dp_n);
                group_json = {{"graph", dp_file}};
            } else {
                dp_group.resolve();
                auto space = make_space(dp_group);
                q = cycles::cycle_density_dp(space, dp_k, dp_n);
                group_json = dp_group.to_json();
            }
            std::ostringstream csv;
            csv << "j,q_num,q_den,q_float\n";
            for (std::size_t j = 0; j < q.size(); ++j) {
                csv << j << "," << boost::multiprecision::numerator(q[j]) << ","
                    << boost::multiprecision::denominator(q[j]) << "," << fmt_double(to_double(q[j]))
                    << "\n";
            }
            res.artifacts.emplace_back("density_dp.csv", csv.str());
            table << csv.str();
            Rat cesaro(0);
            for (std::size_t j = 1; j < q.size(); ++j) cesaro += q[j];
            if (q.size() > 1) cesaro /= static_cast<long>(q.size() - 1);
            summary = {{"command", "cycles density-dp"}, {"source", group_json}, {"k", dp_k},
                       {"n", dp_n}, {"cesaro", fmt_rat(cesaro)}};
        } else if (cy_mc->parsed()) {
            cycles::McSeries mc;
            json group_json;
            if (!mc_file.empty()) {
                mc = cycles::cycle_density_mc(graph::load_finite_graph_file(mc_file), mc_k, mc_n,
                                              mc_walkers, mc_seed);
                group_json = {{"graph", mc_file}};
            } else {
                mc_group.resolve();
                auto space = make_space(mc_group);
                mc = cycles::cycle_density_mc(space, mc_k, mc_n, mc_walkers, mc_seed);
                group_json = mc_group.to_json();
            }
            std::ostringstream csv;
            csv << "j,estimate,std_error\n";
            for (std::size_t j = 0; j < mc.estimate.size(); ++j) {
                csv << j << "," << fmt_double(mc.estimate[j]) << "," << fmt_double(mc.std_error[j])
                    << "\n";
            }
            res.artifacts.emplace_back("density_mc.csv", csv.str());
            table << csv.str();
            summary = {{"command", "cycles density-mc"}, {"source", group_json}, {"k", mc_k},
                       {"n", mc_n}, {"walkers", mc_walkers}, {"seed", mc_seed}};
        } else if (realize_cmd->parsed()) {
            auto g = graph::load_finite_graph_file(rz_file);
            auto r = cycles::schreier_realization(g);
            table << "rank " << r.rank << "  generators " << r.subgroup.generators.size()
                  << "  verified " << (r.verified ? "true" : "false") << "\n";
            json gens = json::array();
            for (const auto& w : r.subgroup.generators) gens.push_back(w.str());
            summary = {{"command", "realize"}, {"graph", rz_file}, {"rank", r.rank},
                       {"generators", gens}, {"verified", r.verified}};
            if (!r.verified) res.exit_code = 1;
        } else if (qinv_cmd->parsed()) {
            qi_group.resolve();
            auto space = make_space(qi_group);
            space.ensure_radius(2 * qi_n + 1);
            std::vector<graph::VertexId> A;
            std::stringstream set_stream(qi_set);
            std::string piece;
            while (std::getline(set_stream, piece, ',')) {
                std::erase(piece, ' ');
                if (piece.empty() || piece == "e") {
                    A.push_back(space.graph().root());
                } else {
                    A.push_back(space.trace(fg::Word::parse(piece)));
                }
            }
            fg::Letter s = fg::Letter::from_char(qi_letter.at(0));
            Rat rho_sq = spectral::rho_sq_tree_exact(2 * qi_group.rank);
            auto rep = walks::quasi_invariance_margin(space, A, s, qi_n, rho_sq);
            table << "nu(A) " << fmt_rat(rep.nu_A) << "  nu(As) " << fmt_rat(rep.nu_As) << "  margin "
                  << fmt_rat(rep.margin) << "\n";
            summary = {{"command", "qinv"},
                       {"group", qi_group.to_json()},
                       {"n", qi_n},
                       {"set", qi_set},
                       {"letter", qi_letter},
                       {"rho_sq_lower", fmt_rat(rho_sq)},
                       {"nu_A", fmt_rat(rep.nu_A)},
                       {"nu_As", fmt_rat(rep.nu_As)},
                       {"margin", fmt_rat(rep.margin)}};
            if (rep.margin < 0) res.exit_code = 1;
        }
    } catch (const std::invalid_argument& e) {
        res.table = std::string("error: ") + e.what() + "\n";
        res.exit_code = 3;
        return res;
    }

    summary["schema_version"] = 1;
    res.summary_json = summary.dump(2);
    res.table = table.str();
    return res;
}

}  // namespace specrad::cli
