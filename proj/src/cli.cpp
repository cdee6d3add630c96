#include "looprate/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "looprate/graph_io.hpp"
#include "looprate/lattice.hpp"
#include "looprate/looping.hpp"
#include "looprate/sampler.hpp"
#include "looprate/sandpile.hpp"

namespace looprate {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(errc::bad_input, "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string decimal6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

uint64_t resolve_seed(const CLI::Option* seed_opt, uint64_t seed_flag) {
    if (seed_opt->count() > 0) return seed_flag;  // flag wins
    if (const char* env = std::getenv("LOOPRATE_SEED")) return std::strtoull(env, nullptr, 10);
    return seed_flag;
}

nlohmann::json report_json(const EstimateReport& r) {
    return {{"estimate", r.estimate},
            {"stderr", r.stderr_},
            {"half_width99", r.half_width99},
            {"samples", r.samples},
            {"seed", r.seed}};
}

GraphFile load_graph(const std::string& path) { return parse_graph_json(read_file(path)); }

RotationSystem require_rotation(const GraphFile& gf) {
    if (!gf.rotation)
        fail(errc::incomplete_rotation, "graph file does not carry a rotation system");
    return *gf.rotation;
}

// ---- exact ----------------------------------------------------------------

nlohmann::json exact_json(const GraphFile& gf, const std::string& backend) {
    const WeightedGraph& g = gf.graph;
    RotationSystem rot = require_rotation(gf);
    bool use_float = backend == "float" || (backend == "auto" && g.vertex_count() > 64);
    nlohmann::json out;
    if (!use_float) {
        LoopStats st = loop_stats(g, rot);
        out["backend"] = "exact";
        out["tau"] = st.tau.to_string();
        out["rho"] = st.rho.to_string();
        out["lambda"] = st.lambda.to_string();
        out["mean_lerw_loop"] = st.mean_lerw_loop.to_string();
        out["delta_rho"] = st.delta_rho.to_string();
        out["edge_in_tree"] = st.edge_in_tree.to_string();
        if (st.sand_density) out["sand_density"] = st.sand_density->to_string();
        else out["sand_density"] = nullptr;
        out["f1"] = tree_weight(g).to_string();
        out["f2"] = f2_minor(g, g.sink().value_or(0)).to_string();
        out["unicycles"] = unicycles_via_dual(g, rot).to_string();
    } else {
        LoopStatsF st = loop_stats_float(g, rot);
        out["backend"] = "float";
        out["tau"] = st.tau;
        out["rho"] = st.rho;
        out["lambda"] = st.lambda;
        out["mean_lerw_loop"] = st.mean_lerw_loop;
        out["delta_rho"] = st.delta_rho;
        out["edge_in_tree"] = st.edge_in_tree;
        if (st.sand_density) out["sand_density"] = *st.sand_density;
        else out["sand_density"] = nullptr;
        out["f1"] = st.f1;
        out["f2"] = st.f2;
        out["unicycles"] = st.unicycles;
    }
    return out;
}

void emit_exact(std::ostream& os, const nlohmann::json& j, const std::string& format) {
    if (format == "json") {
        os << j.dump(2) << "\n";
        return;
    }
    const char* cols[] = {"tau",          "lambda",       "mean_lerw_loop", "rho",
                          "delta_rho",    "sand_density", "edge_in_tree",   "f1",
                          "f2",           "unicycles"};
    os << "tau,lambda,mean_lerw_loop,rho,delta_rho,sand_density,edge_in_tree,f1,f2,unicycles\n";
    bool first = true;
    for (const char* c : cols) {
        if (!first) os << ",";
        first = false;
        const nlohmann::json& v = j.at(c);
        if (v.is_null()) os << "";
        else if (v.is_string()) os << v.get<std::string>();
        else os << decimal6(v.get<double>());
    }
    os << "\n";
}

// ---- table ----------------------------------------------------------------

std::string cell(const AlphaPoly& p, double alpha) {
    return p.is_rational() ? p.rational().to_string() : decimal6(p.eval(alpha));
}

void emit_table(std::ostream& os, const std::vector<std::string>& names, const Rational& beta,
                const std::string& format) {
    // column order follows the published table:
    // tau | lambda | 1/rho | rho | delta rho | sigma
    nlohmann::json rows = nlohmann::json::array();
    for (const std::string& name : names) {
        LatticeSpec spec = builtin_lattice(name, beta);
        LatticeRow row = table_row(spec);
        nlohmann::json r;
        r["lattice"] = name;
        r["tau"] = cell(row.tau, row.alpha);
        r["lambda"] = row.rational() ? row.lambda_rational().to_string() : decimal6(row.lambda());
        r["mean_lerw_loop"] =
            row.rational() ? row.inv_rho_rational().to_string() : decimal6(row.inv_rho());
        r["rho"] = cell(row.rho, row.alpha);
        r["delta_rho"] = cell(row.delta_rho, row.alpha);
        r["sandpile_density"] = cell(row.sigma, row.alpha);
        rows.push_back(std::move(r));
    }
    if (format == "json") {
        os << rows.dump(2) << "\n";
        return;
    }
    os << "lattice,tau,lambda,mean_lerw_loop,rho,delta_rho,sandpile_density\n";
    for (const auto& r : rows) {
        os << r.at("lattice").get<std::string>() << "," << r.at("tau").get<std::string>() << ","
           << r.at("lambda").get<std::string>() << "," << r.at("mean_lerw_loop").get<std::string>()
           << "," << r.at("rho").get<std::string>() << "," << r.at("delta_rho").get<std::string>()
           << "," << r.at("sandpile_density").get<std::string>() << "\n";
    }
}

// ---- sample ---------------------------------------------------------------

nlohmann::json sample_json(const GraphFile& gf, long long steps, uint64_t seed) {
    const WeightedGraph& g = gf.graph;
    if (steps < 10000) fail(errc::bad_input, "need at least 1e4 steps");
    LoopingEstimates est = estimate_looping(g, steps, seed);
    nlohmann::json out;
    out["steps"] = est.steps;
    out["seed"] = est.seed;
    out["rho"] = report_json(est.rho);
    out["tau"] = report_json(est.tau);
    out["lambda"] = report_json(est.lambda);
    if (gf.rotation && g.vertex_count() <= 64) {
        LoopStats exact = loop_stats(g, *gf.rotation);
        out["rho"]["exact"] = exact.rho.to_string();
        // chain events of length 2 through distinct parallel strands are not
        // unicycle loops, so tau/lambda comparisons need a simple graph
        if (!g.has_parallel_edges()) {
            out["tau"]["exact"] = exact.tau.to_string();
            out["lambda"]["exact"] = exact.lambda.to_string();
        }
    }
    int root = g.sink().value_or(0);
    long long tree_samples = std::max<long long>(10000, steps / 10);
    std::vector<EstimateReport> probs = wilson_edge_probabilities(g, root, tree_samples, seed);
    PotentialKernel kernel = potential_kernel(g, green(g, root));
    nlohmann::json edges = nlohmann::json::array();
    for (int e = 0; e < g.edge_count(); ++e) {
        nlohmann::json je = report_json(probs[static_cast<size_t>(e)]);
        je["edge"] = e;
        je["exact"] = edge_in_tree_prob(g, kernel, e).to_string();
        edges.push_back(std::move(je));
    }
    out["edge_in_tree"] = std::move(edges);
    return out;
}

// ---- sandpile -------------------------------------------------------------

nlohmann::json sandpile_json(const std::string& path) {
    SandpileFile sf = parse_sandpile_json(read_file(path));
    GraphFile gf = sf.inline_graph
                       ? *sf.inline_graph
                       : load_graph((std::filesystem::path(path).parent_path() / sf.graph_path)
                                        .string());
    WeightedGraph unit = to_unit_multigraph(gf.graph);
    SandpileConfig c;
    c.h.assign(static_cast<size_t>(unit.vertex_count()), 0);
    std::map<long long, int> index;
    for (int v = 0; v < unit.vertex_count(); ++v) index[unit.vertex_id(v)] = v;
    for (const auto& [id, grains] : sf.heights) {
        auto it = index.find(id);
        if (it == index.end()) fail(errc::unknown_endpoint, "height vertex " + std::to_string(id));
        if (it->second == *unit.sink()) fail(errc::bad_input, "the sink holds no sand");
        c.h[static_cast<size_t>(it->second)] = grains;
    }
    auto [stable, counts] = stabilize(unit, std::move(c));
    nlohmann::json hj, tj;
    for (int v = 0; v < unit.vertex_count(); ++v) {
        if (v == *unit.sink()) continue;
        hj[std::to_string(unit.vertex_id(v))] = stable.h[static_cast<size_t>(v)];
        tj[std::to_string(unit.vertex_id(v))] = counts[static_cast<size_t>(v)];
    }
    return {{"heights", std::move(hj)}, {"topples", std::move(tj)}};
}

// ---- verify ---------------------------------------------------------------

struct VerifyCase {
    std::string name;
    EmbeddedGraph eg;
};

std::vector<VerifyCase> verify_corpus() {
    std::vector<VerifyCase> cases;
    cases.push_back({"house", cycle_graph(3, 2)});
    cases.push_back({"c4", cycle_graph(4, 0)});
    cases.push_back({"c5", cycle_graph(5, 0)});
    cases.push_back({"k4", wheel_graph(3, 0)});
    cases.push_back({"w4", wheel_graph(4, 0)});
    cases.push_back({"w5", wheel_graph(5, 0)});
    cases.push_back({"grid2x3", grid_graph(2, 3, 0)});
    cases.push_back({"wired2x2", wired_square_patch(2)});
    cases.push_back({"wired3x3", wired_square_patch(3)});
    return cases;
}

std::vector<ParentLink> mask_to_tree(const WeightedGraph& g, uint32_t mask, int sink) {
    std::vector<ParentLink> tree(static_cast<size_t>(g.vertex_count()));
    std::vector<int> stack{sink};
    std::vector<char> seen(static_cast<size_t>(g.vertex_count()), 0);
    seen[static_cast<size_t>(sink)] = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (const IncidentEdge& ie : g.incident(v)) {
            if (!(mask & (1u << ie.edge)) || seen[static_cast<size_t>(ie.other)]) continue;
            seen[static_cast<size_t>(ie.other)] = 1;
            tree[static_cast<size_t>(ie.other)] = {v, ie.edge};
            stack.push_back(ie.other);
        }
    }
    return tree;
}

nlohmann::json verify_graph(const VerifyCase& vc) {
    const WeightedGraph& g = vc.eg.graph;
    const RotationSystem& rot = vc.eg.rotation;
    const int sink = *g.sink();
    nlohmann::json checks;

    Rational f1 = tree_weight(g);
    Rational oracle2 = brute_force_forests(g, 2);
    checks["eq1_vs_oracle"] = f2_minor(g, sink) == oracle2;
    checks["eq2_vs_eq1"] = f2_positive(g, sink) * f1 == f2_minor(g, sink);
    bool fk_ok = true;
    for (int k = 2; k <= std::min(4, g.vertex_count()); ++k)
        fk_ok = fk_ok && fk_ratio(g, k) * f1 == brute_force_forests(g, k);
    checks["eq8_vs_oracle"] = fk_ok;
    checks["duality_unicycles"] = unicycles_via_dual(g, rot) ==
                                  brute_force_connected_spanning(g, g.vertex_count());

    bool roundtrip = true;
    std::vector<uint32_t> masks = spanning_tree_masks(g);
    for (uint32_t mask : masks) {
        std::vector<ParentLink> tree = mask_to_tree(g, mask, sink);
        SandpileConfig c = tree_to_sandpile(g, tree);
        roundtrip = roundtrip && is_recurrent(g, c) && sandpile_to_tree(g, c) == tree;
    }
    checks["bijection_roundtrip"] = roundtrip;

    std::map<long long, long long> spec = level_spectrum(g);
    long long count = 0, sum = 0, sumsq = 0;
    Rational moment1(0), moment2(0);
    for (const auto& [lv, cnt] : spec) {
        count += cnt;
        sum += lv * cnt;
        sumsq += lv * lv * cnt;
        moment1 += Rational(lv * cnt);
        moment2 += Rational(lv * (lv - 1) / 2 * cnt);
    }
    checks["recurrent_count_is_f1"] = Rational(count) == f1 &&
                                      count == static_cast<long long>(masks.size());
    checks["level_moments"] =
        Rational(count) == brute_force_connected_spanning(g, g.vertex_count() - 1) &&
        moment1 == brute_force_connected_spanning(g, g.vertex_count()) &&
        moment2 == brute_force_connected_spanning(g, g.vertex_count() + 1);
    checks["mean_level_tau_e"] =
        Rational(sum, count) == tau_exact(g, rot) * Rational(g.edge_count());
    Rational mean(sum, count);
    checks["variance_formula"] =
        Rational(sumsq, count) - mean * mean == level_variance(g, rot);

    // mean sand per vertex equals the density formula with the boundary term
    long long sand_total = 0;
    for (const SandpileConfig& c : enumerate_recurrent(g))
        for (long long h : c.h) sand_total += h;
    Rational mean_sand(sand_total, count * g.vertex_count());
    checks["sand_density_formula"] =
        mean_sand == sand_density(g, sink, rho_exact(g, rot));

    return checks;
}

nlohmann::json run_verify(int max_edges) {
    if (max_edges > 24) fail(errc::too_large, "oracle bound is 24 edges");
    nlohmann::json out;
    nlohmann::json results = nlohmann::json::array();
    bool all_pass = true;
    int used = 0;
    for (const VerifyCase& vc : verify_corpus()) {
        if (vc.eg.graph.edge_count() > max_edges) continue;
        ++used;
        nlohmann::json checks = verify_graph(vc);
        bool pass = true;
        for (const auto& [k, v] : checks.items()) pass = pass && v.get<bool>();
        all_pass = all_pass && pass;
        results.push_back({{"graph", vc.name}, {"pass", pass}, {"checks", std::move(checks)}});
    }
    out["results"] = std::move(results);
    out["all_pass"] = all_pass;
    if (used == 0) out["warning"] = "no corpus graph fits the edge bound; vacuous pass";
    return out;
}

// ---- lattice-check --------------------------------------------------------

nlohmann::json lattice_check_json(const std::string& target, int n, const Rational& beta,
                                  double tol) {
    LatticeSpec spec;
    std::vector<std::string> names = builtin_lattice_names();
    if (std::find(names.begin(), names.end(), target) != names.end())
        spec = builtin_lattice(target, beta);
    else
        spec = parse_lattice_json(read_file(target));
    if (n > 64) fail(errc::too_large, "limit_check patches are capped at n = 64");
    std::vector<int> ns;
    for (int k = 4; k < n; k *= 2) ns.push_back(k);
    if (ns.empty() || ns.back() != n) ns.push_back(n);
    LimitReport rep = limit_check(spec, ns);
    nlohmann::json out;
    out["lattice"] = spec.name;
    nlohmann::json per_n = nlohmann::json::array();
    bool decreasing = true;
    for (size_t i = 0; i < rep.ns.size(); ++i) {
        nlohmann::json entry;
        entry["n"] = rep.ns[i];
        if (spec.has_kernels) entry["max_deviation"] = rep.max_deviation[i];
        nlohmann::json kernels = nlohmann::json::array();
        for (const LimitEntry& le : rep.entries[i]) {
            nlohmann::json k;
            k["domain_edge"] = le.domain_edge;
            k["class"] = spec.classes[static_cast<size_t>(le.cls)].name;
            k["measured"] = {le.measured_fwd, le.measured_rev};
            if (spec.has_kernels) k["closed"] = {le.closed_fwd, le.closed_rev};
            kernels.push_back(std::move(k));
        }
        entry["kernels"] = std::move(kernels);
        per_n.push_back(std::move(entry));
        if (i > 0 && spec.has_kernels && rep.max_deviation[i] >= rep.max_deviation[i - 1])
            decreasing = false;
    }
    out["patches"] = std::move(per_n);
    if (spec.has_kernels) out["deviation_decreasing"] = decreasing;
    bool has_alpha = false;
    for (const LatticeEdgeClass& c : spec.classes)
        if (!c.a_fwd.is_rational() || !c.a_rev.is_rational()) has_alpha = true;
    if (has_alpha) {
        double beta_f = spec.beta.to_double();
        double closed = alpha_closed(beta_f).value;
        double quad = alpha_quadrature(beta_f, tol);
        out["alpha"] = {{"closed", closed},
                        {"quadrature", quad},
                        {"tol", tol},
                        {"agrees", std::fabs(closed - quad) <= tol}};
    }
    return out;
}

}  // namespace

CliResult run_cli(const std::vector<std::string>& args) {
    std::ostringstream out;
    CLI::App app{"looping rates, spanning forests, and sandpile densities of planar graphs"};
    app.require_subcommand(1);

    uint64_t seed = 1;
    std::string backend = "auto";
    double tol = 1e-9;
    long long steps = 1000000;
    int n = 16;
    std::string format = "json";
    app.add_option("--backend", backend, "exact|float|auto")->capture_default_str();
    CLI::Option* seed_opt = app.add_option("--seed", seed, "rng seed (beats LOOPRATE_SEED)");
    app.add_option("--tol", tol, "float tolerance")->check(CLI::PositiveNumber);
    app.add_option("--steps", steps, "chain steps for sampling");
    app.add_option("--n", n, "patch size / edge bound");
    app.add_option("--format", format, "json|csv")->check(CLI::IsMember({"json", "csv"}));

    std::string graph_path, lattice_name, sandpile_path, check_target;
    Rational beta(1);
    std::string beta_text = "1";

    CLI::App* c_exact = app.add_subcommand("exact", "exact loop statistics of an embedded graph");
    c_exact->add_option("graph", graph_path, "graph JSON file")->required();
    CLI::App* c_table = app.add_subcommand("table", "lattice parameter table");
    c_table->add_option("lattice", lattice_name, "builtin lattice name or 'all'")->required();
    c_table->add_option("--beta", beta_text, "edge-weight parameter for weighted lattices");
    CLI::App* c_sample = app.add_subcommand("sample", "Monte Carlo estimates with exact reference");
    c_sample->add_option("graph", graph_path, "graph JSON file")->required();
    CLI::App* c_sand = app.add_subcommand("sandpile", "stabilize a sandpile file");
    c_sand->add_option("sandpile", sandpile_path, "sandpile JSON file")->required();
    CLI::App* c_verify = app.add_subcommand("verify", "brute-force identity battery");
    CLI::App* c_check = app.add_subcommand("lattice-check", "wired-patch kernel convergence");
    c_check->add_option("lattice", check_target, "builtin name or lattice JSON file")->required();
    c_check->add_option("--beta", beta_text, "edge-weight parameter for weighted lattices");

    for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

    std::vector<const char*> argv;
    argv.push_back("looprate");
    for (const std::string& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        std::ostringstream dummy;
        int code = app.exit(e, out, dummy);
        if (code != 0) {
            nlohmann::json err{{"error", {{"code", "Usage"}, {"message", e.what()}}}};
            return {code, err.dump(2) + "\n"};
        }
        return {0, out.str()};
    }

    try {
        beta = Rational::parse(beta_text);
        uint64_t use_seed = resolve_seed(seed_opt, seed);
        if (c_exact->parsed()) {
            emit_exact(out, exact_json(load_graph(graph_path), backend), format);
        } else if (c_table->parsed()) {
            std::vector<std::string> names;
            if (lattice_name == "all") names = builtin_lattice_names();
            else names.push_back(lattice_name);
            emit_table(out, names, beta, format);
        } else if (c_sample->parsed()) {
            out << sample_json(load_graph(graph_path), steps, use_seed).dump(2) << "\n";
        } else if (c_sand->parsed()) {
            out << sandpile_json(sandpile_path).dump(2) << "\n";
        } else if (c_verify->parsed()) {
            int bound = app.count("--n") ? n : 24;
            nlohmann::json rep = run_verify(bound);
            out << rep.dump(2) << "\n";
            return {rep.at("all_pass").get<bool>() ? 0 : 1, out.str()};
        } else if (c_check->parsed()) {
            out << lattice_check_json(check_target, n, beta, std::max(tol, 1e-12)).dump(2) << "\n";
        }
    } catch (const Error& e) {
        nlohmann::json err{{"error", {{"code", errc_name(e.code())}, {"message", e.what()}}}};
        return {1, err.dump(2) + "\n"};
    } catch (const std::exception& e) {
        nlohmann::json err{{"error", {{"code", "Internal"}, {"message", e.what()}}}};
        return {1, err.dump(2) + "\n"};
    }
    return {0, out.str()};
}

int cli_main(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    CliResult res = run_cli(args);
    std::cout << res.out;
    return res.exit_code;
}

}  // namespace looprate
