#include "looprate/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "json.hpp"
#include "looprate/kernels.hpp"

namespace looprate {

const Rational& AlphaPoly::rational() const {
    if (!is_rational()) fail(errc::bad_input, "value is not rational in alpha");
    return c0;
}

double AlphaPoly::eval(double alpha) const {
    return c0.to_double() + c1.to_double() * alpha + c2.to_double() * alpha * alpha;
}

AlphaPoly AlphaPoly::operator+(const AlphaPoly& o) const {
    return AlphaPoly(c0 + o.c0, c1 + o.c1, c2 + o.c2);
}

AlphaPoly AlphaPoly::operator-(const AlphaPoly& o) const {
    return AlphaPoly(c0 - o.c0, c1 - o.c1, c2 - o.c2);
}

AlphaPoly AlphaPoly::operator*(const AlphaPoly& o) const {
    Rational d3 = c1 * o.c2 + c2 * o.c1;
    Rational d4 = c2 * o.c2;
    if (!d3.is_zero() || !d4.is_zero())
        fail(errc::bad_input, "alpha polynomial degree would exceed 2");
    return AlphaPoly(c0 * o.c0, c0 * o.c1 + c1 * o.c0, c0 * o.c2 + c1 * o.c1 + c2 * o.c0);
}

AlphaPoly AlphaPoly::operator/(const Rational& r) const {
    return AlphaPoly(c0 / r, c1 / r, c2 / r);
}

Rational LatticeSpec::total_weight_per_domain() const {
    Rational sum(0);
    for (const LatticeDomainEdge& e : edges) sum += classes[static_cast<size_t>(e.cls)].weight;
    return sum;
}

Rational LatticeSpec::delta() const {
    return Rational(2) * total_weight_per_domain() / Rational(static_cast<long long>(degrees.size()));
}

Rational LatticeSpec::dual_face_degree() const {
    return Rational(2 * static_cast<long long>(edges.size()), faces_per_domain());
}

namespace {

void validate_spec(const LatticeSpec& spec) {
    std::vector<long long> incid(spec.degrees.size(), 0);
    std::vector<int> counts(spec.classes.size(), 0);
    for (const LatticeDomainEdge& e : spec.edges) {
        if (e.from < 0 || e.from >= static_cast<int>(spec.degrees.size()) || e.to < 0 ||
            e.to >= static_cast<int>(spec.degrees.size()))
            fail(errc::bad_input, "lattice edge references a missing vertex type");
        if (e.cls < 0 || e.cls >= static_cast<int>(spec.classes.size()))
            fail(errc::bad_input, "lattice edge references a missing class");
        ++incid[static_cast<size_t>(e.from)];
        ++incid[static_cast<size_t>(e.to)];
        ++counts[static_cast<size_t>(e.cls)];
    }
    for (size_t t = 0; t < spec.degrees.size(); ++t) {
        if (incid[t] != spec.degrees[t])
            fail(errc::bad_input, "vertex type " + std::to_string(t) + " degree mismatch");
    }
    for (size_t c = 0; c < spec.classes.size(); ++c) {
        if (counts[c] != spec.classes[c].count)
            fail(errc::bad_input, "class " + spec.classes[c].name + " count mismatch");
        if (!(spec.classes[c].weight > Rational(0)))
            fail(errc::non_positive_weight, "class " + spec.classes[c].name);
    }
    if (spec.has_kernels) {
        // unit-flow identity per vertex type, as a polynomial identity in alpha
        std::vector<AlphaPoly> flow(spec.degrees.size(), AlphaPoly(Rational(0)));
        for (const LatticeDomainEdge& e : spec.edges) {
            const LatticeEdgeClass& c = spec.classes[static_cast<size_t>(e.cls)];
            flow[static_cast<size_t>(e.from)] =
                flow[static_cast<size_t>(e.from)] + AlphaPoly(c.weight) * c.a_fwd;
            flow[static_cast<size_t>(e.to)] =
                flow[static_cast<size_t>(e.to)] + AlphaPoly(c.weight) * c.a_rev;
        }
        for (size_t t = 0; t < spec.degrees.size(); ++t) {
            if (!(flow[t] == AlphaPoly(Rational(1))))
                fail(errc::bad_input,
                     "unit-flow identity fails at vertex type " + std::to_string(t));
        }
    }
}

LatticeSpec make_square() {
    LatticeSpec s;
    s.name = "square";
    s.dual_name = "square";
    s.degrees = {4};
    s.classes = {{"edge", Rational(1), AlphaPoly(Rational(1, 4)), AlphaPoly(Rational(1, 4)),
                  "edge", 2, "fourfold vertex symmetry splits the unit flow"}};
    s.edges = {{0, 0, 1, 0, 0}, {0, 0, 0, 1, 0}};
    s.has_kernels = true;
    return s;
}

LatticeSpec make_triangular() {
    LatticeSpec s;
    s.name = "triangular";
    s.dual_name = "honeycomb";
    s.degrees = {6};
    s.classes = {{"edge", Rational(1), AlphaPoly(Rational(1, 6)), AlphaPoly(Rational(1, 6)),
                  "edge", 3, "sixfold vertex symmetry splits the unit flow"}};
    s.edges = {{0, 0, 1, 0, 0}, {0, 0, 0, 1, 0}, {0, 0, 1, 1, 0}};
    s.has_kernels = true;
    return s;
}

LatticeSpec make_honeycomb() {
    LatticeSpec s;
    s.name = "honeycomb";
    s.dual_name = "triangular";
    s.degrees = {3, 3};
    s.classes = {{"edge", Rational(1), AlphaPoly(Rational(1, 3)), AlphaPoly(Rational(1, 3)),
                  "edge", 3, "threefold vertex symmetry splits the unit flow"}};
    s.edges = {{0, 1, 0, 0, 0}, {1, 0, 1, 0, 0}, {1, 0, 0, 1, 0}};
    s.has_kernels = true;
    return s;
}

LatticeSpec make_kagome() {
    LatticeSpec s;
    s.name = "kagome";
    s.dual_name = "dice";
    s.degrees = {4, 4, 4};
    s.classes = {{"edge", Rational(1), AlphaPoly(Rational(1, 4)), AlphaPoly(Rational(1, 4)),
                  "edge", 6, "edge-transitive degree-4 lattice splits the unit flow"}};
    s.edges = {{0, 1, 1, 0, 0}, {1, 2, -1, 0, 0}, {2, 0, 0, 0, 0},
               {1, 0, 0, 1, 0}, {0, 2, 0, -1, 0}, {2, 1, 0, 0, 0}};
    s.has_kernels = true;
    return s;
}

LatticeSpec make_dice() {
    LatticeSpec s;
    s.name = "dice";
    s.dual_name = "kagome";
    s.degrees = {6, 3, 3};  // hub, up-face center, down-face center
    s.classes = {{"edge", Rational(1), AlphaPoly(Rational(1, 3)), AlphaPoly(Rational(1, 6)),
                  "edge", 6, "rotational symmetry at each endpoint: A = 1/degree"}};
    s.edges = {{1, 0, 0, 0, 0}, {1, 0, 1, 0, 0}, {1, 0, 1, 1, 0},
               {2, 0, 0, 0, 0}, {2, 0, 0, 1, 0}, {2, 0, 1, 1, 0}};
    s.has_kernels = true;
    return s;
}

LatticeSpec make_fisher(const Rational& beta) {
    LatticeSpec s;
    s.name = "fisher";
    s.dual_name = "triakis_triangular";
    s.beta = beta;
    s.degrees = {3, 3, 3, 3, 3, 3};
    Rational d = Rational(3) * beta + Rational(2);
    AlphaPoly intra{(Rational(2) * beta + Rational(1)) / (Rational(2) * d)};
    AlphaPoly inter{beta * (beta + Rational(1)) / d};
    s.classes = {{"intra", Rational(1), intra, intra, "spoke", 6,
                  "dual complement of the triakis spoke kernels, bilateral symmetry"},
                 {"inter", beta.inverse(), inter, inter, "hub", 3,
                  "dual complement of the triakis hub kernels, bilateral symmetry"}};
    s.edges = {{0, 1, 0, 0, 0}, {1, 2, 0, 0, 0}, {2, 0, 0, 0, 0},
               {3, 4, 0, 0, 0}, {4, 5, 0, 0, 0}, {5, 3, 0, 0, 0},
               {0, 3, 0, 0, 1}, {4, 1, 1, 0, 1}, {5, 2, 0, 1, 1}};
    s.has_kernels = true;
    return s;
}

LatticeSpec make_triakis(const Rational& beta) {
    LatticeSpec s;
    s.name = "triakis_triangular";
    s.dual_name = "fisher";
    s.beta = beta;
    s.degrees = {12, 3, 3};  // hub, up-face center, down-face center
    Rational hub_a = (Rational(6) * beta + Rational(4)).inverse();
    Rational spoke_rev = (Rational(9) * beta + Rational(6)).inverse();
    s.classes = {{"hub", beta, AlphaPoly{hub_a}, AlphaPoly{hub_a}, "inter", 3,
                  "harmonicity at face centers plus unit flow at a hub"},
                 {"spoke", Rational(1), AlphaPoly(Rational(1, 3)), AlphaPoly{spoke_rev},
                  "intra", 6,
                  "threefold symmetry at face centers; reverse from the hub unit flow"}};
    s.edges = {{0, 0, 1, 0, 0}, {0, 0, 0, 1, 0}, {0, 0, 1, 1, 0},
               {1, 0, 0, 0, 1}, {1, 0, 1, 0, 1}, {1, 0, 1, 1, 1},
               {2, 0, 0, 0, 1}, {2, 0, 0, 1, 1}, {2, 0, 1, 1, 1}};
    s.has_kernels = true;
    return s;
}

LatticeSpec make_square_octagon(const Rational& beta) {
    LatticeSpec s;
    s.name = "square_octagon";
    s.dual_name = "tetrakis_square";
    s.beta = beta;
    s.degrees = {3, 3, 3, 3};  // right, top, left, bottom corners of the square
    AlphaPoly insquare{Rational(1, 4), beta / Rational(2)};
    AlphaPoly intersquare{beta / Rational(2), -(beta * beta)};
    s.classes = {{"insquare", Rational(1), insquare, insquare, "spoke", 4,
                  "dual complement of the tetrakis spoke kernels, bilateral symmetry"},
                 {"intersquare", beta.inverse(), intersquare, intersquare, "grid", 2,
                  "dual complement of the tetrakis grid kernels, bilateral symmetry"}};
    s.edges = {{0, 1, 0, 0, 0}, {1, 2, 0, 0, 0}, {2, 3, 0, 0, 0}, {3, 0, 0, 0, 0},
               {0, 2, 1, 0, 1}, {1, 3, 0, 1, 1}};
    s.has_kernels = true;
    return s;
}

LatticeSpec make_tetrakis(const Rational& beta) {
    LatticeSpec s;
    s.name = "tetrakis_square";
    s.dual_name = "square_octagon";
    s.beta = beta;
    s.degrees = {8, 4};  // grid vertex, face center
    AlphaPoly grid{Rational(0), Rational(1)};
    AlphaPoly spoke_rev{Rational(1, 4), -beta};
    s.classes = {{"grid", beta, grid, grid, "intersquare", 2,
                  "alpha(beta) from the Fourier-space Laplacian integral"},
                 {"spoke", Rational(1), AlphaPoly(Rational(1, 4)), spoke_rev, "insquare", 4,
                  "fourfold symmetry at centers; reverse from the grid-vertex unit flow"}};
    s.edges = {{0, 0, 1, 0, 0}, {0, 0, 0, 1, 0},
               {1, 0, 0, 0, 1}, {1, 0, 1, 0, 1}, {1, 0, 0, 1, 1}, {1, 0, 1, 1, 1}};
    s.has_kernels = true;
    return s;
}

}  // namespace

std::vector<std::string> builtin_lattice_names() {
    return {"square",  "triangular",         "honeycomb",      "kagome",         "dice",
            "fisher",  "triakis_triangular", "square_octagon", "tetrakis_square"};
}

LatticeSpec builtin_lattice(const std::string& name, const Rational& beta) {
    if (!(beta > Rational(0))) fail(errc::non_positive_beta, "beta must be positive");
    LatticeSpec spec;
    bool weighted = name == "fisher" || name == "triakis_triangular" ||
                    name == "square_octagon" || name == "tetrakis_square";
    if (!weighted && beta != Rational(1))
        fail(errc::bad_input, name + " has no weight parameter");
    if (name == "square") spec = make_square();
    else if (name == "triangular") spec = make_triangular();
    else if (name == "honeycomb") spec = make_honeycomb();
    else if (name == "kagome") spec = make_kagome();
    else if (name == "dice") spec = make_dice();
    else if (name == "fisher") spec = make_fisher(beta);
    else if (name == "triakis_triangular") spec = make_triakis(beta);
    else if (name == "square_octagon") spec = make_square_octagon(beta);
    else if (name == "tetrakis_square") spec = make_tetrakis(beta);
    else fail(errc::unknown_lattice, name);
    validate_spec(spec);
    return spec;
}

WiredPatch wired_patch(const LatticeSpec& spec, int n) {
    if (n < 1) fail(errc::bad_input, "patch size must be >= 1");
    const int types = static_cast<int>(spec.degrees.size());
    const int nv = n * n * types;
    auto inside = [&](int i, int j) { return i >= 0 && i < n && j >= 0 && j < n; };
    auto vid = [&](int i, int j, int t) { return (i * n + j) * types + t; };

    int max_off = 1;
    for (const LatticeDomainEdge& e : spec.edges)
        max_off = std::max({max_off, std::abs(e.dx), std::abs(e.dy)});

    std::vector<long long> ids(static_cast<size_t>(nv + 1));
    for (int i = 0; i <= nv; ++i) ids[static_cast<size_t>(i)] = i;
    std::vector<Edge> edges;
    std::vector<int> edge_class;
    std::vector<int> central(spec.edges.size(), -1);
    const int ci = n / 2, cj = n / 2;
    for (int i = -max_off; i < n + max_off; ++i) {
        for (int j = -max_off; j < n + max_off; ++j) {
            for (size_t k = 0; k < spec.edges.size(); ++k) {
                const LatticeDomainEdge& de = spec.edges[k];
                int ti = i + de.dx, tj = j + de.dy;
                bool tail_in = inside(i, j), head_in = inside(ti, tj);
                if (!tail_in && !head_in) continue;
                int u = tail_in ? vid(i, j, de.from) : nv;
                int v = head_in ? vid(ti, tj, de.to) : nv;
                if (u == v) continue;  // both wired
                if (tail_in && i == ci && j == cj)
                    central[k] = static_cast<int>(edges.size());
                edges.push_back(Edge{u, v, spec.classes[static_cast<size_t>(de.cls)].weight});
                edge_class.push_back(de.cls);
            }
        }
    }
    return WiredPatch{WeightedGraph(std::move(ids), std::move(edges), nv), std::move(edge_class),
                      std::move(central), n};
}

namespace {

const double kPi = std::acos(-1.0);

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                        double fm, double fb, double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double err = left + right - whole;
    if (std::fabs(err) <= 15.0 * tol || (b - a) < 1e-10) {
        if (depth <= 0 && std::fabs(err) > 15.0 * tol)
            fail(errc::quadrature_not_converged, "adaptive bisection hit the interval floor");
        return left + right + err / 15.0;
    }
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

}  // namespace

AlphaValue alpha_closed(double beta) {
    if (!(beta > 0)) fail(errc::non_positive_beta, "beta must be positive");
    AlphaValue out;
    out.value = std::acos(1.0 / (2.0 * beta + 1.0)) / (2.0 * kPi * std::sqrt(beta * beta + beta));
    out.algebraic = beta == 0.5;
    out.form = out.algebraic ? "1/sqrt(27)" : "arcsec(2b+1)/(2*pi*sqrt(b^2+b))";
    return out;
}

double alpha_quadrature(double beta, double tol) {
    if (!(beta > 0)) fail(errc::non_positive_beta, "beta must be positive");
    if (tol < 1e-12) fail(errc::bad_input, "tolerance below 1e-12 is not supported");
    const double c = 3.0 + 2.0 / beta;
    auto f = [c](double t) {
        double ct = std::cos(2.0 * kPi * t);
        return std::sqrt((1.0 - ct) / (c - ct));
    };
    double scale = 1.0 / (2.0 * std::sqrt(beta * beta + beta));
    return scale * integrate(f, 0.0, 1.0, tol / (8.0 * scale));
}

double alpha_quadrature_2d(double beta, int grid) {
    if (!(beta > 0)) fail(errc::non_positive_beta, "beta must be positive");
    double sum = 0.0;
    for (int i = 0; i < grid; ++i) {
        double s = (i + 0.5) / grid;
        double cs = std::cos(2.0 * kPi * s);
        for (int j = 0; j < grid; ++j) {
            double t = (j + 0.5) / grid;
            double ct = std::cos(2.0 * kPi * t);
            double p = 16.0 * beta + 12.0 - (8.0 * beta + 4.0) * (cs + ct) - 4.0 * cs * ct;
            sum += (2.0 - 2.0 * ct) / p;
        }
    }
    return 2.0 * sum / (static_cast<double>(grid) * grid);
}

bool LatticeRow::rational() const {
    return tau.is_rational() && rho.is_rational() && delta_rho.is_rational() &&
           sigma.is_rational() && edge_in_tree.is_rational();
}

Rational LatticeRow::lambda_rational() const {
    return (Rational(1) - edge_in_tree.rational()) / tau.rational();
}

Rational LatticeRow::inv_rho_rational() const { return rho.rational().inverse(); }

double LatticeRow::lambda() const {
    return (1.0 - edge_in_tree.eval(alpha)) / tau.eval(alpha);
}

double LatticeRow::inv_rho() const { return 1.0 / rho.eval(alpha); }

LatticeRow table_row(const LatticeSpec& spec) {
    if (!spec.has_kernels || spec.dual_name.empty())
        fail(errc::missing_kernel, "table rows need stored kernels for lattice and dual");
    LatticeSpec dual_spec = builtin_lattice(spec.dual_name, spec.beta);

    std::map<std::string, const LatticeEdgeClass*> dual_classes;
    for (const LatticeEdgeClass& c : dual_spec.classes) dual_classes[c.name] = &c;

    // tau by the dual two-forest formula, per dual edge class
    AlphaPoly tau_num{Rational(0)};
    Rational tau_den(0);
    for (const LatticeEdgeClass& c : spec.classes) {
        auto it = dual_classes.find(c.dual_class);
        if (it == dual_classes.end())
            fail(errc::missing_kernel, "dual class " + c.dual_class + " is missing");
        const LatticeEdgeClass& d = *it->second;
        if (d.weight * c.weight != Rational(1))
            fail(errc::missing_kernel, "dual weights are not reciprocal for " + c.name);
        Rational count(c.count);
        AlphaPoly diff = d.a_fwd - d.a_rev;
        tau_num = tau_num + AlphaPoly(count * d.weight) * (d.a_fwd * d.a_rev + diff * diff);
        tau_den += count * d.weight.inverse();
    }

    LatticeRow row;
    row.name = spec.name;
    row.alpha = alpha_closed(spec.beta.to_double()).value;
    row.tau = tau_num / tau_den;

    // Pr[e in T] by the weighted current average over primal classes
    AlphaPoly pr_num{Rational(0)};
    Rational pr_den(0);
    for (const LatticeEdgeClass& c : spec.classes) {
        Rational count(c.count);
        pr_num = pr_num + AlphaPoly(count * c.weight * c.weight) * (c.a_fwd + c.a_rev);
        pr_den += count * c.weight;
    }
    row.edge_in_tree = pr_num / pr_den;

    row.rho = row.tau + row.edge_in_tree / Rational(2);
    Rational delta = spec.delta();
    row.delta_rho = AlphaPoly(delta) * row.rho;
    row.sigma = (row.delta_rho + AlphaPoly(delta - Rational(1))) / Rational(2);
    return row;
}

LimitReport limit_check(const LatticeSpec& spec, const std::vector<int>& ns) {
    LimitReport report;
    report.ns = ns;
    double alpha = spec.has_kernels ? alpha_closed(spec.beta.to_double()).value : 0.0;
    for (int n : ns) {
        if (n > 64) fail(errc::too_large, "limit_check patches are capped at n = 64");
        WiredPatch patch = wired_patch(spec, n);
        int sink = *patch.graph.sink();
        std::vector<LimitEntry> entries(spec.edges.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
        for (size_t k = 0; k < spec.edges.size(); ++k) {
            LimitEntry& ent = entries[k];
            ent.domain_edge = static_cast<int>(k);
            ent.cls = spec.edges[k].cls;
            int e = patch.central_edge[k];
            auto [fwd, rev] = edge_kernel_cg(patch.graph, sink, e);
            ent.measured_fwd = fwd;
            ent.measured_rev = rev;
            if (spec.has_kernels) {
                const LatticeEdgeClass& c = spec.classes[static_cast<size_t>(ent.cls)];
                ent.closed_fwd = c.a_fwd.eval(alpha);
                ent.closed_rev = c.a_rev.eval(alpha);
            } else {
                ent.closed_fwd = ent.closed_rev = std::nan("");
            }
        }
        double dev = 0.0;
        if (spec.has_kernels) {
            for (const LimitEntry& ent : entries) {
                dev = std::max(dev, std::fabs(ent.measured_fwd - ent.closed_fwd));
                dev = std::max(dev, std::fabs(ent.measured_rev - ent.closed_rev));
            }
        } else {
            dev = std::nan("");
        }
        report.entries.push_back(std::move(entries));
        report.max_deviation.push_back(dev);
    }
    return report;
}

LatticeSpec parse_lattice_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    LatticeSpec spec;
    spec.name = j.value("name", "user");
    std::map<long long, int> type_of;
    for (const auto& v : j.at("vertices")) {
        long long id = v.at("id").get<long long>();
        if (type_of.count(id)) fail(errc::bad_input, "duplicate vertex id");
        type_of[id] = static_cast<int>(spec.degrees.size());
        spec.degrees.push_back(v.at("degree").get<int>());
    }
    for (const auto& e : j.at("edges")) {
        LatticeDomainEdge de;
        auto from = type_of.find(e.at("from").get<long long>());
        auto to = type_of.find(e.at("to").get<long long>());
        if (from == type_of.end() || to == type_of.end())
            fail(errc::unknown_endpoint, "lattice edge endpoint");
        de.from = from->second;
        de.to = to->second;
        de.dx = e.at("offset").at(0).get<int>();
        de.dy = e.at("offset").at(1).get<int>();
        de.cls = static_cast<int>(spec.classes.size());
        Rational w = e.contains("weight")
                         ? (e.at("weight").is_string()
                                ? Rational::parse(e.at("weight").get<std::string>())
                                : (e.at("weight").is_number_integer()
                                       ? Rational(e.at("weight").get<long long>())
                                       : Rational::parse(nlohmann::json(e.at("weight")).dump())))
                         : Rational(1);
        spec.classes.push_back({"e" + std::to_string(de.cls), w, AlphaPoly(Rational(0)),
                                AlphaPoly(Rational(0)), "", 1, "measured only"});
        spec.edges.push_back(de);
    }
    spec.has_kernels = false;
    validate_spec(spec);
    return spec;
}

}  // namespace looprate
