#include "looprate/looping.hpp"

#include "looprate/kernels.hpp"

namespace looprate {

Rational tau_exact(const WeightedGraph& g, const RotationSystem& rot,
                   std::optional<int> s_star) {
    DualGraph d = dual(g, rot);
    int sink = s_star.value_or(d.outer_face);
    PotentialKernel k = potential_kernel(d.dual, green(d.dual, sink));
    Rational num(0), den(0);
    for (int e = 0; e < d.dual.edge_count(); ++e) {
        const Rational& a = k.a_fwd[static_cast<size_t>(e)];
        const Rational& b = k.a_rev[static_cast<size_t>(e)];
        Rational diff = a - b;
        num += d.dual.edge(e).w * (a * b + diff * diff);
        den += d.dual.edge(e).w.inverse();
    }
    return num / den;
}

Rational edge_in_tree_weighted(const WeightedGraph& g) {
    bool all_equal = true;
    for (const Edge& e : g.edges())
        if (e.w != g.edge(0).w) {
            all_equal = false;
            break;
        }
    if (all_equal) return Rational(g.vertex_count() - 1, g.edge_count());
    PotentialKernel k = potential_kernel(g, green(g, g.sink().value_or(0)));
    Rational num(0);
    for (int e = 0; e < g.edge_count(); ++e) {
        const Rational& w = g.edge(e).w;
        num += w * w * (k.a_fwd[static_cast<size_t>(e)] + k.a_rev[static_cast<size_t>(e)]);
    }
    return num / g.total_weight();
}

Rational rho_exact(const WeightedGraph& g, const RotationSystem& rot) {
    return tau_exact(g, rot) + edge_in_tree_weighted(g) / Rational(2);
}

Rational lambda_mean_loop(const Rational& tau, const Rational& rho) {
    if (tau.is_zero()) fail(errc::no_unicycle, "tau vanishes, no unicycle exists");
    return (Rational(1) - Rational(2) * (rho - tau)) / tau;
}

Rational delta_rho(const WeightedGraph& g, const Rational& rho) {
    return g.mean_weighted_degree() * rho;
}

Rational sand_density(const WeightedGraph& g, int s, const Rational& rho) {
    Rational delta = g.mean_weighted_degree();
    Rational boundary = (g.weighted_degree(s) - Rational(1, 2)) / Rational(g.vertex_count());
    return (delta * rho + delta - Rational(1)) / Rational(2) - boundary;
}

LoopStats loop_stats(const WeightedGraph& g, const RotationSystem& rot) {
    LoopStats st;
    st.tau = tau_exact(g, rot);
    st.edge_in_tree = edge_in_tree_weighted(g);
    st.rho = st.tau + st.edge_in_tree / Rational(2);
    st.lambda = lambda_mean_loop(st.tau, st.rho);
    st.mean_lerw_loop = st.rho.inverse();
    st.delta_rho = delta_rho(g, st.rho);
    if (g.sink()) st.sand_density = sand_density(g, *g.sink(), st.rho);
    return st;
}

namespace {

// positive two-forest sum from a float kernel (no cancellation)
double f2_ratio_float(const WeightedGraph& g, const PotentialKernelF& k) {
    double total = 0;
    for (int e = 0; e < g.edge_count(); ++e) {
        double a = k.a_fwd[static_cast<size_t>(e)];
        double b = k.a_rev[static_cast<size_t>(e)];
        total += g.edge(e).w.to_double() * ((a - b) * (a - b) + a * b);
    }
    return total;
}

double tree_weight_float(const WeightedGraph& g) {
    Matrix<Rational> lap = laplacian(g);
    size_t s = static_cast<size_t>(g.sink().value_or(0));
    return determinant(to_float(lap.minor_matrix({s}, {s})));
}

}  // namespace

LoopStatsF loop_stats_float(const WeightedGraph& g, const RotationSystem& rot) {
    LoopStatsF st;
    DualGraph d = dual(g, rot);
    PotentialKernelF kd = potential_kernel(d.dual, green_float(d.dual, d.outer_face));
    double num = 0, den = 0;
    for (int e = 0; e < d.dual.edge_count(); ++e) {
        double a = kd.a_fwd[static_cast<size_t>(e)];
        double b = kd.a_rev[static_cast<size_t>(e)];
        double w = d.dual.edge(e).w.to_double();
        num += w * (a * b + (a - b) * (a - b));
        den += 1.0 / w;
    }
    st.tau = num / den;

    PotentialKernelF kp = potential_kernel(g, green_float(g, g.sink().value_or(0)));
    double pr_num = 0;
    for (int e = 0; e < g.edge_count(); ++e) {
        double w = g.edge(e).w.to_double();
        pr_num += w * w * (kp.a_fwd[static_cast<size_t>(e)] + kp.a_rev[static_cast<size_t>(e)]);
    }
    st.edge_in_tree = pr_num / g.total_weight().to_double();
    st.rho = st.tau + st.edge_in_tree / 2.0;
    st.lambda = (1.0 - st.edge_in_tree) / st.tau;
    st.mean_lerw_loop = 1.0 / st.rho;
    double delta = g.mean_weighted_degree().to_double();
    st.delta_rho = delta * st.rho;
    if (g.sink()) {
        double ds = g.weighted_degree(*g.sink()).to_double();
        st.sand_density = (delta * st.rho + delta - 1.0) / 2.0 -
                          (ds - 0.5) / static_cast<double>(g.vertex_count());
    }
    st.f1 = tree_weight_float(g);
    st.f2 = f2_ratio_float(g, kp) * st.f1;
    double dual_f1 = tree_weight_float(d.dual);
    PotentialKernelF kd0 = potential_kernel(d.dual, green_float(d.dual, 0));
    double prod = 1.0;
    for (const Edge& e : g.edges()) prod *= e.w.to_double();
    st.unicycles = f2_ratio_float(d.dual, kd0) * dual_f1 * prod;
    return st;
}

}  // namespace looprate
