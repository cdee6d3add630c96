#pragma once

#include <string>
#include <vector>

#include "looprate/graph.hpp"

namespace looprate {

// Polynomial in the tetrakis kernel value alpha(beta), degree <= 2, with
// exact rational coefficients.  Rational lattice rows live in degree 0; the
// square-octagon / tetrakis rows are genuinely quadratic.
struct AlphaPoly {
    Rational c0, c1, c2;

    AlphaPoly() = default;
    AlphaPoly(Rational constant) : c0(std::move(constant)) {}
    AlphaPoly(Rational a0, Rational a1, Rational a2 = Rational(0))
        : c0(std::move(a0)), c1(std::move(a1)), c2(std::move(a2)) {}

    bool is_rational() const { return c1.is_zero() && c2.is_zero(); }
    const Rational& rational() const;
    double eval(double alpha) const;

    AlphaPoly operator+(const AlphaPoly& o) const;
    AlphaPoly operator-(const AlphaPoly& o) const;
    AlphaPoly operator*(const AlphaPoly& o) const;  // degree of product must stay <= 2
    AlphaPoly operator/(const Rational& r) const;
    bool operator==(const AlphaPoly& o) const { return c0 == o.c0 && c1 == o.c1 && c2 == o.c2; }
};

struct LatticeDomainEdge {
    int from, to;  // vertex types in the fundamental domain
    int dx, dy;    // translation offset of `to`
    int cls;       // kernel class
};

struct LatticeEdgeClass {
    std::string name;
    Rational weight;
    AlphaPoly a_fwd, a_rev;  // potential kernels along/against the domain-edge orientation
    std::string dual_class;  // corresponding class of the dual lattice
    int count = 0;           // edges per fundamental domain
    std::string provenance;  // how the stored kernel values were derived
};

struct LatticeSpec {
    std::string name;
    std::string dual_name;          // empty for user-defined lattices
    std::vector<int> degrees;       // per vertex type
    std::vector<LatticeDomainEdge> edges;
    std::vector<LatticeEdgeClass> classes;
    Rational beta = Rational(1);
    bool has_kernels = false;

    int faces_per_domain() const { return static_cast<int>(edges.size() - degrees.size()); }
    Rational total_weight_per_domain() const;
    Rational delta() const;             // mean weighted degree
    Rational dual_face_degree() const;  // delta* = 2 |E| / |F|
};

std::vector<std::string> builtin_lattice_names();
LatticeSpec builtin_lattice(const std::string& name, const Rational& beta = Rational(1));

// Finite wired approximation: n x n fundamental domains, everything outside
// merged into the sink.
struct WiredPatch {
    WeightedGraph graph;
    std::vector<int> edge_class;    // per graph edge
    std::vector<int> central_edge;  // per domain-edge index: instance at the central cell
    int n = 0;
};
WiredPatch wired_patch(const LatticeSpec& spec, int n);

// alpha(beta) = arcsec(2 beta + 1) / (2 pi sqrt(beta^2 + beta))
struct AlphaValue {
    double value;
    bool algebraic;    // true at beta = 1/2 where alpha = 1/sqrt(27)
    std::string form;  // closed-form tag
};
AlphaValue alpha_closed(double beta);

// Adaptive-bisection quadrature of the reduced one-dimensional integral;
// agrees with alpha_closed within `tol`.
double alpha_quadrature(double beta, double tol);

// Tensor-product midpoint rule on the torus double integral (cross-check at
// looser tolerance).
double alpha_quadrature_2d(double beta, int grid);

// One Table-1 row: exact polynomials in alpha; numeric lambda and 1/rho.
struct LatticeRow {
    std::string name;
    AlphaPoly tau, rho, delta_rho, sigma, edge_in_tree;
    double alpha = 0;  // evaluation point used for the numeric columns
    bool rational() const;
    Rational lambda_rational() const;   // requires rational()
    Rational inv_rho_rational() const;  // requires rational()
    double lambda() const;
    double inv_rho() const;
};
LatticeRow table_row(const LatticeSpec& spec);

// Central-edge potential kernels of wired patches vs the stored closed
// forms; deviations must shrink as n grows.
struct LimitEntry {
    int domain_edge;
    int cls;
    double measured_fwd, measured_rev;
    double closed_fwd, closed_rev;  // NaN without stored kernels
};
struct LimitReport {
    std::vector<int> ns;
    std::vector<std::vector<LimitEntry>> entries;  // per n
    std::vector<double> max_deviation;             // per n, vs closed forms
};
LimitReport limit_check(const LatticeSpec& spec, const std::vector<int>& ns);

// User-defined periodic lattice from JSON text:
//   {"vertices":[{"id":..,"degree":..}],
//    "edges":[{"from":..,"to":..,"offset":[x,y],"weight":..}]}
LatticeSpec parse_lattice_json(const std::string& text);

}  // namespace looprate
