#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lattice.hpp"

namespace holelab {

// Dense scalar field over a box with a per-site Dirichlet mask.
// Sites with fixed=1 keep their value; neighbors outside the box contribute 0.
struct GridField {
    BoxSpec box;
    std::vector<double> v;
    std::vector<uint8_t> fixed;

    explicit GridField(const BoxSpec& b)
        : box(b), v(b.volume(), 0.0), fixed(b.volume(), 0) {}

    double& at(const Site& s) { return v[box.index(s)]; }
    double at(const Site& s) const { return v[box.index(s)]; }
    void fix(const Site& s, double value) {
        int64_t i = box.index(s);
        v[i] = value;
        fixed[i] = 1;
    }
};

struct SolveReport {
    double residual = 0.0;
    int iterations = 0;
    bool converged = false;
    std::string method;
};

// Solve v(x) = avg(neighbors) + rhs(x) on active sites (rhs may be null for 0).
// Uses a multigrid-accelerated red-black relaxation when the geometry allows
// it (d=3, odd extents, fully fixed outer shell), plain red-black SOR else.
SolveReport solve_dirichlet_grid(GridField& g, const std::vector<double>* rhs,
                                 double tol, int max_iter = 0);

// Plain red-black SOR (always available; any dimension).
SolveReport solve_sor(GridField& g, const std::vector<double>* rhs, double tol,
                      int max_sweeps = 0, double omega = 0.0);

double residual_sup(const GridField& g, const std::vector<double>* rhs);

// Node-weighted variant: edge conductance w(x)w(y), w=1 outside the box.
// Solves v(x) = sum_y w(y) v(y) / sum_y w(y) on active sites.
SolveReport solve_weighted_sor(GridField& g, const std::vector<double>& w,
                               double tol, int max_sweeps = 0);

struct CapacityEstimate {
    double value = 0.0;
    double stderr_ = 0.0;
    std::string method;        // linear_solve | monte_carlo | extrapolated
    std::vector<int32_t> radii;
    bool flagged = false;
    std::string note;
};

struct EquilibriumResult {
    std::vector<Site> support;     // sites of A carrying weight
    std::vector<double> weights;   // escape weights e_A, same order
    CapacityEstimate capacity;
};

// Equilibrium weights e_A(x) and total mass via absorbing solves at two outer
// radii extrapolated in R^(2-d) on the inverse capacity; an intermediate
// radius feeds the reported error. A must fit inside box(0, r_out/2).
EquilibriumResult equilibrium_measure(const SiteSet& a, int32_t r_out, double tol,
                                      double mid_factor = 1.5, double far_factor = 2.0);

// Walk-killed-outside-box Green function estimate g(x,y), extrapolated over
// two box radii.  Translation invariant; computed as g(0, y-x).
CapacityEstimate green_linear_solve(const Site& x, const Site& y, int32_t r_out,
                                    double tol);

// Expected visits field on box(0,r): u(z) = visits to target before exiting.
GridField green_field_at_radius(int dim, const Site& target, int32_t r, double tol);

}  // namespace holelab
