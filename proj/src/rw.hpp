#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "grid.hpp"
#include "lattice.hpp"
#include "rng.hpp"

namespace holelab {

// Real-valued function on a site set; values are dense over the domain box
// and meaningful on domain members only (0 elsewhere).
struct ScalarField {
    SiteSet domain;
    std::vector<double> values;

    ScalarField() = default;
    explicit ScalarField(const SiteSet& dom)
        : domain(dom), values(dom.box().volume(), 0.0) {}

    double at(const Site& s) const {
        if (!domain.box().contains(s)) return 0.0;
        return values[domain.box().index(s)];
    }
    void set(const Site& s, double v) { values[domain.box().index(s)] = v; }
};

enum class StopReason { ExitedRadius, HitTarget, StepBudget };

struct StopRule {
    std::optional<int32_t> exit_radius;      // stop on first site with |x|_inf >= radius
    const SiteSet* hit_target = nullptr;     // stop on entering the set
    std::optional<int64_t> step_budget;      // hard cap on steps

    static StopRule radius(int32_t r) {
        StopRule s;
        s.exit_radius = r;
        return s;
    }
    static StopRule target(const SiteSet& t) {
        StopRule s;
        s.hit_target = &t;
        return s;
    }
    static StopRule budget(int64_t m) {
        StopRule s;
        s.step_budget = m;
        return s;
    }
};

struct WalkPath {
    Site start;
    std::vector<Site> sites;  // positions including the start
    StopReason stop_reason = StopReason::StepBudget;
};

// Simple random walk run until the stop rule fires; deterministic per seed.
WalkPath sample_path(const Site& start, const StopRule& rule, uint64_t seed);

struct GreenConfig {
    int32_t r_out = 24;        // base radius for the linear-solve path
    double tol = 1e-10;
    bool monte_carlo = false;  // cross-check estimator instead of the solve
    int64_t mc_samples = 200000;
    int32_t mc_kill_radius = 200;
    uint64_t seed = 1;
};

// Green function estimate g(x,y) = expected visits (holding-time-1 units).
CapacityEstimate green(const Site& x, const Site& y, const GreenConfig& cfg);

// Discrete harmonic extension: field matching `boundary` on the exterior
// boundary of `domain` with zero discrete Laplacian inside (sup residual tol).
ScalarField dirichlet_solve(const SiteSet& domain, const ScalarField& boundary,
                            double tol);

// Equilibrium weights and capacity of A (escape-probability normalization).
std::pair<ScalarField, CapacityEstimate> equilibrium(const SiteSet& a, int32_t r_out,
                                                     double tol);

// (1/2d) sum of neighbor increments; requires all 2d neighbors in the domain.
double discrete_laplacian(const ScalarField& f, const Site& x);

// (1/2) sum over ordered neighbor pairs of (1/2d)(df)(dg); errors out when a
// nonzero value sits on its domain-box edge (the gradient would be truncated).
double dirichlet_form(const ScalarField& f, const ScalarField& g);

// Excursion segments: first entrance into D up to first subsequent exit of U.
int64_t excursion_count(const std::vector<WalkPath>& paths, const SiteSet& d,
                        const SiteSet& u, bool count_truncated = true);

}  // namespace holelab
