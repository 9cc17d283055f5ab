#include "rw.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace holelab {

WalkPath sample_path(const Site& start, const StopRule& rule, uint64_t seed) {
    if (!rule.exit_radius && !rule.hit_target && !rule.step_budget)
        throw std::invalid_argument("sample_path: no stop rule given");
    Rng rng(seed);
    WalkPath path;
    path.start = start;
    path.sites.push_back(start);
    Site pos = start;
    int dim = start.d;
    int64_t budget = rule.step_budget.value_or(INT64_MAX);
    for (int64_t step = 0; step < budget; ++step) {
        uint64_t r = rng.next_below(2 * dim);
        Site nxt = pos.shifted(static_cast<int>(r >> 1), (r & 1) ? 1 : -1);
        pos = nxt;
        path.sites.push_back(pos);
        if (rule.hit_target && rule.hit_target->test(pos)) {
            path.stop_reason = StopReason::HitTarget;
            return path;
        }
        if (rule.exit_radius) {
            int32_t m = 0;
            for (int k = 0; k < dim; ++k) m = std::max(m, std::abs(pos[k]));
            if (m >= *rule.exit_radius) {
                path.stop_reason = StopReason::ExitedRadius;
                return path;
            }
        }
    }
    path.stop_reason = StopReason::StepBudget;
    return path;
}

CapacityEstimate green(const Site& x, const Site& y, const GreenConfig& cfg) {
    if (x.d < 3) throw std::invalid_argument("green: requires d >= 3");
    if (!cfg.monte_carlo) return green_linear_solve(x, y, cfg.r_out, cfg.tol);

    // visit counting, killed at a far radius; the truncation bound goes into
    // the reported error
    Site w = y - x;
    int dim = x.d;
    Rng rng(cfg.seed);
    double sum = 0.0, sumsq = 0.0;
    int32_t rkill = cfg.mc_kill_radius;
    for (int64_t rep = 0; rep < cfg.mc_samples; ++rep) {
        Site pos(dim, 0);
        int64_t visits = (chebyshev(pos, w) == 0) ? 1 : 0;
        while (true) {
            uint64_t r = rng.next_below(2 * dim);
            pos = pos.shifted(static_cast<int>(r >> 1), (r & 1) ? 1 : -1);
            int32_t m = 0;
            for (int k = 0; k < dim; ++k) m = std::max(m, std::abs(pos[k]));
            if (m >= rkill) break;
            if (pos == w) ++visits;
        }
        sum += static_cast<double>(visits);
        sumsq += static_cast<double>(visits) * visits;
    }
    double n = static_cast<double>(cfg.mc_samples);
    double mean = sum / n;
    double var = std::max(0.0, sumsq / n - mean * mean);
    double sep = norm2(w);
    double bias = (dim == 3) ? 3.0 / (2.0 * M_PI * std::max(1.0, rkill - sep)) : 0.0;
    CapacityEstimate est;
    est.value = mean;
    est.stderr_ = std::sqrt(var / n) + bias;
    est.method = "monte_carlo";
    est.radii = {rkill};
    return est;
}

ScalarField dirichlet_solve(const SiteSet& domain, const ScalarField& boundary,
                            double tol) {
    if (domain.empty()) throw std::invalid_argument("dirichlet_solve: empty domain");
    if (tol <= 0.0) throw std::invalid_argument("dirichlet_solve: tol must be > 0");
    int dim = domain.dim();
    // grid covers the domain plus one site of slack for the boundary layer
    BoxSpec gb = domain.box();
    for (int i = 0; i < dim; ++i) {
        gb.anchor[i] -= 1;
        gb.dims[i] += 2;
    }
    GridField g(gb);
    int64_t n = gb.volume();
    // everything outside the domain is fixed; boundary sites carry data
    for (int64_t i = 0; i < n; ++i) {
        Site s = gb.site_at(i);
        if (domain.test(s)) continue;
        g.fixed[i] = 1;
        g.v[i] = 0.0;
    }
    boundary.domain.for_each([&](const Site& s) {
        if (domain.test(s)) return;
        if (!gb.contains(s)) return;
        g.fix(s, boundary.at(s));
    });
    // every exterior neighbor of a domain site must carry boundary data
    bool missing = false;
    domain.for_each([&](const Site& s) {
        for (int k = 0; k < dim && !missing; ++k)
            for (int32_t d = -1; d <= 1 && !missing; d += 2) {
                Site nb = s.shifted(k, d);
                if (domain.test(nb)) continue;
                if (!boundary.domain.test(nb)) missing = true;
            }
    });
    if (missing)
        throw std::invalid_argument(
            "dirichlet_solve: boundary data missing on part of the exterior boundary");
    SolveReport rep = solve_dirichlet_grid(g, nullptr, tol);
    if (!rep.converged)
        throw std::runtime_error("dirichlet_solve: no convergence, residual " +
                                 std::to_string(rep.residual));
    ScalarField out(domain);
    domain.for_each([&](const Site& s) { out.set(s, g.at(s)); });
    return out;
}

std::pair<ScalarField, CapacityEstimate> equilibrium(const SiteSet& a, int32_t r_out,
                                                     double tol) {
    EquilibriumResult res = equilibrium_measure(a, r_out, tol);
    ScalarField weights(a);
    for (size_t i = 0; i < res.support.size(); ++i)
        weights.set(res.support[i], res.weights[i]);
    return {std::move(weights), res.capacity};
}

double discrete_laplacian(const ScalarField& f, const Site& x) {
    int dim = x.d;
    if (!f.domain.test(x))
        throw std::invalid_argument("discrete_laplacian: x outside domain");
    double acc = 0.0;
    for (int k = 0; k < dim; ++k)
        for (int32_t d = -1; d <= 1; d += 2) {
            Site nb = x.shifted(k, d);
            if (!f.domain.test(nb))
                throw std::invalid_argument("discrete_laplacian: neighbor value missing");
            acc += f.at(nb) - f.at(x);
        }
    return acc / (2.0 * dim);
}

double dirichlet_form(const ScalarField& f, const ScalarField& g) {
    int dim = f.domain.dim();
    auto check_support = [&](const ScalarField& h) {
        const BoxSpec& b = h.domain.box();
        h.domain.for_each([&](const Site& s) {
            if (h.at(s) == 0.0) return;
            for (int k = 0; k < dim; ++k)
                if (s[k] == b.anchor[k] || s[k] == b.anchor[k] + b.dims[k] - 1)
                    throw std::invalid_argument(
                        "dirichlet_form: support touches the domain edge");
        });
    };
    check_support(f);
    check_support(g);
    // union box expanded by one so every edge out of the support is included
    BoxSpec bb = f.domain.box();
    const BoxSpec& gb = g.domain.box();
    for (int i = 0; i < dim; ++i) {
        int32_t lo = std::min(bb.anchor[i], gb.anchor[i]) - 1;
        int32_t hi = std::max(bb.anchor[i] + bb.dims[i], gb.anchor[i] + gb.dims[i]) + 1;
        bb.anchor[i] = lo;
        bb.dims[i] = hi - lo;
    }
    double acc = 0.0;
    int64_t n = bb.volume();
    for (int64_t i = 0; i < n; ++i) {
        Site s = bb.site_at(i);
        for (int k = 0; k < dim; ++k) {
            if (s[k] + 1 >= bb.anchor[k] + bb.dims[k]) continue;
            Site t = s.shifted(k, 1);
            acc += (f.at(t) - f.at(s)) * (g.at(t) - g.at(s));
        }
    }
    return acc / (2.0 * dim);
}

int64_t excursion_count(const std::vector<WalkPath>& paths, const SiteSet& d,
                        const SiteSet& u, bool count_truncated) {
    if (!is_subset(d, u)) throw std::invalid_argument("excursion_count: D must lie in U");
    int64_t total = 0;
    for (const WalkPath& p : paths) {
        bool in_excursion = false;
        for (const Site& s : p.sites) {
            if (!in_excursion) {
                if (d.test(s)) in_excursion = true;
            } else if (!u.test(s)) {
                ++total;
                in_excursion = false;
            }
        }
        if (in_excursion && count_truncated) ++total;
    }
    return total;
}

}  // namespace holelab
