#include "interlace.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace holelab {

namespace {

struct FarField {
    double r_mid;    // handoff sphere radius (Euclidean)
    double r_far;    // lattice walk runs until |x|_2 exceeds this
    int32_t record_radius;
    int64_t step_budget;
    int32_t epoch_budget;
};

// exterior hitting point on the sphere r_mid seen from x (d=3 closed form)
Site sample_reentry(const Site& x, double rho, Rng& rng) {
    double dist = norm2(x);
    double a = dist * dist + rho * rho;
    double b = 2.0 * dist * rho;
    double u = rng.next_double();
    double t = 2.0 * rho * u / (dist * dist - rho * rho) + 1.0 / (dist + rho);
    double c = (a - 1.0 / (t * t)) / b;
    c = std::clamp(c, -1.0, 1.0);
    // orthonormal frame around x-hat
    double inv = 1.0 / dist;
    double ex[3] = {x[0] * inv, x[1] * inv, x[2] * inv};
    double ref[3] = {1.0, 0.0, 0.0};
    if (std::fabs(ex[0]) > 0.9) {
        ref[0] = 0.0;
        ref[1] = 1.0;
    }
    double u1[3] = {ex[1] * ref[2] - ex[2] * ref[1], ex[2] * ref[0] - ex[0] * ref[2],
                    ex[0] * ref[1] - ex[1] * ref[0]};
    double n1 = std::sqrt(u1[0] * u1[0] + u1[1] * u1[1] + u1[2] * u1[2]);
    for (double& v : u1) v /= n1;
    double u2[3] = {ex[1] * u1[2] - ex[2] * u1[1], ex[2] * u1[0] - ex[0] * u1[2],
                    ex[0] * u1[1] - ex[1] * u1[0]};
    double phi = 2.0 * M_PI * rng.next_double();
    double s = std::sqrt(std::max(0.0, 1.0 - c * c));
    Site y(3, 0);
    for (int i = 0; i < 3; ++i) {
        double yi = rho * (c * ex[i] + s * (std::cos(phi) * u1[i] + std::sin(phi) * u2[i]));
        y[i] = static_cast<int32_t>(std::lround(yi));
    }
    return y;
}

// One full trajectory: lattice walk (optionally conductance-weighted via f)
// with far-field jump resampling. Returns false if a safety budget fired.
bool run_trajectory(Site pos, const FarField& ff, const ScalarField* f, Rng& rng,
                    int32_t window_radius, SiteSet& trace,
                    std::vector<WalkPath>* runs, std::vector<int32_t>* run_ids,
                    int32_t traj) {
    auto weight = [&](const Site& s) -> double {
        if (!f) return 1.0;
        return f->domain.test(s) ? f->at(s) : 1.0;
    };
    auto record_site = [&](const Site& s, WalkPath* run) {
        int32_t m = std::max({std::abs(s[0]), std::abs(s[1]), std::abs(s[2])});
        if (m <= window_radius) trace.set(s);
        if (run) run->sites.push_back(s);
    };
    double rfar2 = ff.r_far * ff.r_far;
    int epochs = 0;
    int64_t steps = 0;
    bool clean = true;
    while (true) {
        // lattice phase until |x|_2 > r_far
        WalkPath run;
        bool recording = chebyshev(pos, Site(3, 0)) <= ff.record_radius;
        if (recording && runs) {
            run.start = pos;
            run.sites.reserve(64);
        }
        record_site(pos, (recording && runs) ? &run : nullptr);
        while (true) {
            if (++steps > ff.step_budget) {
                clean = false;
                break;
            }
            Site nxt;
            if (!f) {
                uint64_t r = rng.next_below(6);
                nxt = pos.shifted(static_cast<int>(r >> 1), (r & 1) ? 1 : -1);
            } else {
                double w[6], total = 0.0;
                Site cand[6];
                int idx = 0;
                for (int k = 0; k < 3; ++k)
                    for (int32_t d = -1; d <= 1; d += 2) {
                        cand[idx] = pos.shifted(k, d);
                        w[idx] = weight(cand[idx]);
                        total += w[idx];
                        ++idx;
                    }
                double pick = rng.next_double() * total;
                int chosen = 0;
                for (; chosen < 5; ++chosen) {
                    pick -= w[chosen];
                    if (pick <= 0.0) break;
                }
                nxt = cand[chosen];
            }
            pos = nxt;
            bool now_rec = chebyshev(pos, Site(3, 0)) <= ff.record_radius;
            if (recording && runs) {
                run.sites.push_back(pos);
                int32_t m = std::max({std::abs(pos[0]), std::abs(pos[1]), std::abs(pos[2])});
                if (m <= window_radius) trace.set(pos);
                if (!now_rec) {
                    run.stop_reason = StopReason::ExitedRadius;
                    runs->push_back(std::move(run));
                    run_ids->push_back(traj);
                    run = WalkPath{};
                    recording = false;
                }
            } else {
                record_site(pos, nullptr);
                if (now_rec && runs) {
                    recording = true;
                    run = WalkPath{};
                    run.start = pos;
                    run.sites.push_back(pos);
                }
            }
            double d2 = static_cast<double>(pos[0]) * pos[0] +
                        static_cast<double>(pos[1]) * pos[1] +
                        static_cast<double>(pos[2]) * pos[2];
            if (d2 > rfar2) break;
        }
        if (recording && runs && !run.sites.empty()) {
            run.stop_reason = clean ? StopReason::ExitedRadius : StopReason::StepBudget;
            runs->push_back(std::move(run));
            run_ids->push_back(traj);
        }
        if (!clean) return false;
        // far phase: survive toward the handoff sphere or escape for good
        double dist = norm2(pos);
        if (rng.next_double() >= ff.r_mid / dist) return true;  // escaped
        if (++epochs > ff.epoch_budget) return false;
        pos = sample_reentry(pos, ff.r_mid, rng);
    }
}

FarField make_far_field(const RiSpec& spec, double support_radius) {
    if (spec.stop_radius_factor <= 2.0)
        throw std::invalid_argument("stop_radius_factor must exceed 2");
    FarField ff;
    double n = spec.window_radius;
    ff.r_mid = std::max(spec.stop_radius_factor * n, support_radius + 2.0);
    ff.r_far = 2.0 * ff.r_mid;
    ff.record_radius = spec.record_radius > 0 ? spec.record_radius
                                              : 3 * spec.window_radius;
    ff.step_budget = static_cast<int64_t>(400.0 * ff.r_far * ff.r_far) + 100000;
    double tol = std::clamp(spec.truncation_tol, 1e-12, 0.5);
    ff.epoch_budget = static_cast<int32_t>(std::ceil(std::log(tol) / std::log(0.5))) + 8;
    return ff;
}

}  // namespace

RiSampler::RiSampler(const RiSpec& spec) : spec_(spec) {
    if (spec.u <= 0.0) throw std::invalid_argument("interlacement level must be > 0");
    if (spec.window_radius < 2) throw std::invalid_argument("window too small");
    Frame fr = Frame::centered(3, 8 * spec.window_radius + 16);
    SiteSet window = box_set(fr, Site{0, 0, 0}, spec.window_radius);
    EquilibriumResult eq =
        equilibrium_measure(window, 2 * spec.window_radius, spec.solver_tol);
    support_ = std::move(eq.support);
    weights_ = std::move(eq.weights);
    capacity_ = spec.u * eq.capacity.value;
    alias_ = std::make_unique<AliasTable>(weights_);
}

RiSampler::RiSampler(const RiSpec& spec, const ScalarField& profile) : spec_(spec) {
    if (spec.u <= 0.0) throw std::invalid_argument("interlacement level must be > 0");
    Frame fr = Frame::centered(3, 8 * spec.window_radius + 16);
    SiteSet window = box_set(fr, Site{0, 0, 0}, spec.window_radius);
    EquilibriumResult eq = weighted_equilibrium(window, profile, spec.u,
                                                2 * spec.window_radius, spec.solver_tol);
    support_ = std::move(eq.support);
    weights_ = std::move(eq.weights);
    capacity_ = eq.capacity.value;  // already carries the u factor
    alias_ = std::make_unique<AliasTable>(weights_);
    profile_ = std::make_unique<ScalarField>(profile);
    profile_->domain.for_each([&](const Site& s) {
        if (profile_->at(s) > 1.0)
            support_radius_ = std::max(
                support_radius_,
                static_cast<double>(std::max({std::abs(s[0]), std::abs(s[1]), std::abs(s[2])})));
    });
}

TrajectorySoup RiSampler::sample(uint64_t seed) const {
    TrajectorySoup soup;
    soup.level = spec_.u;
    soup.window_radius = spec_.window_radius;
    soup.trace = SiteSet(BoxSpec::centered(Site(3, 0), spec_.window_radius));
    FarField ff = make_far_field(spec_, support_radius_ * 1.05 + 2.0);
    Rng rng(seed);
    uint64_t count = rng.next_poisson(capacity_);
    for (uint64_t t = 0; t < count; ++t) {
        Site entry = support_[alias_->sample(rng)];
        soup.entries.push_back(entry);
        bool ok = run_trajectory(entry, ff, profile_.get(), rng, spec_.window_radius,
                                 soup.trace, &soup.paths, &soup.traj_id,
                                 static_cast<int32_t>(t));
        if (!ok) soup.flagged = true;
    }
    return soup;
}

TrajectorySoup sample_interlacements(const RiSpec& spec, uint64_t seed) {
    RiSampler sampler(spec);
    return sampler.sample(seed);
}

SiteSet vacant(const TrajectorySoup& soup) {
    Frame fr = Frame::centered(3, 8 * soup.window_radius + 16);
    SiteSet window = box_set(fr, Site{0, 0, 0}, soup.window_radius);
    return set_difference(window, soup.trace);
}

SiteSet srw_trace(int32_t n, double truncation_tol, uint64_t seed,
                  TrajectorySoup* soup_out) {
    RiSpec spec;
    spec.u = 1.0;
    spec.window_radius = n;
    spec.truncation_tol = truncation_tol;
    FarField ff = make_far_field(spec, 0.0);
    Frame fr = Frame::centered(3, 8 * n + 16);
    SiteSet window = box_set(fr, Site{0, 0, 0}, n);
    TrajectorySoup soup;
    soup.level = 0.0;
    soup.window_radius = n;
    soup.trace = SiteSet(window.box());
    Rng rng(seed);
    bool ok = run_trajectory(Site{0, 0, 0}, ff, nullptr, rng, n, soup.trace, &soup.paths,
                             &soup.traj_id, 0);
    if (!ok) soup.flagged = true;
    soup.entries.push_back(Site{0, 0, 0});
    if (soup_out) *soup_out = std::move(soup);
    return soup_out ? soup_out->trace : soup.trace;
}

EquilibriumResult weighted_equilibrium(const SiteSet& window, const ScalarField& f,
                                       double u, int32_t r_out, double tol) {
    int dim = window.dim();
    if (dim != 3) throw std::invalid_argument("weighted equilibrium implemented for d=3");
    f.domain.for_each([&](const Site& s) {
        if (f.at(s) < 1.0 - 1e-12)
            throw std::invalid_argument("weighted equilibrium: profile must be >= 1");
    });
    auto weight = [&](const Site& s) -> double {
        return f.domain.test(s) ? f.at(s) : 1.0;
    };
    auto cap_at = [&](int32_t r) {
        BoxSpec gb = BoxSpec::centered(Site(3, 0), r + 1);
        GridField g(gb);
        std::vector<double> w(gb.volume(), 1.0);
        int64_t nn = gb.volume();
        for (int64_t i = 0; i < nn; ++i) {
            Site s = gb.site_at(i);
            w[i] = weight(s);
            int32_t m = std::max({std::abs(s[0]), std::abs(s[1]), std::abs(s[2])});
            if (m == r + 1) g.fixed[i] = 1;
        }
        window.for_each([&](const Site& s) { g.fix(s, 1.0); });
        SolveReport rep = solve_weighted_sor(g, w, tol);
        if (!rep.converged)
            throw std::runtime_error("weighted_equilibrium: solve did not converge");
        double cap = 0.0;
        window.for_each([&](const Site& s) {
            double esc = 0.0;
            for (int k = 0; k < 3; ++k)
                for (int32_t d = -1; d <= 1; d += 2) {
                    Site y = s.shifted(k, d);
                    esc += weight(y) * (1.0 - g.at(y));
                }
            cap += weight(s) * esc;
        });
        return cap * u / 6.0;
    };
    int32_t supp = 0;
    f.domain.for_each([&](const Site& s) {
        if (f.at(s) > 1.0)
            supp = std::max(supp, std::max({std::abs(s[0]), std::abs(s[1]), std::abs(s[2])}));
    });
    int32_t r1 = std::max(r_out, supp + 3);
    int32_t r2 = (3 * r1) / 2;
    double c1 = cap_at(r1);
    double c2 = cap_at(r2);
    double t1 = 1.0 / r1, t2 = 1.0 / r2;
    double y1 = 1.0 / c1, y2 = 1.0 / c2;
    double yinf = (y1 * t2 - y2 * t1) / (t2 - t1);

    EquilibriumResult res;
    res.capacity.value = 1.0 / yinf;
    res.capacity.stderr_ = std::fabs(res.capacity.value - c2);
    res.capacity.method = "linear_solve";
    res.capacity.radii = {r1, r2};
    // weights recomputed at the far radius for the entry distribution
    BoxSpec gb = BoxSpec::centered(Site(3, 0), r2 + 1);
    GridField g(gb);
    std::vector<double> w(gb.volume(), 1.0);
    int64_t nn = gb.volume();
    for (int64_t i = 0; i < nn; ++i) {
        Site s = gb.site_at(i);
        w[i] = weight(s);
        int32_t m = std::max({std::abs(s[0]), std::abs(s[1]), std::abs(s[2])});
        if (m == r2 + 1) g.fixed[i] = 1;
    }
    window.for_each([&](const Site& s) { g.fix(s, 1.0); });
    if (!solve_weighted_sor(g, w, tol).converged)
        throw std::runtime_error("weighted_equilibrium: weight solve did not converge");
    window.for_each([&](const Site& s) {
        double esc = 0.0;
        for (int k = 0; k < 3; ++k)
            for (int32_t d = -1; d <= 1; d += 2) {
                Site y = s.shifted(k, d);
                esc += weight(y) * (1.0 - g.at(y));
            }
        res.support.push_back(s);
        res.weights.push_back(std::max(0.0, weight(s) * esc * u / 6.0));
    });
    return res;
}

TrajectorySoup tilted_interlacements(const RiSpec& spec, const ScalarField& f,
                                     uint64_t seed) {
    RiSampler sampler(spec, f);
    return sampler.sample(seed);
}

}  // namespace holelab
