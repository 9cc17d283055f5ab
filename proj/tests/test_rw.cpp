#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "rw.hpp"

using namespace holelab;

namespace {

// small dense solve used as an exit-time oracle: t = 1 + avg(neighbors), t=0 outside
double exact_exit_time_from_origin(int32_t interior_radius) {
    Frame fr = Frame::centered(3, interior_radius + 2);
    SiteSet interior = box_set(fr, Site{0, 0, 0}, interior_radius);
    std::vector<Site> sites = interior.sites();
    int n = static_cast<int>(sites.size());
    std::map<int64_t, int> idx;
    for (int i = 0; i < n; ++i) idx[interior.box().index(sites[i])] = i;
    std::vector<double> a(n * n, 0.0), rhs(n, 1.0);
    for (int i = 0; i < n; ++i) {
        a[i * n + i] = 1.0;
        for (int k = 0; k < 3; ++k)
            for (int32_t d = -1; d <= 1; d += 2) {
                Site nb = sites[i].shifted(k, d);
                if (interior.test(nb)) a[i * n + idx[interior.box().index(nb)]] -= 1.0 / 6.0;
            }
    }
    for (int c = 0; c < n; ++c) {
        int p = c;
        for (int r = c + 1; r < n; ++r)
            if (std::fabs(a[r * n + c]) > std::fabs(a[p * n + c])) p = r;
        for (int k = 0; k < n; ++k) std::swap(a[c * n + k], a[p * n + k]);
        std::swap(rhs[c], rhs[p]);
        for (int r = c + 1; r < n; ++r) {
            double f = a[r * n + c] / a[c * n + c];
            for (int k = c; k < n; ++k) a[r * n + k] -= f * a[c * n + k];
            rhs[r] -= f * rhs[c];
        }
    }
    std::vector<double> t(n);
    for (int r = n - 1; r >= 0; --r) {
        double v = rhs[r];
        for (int k = r + 1; k < n; ++k) v -= a[r * n + k] * t[k];
        t[r] = v / a[r * n + r];
    }
    return t[idx[interior.box().index(Site{0, 0, 0})]];
}

}  // namespace

TEST_CASE("radius-1 walk stops after one step") {
    for (uint64_t s = 0; s < 20; ++s) {
        WalkPath p = sample_path(Site{0, 0, 0}, StopRule::radius(1), s);
        CHECK(p.sites.size() == 2);
        CHECK(p.stop_reason == StopReason::ExitedRadius);
    }
}

TEST_CASE("walk is deterministic per seed") {
    WalkPath a = sample_path(Site{0, 0, 0}, StopRule::radius(6), 99);
    WalkPath b = sample_path(Site{0, 0, 0}, StopRule::radius(6), 99);
    REQUIRE(a.sites.size() == b.sites.size());
    for (size_t i = 0; i < a.sites.size(); ++i) CHECK(a.sites[i] == b.sites[i]);
}

TEST_CASE("steps move by one unit in one coordinate") {
    WalkPath p = sample_path(Site{0, 0, 0}, StopRule::budget(500), 3);
    CHECK(p.stop_reason == StopReason::StepBudget);
    for (size_t i = 1; i < p.sites.size(); ++i)
        CHECK(manhattan(p.sites[i], p.sites[i - 1]) == 1);
}

TEST_CASE("mean exit time matches the exact chain solve at radius 2") {
    double expect = exact_exit_time_from_origin(1);
    int reps = 40000;
    double sum = 0.0, sumsq = 0.0;
    for (int r = 0; r < reps; ++r) {
        WalkPath p = sample_path(Site{0, 0, 0}, StopRule::radius(2), 1000 + r);
        double steps = static_cast<double>(p.sites.size() - 1);
        sum += steps;
        sumsq += steps * steps;
    }
    double mean = sum / reps;
    double sd = std::sqrt((sumsq / reps - mean * mean) / reps);
    CHECK(std::fabs(mean - expect) < 3.0 * sd);
}

TEST_CASE("hit-target stop rule reports the reason") {
    Frame fr = Frame::centered(3, 10);
    SiteSet target = sphere_set(fr, 3, 3);
    WalkPath p = sample_path(Site{0, 0, 0}, StopRule::target(target), 5);
    CHECK(p.stop_reason == StopReason::HitTarget);
    CHECK(target.test(p.sites.back()));
}

TEST_CASE("green dual oracle at the origin") {
    GreenConfig solveCfg;
    solveCfg.r_out = 24;
    CapacityEstimate lin = green(Site{0, 0, 0}, Site{0, 0, 0}, solveCfg);
    GreenConfig mcCfg;
    mcCfg.monte_carlo = true;
    mcCfg.mc_samples = 150000;
    mcCfg.mc_kill_radius = 128;
    mcCfg.seed = 21;
    CapacityEstimate mc = green(Site{0, 0, 0}, Site{0, 0, 0}, mcCfg);
    CHECK(std::fabs(lin.value - mc.value) < 3.0 * (lin.stderr_ + mc.stderr_));
    CHECK(std::fabs(lin.value - 1.5164) < 0.005);
}

TEST_CASE("green translation invariance and axis decay") {
    GreenConfig cfg;
    cfg.r_out = 20;
    CapacityEstimate a = green(Site{2, -1, 3}, Site{2, -1, 3}, cfg);
    CapacityEstimate b = green(Site{0, 0, 0}, Site{0, 0, 0}, cfg);
    CHECK(a.value == doctest::Approx(b.value).epsilon(1e-12));
    double prev = b.value;
    for (int32_t k = 1; k <= 8; ++k) {
        CapacityEstimate g = green(Site{0, 0, 0}, Site{k, 0, 0}, cfg);
        CHECK(g.value < prev);
        CHECK(g.value > 0.0);
        prev = g.value;
    }
}

TEST_CASE("dirichlet solve: constant boundary extends to a constant") {
    Frame fr = Frame::centered(3, 10);
    SiteSet domain = box_set(fr, Site{0, 0, 0}, 4);
    SiteSet bnd_sites(BoxSpec::centered(Site{0, 0, 0}, 5));
    sphere_set(fr, 3, 5).for_each([&](const Site& s) { bnd_sites.set(s); });
    ScalarField bnd(bnd_sites);
    bnd_sites.for_each([&](const Site& s) { bnd.set(s, 0.75); });
    ScalarField u = dirichlet_solve(domain, bnd, 1e-11);
    domain.for_each([&](const Site& s) { CHECK(u.at(s) == doctest::Approx(0.75).epsilon(1e-8)); });
}

TEST_CASE("dirichlet solve: annulus bracketed by continuum potentials") {
    Frame fr = Frame::centered(3, 20);
    SiteSet domain = set_difference(box_set(fr, Site{0, 0, 0}, 12),
                                    box_set(fr, Site{0, 0, 0}, 4));
    SiteSet bnd_sites(BoxSpec::centered(Site{0, 0, 0}, 13));
    sphere_set(fr, 3, 4).for_each([&](const Site& s) { bnd_sites.set(s); });
    sphere_set(fr, 3, 13).for_each([&](const Site& s) { bnd_sites.set(s); });
    ScalarField bnd(bnd_sites);
    sphere_set(fr, 3, 4).for_each([&](const Site& s) { bnd.set(s, 1.0); });
    ScalarField u = dirichlet_solve(domain, bnd, 1e-11);
    auto pot = [](double s, double rho, double r) {
        double v = (1.0 / s - 1.0 / r) / (1.0 / rho - 1.0 / r);
        return std::clamp(v, 0.0, 1.0);
    };
    domain.for_each([&](const Site& s) {
        double rr = norm2(s);
        CHECK(u.at(s) >= pot(rr, 4.0, 13.0) - 1e-6);
        CHECK(u.at(s) <= pot(rr, 4.0 * std::sqrt(3.0), 13.0 * std::sqrt(3.0)) + 1e-6);
    });
}

TEST_CASE("dirichlet solve: discrete maximum principle") {
    Frame fr = Frame::centered(3, 10);
    SiteSet domain = box_set(fr, Site{0, 0, 0}, 4);
    SiteSet bnd_sites(BoxSpec::centered(Site{0, 0, 0}, 5));
    sphere_set(fr, 3, 5).for_each([&](const Site& s) { bnd_sites.set(s); });
    ScalarField bnd(bnd_sites);
    Rng rng(4);
    double lo = 1e9, hi = -1e9;
    bnd_sites.for_each([&](const Site& s) {
        double v = rng.next_double() * 4.0 - 2.0;
        bnd.set(s, v);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    });
    ScalarField u = dirichlet_solve(domain, bnd, 1e-10);
    domain.for_each([&](const Site& s) {
        CHECK(u.at(s) >= lo - 1e-8);
        CHECK(u.at(s) <= hi + 1e-8);
    });
    CHECK_THROWS(dirichlet_solve(domain,
        ScalarField(SiteSet(BoxSpec::centered(Site{0, 0, 0}, 0))), 1e-10));
}

TEST_CASE("discrete laplacian basics") {
    Frame fr = Frame::centered(3, 6);
    SiteSet dom = box_set(fr, Site{0, 0, 0}, 2);
    ScalarField c(dom);
    dom.for_each([&](const Site& s) { c.set(s, 3.14); });
    CHECK(discrete_laplacian(c, Site{0, 0, 0}) == doctest::Approx(0.0));

    ScalarField ind(dom);
    ind.set(Site{0, 0, 0}, 1.0);
    CHECK(discrete_laplacian(ind, Site{0, 0, 0}) == doctest::Approx(-1.0));

    ScalarField lin(dom);
    dom.for_each([&](const Site& s) { lin.set(s, static_cast<double>(s[0])); });
    CHECK(discrete_laplacian(lin, Site{0, 0, 0}) == doctest::Approx(0.0));

    ScalarField tiny(box_set(fr, Site{0, 0, 0}, 0));
    tiny.set(Site{0, 0, 0}, 1.0);
    CHECK_THROWS(discrete_laplacian(tiny, Site{0, 0, 0}));
}

TEST_CASE("dirichlet form closed cases") {
    Frame fr = Frame::centered(3, 8);
    SiteSet dom = box_set(fr, Site{0, 0, 0}, 3);
    ScalarField f(dom);
    f.set(Site{0, 0, 0}, 1.0);
    CHECK(dirichlet_form(f, f) == doctest::Approx(1.0));

    SiteSet big = box_set(fr, Site{0, 0, 0}, 5);
    ScalarField c(big);
    box_set(fr, Site{0, 0, 0}, 4).for_each([&](const Site& s) { c.set(s, 2.0); });
    CHECK(dirichlet_form(f, c) == doctest::Approx(0.0));

    ScalarField g(dom);
    g.set(Site{1, 0, 0}, 1.0);
    CHECK(dirichlet_form(f, g) == doctest::Approx(-1.0 / 6.0));
    CHECK(dirichlet_form(g, f) == doctest::Approx(-1.0 / 6.0));
}

TEST_CASE("dirichlet form properties and edge guard") {
    Frame fr = Frame::centered(3, 8);
    SiteSet dom = box_set(fr, Site{0, 0, 0}, 2);
    Rng rng(11);
    ScalarField f(dom), g(dom), h(dom);
    box_set(fr, Site{0, 0, 0}, 1).for_each([&](const Site& s) {
        f.set(s, rng.next_gauss());
        g.set(s, rng.next_gauss());
        h.set(s, rng.next_gauss());
    });
    double efg = dirichlet_form(f, g);
    CHECK(dirichlet_form(g, f) == doctest::Approx(efg));
    CHECK(dirichlet_form(f, f) >= 0.0);
    ScalarField fh(dom);
    dom.for_each([&](const Site& s) { fh.set(s, f.at(s) + h.at(s)); });
    CHECK(dirichlet_form(fh, g) ==
          doctest::Approx(efg + dirichlet_form(h, g)).epsilon(1e-10));
    ScalarField bad(dom);
    bad.set(Site{2, 0, 0}, 1.0);
    CHECK_THROWS(dirichlet_form(bad, g));
}

TEST_CASE("excursion counting") {
    Frame fr = Frame::centered(3, 16);
    SiteSet d = box_set(fr, Site{0, 0, 0}, 1);
    SiteSet u = box_set(fr, Site{0, 0, 0}, 4);
    CHECK(excursion_count({}, d, u) == 0);

    WalkPath p;
    p.start = Site{-6, 0, 0};
    for (int32_t x = -6; x <= 6; ++x) p.sites.push_back(Site{x, 0, 0});
    CHECK(excursion_count({p}, d, u) == 1);

    WalkPath q;
    q.start = Site{-6, 0, 0};
    for (int rep = 0; rep < 3; ++rep) {
        for (int32_t x = -6; x <= 6; ++x) q.sites.push_back(Site{x, 0, 0});
        for (int32_t x = 6; x >= -6; --x) q.sites.push_back(Site{x, 0, 0});
    }
    CHECK(excursion_count({q}, d, u) == 6);

    WalkPath t;
    t.start = Site{-6, 0, 0};
    for (int32_t x = -6; x <= 0; ++x) t.sites.push_back(Site{x, 0, 0});
    CHECK(excursion_count({t}, d, u, true) == 1);
    CHECK(excursion_count({t}, d, u, false) == 0);

    CHECK_THROWS(excursion_count({p}, u, d));
}

TEST_CASE("equilibrium wrapper returns weights on A") {
    Frame fr = Frame::centered(3, 20);
    SiteSet a = box_set(fr, Site{0, 0, 0}, 1);
    auto [w, cap] = equilibrium(a, 12, 1e-10);
    CHECK(cap.value > 0.0);
    double total = 0.0;
    a.for_each([&](const Site& s) {
        CHECK(w.at(s) >= 0.0);
        total += w.at(s);
    });
    CHECK(total == doctest::Approx(cap.value).epsilon(1e-9));
}
