#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lattice.hpp"
#include "rng.hpp"

using namespace holelab;

namespace {

// independent flood fill used as the component oracle
SiteSet bfs_oracle(const SiteSet& medium, const std::vector<Site>& seeds,
                   Connectivity conn) {
    SiteSet out(medium.box());
    std::vector<Site> stack;
    for (const Site& s : seeds)
        if (medium.test(s) && !out.test(s)) {
            out.set(s);
            stack.push_back(s);
        }
    while (!stack.empty()) {
        Site x = stack.back();
        stack.pop_back();
        int dim = x.d;
        if (conn == Connectivity::Nearest) {
            for (int k = 0; k < dim; ++k)
                for (int32_t d = -1; d <= 1; d += 2) {
                    Site y = x.shifted(k, d);
                    if (medium.test(y) && !out.test(y)) {
                        out.set(y);
                        stack.push_back(y);
                    }
                }
        } else {
            std::vector<Site> offs;
            Site off(dim, -1);
            while (true) {
                bool zero = true;
                for (int i = 0; i < dim; ++i)
                    if (off[i] != 0) zero = false;
                if (!zero) offs.push_back(off);
                int i = 0;
                for (; i < dim; ++i) {
                    if (off[i] < 1) {
                        ++off[i];
                        break;
                    }
                    off[i] = -1;
                }
                if (i == dim) break;
            }
            for (const Site& o : offs) {
                Site y = x + o;
                if (medium.test(y) && !out.test(y)) {
                    out.set(y);
                    stack.push_back(y);
                }
            }
        }
    }
    return out;
}

bool sets_equal(const SiteSet& a, const SiteSet& b) {
    return a.count() == b.count() && is_subset(a, b);
}

}  // namespace

TEST_CASE("box counts") {
    Frame fr = Frame::centered(3, 64);
    CHECK(box_set(fr, Site{0, 0, 0}, 1).count() == 27);
    CHECK(box_set(fr, Site{0, 0, 0}, 0).count() == 1);
    SiteSet b = box_set(fr, Site{1, 0, 0}, 2);
    CHECK(b.count() == 125);
    CHECK(b.box().anchor == Site{-1, -2, -2});

    Frame fr4 = Frame::centered(4, 8);
    CHECK(box_set(fr4, Site(4, 0), 1).count() == 81);
}

TEST_CASE("box overflow is an error") {
    Frame fr = Frame::centered(3, 8);
    CHECK_THROWS(box_set(fr, Site{0, 0, 0}, 9));
    CHECK_THROWS(box_set(fr, Site{5, 0, 0}, 5));
}

TEST_CASE("sphere counts") {
    Frame fr = Frame::centered(3, 16);
    CHECK(sphere_set(fr, 3, 1).count() == 26);
    CHECK(sphere_set(fr, 3, 2).count() == 98);
    Frame fr4 = Frame::centered(4, 4);
    CHECK(sphere_set(fr4, 4, 1).count() == 80);
}

TEST_CASE("dilate basics") {
    Frame fr = Frame::centered(3, 32);
    SiteSet point(BoxSpec::centered(Site{0, 0, 0}, 0));
    point.set(Site{0, 0, 0});
    SiteSet d1 = dilate(fr, point, 1);
    CHECK(sets_equal(d1, box_set(fr, Site{0, 0, 0}, 1)));
    CHECK(sets_equal(dilate(fr, point, 0), point));
}

TEST_CASE("dilate equals brute-force distance transform") {
    Frame fr = Frame::centered(3, 10);
    SiteSet s4 = sphere_set(fr, 3, 4);
    SiteSet d = dilate(fr, s4, 2);
    // oracle via direct distance scan over box(0,8)
    SiteSet oracle(BoxSpec::centered(Site{0, 0, 0}, 8));
    box_set(fr, Site{0, 0, 0}, 8).for_each([&](const Site& x) {
        bool close = false;
        s4.for_each([&](const Site& y) {
            if (chebyshev(x, y) <= 2) close = true;
        });
        if (close) oracle.set(x);
    });
    CHECK(sets_equal(d, oracle));
    // equal, as sets, to box(0,6) minus box(0,1)
    SiteSet expect = set_difference(box_set(fr, Site{0, 0, 0}, 6),
                                    box_set(fr, Site{0, 0, 0}, 1));
    CHECK(sets_equal(d, expect));
}

TEST_CASE("dilate monotone in radius") {
    Frame fr = Frame::centered(3, 24);
    Rng rng(7);
    SiteSet s(BoxSpec::centered(Site{0, 0, 0}, 5));
    for (int i = 0; i < 40; ++i) {
        Site x{static_cast<int>(rng.next_below(11)) - 5,
               static_cast<int>(rng.next_below(11)) - 5,
               static_cast<int>(rng.next_below(11)) - 5};
        s.set(x);
    }
    SiteSet prev = s;
    for (int32_t L = 0; L <= 8; ++L) {
        SiteSet cur = dilate(fr, s, L);
        CHECK(is_subset(prev, cur));
        prev = cur;
    }
}

TEST_CASE("seeded component conventions") {
    Frame fr = Frame::centered(3, 16);
    int32_t n = 5;
    SiteSet seeds = sphere_set(fr, 3, n);
    SiteSet vac = box_set(fr, Site{0, 0, 0}, n - 1);
    SiteSet comp = seeded_component(vac, seeds);
    CHECK(sets_equal(comp, box_set(fr, Site{0, 0, 0}, n)));

    SiteSet none(BoxSpec::centered(Site{0, 0, 0}, n));
    SiteSet comp2 = seeded_component(none, seeds);
    CHECK(sets_equal(comp2, seeds));
}

TEST_CASE("seeded component equals flood-fill oracle on random media") {
    Frame fr = Frame::centered(3, 16);
    for (uint64_t trial = 0; trial < 25; ++trial) {
        Rng rng(100 + trial);
        int32_t n = 6;
        SiteSet occ(BoxSpec::centered(Site{0, 0, 0}, n - 1));
        box_set(fr, Site{0, 0, 0}, n - 1).for_each([&](const Site& x) {
            if (rng.bernoulli(0.55)) occ.set(x);
        });
        SiteSet seeds = sphere_set(fr, 3, n);
        SiteSet got = seeded_component(occ, seeds);
        SiteSet medium = set_union(occ, seeds);
        SiteSet want = bfs_oracle(medium, seeds.sites(), Connectivity::Nearest);
        CHECK(sets_equal(got, want));
        CHECK(is_subset(seeds, got));
    }
}

TEST_CASE("star connectivity labeling") {
    SiteSet s(BoxSpec::centered(Site{0, 0, 0}, 2));
    s.set(Site{0, 0, 0});
    s.set(Site{1, 1, 1});  // diagonal neighbors
    CHECK(label_components(s, Connectivity::Nearest).num_labels == 2);
    CHECK(label_components(s, Connectivity::Star).num_labels == 1);
}

TEST_CASE("hole construction and antitonicity in thickening") {
    Frame fr = Frame::centered(3, 40);
    int32_t n = 8;
    SiteSet full = box_set(fr, Site{0, 0, 0}, n);
    CHECK(hole_set(fr, full, n).count() == 0);
    SiteSet shell = sphere_set(fr, 3, n);
    SiteSet w = hole_set(fr, shell, n);
    CHECK(sets_equal(w, box_set(fr, Site{0, 0, 0}, n - 1)));

    Rng rng(42);
    for (int trial = 0; trial < 5; ++trial) {
        SiteSet occ(BoxSpec::centered(Site{0, 0, 0}, n - 1));
        box_set(fr, Site{0, 0, 0}, n - 1).for_each([&](const Site& x) {
            if (rng.bernoulli(0.6)) occ.set(x);
        });
        SiteSet comp = seeded_component(occ, sphere_set(fr, 3, n));
        SiteSet prev_hole;
        bool first = true;
        for (int32_t L = 0; L <= 8; L += 2) {
            SiteSet h = hole_set(fr, dilate(fr, comp, L), n);
            if (!first) CHECK(is_subset(h, prev_hole));
            prev_hole = h;
            first = false;
        }
    }
}

TEST_CASE("thickened hole stays away from the rim") {
    Frame fr = Frame::centered(3, 40);
    int32_t n = 10, L = 3;
    Rng rng(9);
    SiteSet occ(BoxSpec::centered(Site{0, 0, 0}, n - 1));
    box_set(fr, Site{0, 0, 0}, n - 1).for_each([&](const Site& x) {
        if (rng.bernoulli(0.5)) occ.set(x);
    });
    SiteSet comp = seeded_component(occ, sphere_set(fr, 3, n));
    SiteSet h = hole_set(fr, dilate(fr, comp, L), n);
    h.for_each([&](const Site& x) {
        CHECK(chebyshev(x, Site{0, 0, 0}) <= n - L - 1);
    });
}
