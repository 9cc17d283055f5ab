#include "lattice.hpp"

#include <cmath>
#include <cstdlib>
#include <deque>
#include <stdexcept>

namespace holelab {

Site operator+(const Site& a, const Site& b) {
    Site r = a;
    for (int i = 0; i < a.d; ++i) r[i] += b[i];
    return r;
}

Site operator-(const Site& a, const Site& b) {
    Site r = a;
    for (int i = 0; i < a.d; ++i) r[i] -= b[i];
    return r;
}

int32_t chebyshev(const Site& a, const Site& b) {
    int32_t m = 0;
    for (int i = 0; i < a.d; ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

int64_t manhattan(const Site& a, const Site& b) {
    int64_t m = 0;
    for (int i = 0; i < a.d; ++i) m += std::abs(static_cast<int64_t>(a[i]) - b[i]);
    return m;
}

double norm2(const Site& a) {
    double s = 0.0;
    for (int i = 0; i < a.d; ++i) s += static_cast<double>(a[i]) * a[i];
    return std::sqrt(s);
}

bool BoxSpec::contains_box(const BoxSpec& o) const {
    for (int i = 0; i < dim(); ++i) {
        if (o.anchor[i] < anchor[i]) return false;
        if (o.anchor[i] + o.dims[i] > anchor[i] + dims[i]) return false;
    }
    return true;
}

BoxSpec BoxSpec::centered(const Site& center, int32_t radius) {
    BoxSpec b;
    b.anchor = center;
    b.dims = Site(center.d, 0);
    for (int i = 0; i < center.d; ++i) {
        b.anchor[i] = center[i] - radius;
        b.dims[i] = 2 * radius + 1;
    }
    return b;
}

Frame Frame::centered(int dim, int32_t radius) {
    return Frame(BoxSpec::centered(Site(dim, 0), radius));
}

void Frame::require(const BoxSpec& b, const char* what) const {
    if (b.dim() != bounds.dim())
        throw std::invalid_argument(std::string(what) + ": dimension mismatch with frame");
    if (!bounds.contains_box(b))
        throw std::out_of_range(std::string(what) + ": exceeds the run bounding box");
}

void SiteSet::for_each(const std::function<void(const Site&)>& fn) const {
    int64_t n = box_.volume();
    for (int64_t i = 0; i < n; ++i)
        if (test_index(i)) fn(box_.site_at(i));
}

std::vector<Site> SiteSet::sites() const {
    std::vector<Site> out;
    out.reserve(count_);
    for_each([&](const Site& s) { out.push_back(s); });
    return out;
}

SiteSet box_set(const Frame& frame, const Site& center, int32_t r) {
    if (r < 0) throw std::invalid_argument("box_set: negative radius");
    BoxSpec b = BoxSpec::centered(center, r);
    frame.require(b, "box_set");
    SiteSet s(b);
    int64_t n = b.volume();
    for (int64_t i = 0; i < n; ++i) s.set_index(i);
    return s;
}

SiteSet sphere_set(const Frame& frame, int dim, int32_t n) {
    if (n < 1) throw std::invalid_argument("sphere_set: radius must be >= 1");
    BoxSpec b = BoxSpec::centered(Site(dim, 0), n);
    frame.require(b, "sphere_set");
    SiteSet s(b);
    int64_t total = b.volume();
    for (int64_t i = 0; i < total; ++i) {
        Site x = b.site_at(i);
        int32_t m = 0;
        for (int k = 0; k < dim; ++k) m = std::max(m, std::abs(x[k]));
        if (m == n) s.set_index(i);
    }
    return s;
}

SiteSet dilate(const Frame& frame, const SiteSet& s, int32_t L) {
    if (L < 0) throw std::invalid_argument("dilate: negative radius");
    if (L == 0) return s;
    BoxSpec b = s.box();
    for (int i = 0; i < b.dim(); ++i) {
        b.anchor[i] -= L;
        b.dims[i] += 2 * L;
    }
    frame.require(b, "dilate");
    // separable Chebyshev dilation: 1D max filter per axis
    int64_t n = b.volume();
    std::vector<uint8_t> cur(n, 0);
    s.for_each([&](const Site& x) { cur[b.index(x)] = 1; });
    std::vector<uint8_t> next(n, 0);
    for (int axis = 0; axis < b.dim(); ++axis) {
        int64_t stride = 1;
        for (int i = 0; i < axis; ++i) stride *= b.dims[i];
        int32_t len = b.dims[axis];
        std::fill(next.begin(), next.end(), 0);
        // iterate over all lines along `axis`
        int64_t lines = n / len;
        for (int64_t line = 0; line < lines; ++line) {
            // decompose line id into the index with axis removed
            int64_t base = 0, rem = line, mul = 1;
            for (int i = 0; i < b.dim(); ++i) {
                if (i == axis) {
                    mul *= b.dims[i];
                    continue;
                }
                int64_t di = rem % b.dims[i];
                rem /= b.dims[i];
                int64_t str = 1;
                for (int k = 0; k < i; ++k) str *= b.dims[k];
                base += di * str;
            }
            (void)mul;
            int32_t run = -1;  // last position with a set bit
            for (int32_t j = 0; j < len; ++j) {
                if (cur[base + j * stride]) run = j;
                if (run >= 0 && j - run <= L) next[base + j * stride] = 1;
            }
            run = len;
            for (int32_t j = len - 1; j >= 0; --j) {
                if (cur[base + j * stride]) run = j;
                if (run < len && run - j <= L) next[base + j * stride] = 1;
            }
        }
        std::swap(cur, next);
    }
    SiteSet out(b);
    for (int64_t i = 0; i < n; ++i)
        if (cur[i]) out.set_index(i);
    return out;
}

namespace {

// enumerate neighbor offsets for the chosen connectivity
std::vector<Site> neighbor_offsets(int dim, Connectivity conn) {
    std::vector<Site> out;
    if (conn == Connectivity::Nearest) {
        for (int i = 0; i < dim; ++i) {
            Site e(dim, 0);
            e[i] = 1;
            out.push_back(e);
            e[i] = -1;
            out.push_back(e);
        }
    } else {
        Site off(dim, -1);
        while (true) {
            bool zero = true;
            for (int i = 0; i < dim; ++i)
                if (off[i] != 0) zero = false;
            if (!zero) out.push_back(off);
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
    }
    return out;
}

}  // namespace

Labeling label_components(const SiteSet& s, Connectivity conn) {
    Labeling lab;
    lab.box = s.box();
    int64_t n = lab.box.volume();
    lab.label.assign(n, 0);
    auto offs = neighbor_offsets(s.dim(), conn);
    std::deque<int64_t> queue;
    for (int64_t i = 0; i < n; ++i) {
        if (!s.test_index(i) || lab.label[i] != 0) continue;
        ++lab.num_labels;
        lab.label[i] = lab.num_labels;
        queue.push_back(i);
        while (!queue.empty()) {
            int64_t j = queue.front();
            queue.pop_front();
            Site x = lab.box.site_at(j);
            for (const Site& o : offs) {
                Site y = x + o;
                if (!lab.box.contains(y)) continue;
                int64_t k = lab.box.index(y);
                if (s.test_index(k) && lab.label[k] == 0) {
                    lab.label[k] = lab.num_labels;
                    queue.push_back(k);
                }
            }
        }
    }
    return lab;
}

SiteSet seeded_component(const SiteSet& occupied, const SiteSet& seeds, Connectivity conn) {
    if (seeds.empty()) throw std::invalid_argument("seeded_component: empty seed set");
    // working box covers both sets
    BoxSpec b = seeds.box();
    const BoxSpec& ob = occupied.box();
    if (!occupied.empty()) {
        for (int i = 0; i < b.dim(); ++i) {
            int32_t lo = std::min(b.anchor[i], ob.anchor[i]);
            int32_t hi = std::max(b.anchor[i] + b.dims[i], ob.anchor[i] + ob.dims[i]);
            b.anchor[i] = lo;
            b.dims[i] = hi - lo;
        }
    }
    SiteSet medium(b);
    occupied.for_each([&](const Site& x) { medium.set(x); });
    seeds.for_each([&](const Site& x) { medium.set(x); });

    SiteSet out(b);
    auto offs = neighbor_offsets(b.dim(), conn);
    std::deque<int64_t> queue;
    seeds.for_each([&](const Site& x) {
        int64_t i = b.index(x);
        if (!out.test_index(i)) {
            out.set_index(i);
            queue.push_back(i);
        }
    });
    while (!queue.empty()) {
        int64_t j = queue.front();
        queue.pop_front();
        Site x = b.site_at(j);
        for (const Site& o : offs) {
            Site y = x + o;
            if (!b.contains(y)) continue;
            int64_t k = b.index(y);
            if (medium.test_index(k) && !out.test_index(k)) {
                out.set_index(k);
                queue.push_back(k);
            }
        }
    }
    return out;
}

SiteSet hole_set(const Frame& frame, const SiteSet& thickened, int32_t n) {
    SiteSet window = box_set(frame, Site(thickened.dim(), 0), n);
    return set_difference(window, thickened);
}

SiteSet set_union(const SiteSet& a, const SiteSet& b) {
    BoxSpec bb = a.box();
    for (int i = 0; i < bb.dim(); ++i) {
        int32_t lo = std::min(bb.anchor[i], b.box().anchor[i]);
        int32_t hi = std::max(bb.anchor[i] + bb.dims[i], b.box().anchor[i] + b.box().dims[i]);
        bb.anchor[i] = lo;
        bb.dims[i] = hi - lo;
    }
    SiteSet out(bb);
    a.for_each([&](const Site& x) { out.set(x); });
    b.for_each([&](const Site& x) { out.set(x); });
    return out;
}

SiteSet set_difference(const SiteSet& a, const SiteSet& b) {
    SiteSet out(a.box());
    a.for_each([&](const Site& x) {
        if (!b.test(x)) out.set(x);
    });
    return out;
}

SiteSet set_intersection(const SiteSet& a, const SiteSet& b) {
    SiteSet out(a.box());
    a.for_each([&](const Site& x) {
        if (b.test(x)) out.set(x);
    });
    return out;
}

bool is_subset(const SiteSet& a, const SiteSet& b) {
    bool ok = true;
    a.for_each([&](const Site& x) {
        if (!b.test(x)) ok = false;
    });
    return ok;
}

}  // namespace holelab
