#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace holelab {

constexpr int kMaxDim = 6;

// Lattice point with run-time dimension d (3 <= d <= kMaxDim).
struct Site {
    int d = 3;
    std::array<int32_t, kMaxDim> c{};

    Site() = default;
    Site(int dim, int32_t fill) : d(dim) { c.fill(0); for (int i = 0; i < d; ++i) c[i] = fill; }
    Site(std::initializer_list<int32_t> xs) {
        d = static_cast<int>(xs.size());
        c.fill(0);
        int i = 0;
        for (int32_t x : xs) c[i++] = x;
    }

    int32_t& operator[](int i) { return c[i]; }
    int32_t operator[](int i) const { return c[i]; }
    bool operator==(const Site& o) const {
        if (d != o.d) return false;
        for (int i = 0; i < d; ++i)
            if (c[i] != o.c[i]) return false;
        return true;
    }
    Site shifted(int axis, int32_t by) const {
        Site s = *this;
        s.c[axis] += by;
        return s;
    }
};

Site operator+(const Site& a, const Site& b);
Site operator-(const Site& a, const Site& b);
int32_t chebyshev(const Site& a, const Site& b);  // |.|_inf
int64_t manhattan(const Site& a, const Site& b);  // |.|_1
double norm2(const Site& a);

// Axis-aligned index box [anchor, anchor + dims).
struct BoxSpec {
    Site anchor;
    Site dims;  // extents per axis, all > 0

    int dim() const { return anchor.d; }
    int64_t volume() const {
        int64_t v = 1;
        for (int i = 0; i < dim(); ++i) v *= dims[i];
        return v;
    }
    bool contains(const Site& s) const {
        for (int i = 0; i < dim(); ++i) {
            int32_t r = s[i] - anchor[i];
            if (r < 0 || r >= dims[i]) return false;
        }
        return true;
    }
    bool contains_box(const BoxSpec& o) const;
    int64_t index(const Site& s) const {
        int64_t idx = 0;
        for (int i = dim() - 1; i >= 0; --i) idx = idx * dims[i] + (s[i] - anchor[i]);
        return idx;
    }
    Site site_at(int64_t idx) const {
        Site s(dim(), 0);
        for (int i = 0; i < dim(); ++i) {
            s[i] = anchor[i] + static_cast<int32_t>(idx % dims[i]);
            idx /= dims[i];
        }
        return s;
    }
    static BoxSpec centered(const Site& center, int32_t radius);
};

// Connectivity used for components: nearest-neighbor or *-neighbor.
enum class Connectivity { Nearest, Star };

// Run-wide bounding box; constructions that would grow past it are rejected.
struct Frame {
    BoxSpec bounds;
    explicit Frame(const BoxSpec& b) : bounds(b) {}
    static Frame centered(int dim, int32_t radius);
    void require(const BoxSpec& b, const char* what) const;
};

// Dense bit-grid subset of the lattice, anchored to its bounding box.
class SiteSet {
  public:
    SiteSet() = default;
    explicit SiteSet(const BoxSpec& box)
        : box_(box), bits_((box.volume() + 63) / 64, 0), count_(0) {}

    const BoxSpec& box() const { return box_; }
    int dim() const { return box_.dim(); }
    int64_t count() const { return count_; }
    bool empty() const { return count_ == 0; }

    bool test(const Site& s) const {
        if (!box_.contains(s)) return false;
        int64_t i = box_.index(s);
        return (bits_[i >> 6] >> (i & 63)) & 1;
    }
    bool test_index(int64_t i) const { return (bits_[i >> 6] >> (i & 63)) & 1; }
    void set(const Site& s) {
        int64_t i = box_.index(s);
        uint64_t m = 1ull << (i & 63);
        if (!(bits_[i >> 6] & m)) {
            bits_[i >> 6] |= m;
            ++count_;
        }
    }
    void set_index(int64_t i) {
        uint64_t m = 1ull << (i & 63);
        if (!(bits_[i >> 6] & m)) {
            bits_[i >> 6] |= m;
            ++count_;
        }
    }
    void clear(const Site& s) {
        int64_t i = box_.index(s);
        uint64_t m = 1ull << (i & 63);
        if (bits_[i >> 6] & m) {
            bits_[i >> 6] &= ~m;
            --count_;
        }
    }

    void for_each(const std::function<void(const Site&)>& fn) const;
    std::vector<Site> sites() const;

    const std::vector<uint64_t>& raw_bits() const { return bits_; }
    void overwrite_bits(std::vector<uint64_t> bits, int64_t count) {
        bits_ = std::move(bits);
        count_ = count;
    }

  private:
    BoxSpec box_{};
    std::vector<uint64_t> bits_;
    int64_t count_ = 0;
};

// Component labels over a domain set; 0 means unassigned.
struct Labeling {
    BoxSpec box;
    std::vector<int32_t> label;  // one entry per box cell
    int32_t num_labels = 0;
};

// [center - r, center + r]^d intersected with the lattice.
SiteSet box_set(const Frame& frame, const Site& center, int32_t r);
// Inner boundary of box_set(0, n): sites with |x|_inf = n.
SiteSet sphere_set(const Frame& frame, int dim, int32_t n);
// All sites within |.|_inf distance L of s.
SiteSet dilate(const Frame& frame, const SiteSet& s, int32_t L);
// Connected component labeling of `s` under the given connectivity.
Labeling label_components(const SiteSet& s, Connectivity conn);
// Component of `seeds` inside occupied-union-seeds; seeds always included.
SiteSet seeded_component(const SiteSet& occupied, const SiteSet& seeds,
                         Connectivity conn = Connectivity::Nearest);
// B(0,n) minus the thickened component.
SiteSet hole_set(const Frame& frame, const SiteSet& thickened, int32_t n);

SiteSet set_union(const SiteSet& a, const SiteSet& b);
SiteSet set_difference(const SiteSet& a, const SiteSet& b);
SiteSet set_intersection(const SiteSet& a, const SiteSet& b);
bool is_subset(const SiteSet& a, const SiteSet& b);

}  // namespace holelab
