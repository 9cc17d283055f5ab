#include "shapes.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace holelab {

double unit_ball_volume(int dim) {
    return std::pow(M_PI, 0.5 * dim) / std::tgamma(0.5 * dim + 1.0);
}

double unit_ball_capacity(int dim) {
    return 2.0 * std::pow(M_PI, 0.5 * dim) / std::tgamma(0.5 * dim - 1.0);
}

ContinuumShape filling(const SiteSet& w, int32_t n) {
    if (n < 1) throw std::invalid_argument("filling: resolution must be positive");
    ContinuumShape out;
    out.resolution = n;
    if (w.empty()) {
        out.voxels = SiteSet(BoxSpec::centered(Site(w.dim(), 0), 0));
        return out;
    }
    BoxSpec vb = w.box();
    for (int i = 0; i < vb.dim(); ++i) {
        vb.anchor[i] -= 1;
        vb.dims[i] += 1;
    }
    out.voxels = SiteSet(vb);
    // cube of side 2/n centered at s/n covers voxels s-1..s in every axis
    w.for_each([&](const Site& s) {
        int total = 1 << s.d;
        for (int mask = 0; mask < total; ++mask) {
            Site v = s;
            for (int k = 0; k < s.d; ++k)
                if (mask & (1 << k)) v[k] -= 1;
            out.voxels.set(v);
        }
    });
    return out;
}

ContinuumShape solid_filling(const SiteSet& w, int32_t n) {
    ContinuumShape out;
    out.resolution = n;
    out.voxels = w;
    return out;
}

ContinuumShape ball_with_count(int64_t count, int32_t resolution) {
    if (count < 1) throw std::invalid_argument("ball_with_count: need count >= 1");
    int dim = 3;
    // bisect the radius until the voxel count matches as closely as possible
    double lo = 0.0,
           hi = std::pow(static_cast<double>(count), 1.0 / dim) * 2.0 + 2.0;
    auto count_at = [&](double r_vox) -> int64_t {
        int32_t reach = static_cast<int32_t>(std::ceil(r_vox)) + 1;
        int64_t c = 0;
        for (int32_t x = -reach; x <= reach; ++x)
            for (int32_t y = -reach; y <= reach; ++y)
                for (int32_t z = -reach; z <= reach; ++z) {
                    double cx = x + 0.5, cy = y + 0.5, cz = z + 0.5;
                    if (cx * cx + cy * cy + cz * cz <= r_vox * r_vox) ++c;
                }
        return c;
    };
    for (int it = 0; it < 60; ++it) {
        double mid = 0.5 * (lo + hi);
        if (count_at(mid) < count)
            lo = mid;
        else
            hi = mid;
    }
    double r = hi;
    int32_t reach = static_cast<int32_t>(std::ceil(r)) + 1;
    ContinuumShape out;
    out.resolution = resolution;
    out.voxels = SiteSet(BoxSpec::centered(Site(3, 0), reach));
    for (int32_t x = -reach; x <= reach; ++x)
        for (int32_t y = -reach; y <= reach; ++y)
            for (int32_t z = -reach; z <= reach; ++z) {
                double cx = x + 0.5, cy = y + 0.5, cz = z + 0.5;
                if (cx * cx + cy * cy + cz * cz <= r * r)
                    out.voxels.set(Site{x, y, z});
            }
    return out;
}

ContinuumShape ball_from_volume(double nu, int32_t resolution, bool* flagged) {
    if (nu <= 0.0) throw std::invalid_argument("ball_from_volume: volume must be > 0");
    int dim = 3;
    double r = std::pow(nu / unit_ball_volume(dim), 1.0 / dim);
    double r_vox = r * resolution;
    int32_t reach = static_cast<int32_t>(std::ceil(r_vox)) + 1;
    ContinuumShape out;
    out.resolution = resolution;
    out.voxels = SiteSet(BoxSpec::centered(Site(3, 0), reach));
    for (int32_t x = -reach; x <= reach; ++x)
        for (int32_t y = -reach; y <= reach; ++y)
            for (int32_t z = -reach; z <= reach; ++z) {
                double cx = x + 0.5, cy = y + 0.5, cz = z + 0.5;
                if (cx * cx + cy * cy + cz * cz <= r_vox * r_vox)
                    out.voxels.set(Site{x, y, z});
            }
    if (flagged) {
        double err = std::fabs(out.volume() - nu);
        double surface = dim * unit_ball_volume(dim) * std::pow(r, dim - 1);
        *flagged = err > 2.0 * surface / resolution || err > 0.01 * nu;
    }
    return out;
}

namespace {

// linear (zero-padded) cross-correlation counts via FFT; takes the argmax
void correlation_argmax(const SiteSet& e, const SiteSet& f, int64_t& best,
                        Site& best_shift) {
    int dim = e.dim();
    if (dim != 3) throw std::invalid_argument("symdiff: implemented for d=3 voxels");
    int P[3];
    for (int i = 0; i < 3; ++i) P[i] = e.box().dims[i] + f.box().dims[i];
    int64_t total = static_cast<int64_t>(P[0]) * P[1] * P[2];
    int64_t spec_n = static_cast<int64_t>(P[2]) * P[1] * (P[0] / 2 + 1);
    std::vector<double> a(total, 0.0), b(total, 0.0);
    auto fill = [&](const SiteSet& s, std::vector<double>& arr) {
        s.for_each([&](const Site& v) {
            Site loc = v - s.box().anchor;
            arr[(static_cast<int64_t>(loc[2]) * P[1] + loc[1]) * P[0] + loc[0]] = 1.0;
        });
    };
    fill(e, a);
    fill(f, b);
    std::vector<fftw_complex> fa(spec_n), fb(spec_n);
    fftw_plan pa = fftw_plan_dft_r2c_3d(P[2], P[1], P[0], a.data(), fa.data(),
                                        FFTW_ESTIMATE);
    fftw_execute(pa);
    fftw_execute_dft_r2c(pa, b.data(), fb.data());
    fftw_destroy_plan(pa);
    for (int64_t i = 0; i < spec_n; ++i) {
        double re = fa[i][0] * fb[i][0] + fa[i][1] * fb[i][1];
        double im = fa[i][1] * fb[i][0] - fa[i][0] * fb[i][1];
        fa[i][0] = re;
        fa[i][1] = im;
    }
    fftw_plan pc = fftw_plan_dft_c2r_3d(P[2], P[1], P[0], fa.data(), a.data(),
                                        FFTW_ESTIMATE);
    fftw_execute(pc);
    fftw_destroy_plan(pc);
    double scale = 1.0 / static_cast<double>(total);
    best = -1;
    best_shift = Site{0, 0, 0};
    for (int rz = 0; rz < P[2]; ++rz)
        for (int ry = 0; ry < P[1]; ++ry)
            for (int rx = 0; rx < P[0]; ++rx) {
                int64_t i = (static_cast<int64_t>(rz) * P[1] + ry) * P[0] + rx;
                int64_t c = static_cast<int64_t>(std::llround(a[i] * scale));
                if (c > best) {
                    int mx = rx < e.box().dims[0] ? rx : rx - P[0];
                    int my = ry < e.box().dims[1] ? ry : ry - P[1];
                    int mz = rz < e.box().dims[2] ? rz : rz - P[2];
                    best = c;
                    // r = e_loc - f_loc; global shift of F is r + (Ea - Fa)
                    best_shift = Site{mx + e.box().anchor[0] - f.box().anchor[0],
                                      my + e.box().anchor[1] - f.box().anchor[1],
                                      mz + e.box().anchor[2] - f.box().anchor[2]};
                }
            }
}

int64_t overlap_at(const SiteSet& e, const SiteSet& f, const Site& z) {
    int64_t c = 0;
    e.for_each([&](const Site& s) {
        if (f.test(s - z)) ++c;
    });
    return c;
}

}  // namespace

SymdiffResult symdiff_min_translate(const ContinuumShape& e, const ContinuumShape& f) {
    if (e.resolution != f.resolution)
        throw std::invalid_argument("symdiff: shapes must share a resolution");
    SymdiffResult res;
    if (e.voxels.empty() || f.voxels.empty()) {
        res.value = e.volume() + f.volume();
        res.shift = Site(e.dim(), 0);
        return res;
    }
    int64_t best;
    Site shift;
    correlation_argmax(e.voxels, f.voxels, best, shift);
    // the overlap interpolates multilinearly between integer shifts, so a
    // fractional sweep around the argmax cannot improve it; verify locally
    for (int k = 0; k < e.dim(); ++k)
        for (int32_t d = -1; d <= 1; d += 2) {
            int64_t o = overlap_at(e.voxels, f.voxels, shift.shifted(k, d));
            if (o > best) {
                best = o;
                shift = shift.shifted(k, d);
            }
        }
    res.overlap = best;
    res.shift = shift;
    double volfac = std::pow(static_cast<double>(e.resolution), e.dim());
    res.value = (static_cast<double>(e.voxels.count() + f.voxels.count()) -
                 2.0 * static_cast<double>(best)) / volfac;
    return res;
}

double symdiff_at(const ContinuumShape& e, const ContinuumShape& f, const Site& z) {
    if (e.resolution != f.resolution)
        throw std::invalid_argument("symdiff_at: shapes must share a resolution");
    int64_t o = overlap_at(e.voxels, f.voxels, z);
    double volfac = std::pow(static_cast<double>(e.resolution), e.dim());
    return (static_cast<double>(e.voxels.count() + f.voxels.count()) - 2.0 * o) / volfac;
}

FraenkelResult fraenkel(const ContinuumShape& e) {
    if (e.voxels.empty()) throw std::invalid_argument("fraenkel: empty shape");
    ContinuumShape ball = ball_with_count(e.voxels.count(), e.resolution);
    SymdiffResult sd = symdiff_min_translate(e, ball);
    FraenkelResult out;
    out.lambda = sd.value / e.volume();
    out.shift = sd.shift;
    out.ball_volume_gap =
        std::fabs(static_cast<double>(ball.voxels.count() - e.voxels.count())) /
        std::pow(static_cast<double>(e.resolution), e.dim());
    if (out.lambda < 0.0) out.lambda = 0.0;
    return out;
}

namespace {

SiteSet blow_up(const ContinuumShape& e, int32_t m) {
    // site x belongs to the blow-up when x/m falls in a voxel of e
    const BoxSpec& vb = e.voxels.box();
    int dim = e.dim();
    BoxSpec bb;
    bb.anchor = Site(dim, 0);
    bb.dims = Site(dim, 0);
    for (int i = 0; i < dim; ++i) {
        double lo = static_cast<double>(vb.anchor[i]) / e.resolution;
        double hi = static_cast<double>(vb.anchor[i] + vb.dims[i]) / e.resolution;
        bb.anchor[i] = static_cast<int32_t>(std::floor(lo * m)) - 1;
        bb.dims[i] = static_cast<int32_t>(std::ceil(hi * m)) + 2 - bb.anchor[i];
    }
    SiteSet out(bb);
    int64_t n = bb.volume();
    for (int64_t i = 0; i < n; ++i) {
        Site x = bb.site_at(i);
        Site v(dim, 0);
        for (int k = 0; k < dim; ++k)
            v[k] = static_cast<int32_t>(
                std::floor(static_cast<double>(x[k]) * e.resolution / m));
        if (e.voxels.test(v)) out.set_index(i);
    }
    return out;
}

SiteSet recenter(const SiteSet& s, Site& offset) {
    const BoxSpec& b = s.box();
    offset = Site(b.dim(), 0);
    for (int i = 0; i < b.dim(); ++i) offset[i] = b.anchor[i] + b.dims[i] / 2;
    BoxSpec nb = b;
    nb.anchor = b.anchor - offset;
    SiteSet out(nb);
    s.for_each([&](const Site& x) { out.set(x - offset); });
    return out;
}

double discrete_capacity(const SiteSet& a, double tol) {
    Site off;
    SiteSet centered = recenter(a, off);
    int32_t rad = 0;
    centered.for_each([&](const Site& s) {
        for (int k = 0; k < s.d; ++k) rad = std::max(rad, std::abs(s[k]));
    });
    EquilibriumResult res =
        equilibrium_measure(centered, 2 * rad + 4, tol, 1.25, 1.5);
    return res.capacity.value;
}

}  // namespace

ContinuumCapacity continuum_capacity(const ContinuumShape& e, int32_t refinement,
                                     double tol) {
    if (refinement < 16) throw std::invalid_argument("continuum_capacity: refinement >= 16");
    if (e.voxels.empty()) throw std::invalid_argument("continuum_capacity: empty shape");
    int dim = e.dim();
    int32_t m1 = refinement, m2 = 2 * refinement;
    double c1 = dim * discrete_capacity(blow_up(e, m1), tol) / std::pow(m1, dim - 2.0);
    double c2 = dim * discrete_capacity(blow_up(e, m2), tol) / std::pow(m2, dim - 2.0);
    // lattice corrections are O(1/M): linear extrapolation in 1/M
    double cinf = 2.0 * c2 - c1;
    ContinuumCapacity out;
    out.coarse = c1;
    out.fine = c2;
    out.refinement = refinement;
    out.estimate.value = cinf;
    out.estimate.stderr_ = 0.5 * std::fabs(cinf - c2) + 4.0 * tol;
    out.estimate.method = "extrapolated";
    out.estimate.radii = {m1, m2};
    if (std::fabs(c1 - c2) > 0.2 * std::fabs(c2)) {
        out.estimate.flagged = true;
        out.estimate.note = "refinement extrapolation unstable";
    }
    return out;
}

ExcessReport capacity_excess(const ContinuumShape& e, int32_t refinement) {
    if (e.voxels.empty()) throw std::invalid_argument("capacity_excess: empty shape");
    int dim = e.dim();
    ContinuumCapacity cc = continuum_capacity(e, refinement);
    double vol = e.volume();
    double r_e = std::pow(vol / unit_ball_volume(dim), 1.0 / dim);
    double cap_ball = unit_ball_capacity(dim) * std::pow(r_e, dim - 2.0);
    ExcessReport rep;
    rep.cap = cc.estimate.value;
    rep.cap_ball = cap_ball;
    rep.eta = rep.cap / cap_ball - 1.0;
    rep.stderr_ = cc.estimate.stderr_ / cap_ball;
    return rep;
}

FmpReport fmp_check(const ContinuumShape& e, int32_t refinement) {
    ExcessReport ex = capacity_excess(e, refinement);
    FraenkelResult fr = fraenkel(e);
    FmpReport rep;
    rep.eta = ex.eta;
    rep.eta_err = ex.stderr_;
    rep.lambda = fr.lambda;
    // a voxelized ball carries residual asymmetry of discretization size;
    // below that the ratio is not informative
    double degenerate = 6.0 / static_cast<double>(e.resolution) *
                        std::pow(e.volume(), -1.0 / 3.0);
    rep.lambda_degenerate = fr.lambda < degenerate;
    rep.ratio = rep.lambda_degenerate ? 0.0 : rep.eta / std::pow(rep.lambda, 4);
    return rep;
}

CoercivityReport coercivity_check(const ContinuumShape& e, double nu, double mu,
                                  int32_t refinement) {
    if (e.volume() < nu) throw std::invalid_argument("coercivity_check: |E| < nu");
    int dim = e.dim();
    CoercivityReport rep;
    rep.volume = e.volume();
    rep.lambda = fraenkel(e).lambda;
    double lhs = 2.0 * (rep.volume - nu) + rep.volume * rep.lambda;
    rep.hypothesis_met = lhs >= mu;
    if (!rep.hypothesis_met) {
        rep.branch = "none";
        return rep;
    }
    rep.branch = (rep.volume - nu >= 0.25 * mu) ? "volume-excess" : "asymmetry";
    ContinuumCapacity cc = continuum_capacity(e, refinement);
    double r_nu = std::pow(nu / unit_ball_volume(dim), 1.0 / dim);
    double cap_bnu = unit_ball_capacity(dim) * std::pow(r_nu, dim - 2.0);
    rep.margin = cc.estimate.value - cap_bnu;
    rep.margin_err = cc.estimate.stderr_;
    return rep;
}

double rate_function(const RateParams& p) {
    if (p.nu <= 0.0) throw std::invalid_argument("rate_function: nu must be > 0");
    if (p.lower_bound && p.nu >= unit_ball_volume(p.dim))
        throw std::invalid_argument("rate_function: lower bound needs nu < omega_d");
    double r_nu = std::pow(p.nu / unit_ball_volume(p.dim), 1.0 / p.dim);
    double cap = unit_ball_capacity(p.dim) * std::pow(r_nu, p.dim - 2.0);
    double d = static_cast<double>(p.dim);
    switch (p.model) {
        case Model::RI: {
            double crit = p.lower_bound ? p.nonperc_level : p.perc_level;
            if (!(p.level > 0.0 && p.level <= crit))
                throw std::invalid_argument("rate_function: need 0 < u <= threshold");
            double gap = std::sqrt(crit) - std::sqrt(p.level);
            return gap * gap * cap / d;
        }
        case Model::SRW: {
            double crit = p.lower_bound ? p.nonperc_level : p.perc_level;
            if (crit <= 0.0) throw std::invalid_argument("rate_function: threshold <= 0");
            return crit * cap / d;
        }
        case Model::GFF: {
            double crit = p.lower_bound ? p.nonperc_level : p.perc_level;
            if (!(p.level < crit))
                throw std::invalid_argument("rate_function: need alpha < threshold");
            double gap = crit - p.level;
            return gap * gap * cap / (2.0 * d);
        }
    }
    throw std::logic_error("rate_function: unknown model");
}

}  // namespace holelab
