#include "grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

namespace holelab {

namespace {

inline double axis_omega(int longest) {
    double s = std::sin(M_PI / std::max(3, longest));
    return 2.0 / (1.0 + s);
}

struct Dim3 {
    int nx, ny, nz;
    int64_t plane() const { return static_cast<int64_t>(nx) * ny; }
    int64_t total() const { return plane() * nz; }
};

bool ring_fixed_3d(const GridField& g) {
    if (g.box.dim() != 3) return false;
    for (int i = 0; i < 3; ++i)
        if (g.box.dims[i] % 2 == 0 || g.box.dims[i] < 5) return false;
    Dim3 d{g.box.dims[0], g.box.dims[1], g.box.dims[2]};
    for (int z = 0; z < d.nz; ++z)
        for (int y = 0; y < d.ny; ++y)
            for (int x = 0; x < d.nx; ++x) {
                if (x > 0 && x < d.nx - 1 && y > 0 && y < d.ny - 1 && z > 0 &&
                    z < d.nz - 1)
                    continue;
                if (!g.fixed[(static_cast<int64_t>(z) * d.ny + y) * d.nx + x])
                    return false;
            }
    return true;
}

// one half-sweep of red-black relaxation, 3d fast path (full neighborhoods)
void sweep3_color(Dim3 d, double* v, const uint8_t* fixed, const double* rhs,
                  double omega, int color) {
    const int64_t sx = 1, sy = d.nx, sz = d.plane();
    const double inv6 = 1.0 / 6.0;
#pragma omp parallel for schedule(static)
    for (int z = 1; z < d.nz - 1; ++z) {
        for (int y = 1; y < d.ny - 1; ++y) {
            int64_t row = static_cast<int64_t>(z) * sz + static_cast<int64_t>(y) * sy;
            int x0 = 1 + ((z + y + 1 + color) & 1);
            for (int x = x0; x < d.nx - 1; x += 2) {
                int64_t i = row + x;
                if (fixed[i]) continue;
                double avg = (v[i - sx] + v[i + sx] + v[i - sy] + v[i + sy] +
                              v[i - sz] + v[i + sz]) * inv6;
                double f = rhs ? rhs[i] : 0.0;
                v[i] += omega * (avg + f - v[i]);
            }
        }
    }
}

double residual3(Dim3 d, const double* v, const uint8_t* fixed, const double* rhs) {
    const int64_t sx = 1, sy = d.nx, sz = d.plane();
    const double inv6 = 1.0 / 6.0;
    double worst = 0.0;
#pragma omp parallel for schedule(static) reduction(max : worst)
    for (int z = 1; z < d.nz - 1; ++z) {
        for (int y = 1; y < d.ny - 1; ++y) {
            int64_t row = static_cast<int64_t>(z) * sz + static_cast<int64_t>(y) * sy;
            for (int x = 1; x < d.nx - 1; ++x) {
                int64_t i = row + x;
                if (fixed[i]) continue;
                double avg = (v[i - sx] + v[i + sx] + v[i - sy] + v[i + sy] +
                              v[i - sz] + v[i + sz]) * inv6;
                double f = rhs ? rhs[i] : 0.0;
                worst = std::max(worst, std::fabs(avg + f - v[i]));
            }
        }
    }
    return worst;
}

// generic-dimension sweep with boundary checks (odometer over coordinates)
template <typename Update>
void for_each_cell(const BoxSpec& box, Update&& update) {
    int dim = box.dim();
    std::array<int32_t, kMaxDim> coord{};
    int64_t n = box.volume();
    std::array<int64_t, kMaxDim> stride{};
    int64_t s = 1;
    for (int i = 0; i < dim; ++i) {
        stride[i] = s;
        s *= box.dims[i];
    }
    for (int64_t i = 0; i < n; ++i) {
        update(i, coord, stride);
        for (int k = 0; k < dim; ++k) {
            if (++coord[k] < box.dims[k]) break;
            coord[k] = 0;
        }
    }
}

void sweep_generic_color(GridField& g, const std::vector<double>* rhs, double omega,
                         int color) {
    int dim = g.box.dim();
    double inv = 1.0 / (2.0 * dim);
    for_each_cell(g.box, [&](int64_t i, const std::array<int32_t, kMaxDim>& c,
                             const std::array<int64_t, kMaxDim>& stride) {
        if (g.fixed[i]) return;
        int parity = 0;
        for (int k = 0; k < dim; ++k) parity += c[k];
        if ((parity & 1) != color) return;
        double acc = 0.0;
        for (int k = 0; k < dim; ++k) {
            if (c[k] > 0) acc += g.v[i - stride[k]];
            if (c[k] + 1 < g.box.dims[k]) acc += g.v[i + stride[k]];
        }
        double f = rhs ? (*rhs)[i] : 0.0;
        g.v[i] += omega * (acc * inv + f - g.v[i]);
    });
}

double residual_generic(const GridField& g, const std::vector<double>* rhs) {
    int dim = g.box.dim();
    double inv = 1.0 / (2.0 * dim);
    double worst = 0.0;
    for_each_cell(g.box, [&](int64_t i, const std::array<int32_t, kMaxDim>& c,
                             const std::array<int64_t, kMaxDim>& stride) {
        if (g.fixed[i]) return;
        double acc = 0.0;
        for (int k = 0; k < dim; ++k) {
            if (c[k] > 0) acc += g.v[i - stride[k]];
            if (c[k] + 1 < g.box.dims[k]) acc += g.v[i + stride[k]];
        }
        double f = rhs ? (*rhs)[i] : 0.0;
        worst = std::max(worst, std::fabs(acc * inv + f - g.v[i]));
    });
    return worst;
}

// ---------------------------------------------------------------- multigrid

struct MgLevel {
    Dim3 d{};
    double* u = nullptr;
    const double* f = nullptr;
    const uint8_t* fixed = nullptr;
    std::vector<double> u_store, f_store;
    std::vector<uint8_t> fixed_store;
};

void mg_restrict(const MgLevel& fine, MgLevel& coarse) {
    const int64_t sx = 1, sy = fine.d.nx, sz = fine.d.plane();
    const double inv6 = 1.0 / 6.0;
    auto residual_at = [&](int64_t i) -> double {
        if (fine.fixed[i]) return 0.0;
        double avg = (fine.u[i - sx] + fine.u[i + sx] + fine.u[i - sy] +
                      fine.u[i + sy] + fine.u[i - sz] + fine.u[i + sz]) * inv6;
        double fv = fine.f ? fine.f[i] : 0.0;
        return avg + fv - fine.u[i];
    };
#pragma omp parallel for schedule(static)
    for (int cz = 0; cz < coarse.d.nz; ++cz) {
        for (int cy = 0; cy < coarse.d.ny; ++cy) {
            for (int cx = 0; cx < coarse.d.nx; ++cx) {
                int64_t ci = (static_cast<int64_t>(cz) * coarse.d.ny + cy) * coarse.d.nx + cx;
                if (coarse.fixed[ci]) {
                    coarse.u_store[ci] = 0.0;
                    coarse.f_store[ci] = 0.0;
                    continue;
                }
                int fx = 2 * cx, fy = 2 * cy, fz = 2 * cz;
                double acc = 0.0;
                for (int dz = -1; dz <= 1; ++dz) {
                    int z = fz + dz;
                    if (z < 0 || z >= fine.d.nz) continue;
                    for (int dy = -1; dy <= 1; ++dy) {
                        int y = fy + dy;
                        if (y < 0 || y >= fine.d.ny) continue;
                        for (int dx = -1; dx <= 1; ++dx) {
                            int x = fx + dx;
                            if (x < 0 || x >= fine.d.nx) continue;
                            double w = (dx ? 0.25 : 0.5) * (dy ? 0.25 : 0.5) *
                                       (dz ? 0.25 : 0.5);
                            int64_t i = (static_cast<int64_t>(z) * fine.d.ny + y) * fine.d.nx + x;
                            acc += w * residual_at(i);
                        }
                    }
                }
                // coarse operator corresponds to a doubled mesh step
                coarse.f_store[ci] = 4.0 * acc;
                coarse.u_store[ci] = 0.0;
            }
        }
    }
}

void mg_prolongate(MgLevel& fine, const MgLevel& coarse) {
#pragma omp parallel for schedule(static)
    for (int z = 1; z < fine.d.nz - 1; ++z) {
        for (int y = 1; y < fine.d.ny - 1; ++y) {
            for (int x = 1; x < fine.d.nx - 1; ++x) {
                int64_t i = (static_cast<int64_t>(z) * fine.d.ny + y) * fine.d.nx + x;
                if (fine.fixed[i]) continue;
                double acc = 0.0;
                int cx0 = x >> 1, cy0 = y >> 1, cz0 = z >> 1;
                for (int dz = 0; dz <= (z & 1); ++dz) {
                    if (cz0 + dz >= coarse.d.nz) continue;
                    for (int dy = 0; dy <= (y & 1); ++dy) {
                        if (cy0 + dy >= coarse.d.ny) continue;
                        for (int dx = 0; dx <= (x & 1); ++dx) {
                            if (cx0 + dx >= coarse.d.nx) continue;
                            double w = ((x & 1) ? 0.5 : 1.0) * ((y & 1) ? 0.5 : 1.0) *
                                       ((z & 1) ? 0.5 : 1.0);
                            int64_t ci = (static_cast<int64_t>(cz0 + dz) * coarse.d.ny +
                                          (cy0 + dy)) * coarse.d.nx + (cx0 + dx);
                            acc += w * coarse.u_store[ci];
                        }
                    }
                }
                fine.u[i] += acc;
            }
        }
    }
}

void mg_vcycle(std::vector<MgLevel>& levels, size_t l) {
    MgLevel& lev = levels[l];
    if (l + 1 == levels.size()) {
        for (int it = 0; it < 200; ++it) {
            sweep3_color(lev.d, lev.u, lev.fixed, lev.f, 1.0, 0);
            sweep3_color(lev.d, lev.u, lev.fixed, lev.f, 1.0, 1);
        }
        return;
    }
    for (int s = 0; s < 2; ++s) {
        sweep3_color(lev.d, lev.u, lev.fixed, lev.f, 1.0, 0);
        sweep3_color(lev.d, lev.u, lev.fixed, lev.f, 1.0, 1);
    }
    mg_restrict(lev, levels[l + 1]);
    mg_vcycle(levels, l + 1);
    mg_prolongate(lev, levels[l + 1]);
    for (int s = 0; s < 2; ++s) {
        sweep3_color(lev.d, lev.u, lev.fixed, lev.f, 1.0, 0);
        sweep3_color(lev.d, lev.u, lev.fixed, lev.f, 1.0, 1);
    }
}

std::vector<MgLevel> mg_build(GridField& g, const std::vector<double>* rhs) {
    std::vector<MgLevel> levels;
    MgLevel top;
    top.d = Dim3{g.box.dims[0], g.box.dims[1], g.box.dims[2]};
    top.u = g.v.data();
    top.f = rhs ? rhs->data() : nullptr;
    top.fixed = g.fixed.data();
    levels.push_back(std::move(top));
    while (true) {
        const MgLevel& fine = levels.back();
        if (std::min({fine.d.nx, fine.d.ny, fine.d.nz}) <= 7) break;
        MgLevel c;
        c.d = Dim3{(fine.d.nx + 1) / 2, (fine.d.ny + 1) / 2, (fine.d.nz + 1) / 2};
        int64_t n = c.d.total();
        c.u_store.assign(n, 0.0);
        c.f_store.assign(n, 0.0);
        c.fixed_store.assign(n, 0);
        for (int cz = 0; cz < c.d.nz; ++cz)
            for (int cy = 0; cy < c.d.ny; ++cy)
                for (int cx = 0; cx < c.d.nx; ++cx) {
                    int64_t ci = (static_cast<int64_t>(cz) * c.d.ny + cy) * c.d.nx + cx;
                    if (cx == 0 || cy == 0 || cz == 0 || cx == c.d.nx - 1 ||
                        cy == c.d.ny - 1 || cz == c.d.nz - 1) {
                        c.fixed_store[ci] = 1;  // zero-Dirichlet ring on every level
                        continue;
                    }
                    int64_t fi = (static_cast<int64_t>(2 * cz) * fine.d.ny + 2 * cy) *
                                     fine.d.nx + 2 * cx;
                    c.fixed_store[ci] = fine.fixed[fi];
                }
        c.u = c.u_store.data();
        c.f = c.f_store.data();
        c.fixed = c.fixed_store.data();
        levels.push_back(std::move(c));
        // re-point u/f/fixed after the vector reallocation
        for (size_t i = 1; i < levels.size(); ++i) {
            levels[i].u = levels[i].u_store.data();
            levels[i].f = levels[i].f_store.data();
            levels[i].fixed = levels[i].fixed_store.data();
        }
    }
    return levels;
}

}  // namespace

double residual_sup(const GridField& g, const std::vector<double>* rhs) {
    if (g.box.dim() == 3 && ring_fixed_3d(g)) {
        Dim3 d{g.box.dims[0], g.box.dims[1], g.box.dims[2]};
        return residual3(d, g.v.data(), g.fixed.data(), rhs ? rhs->data() : nullptr);
    }
    return residual_generic(g, rhs);
}

SolveReport solve_sor(GridField& g, const std::vector<double>* rhs, double tol,
                      int max_sweeps, double omega) {
    int longest = 0;
    for (int i = 0; i < g.box.dim(); ++i) longest = std::max(longest, g.box.dims[i]);
    if (omega <= 0.0) omega = axis_omega(longest);
    if (max_sweeps <= 0) max_sweeps = 40 * longest + 2000;
    bool fast = (g.box.dim() == 3) && ring_fixed_3d(g);
    Dim3 d{};
    if (fast) d = Dim3{g.box.dims[0], g.box.dims[1], g.box.dims[2]};
    SolveReport rep;
    rep.method = "sor";
    for (int it = 1; it <= max_sweeps; ++it) {
        if (fast) {
            sweep3_color(d, g.v.data(), g.fixed.data(), rhs ? rhs->data() : nullptr,
                         omega, 0);
            sweep3_color(d, g.v.data(), g.fixed.data(), rhs ? rhs->data() : nullptr,
                         omega, 1);
        } else {
            sweep_generic_color(g, rhs, omega, 0);
            sweep_generic_color(g, rhs, omega, 1);
        }
        rep.iterations = it;
        if (it % 10 == 0 || it == max_sweeps) {
            rep.residual = residual_sup(g, rhs);
            if (rep.residual <= tol) {
                rep.converged = true;
                return rep;
            }
        }
    }
    rep.residual = residual_sup(g, rhs);
    rep.converged = rep.residual <= tol;
    return rep;
}

SolveReport solve_dirichlet_grid(GridField& g, const std::vector<double>* rhs,
                                 double tol, int max_iter) {
    if (g.box.dim() == 3 && ring_fixed_3d(g) && g.box.dims[0] >= 17) {
        if (max_iter <= 0) max_iter = 60;
        auto levels = mg_build(g, rhs);
        SolveReport rep;
        rep.method = "multigrid";
        double prev = residual_sup(g, rhs);
        double first = prev;
        for (int cyc = 1; cyc <= max_iter; ++cyc) {
            mg_vcycle(levels, 0);
            rep.iterations = cyc;
            rep.residual = residual_sup(g, rhs);
            if (rep.residual <= tol) {
                rep.converged = true;
                return rep;
            }
            if (cyc >= 6 && rep.residual > 0.5 * first && rep.residual > 0.9 * prev)
                break;  // stalling; hand off to SOR below
            prev = rep.residual;
        }
        SolveReport tail = solve_sor(g, rhs, tol);
        tail.method = "multigrid+sor";
        tail.iterations += rep.iterations;
        return tail;
    }
    return solve_sor(g, rhs, tol, max_iter);
}

SolveReport solve_weighted_sor(GridField& g, const std::vector<double>& w, double tol,
                               int max_sweeps) {
    if (g.box.dim() != 3 || !ring_fixed_3d(g))
        throw std::invalid_argument("solve_weighted_sor: needs 3d ring-fixed grid");
    Dim3 d{g.box.dims[0], g.box.dims[1], g.box.dims[2]};
    const int64_t sx = 1, sy = d.nx, sz = d.plane();
    double omega = axis_omega(std::max({d.nx, d.ny, d.nz}));
    if (max_sweeps <= 0) max_sweeps = 40 * std::max({d.nx, d.ny, d.nz}) + 2000;
    double* v = g.v.data();
    const uint8_t* fixed = g.fixed.data();
    const double* ww = w.data();
    auto sweep = [&](int color) {
#pragma omp parallel for schedule(static)
        for (int z = 1; z < d.nz - 1; ++z)
            for (int y = 1; y < d.ny - 1; ++y) {
                int64_t row = static_cast<int64_t>(z) * sz + static_cast<int64_t>(y) * sy;
                int x0 = 1 + ((z + y + 1 + color) & 1);
                for (int x = x0; x < d.nx - 1; x += 2) {
                    int64_t i = row + x;
                    if (fixed[i]) continue;
                    double num = ww[i - sx] * v[i - sx] + ww[i + sx] * v[i + sx] +
                                 ww[i - sy] * v[i - sy] + ww[i + sy] * v[i + sy] +
                                 ww[i - sz] * v[i - sz] + ww[i + sz] * v[i + sz];
                    double den = ww[i - sx] + ww[i + sx] + ww[i - sy] + ww[i + sy] +
                                 ww[i - sz] + ww[i + sz];
                    v[i] += omega * (num / den - v[i]);
                }
            }
    };
    auto resid = [&]() {
        double worst = 0.0;
#pragma omp parallel for schedule(static) reduction(max : worst)
        for (int z = 1; z < d.nz - 1; ++z)
            for (int y = 1; y < d.ny - 1; ++y) {
                int64_t row = static_cast<int64_t>(z) * sz + static_cast<int64_t>(y) * sy;
                for (int x = 1; x < d.nx - 1; ++x) {
                    int64_t i = row + x;
                    if (fixed[i]) continue;
                    double num = ww[i - sx] * v[i - sx] + ww[i + sx] * v[i + sx] +
                                 ww[i - sy] * v[i - sy] + ww[i + sy] * v[i + sy] +
                                 ww[i - sz] * v[i - sz] + ww[i + sz] * v[i + sz];
                    double den = ww[i - sx] + ww[i + sx] + ww[i - sy] + ww[i + sy] +
                                 ww[i - sz] + ww[i + sz];
                    worst = std::max(worst, std::fabs(num / den - v[i]));
                }
            }
        return worst;
    };
    SolveReport rep;
    rep.method = "weighted-sor";
    for (int it = 1; it <= max_sweeps; ++it) {
        sweep(0);
        sweep(1);
        rep.iterations = it;
        if (it % 10 == 0 || it == max_sweeps) {
            rep.residual = resid();
            if (rep.residual <= tol) {
                rep.converged = true;
                return rep;
            }
        }
    }
    rep.residual = resid();
    rep.converged = rep.residual <= tol;
    return rep;
}

namespace {

// absorbing solve: v = 1 on A, killed outside box(0, r); returns cap at this radius
double capacity_at_radius(const SiteSet& a, int32_t r, double tol,
                          std::vector<double>* weights_out,
                          std::vector<Site>* sites_out) {
    int dim = a.dim();
    BoxSpec gb = BoxSpec::centered(Site(dim, 0), r + 1);
    GridField g(gb);
    // outer shell (|x|_inf = r+1) absorbs
    int64_t n = gb.volume();
    for (int64_t i = 0; i < n; ++i) {
        Site s = gb.site_at(i);
        int32_t m = 0;
        for (int k = 0; k < dim; ++k) m = std::max(m, std::abs(s[k]));
        if (m == r + 1) {
            g.v[i] = 0.0;
            g.fixed[i] = 1;
        }
    }
    a.for_each([&](const Site& s) { g.fix(s, 1.0); });
    SolveReport rep = solve_dirichlet_grid(g, nullptr, tol);
    if (!rep.converged)
        throw std::runtime_error("capacity_at_radius: solver did not reach tolerance (residual " +
                                 std::to_string(rep.residual) + ")");
    double cap = 0.0;
    double inv2d = 1.0 / (2.0 * dim);
    if (sites_out) sites_out->clear();
    if (weights_out) weights_out->clear();
    a.for_each([&](const Site& s) {
        double esc = 0.0;
        for (int k = 0; k < dim; ++k) {
            esc += 1.0 - g.at(s.shifted(k, 1));
            esc += 1.0 - g.at(s.shifted(k, -1));
        }
        esc *= inv2d;
        cap += esc;
        if (sites_out) sites_out->push_back(s);
        if (weights_out) weights_out->push_back(esc);
    });
    return cap;
}

double inv_extrapolate(double c1, int32_t r1, double c2, int32_t r2, int dim) {
    double t1 = std::pow(static_cast<double>(r1), 2.0 - dim);
    double t2 = std::pow(static_cast<double>(r2), 2.0 - dim);
    double y1 = 1.0 / c1, y2 = 1.0 / c2;
    double y_inf = (y1 * t2 - y2 * t1) / (t2 - t1);
    return 1.0 / y_inf;
}

}  // namespace

EquilibriumResult equilibrium_measure(const SiteSet& a, int32_t r_out, double tol,
                                      double mid_factor, double far_factor) {
    if (a.empty()) throw std::invalid_argument("equilibrium_measure: empty set");
    int dim = a.dim();
    int32_t rad = 0;
    a.for_each([&](const Site& s) {
        for (int k = 0; k < dim; ++k) rad = std::max(rad, std::abs(s[k]));
    });
    if (2 * rad > r_out)
        throw std::invalid_argument("equilibrium_measure: set exceeds box(0, r_out/2)");
    int32_t r1 = r_out;
    int32_t r2 = static_cast<int32_t>(std::lround(mid_factor * r_out));
    int32_t r3 = static_cast<int32_t>(std::lround(far_factor * r_out));
    if (!(r1 < r2 && r2 < r3))
        throw std::invalid_argument("equilibrium_measure: radii must increase");
    double c1 = capacity_at_radius(a, r1, tol, nullptr, nullptr);
    double c2 = capacity_at_radius(a, r2, tol, nullptr, nullptr);
    EquilibriumResult res;
    double c3 = capacity_at_radius(a, r3, tol, &res.weights, &res.support);
    double cap13 = inv_extrapolate(c1, r1, c3, r3, dim);
    double cap23 = inv_extrapolate(c2, r2, c3, r3, dim);
    res.capacity.value = cap13;
    res.capacity.stderr_ = std::fabs(cap13 - cap23) + tol * static_cast<double>(a.count());
    res.capacity.method = "linear_solve";
    res.capacity.radii = {r1, r2, r3};
    if (!(c1 >= c2 && c2 >= c3 && c3 > 0.0 && cap13 > 0.0)) {
        res.capacity.flagged = true;
        res.capacity.note = "non-monotone truncated capacities";
    }
    // rescale weights from the largest finite radius onto the extrapolated mass
    double scale = cap13 / c3;
    for (double& w : res.weights) w = std::max(0.0, w * scale);
    return res;
}

GridField green_field_at_radius(int dim, const Site& target, int32_t r, double tol) {
    BoxSpec gb = BoxSpec::centered(Site(dim, 0), r + 1);
    GridField g(gb);
    int64_t n = gb.volume();
    for (int64_t i = 0; i < n; ++i) {
        Site s = gb.site_at(i);
        int32_t m = 0;
        for (int k = 0; k < dim; ++k) m = std::max(m, std::abs(s[k]));
        if (m == r + 1) {
            g.v[i] = 0.0;
            g.fixed[i] = 1;
        }
    }
    std::vector<double> rhs(n, 0.0);
    rhs[gb.index(target)] = 1.0;
    SolveReport rep = solve_dirichlet_grid(g, &rhs, tol);
    if (!rep.converged)
        throw std::runtime_error("green_field_at_radius: solver did not converge");
    return g;
}

CapacityEstimate green_linear_solve(const Site& x, const Site& y, int32_t r_out,
                                    double tol) {
    int dim = x.d;
    Site w = y - x;
    int32_t sep = 0;
    for (int k = 0; k < dim; ++k) sep = std::max(sep, std::abs(w[k]));
    if (2 * sep > r_out) throw std::invalid_argument("green: separation too large for radius");
    int32_t r1 = r_out, r2 = (3 * r_out) / 2, r3 = 2 * r_out;
    auto value_at = [&](int32_t r) {
        GridField g = green_field_at_radius(dim, Site(dim, 0), r, tol);
        return g.at(w);
    };
    double g1 = value_at(r1), g2 = value_at(r2), g3 = value_at(r3);
    auto lin = [&](double a, int32_t ra, double b, int32_t rb) {
        double ta = std::pow(static_cast<double>(ra), 2.0 - dim);
        double tb = std::pow(static_cast<double>(rb), 2.0 - dim);
        return (a * tb - b * ta) / (tb - ta);
    };
    double e13 = lin(g1, r1, g3, r3), e23 = lin(g2, r2, g3, r3);
    CapacityEstimate est;
    est.value = e13;
    est.stderr_ = std::fabs(e13 - e23) + tol;
    est.method = "linear_solve";
    est.radii = {r1, r2, r3};
    return est;
}

}  // namespace holelab
