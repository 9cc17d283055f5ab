#include "gff.hpp"

#include <fftw3.h>

#include <cmath>
#include <stdexcept>

namespace holelab {

namespace {

// Cholesky factor of I - P on the box (killed walk), lower triangular,
// row-major n x n. Dense path kept for cross-validation on small boxes.
std::vector<double> cholesky_killed(const BoxSpec& box) {
    int64_t n = box.volume();
    if (n > 2000)
        throw std::invalid_argument("dense factorization limited to small boxes");
    int dim = box.dim();
    std::vector<double> a(n * n, 0.0);
    for (int64_t i = 0; i < n; ++i) {
        a[i * n + i] = 1.0;
        Site s = box.site_at(i);
        for (int k = 0; k < dim; ++k)
            for (int32_t d = -1; d <= 1; d += 2) {
                Site t = s.shifted(k, d);
                if (!box.contains(t)) continue;
                a[i * n + box.index(t)] = -1.0 / (2.0 * dim);
            }
    }
    for (int64_t j = 0; j < n; ++j) {
        double diag = a[j * n + j];
        for (int64_t k = 0; k < j; ++k) diag -= a[j * n + k] * a[j * n + k];
        if (diag <= 0.0) throw std::runtime_error("cholesky: matrix not positive");
        diag = std::sqrt(diag);
        a[j * n + j] = diag;
        for (int64_t i = j + 1; i < n; ++i) {
            double v = a[i * n + j];
            for (int64_t k = 0; k < j; ++k) v -= a[i * n + k] * a[j * n + k];
            a[i * n + j] = v / diag;
        }
        for (int64_t k = j + 1; k < n; ++k) a[j * n + k] = 0.0;
    }
    return a;
}

}  // namespace

ScalarField sample_zero_boundary(const BoxSpec& box, uint64_t seed, GffMethod method) {
    int dim = box.dim();
    for (int i = 0; i < dim; ++i)
        if (box.dims[i] < 2)
            throw std::invalid_argument("sample_zero_boundary: extents must be >= 2");
    SiteSet domain(box);
    int64_t n = box.volume();
    for (int64_t i = 0; i < n; ++i) domain.set_index(i);
    ScalarField out(domain);
    Rng rng(seed);

    if (method == GffMethod::DenseFactorization) {
        std::vector<double> l = cholesky_killed(box);
        std::vector<double> xi(n);
        for (int64_t i = 0; i < n; ++i) xi[i] = rng.next_gauss();
        // solve L^T phi = xi
        for (int64_t i = n - 1; i >= 0; --i) {
            double v = xi[i];
            for (int64_t k = i + 1; k < n; ++k) v -= l[k * n + i] * out.values[k];
            out.values[i] = v / l[i * n + i];
        }
        return out;
    }

    // spectral: coefficients xi_k / sqrt(1 - lambda_k) on orthonormal sine modes
    std::vector<double> coef(n);
    for (int64_t i = 0; i < n; ++i) {
        Site k = box.site_at(i);  // reused as the mode multi-index
        double lambda = 0.0;
        for (int a = 0; a < dim; ++a) {
            int32_t kk = k[a] - box.anchor[a] + 1;  // 1..m
            lambda += std::cos(M_PI * kk / (box.dims[a] + 1.0));
        }
        lambda /= dim;
        double scale = 1.0 / std::sqrt(1.0 - lambda);
        for (int a = 0; a < dim; ++a) scale /= std::sqrt(2.0 * (box.dims[a] + 1.0));
        coef[i] = rng.next_gauss() * scale;
    }
    // FFTW is row-major: extents go slowest-first (our axis 0 is fastest)
    std::vector<int> extents(dim);
    for (int a = 0; a < dim; ++a) extents[a] = box.dims[dim - 1 - a];
    std::vector<fftw_r2r_kind> kinds(dim, FFTW_RODFT00);
    fftw_plan plan = fftw_plan_r2r(dim, extents.data(), coef.data(), out.values.data(),
                                   kinds.data(), FFTW_ESTIMATE);
    if (!plan) throw std::runtime_error("fftw plan creation failed");
    fftw_execute(plan);
    fftw_destroy_plan(plan);
    return out;
}

double killed_cov_bias_bound(int dim, int32_t dist) {
    if (dist < 1) return INFINITY;
    double cd = 0.5 * dim * std::tgamma(0.5 * dim - 1.0) / std::pow(M_PI, 0.5 * dim);
    return 1.3 * cd / std::pow(static_cast<double>(dist), dim - 2.0);
}

BoxSpec buffered_box(const GffSpec& spec) {
    if (spec.buffer_factor < 1.0)
        throw std::invalid_argument("buffer_factor must be >= 1");
    BoxSpec b = spec.window;
    for (int i = 0; i < b.dim(); ++i) {
        int32_t pad = static_cast<int32_t>(
            std::ceil(0.5 * (spec.buffer_factor - 1.0) * spec.window.dims[i]));
        b.anchor[i] -= pad;
        b.dims[i] += 2 * pad;
    }
    return b;
}

FieldSample sample_window(const GffSpec& spec, uint64_t seed) {
    BoxSpec buf = buffered_box(spec);
    FieldSample out;
    out.values = sample_zero_boundary(buf, seed, spec.method);
    out.window = spec.window;
    out.seed = seed;
    int32_t dist = INT32_MAX;
    for (int i = 0; i < buf.dim(); ++i) {
        dist = std::min(dist, spec.window.anchor[i] - buf.anchor[i] + 1);
        dist = std::min(dist, (buf.anchor[i] + buf.dims[i]) -
                                  (spec.window.anchor[i] + spec.window.dims[i]) + 1);
    }
    out.bias_bound = killed_cov_bias_bound(buf.dim(), dist);
    if (spec.bias_tol > 0.0 && out.bias_bound > spec.bias_tol) out.flagged = true;
    return out;
}

SiteSet excursion_set(const FieldSample& f, double alpha) {
    SiteSet out(f.window);
    int64_t n = f.window.volume();
    for (int64_t i = 0; i < n; ++i) {
        Site s = f.window.site_at(i);
        if (f.values.at(s) >= alpha) out.set_index(i);
    }
    return out;
}

std::pair<ScalarField, ScalarField> markov_decompose(const FieldSample& f,
                                                     const SiteSet& u, double tol) {
    const BoxSpec& buf = f.values.domain.box();
    for (int i = 0; i < buf.dim(); ++i) {
        if (u.box().anchor[i] <= buf.anchor[i] ||
            u.box().anchor[i] + u.box().dims[i] >= buf.anchor[i] + buf.dims[i])
            throw std::invalid_argument("markov_decompose: U must sit strictly inside the box");
    }
    BoxSpec bnd_box = u.box();
    for (int i = 0; i < buf.dim(); ++i) {
        bnd_box.anchor[i] -= 1;
        bnd_box.dims[i] += 2;
    }
    SiteSet bnd_sites(bnd_box);
    u.for_each([&](const Site& s) {
        for (int k = 0; k < buf.dim(); ++k)
            for (int32_t d = -1; d <= 1; d += 2) {
                Site nb = s.shifted(k, d);
                if (!u.test(nb)) bnd_sites.set(nb);
            }
    });
    ScalarField bnd(bnd_sites);
    bnd_sites.for_each([&](const Site& s) { bnd.set(s, f.values.at(s)); });
    ScalarField inner = dirichlet_solve(u, bnd, tol);

    ScalarField h(f.values.domain), psi(f.values.domain);
    int64_t n = buf.volume();
    for (int64_t i = 0; i < n; ++i) {
        Site s = buf.site_at(i);
        if (u.test(s)) {
            // psi is the single-rounding complement: phi reconstructs from
            // h + psi up to one ulp of the larger term (exact when |h|<=|phi|)
            double phi = f.values.values[i];
            double hv = inner.at(s);
            double pv = phi - hv;
            h.values[i] = hv;
            psi.values[i] = pv;
        } else {
            h.values[i] = f.values.values[i];
            psi.values[i] = 0.0;
        }
    }
    return {std::move(h), std::move(psi)};
}

FieldSample tilt_sample(const GffSpec& spec, const ScalarField& f, uint64_t seed) {
    BoxSpec buf = buffered_box(spec);
    bool inside = true;
    f.domain.for_each([&](const Site& s) {
        if (f.at(s) != 0.0 && !buf.contains(s)) inside = false;
    });
    if (!inside)
        throw std::invalid_argument("tilt_sample: profile support leaves the sampled box");
    FieldSample out = sample_window(spec, seed);
    f.domain.for_each([&](const Site& s) {
        if (!buf.contains(s)) return;
        out.values.values[buf.index(s)] += f.at(s);
    });
    return out;
}

}  // namespace holelab
