#pragma once

#include <cstdint>

#include "rw.hpp"

namespace holelab {

enum class GffMethod { SpectralZeroBoundary, DenseFactorization };

struct GffSpec {
    BoxSpec window;
    double buffer_factor = 2.0;
    GffMethod method = GffMethod::SpectralZeroBoundary;
    double bias_tol = 0.0;  // optional: flag samples whose bias bound exceeds this
};

struct FieldSample {
    ScalarField values;   // on the buffered box
    BoxSpec window;
    uint64_t seed = 0;
    double bias_bound = 0.0;  // sup window covariance defect vs infinite volume
    bool flagged = false;
};

// Zero-boundary Gaussian field on the box: covariance is the Green function of
// the walk killed on exiting the box. Spectral method uses the sine eigenbasis
// of the discrete Dirichlet Laplacian; the dense path Cholesky-factorizes I-P.
ScalarField sample_zero_boundary(const BoxSpec& box, uint64_t seed,
                                 GffMethod method = GffMethod::SpectralZeroBoundary);

// Zero-boundary sample on the buffered box, viewed through the window.
FieldSample sample_window(const GffSpec& spec, uint64_t seed);

// Sites of the window where the field is >= alpha (+-inf sentinels accepted).
SiteSet excursion_set(const FieldSample& f, double alpha);

// Split phi = h + psi: h is the harmonic extension into U of the values
// outside U (h = phi off U), psi = phi - h vanishes off U exactly.
std::pair<ScalarField, ScalarField> markov_decompose(const FieldSample& f,
                                                     const SiteSet& u, double tol = 1e-10);

// Cameron-Martin shift: sample_window(spec, seed) + f.
FieldSample tilt_sample(const GffSpec& spec, const ScalarField& f, uint64_t seed);

// Buffered box used by sample_window for a given spec.
BoxSpec buffered_box(const GffSpec& spec);

// Far-field bound on the covariance defect of the zero-boundary field at
// distance `dist` from the absorbing boundary.
double killed_cov_bias_bound(int dim, int32_t dist);

}  // namespace holelab
