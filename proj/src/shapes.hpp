#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "grid.hpp"
#include "lattice.hpp"

namespace holelab {

// Union of half-open voxels [v/res, (v+1)/res)^d; volumes are exact integer
// multiples of res^-d.
struct ContinuumShape {
    int32_t resolution = 1;
    SiteSet voxels;

    int dim() const { return voxels.dim(); }
    double volume() const {
        return static_cast<double>(voxels.count()) /
               std::pow(static_cast<double>(resolution), voxels.dim());
    }
};

double unit_ball_volume(int dim);      // omega_d
double unit_ball_capacity(int dim);    // kappa_d under the Port-Stone normalization

// R^d-filling of W/n: cubes of side 2/n centered at the rescaled sites,
// realized as 2^d voxels per site at resolution n.
ContinuumShape filling(const SiteSet& w, int32_t n);

// Solid filling of a site set at resolution n (one voxel per site).
ContinuumShape solid_filling(const SiteSet& w, int32_t n);

// Voxelized closed Euclidean ball with volume nu centered at the origin.
ContinuumShape ball_from_volume(double nu, int32_t resolution, bool* flagged = nullptr);

// Voxelized ball with a prescribed voxel count (used to match volumes exactly).
ContinuumShape ball_with_count(int64_t count, int32_t resolution);

struct SymdiffResult {
    double value = 0.0;       // min over translates of |E symdiff (F+z)|
    Site shift;               // minimizing integer voxel shift of F
    int64_t overlap = 0;      // voxel overlap at the optimum
};

// Exact minimum over all real translates; the overlap functional is
// multilinear between integer shifts, so the integer optimum is global.
SymdiffResult symdiff_min_translate(const ContinuumShape& e, const ContinuumShape& f);

// |E symdiff (F+z)| at one integer shift.
double symdiff_at(const ContinuumShape& e, const ContinuumShape& f, const Site& z);

struct FraenkelResult {
    double lambda = 0.0;
    Site shift;
    double ball_volume_gap = 0.0;  // voxelization mismatch of the comparison ball
};

FraenkelResult fraenkel(const ContinuumShape& e);

struct ContinuumCapacity {
    CapacityEstimate estimate;
    double coarse = 0.0, fine = 0.0;  // values at refinement M and 2M
    int32_t refinement = 0;
};

// Brownian capacity via the discrete blow-up scaling cap ~ d cap_Z(ME)/M^(d-2),
// extrapolated over refinements M and 2M.
ContinuumCapacity continuum_capacity(const ContinuumShape& e, int32_t refinement,
                                     double tol = 1e-8);

struct ExcessReport {
    double eta = 0.0;
    double stderr_ = 0.0;
    double cap = 0.0, cap_ball = 0.0;
};

ExcessReport capacity_excess(const ContinuumShape& e, int32_t refinement = 24);

struct FmpReport {
    double eta = 0.0, eta_err = 0.0;
    double lambda = 0.0;
    double ratio = 0.0;         // eta / lambda^4 (meaningful when lambda > 0)
    bool lambda_degenerate = false;
};

FmpReport fmp_check(const ContinuumShape& e, int32_t refinement = 24);

struct CoercivityReport {
    bool hypothesis_met = false;
    std::string branch;         // "volume-excess" | "asymmetry" | "none"
    double margin = 0.0;        // cap(E) - cap(B_nu)
    double margin_err = 0.0;
    double volume = 0.0, lambda = 0.0;
};

// Realizes the capacity-coercivity check: under |E| >= nu and
// 2(|E|-nu) + |E| lambda >= mu the capacity exceeds that of B_nu.
CoercivityReport coercivity_check(const ContinuumShape& e, double nu, double mu,
                                  int32_t refinement = 24);

enum class Model { RI, SRW, GFF };

struct RateParams {
    Model model = Model::RI;
    int dim = 3;
    double level = 0.0;          // u for RI, ignored for SRW, alpha for GFF
    double nu = 1.0;
    double perc_level = 0.0;     // strongly percolative threshold (user surrogate)
    double nonperc_level = 0.0;  // strongly non-percolative threshold (user surrogate)
    bool lower_bound = false;    // lower-bound variant uses nonperc_level
};

// Closed-form decay rate in units of N^(d-2).
double rate_function(const RateParams& p);

}  // namespace holelab
