#pragma once

#include <cstdint>
#include <memory>

#include "rw.hpp"

namespace holelab {

struct RiSpec {
    double u = 1.0;                  // interlacement level
    int32_t window_radius = 16;     // window = B(0, N)
    double stop_radius_factor = 3.0; // handoff sphere radius, in units of N
    double truncation_tol = 1e-3;    // drives the per-trajectory safety budget
    int32_t record_radius = 0;       // path sites kept within this radius (0 -> 3N)
    double solver_tol = 1e-9;
};

struct TrajectorySoup {
    double level = 0.0;
    int32_t window_radius = 0;
    std::vector<Site> entries;        // one per trajectory
    std::vector<WalkPath> paths;      // recorded in-region runs
    std::vector<int32_t> traj_id;     // owning trajectory per run
    SiteSet trace;                    // visited window sites
    bool flagged = false;             // a safety budget fired somewhere
};

// Window trace of random interlacements at level u: Poisson(u cap) many
// trajectories entering through the equilibrium measure, each a forward walk
// with far-field returns resampled through the exterior hitting kernel.
// The sampler precomputes the (possibly weighted) equilibrium once per window.
class RiSampler {
  public:
    explicit RiSampler(const RiSpec& spec);                          // plain
    RiSampler(const RiSpec& spec, const ScalarField& profile);       // tilted
    TrajectorySoup sample(uint64_t seed) const;
    double window_capacity() const { return capacity_; }

  private:
    RiSpec spec_;
    std::vector<Site> support_;
    std::vector<double> weights_;
    double capacity_ = 0.0;
    std::unique_ptr<AliasTable> alias_;
    std::unique_ptr<ScalarField> profile_;
    double support_radius_ = 0.0;
};

TrajectorySoup sample_interlacements(const RiSpec& spec, uint64_t seed);

// window \ trace
SiteSet vacant(const TrajectorySoup& soup);

// Trace in B(0,N) of one walk from the origin (same far-field machinery).
SiteSet srw_trace(int32_t n, double truncation_tol, uint64_t seed,
                  TrajectorySoup* soup_out = nullptr);

// Conductance-weighted variant: edge weight (u/2d) f(x) f(y), sampled as a
// level-1 soup of the weighted graph. f must be >= 1 on its domain and equal
// to 1 off a compact core.
TrajectorySoup tilted_interlacements(const RiSpec& spec, const ScalarField& f,
                                     uint64_t seed);

// Weighted capacity and equilibrium weights of the window under f.
EquilibriumResult weighted_equilibrium(const SiteSet& window, const ScalarField& f,
                                       double u, int32_t r_out, double tol);

}  // namespace holelab
