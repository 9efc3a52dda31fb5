#pragma once

#include <vector>

#include "core/densities.hpp"
#include "core/dynamics.hpp"
#include "core/potentials.hpp"
#include "core/rng.hpp"
#include "core/stats.hpp"
#include "core/trees.hpp"

namespace rgkit {

// Loss rate nu(v) = pi R^2 E_g |v - v_star| and the thinning majorant
// nu_bar(V) = pi R^2 (V + m1(g)) >= sup_{|v|<=V} nu(v).
double loss_rate(const VelocityDensity& g, double R, const Vec3& v);
double loss_rate_majorant(const VelocityDensity& g, double R, double speed_bound);

// Draw (v_star, r, zeta) with joint density proportional to
// g(v_star) |v - v_star| r on R^3 x [0,R] x [0,2pi), by rejection against the
// majorant g(v_star)(|v|+|v_star|) r.
struct JumpDraw {
    Vec3 v_star;
    double r = 0.0;
    double zeta = 0.0;
};
JumpDraw sample_jump(StreamRng& rng, const VelocityDensity& g, double R, const Vec3& v);

struct JumpWalker {
    PhaseState state;
    MarkedTree tree;
    double weight = 1.0;
};

struct LbeParams {
    PotentialPtr p_short;  // truncated potential; its cutoff is the R used
    VelocityDensity g;
    double horizon = 1.0;
    double quad_tol = 1e-10;
};

// Free transport + thinned exponential waiting times + scattering jumps.
// Each jump appends one tree node; walkers are conservative (no branching).
JumpWalker evolve_walker(StreamRng& rng, JumpWalker w, const LbeParams& par);

// First waiting time alone (diagnostics for the thinning test).
double sample_first_jump_time(StreamRng& rng, const VelocityDensity& g, double R,
                              const Vec3& v, double t_max);

struct DensityEstimate {
    // Histogram over velocity bins inside the speed ball, plus weak integrals.
    std::vector<double> bin_mass;     // normalized to sum 1 over occupied bins
    std::vector<double> weak_values;  // <f, h> per test function
    std::vector<double> weak_stderr;
    double second_moment = 0.0;       // empirical (1 + |v|^2) mean
    double second_moment_stderr = 0.0;
};

struct PhaseBins {
    int nx = 1;       // per-axis position bins
    int nv = 6;       // per-axis velocity bins on [-vmax, vmax]
    double vmax = 3.0;
    std::size_t total() const {
        return static_cast<std::size_t>(nx) * nx * nx * nv * nv * nv;
    }
    std::size_t index(const Vec3& x, const Vec3& v) const;
};

DensityEstimate estimate_density(const std::vector<JumpWalker>& walkers, const PhaseBins& bins,
                                 const std::vector<std::function<double(const Vec3&, const Vec3&)>>& tests);

}  // namespace rgkit
