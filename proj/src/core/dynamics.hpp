#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "core/densities.hpp"
#include "core/potentials.hpp"
#include "core/rng.hpp"
#include "core/vec.hpp"

namespace rgkit {

// Run parameters plus every derived quantity of the scaling regime. All
// derived values are pure functions of the stored fields so any report can be
// reproduced from the config alone.
struct SimConfig {
    double epsilon = 0.05;
    int n_background = 0;  // 0 => derived as round(eps^-2)
    double horizon = 1.0;
    double pot_gamma = 1.0;  // stretched-exponential exponent of the potential
    double pot_s = 4.0;      // power decay exponent
    std::uint64_t seed = 1;

    double integrator_rtol = 1e-10;
    double integrator_atol = 1e-12;
    double quad_tol = 1e-10;

    double cb = 1.0;                  // constant in b(eps), configurable
    double r_exponent = 0.0;          // 0 => 1/(3+gamma)
    double force_threshold = 1e-16;   // long-range force cutoff in MD

    int n() const;                  // round(eps^-2) unless overridden
    double r_exp() const;           // exponent alpha in R = eps^-alpha
    double R() const;               // truncation radius
    double M() const { return std::abs(std::log(epsilon)); }
    double V1() const { return 1.0 / std::abs(std::log(epsilon)); }
    double V2() const { return std::abs(std::log(epsilon)); }
    double delta() const { return std::sqrt(epsilon); }
    double b() const;               // cb * exp(-cb (1/eps)^{gamma/(3+gamma)})
    double xi() const;              // (1 - 4/3 pi R^3 eps^3)^N

    void validate() const;          // R eps < 1/4, xi in (0,1], parameter sanity
};

struct PhaseState {
    Vec3 x;  // torus position, reduced to [0,1)
    Vec3 v;
    double t = 0.0;
};

// Background initial data; positions on the torus, velocities from g.
struct Background {
    std::vector<Vec3> x0;
    std::vector<Vec3> v0;
    std::size_t size() const { return x0.size(); }
};

// i.i.d. draws; when an exclusion center is given, positions landing within
// R*eps of it are resampled (the conditioning that defines f0^{eps,R}).
Background sample_background(const SimConfig& cfg, const VelocityDensity& g,
                             const std::optional<Vec3>& exclusion, StreamRng& rng);

// One maximal interval with separation below R*eps against background j.
struct EncounterEvent {
    int bg_index = -1;
    double t_entry = 0.0;
    double t_exit = 0.0;
    double r_impact = 0.0;  // microscopic impact parameter, in [0, R]
    double zeta = 0.0;      // azimuth in the stored plane basis of w
    Vec3 v_bg_entry;        // background velocity just before the encounter
    Vec3 v_tag_entry;       // tagged velocity just before the encounter
    double min_sep = 0.0;   // macroscopic minimum separation observed
    bool overlap = false;   // another background was inside R*eps concurrently
    bool entered_at_start = false;  // already inside at t = 0
    bool clipped_at_end = false;    // still inside at t = horizon
};

struct TrajSample {
    double t = 0.0;
    Vec3 x, v;
};

// Piecewise representation of the tagged path: exact straight legs between
// encounters and dense integrator steps inside them.
struct DenseStep {
    double t0 = 0.0, t1 = 0.0;
    Vec3 x0, v0, a0, x1, v1, a1;
};
struct PathPiece {
    bool free = true;
    double t0 = 0.0, t1 = 0.0;
    Vec3 x0, v;                    // free leg
    std::vector<DenseStep> steps;  // integrated piece
};

// Straight-line legs of one background particle (a new leg starts after each
// of its own encounters with the tagged particle).
struct BgLeg {
    double t0 = 0.0;
    Vec3 x0, v;
    // Straight motion holds on [t0, valid_until]; beyond that the particle is
    // engaged with the tagged particle until its next leg begins.
    double valid_until = 1e300;
};

struct Trajectory {
    std::vector<TrajSample> samples;      // uniform-rate output
    std::vector<EncounterEvent> events;   // ordered by entry time
    std::vector<PathPiece> pieces;
    std::vector<std::vector<BgLeg>> bg_legs;
    PhaseState final_state;
    std::vector<Vec3> final_bg_x, final_bg_v;
    bool any_overlap = false;
    double force_range = 0.0;  // macroscopic activation radius used

    // Tagged position/velocity at time t (exact on free legs, cubic Hermite
    // inside encounters).
    void tagged_at(double t, Vec3& x, Vec3& v) const;
    Vec3 background_at(int j, double t) const;
};

struct RunOptions {
    double sample_dt = 0.0;  // 0: endpoints only
};

Trajectory run_trajectory(const SimConfig& cfg, const PotentialPtr& p, const Vec3& x0,
                          const Vec3& v0, const Background& bg, const RunOptions& opt = {});

// One adaptive step of the tagged particle against the full background
// (backgrounds on straight lines for the duration of the step).
PhaseState step_tagged(const PhaseState& state, const Background& bg, const RadialPotential& p,
                       double eps, double dt_max, double tol);

struct DivergenceResult {
    double sup_gap = 0.0;  // max over sample times of |dx| + |dv|
    bool matched_collisions = true;
    Trajectory long_range, short_range;
};

// Integrates the same initial data under phi and phi^R and measures the
// worst-case phase-space gap on a shared sampling grid.
DivergenceResult divergence(const SimConfig& cfg, const PotentialPtr& p_long,
                            const PotentialPtr& p_short, const Vec3& x0, const Vec3& v0,
                            const Background& bg, int grid_points = 257);

// Conserved energy of the pair dynamics: kinetic energies plus half the pair
// potential (each particle carries half the force).
double total_energy(const PotentialPtr& p, double eps, const Vec3& x_tag, const Vec3& v_tag,
                    const std::vector<Vec3>& bg_x, const std::vector<Vec3>& bg_v);

// Macroscopic activation radius: R*eps for truncated potentials, else the
// radius where the force falls below the configured threshold.
double activation_radius(const RadialPotential& p, double eps, double force_threshold);

}  // namespace rgkit
