#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/compare.hpp"
#include "core/densities.hpp"
#include "core/dynamics.hpp"
#include "core/lbe_mc.hpp"
#include "core/potentials.hpp"

namespace rgkit {

// Declarative run configuration, loaded from a JSON file. Every derived
// parameter is recomputable from these fields alone.
struct RunConfig {
    std::uint64_t seed = 1;
    std::vector<double> epsilon_grid{0.1, 0.05, 0.025};
    double horizon = 1.0;

    // Potential spec.
    std::string potential_kind = "stretched_exp";  // or "power_law"
    double pot_s = 4.0;
    double pot_c = 1.0;
    double pot_gamma = 1.0;
    double explicit_cutoff = 0.0;  // > 0: fixed R instead of R(eps)
    int n_background_override = 0;  // > 0: fixed N instead of round(eps^-2)

    VelocityDensity background = VelocityDensity::maxwellian(1.0);
    InitialDensity initial;

    double integrator_rtol = 1e-10;
    double integrator_atol = 1e-12;
    double quad_tol = 1e-10;
    double cb = 1.0;
    double r_exponent = 0.0;  // 0: default 1/(3+gamma)
    double force_threshold = 1e-16;

    int walkers = 2000;
    int trajectories = 200;
    int seeds = 3;
    double sample_time = 0.5;  // comparison time (t = T/2 by default config)
    double sample_dt = 0.1;    // trajectory output rate

    PhaseBins bins;

    // Scatter-sweep table (cli scatter).
    std::vector<double> scatter_r;
    std::vector<double> scatter_w{1.0};
    double scatter_R = 20.0;

    std::string output_dir = "out";
    std::string source_json;  // canonical echo of the loaded file

    static RunConfig from_json_text(const std::string& text);
    static RunConfig from_file(const std::string& path);

    // The potential without truncation.
    PotentialPtr potential() const;
    // Its truncation at R(eps) (or the explicit cutoff when set).
    PotentialPtr potential_truncated(double epsilon) const;

    SimConfig sim(double epsilon) const;
    void validate() const;
    std::string canonical_json() const;
};

}  // namespace rgkit
