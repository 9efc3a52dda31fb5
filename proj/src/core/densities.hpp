#pragma once

#include <string>

#include "core/rng.hpp"
#include "core/vec.hpp"

namespace rgkit {

// Velocity density families for the background law g and for initial data.
// Each satisfies the finite-moment requirements checked by validate().
struct VelocityDensity {
    enum class Kind { maxwellian, uniform_ball, point };
    Kind kind = Kind::maxwellian;
    double temperature = 1.0;  // maxwellian: per-component variance
    double radius = 1.0;       // uniform_ball
    Vec3 v0;                   // point

    Vec3 sample(StreamRng& rng) const;
    // Sample from the speed-tilted density g(v) |v| / m1.
    Vec3 sample_speed_tilted(StreamRng& rng) const;

    // E |v|.
    double mean_abs_speed() const;
    // E (1 + |v|^2).
    double one_plus_second_moment() const;
    // E_g |v - v_star|, closed form per family.
    double expected_abs_diff(const Vec3& v) const;
    // Throws ConfigError if the moment conditions fail (they cannot for these
    // families with valid parameters; parameter validity is what is checked).
    void validate() const;

    std::string describe() const;

    static VelocityDensity maxwellian(double temperature);
    static VelocityDensity uniform_ball(double radius);
    static VelocityDensity point(const Vec3& v);
};

// Initial phase-space density f0 = position density x velocity density.
// Position is uniform on the torus, optionally restricted to a box.
struct InitialDensity {
    bool box_restricted = false;
    Vec3 box_lo, box_hi;
    VelocityDensity velocity;

    Vec3 sample_position(StreamRng& rng) const;
    Vec3 sample_velocity(StreamRng& rng) const { return velocity.sample(rng); }
    void validate() const;
};

}  // namespace rgkit
