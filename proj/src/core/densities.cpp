#include "core/densities.hpp"

#include <cmath>

#include "core/errors.hpp"

namespace rgkit {

VelocityDensity VelocityDensity::maxwellian(double temperature) {
    VelocityDensity g;
    g.kind = Kind::maxwellian;
    g.temperature = temperature;
    return g;
}

VelocityDensity VelocityDensity::uniform_ball(double radius) {
    VelocityDensity g;
    g.kind = Kind::uniform_ball;
    g.radius = radius;
    return g;
}

VelocityDensity VelocityDensity::point(const Vec3& v) {
    VelocityDensity g;
    g.kind = Kind::point;
    g.v0 = v;
    return g;
}

Vec3 VelocityDensity::sample(StreamRng& rng) const {
    switch (kind) {
        case Kind::maxwellian: return rng.gaussian3(std::sqrt(temperature));
        case Kind::uniform_ball: return rng.ball(radius);
        case Kind::point: return v0;
    }
    return {};
}

Vec3 VelocityDensity::sample_speed_tilted(StreamRng& rng) const {
    switch (kind) {
        case Kind::maxwellian: {
            // Speed density ~ s^3 exp(-s^2/2T): s^2 ~ Gamma(2, 2T), i.e. the
            // sum of two exponentials.
            const double q = 2.0 * temperature * (rng.exponential(1.0) + rng.exponential(1.0));
            return rng.unit_vector() * std::sqrt(q);
        }
        case Kind::uniform_ball: {
            // Radius density ~ s^3 on [0, radius].
            return rng.unit_vector() * (radius * std::pow(rng.uniform(), 0.25));
        }
        case Kind::point:
            return v0;
    }
    return {};
}

double VelocityDensity::mean_abs_speed() const {
    switch (kind) {
        case Kind::maxwellian: return 2.0 * std::sqrt(2.0 * temperature / M_PI);
        case Kind::uniform_ball: return 0.75 * radius;
        case Kind::point: return norm(v0);
    }
    return 0.0;
}

double VelocityDensity::one_plus_second_moment() const {
    switch (kind) {
        case Kind::maxwellian: return 1.0 + 3.0 * temperature;
        case Kind::uniform_ball: return 1.0 + 0.6 * radius * radius;
        case Kind::point: return 1.0 + norm2(v0);
    }
    return 1.0;
}

namespace {

// E |d e - U| for U uniform in the ball of radius a (mean distance from a
// point at distance d to the ball).
double mean_dist_to_ball(double d, double a) {
    if (a <= 0.0) return d;
    if (d <= 0.0) return 0.75 * a;
    if (d >= a) return d + a * a / (5.0 * d);
    // Shell average: outside shell s: d + s^2/(3d); inside: s + d^2/(3s).
    const double a3 = a * a * a;
    const double d2 = d * d, d4 = d2 * d2;
    const double outer = d4 / 3.0 + d4 / 15.0;  // int_0^d s^2 (d + s^2/(3d)) ds
    const double inner = (std::pow(a, 4.0) - d4) / 4.0 + d2 * (a * a - d2) / 6.0;
    return 3.0 / a3 * (outer + inner);
}

// E |mu e - Z| for Z isotropic Gaussian with per-component sigma.
double mean_dist_gaussian(double mu, double sigma) {
    if (sigma <= 0.0) return mu;
    if (mu <= 0.0) return sigma * std::sqrt(8.0 / M_PI);
    const double a = mu / sigma;
    return sigma * (std::sqrt(2.0 / M_PI) * std::exp(-0.5 * a * a) +
                    (a + 1.0 / a) * std::erf(a / std::sqrt(2.0)));
}

}  // namespace

double VelocityDensity::expected_abs_diff(const Vec3& v) const {
    switch (kind) {
        case Kind::maxwellian: return mean_dist_gaussian(norm(v), std::sqrt(temperature));
        case Kind::uniform_ball: return mean_dist_to_ball(norm(v), radius);
        case Kind::point: return norm(v - v0);
    }
    return 0.0;
}

void VelocityDensity::validate() const {
    switch (kind) {
        case Kind::maxwellian:
            if (!(temperature > 0.0)) throw ConfigError("maxwellian temperature must be > 0");
            break;
        case Kind::uniform_ball:
            if (!(radius > 0.0)) throw ConfigError("uniform_ball radius must be > 0");
            break;
        case Kind::point:
            if (!std::isfinite(norm(v0))) throw ConfigError("point velocity must be finite");
            break;
    }
    // (1 + |v|^2) and sup (1 + |v|^5) g moments are finite in closed form for
    // every family above; nothing further to sample.
}

std::string VelocityDensity::describe() const {
    switch (kind) {
        case Kind::maxwellian: return "maxwellian(T=" + std::to_string(temperature) + ")";
        case Kind::uniform_ball: return "uniform_ball(r=" + std::to_string(radius) + ")";
        case Kind::point:
            return "point(" + std::to_string(v0.x) + "," + std::to_string(v0.y) + "," +
                   std::to_string(v0.z) + ")";
    }
    return "?";
}

Vec3 InitialDensity::sample_position(StreamRng& rng) const {
    if (!box_restricted) return {rng.uniform(), rng.uniform(), rng.uniform()};
    return {rng.uniform(box_lo.x, box_hi.x), rng.uniform(box_lo.y, box_hi.y),
            rng.uniform(box_lo.z, box_hi.z)};
}

void InitialDensity::validate() const {
    velocity.validate();
    if (box_restricted) {
        for (int i = 0; i < 3; ++i) {
            if (!(box_lo[i] >= 0.0 && box_hi[i] <= 1.0 && box_lo[i] < box_hi[i]))
                throw ConfigError("initial position box must be a nonempty subbox of [0,1)^3");
        }
    }
}

}  // namespace rgkit
