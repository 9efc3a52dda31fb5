#include "core/rng.hpp"

#include <cmath>

namespace rgkit {

namespace {

// SplitMix64 finalizer (Steele, Lea, Flood 2014).
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

}  // namespace

StreamRng::StreamRng(std::uint64_t master_seed, std::uint64_t stream_id)
    : key_(mix64(master_seed ^ mix64(stream_id ^ 0xa5a5a5a5a5a5a5a5ull))) {}

std::uint64_t StreamRng::next_u64() {
    return mix64(key_ + (counter_++) * 0x9e3779b97f4a7c15ull);
}

double StreamRng::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double StreamRng::uniform(double a, double b) { return a + (b - a) * uniform(); }

double StreamRng::normal() {
    if (have_cached_normal_) {
        have_cached_normal_ = false;
        return cached_normal_;
    }
    // Box-Muller; u1 bounded away from zero so log stays finite.
    double u1 = 0.0;
    do {
        u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double mag = std::sqrt(-2.0 * std::log(u1));
    const double ang = 2.0 * M_PI * u2;
    cached_normal_ = mag * std::sin(ang);
    have_cached_normal_ = true;
    return mag * std::cos(ang);
}

double StreamRng::exponential(double rate) {
    double u = 0.0;
    do {
        u = uniform();
    } while (u <= 0.0);
    return -std::log(u) / rate;
}

Vec3 StreamRng::unit_vector() {
    const double c = uniform(-1.0, 1.0);
    const double phi = uniform(0.0, 2.0 * M_PI);
    const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
    return {s * std::cos(phi), s * std::sin(phi), c};
}

Vec3 StreamRng::ball(double radius) {
    const double u = uniform();
    return unit_vector() * (radius * std::cbrt(u));
}

Vec3 StreamRng::gaussian3(double sigma) {
    return {sigma * normal(), sigma * normal(), sigma * normal()};
}

}  // namespace rgkit
