#pragma once

#include <cstdint>

#include "core/vec.hpp"

namespace rgkit {

// Counter-based random stream. Every draw is a pure function of
// (master seed, stream id, counter), so parallel substreams derived as
// substream(master, index) are reproducible independently of scheduling.
//
// The generator finalizes key + counter * odd-constant through the SplitMix64
// mixing permutation; the key itself is derived by mixing master and stream.
class StreamRng {
  public:
    StreamRng(std::uint64_t master_seed, std::uint64_t stream_id);

    // Raw 64 random bits.
    std::uint64_t next_u64();

    // Uniform on [0,1) with 53-bit resolution.
    double uniform();
    // Uniform on [a,b).
    double uniform(double a, double b);
    // Standard normal (Box-Muller; consumes two uniforms per pair, cached).
    double normal();
    // Exponential with given rate.
    double exponential(double rate);
    // Uniform on the unit ball surface / interior.
    Vec3 unit_vector();
    Vec3 ball(double radius);
    // Isotropic Gaussian vector with component std deviation sigma.
    Vec3 gaussian3(double sigma);

    std::uint64_t counter() const { return counter_; }

  private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    bool have_cached_normal_ = false;
    double cached_normal_ = 0.0;
};

// The documented substream derivation: trajectory/walker k on master seed m
// uses StreamRng(m, domain ^ k) where domain tags the purpose.
namespace rng_domain {
constexpr std::uint64_t kBackground = 0x1000000000000000ull;
constexpr std::uint64_t kTrajectory = 0x2000000000000000ull;
constexpr std::uint64_t kWalker = 0x3000000000000000ull;
constexpr std::uint64_t kInitial = 0x4000000000000000ull;
constexpr std::uint64_t kGeneric = 0x5000000000000000ull;
}  // namespace rng_domain

}  // namespace rgkit
