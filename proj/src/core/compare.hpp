#pragma once

#include <functional>
#include <string>
#include <vector>

#include "core/densities.hpp"
#include "core/lbe_mc.hpp"
#include "core/potentials.hpp"
#include "core/stats.hpp"
#include "core/vec.hpp"

namespace rgkit {

// Smooth compactly-supported-or-decaying velocity test functions with a
// closed-form gradient bound.
struct TestFunction {
    enum class Kind { gaussian_bump, poly_cutoff, indicator };
    Kind kind = Kind::gaussian_bump;
    Vec3 center;
    double width = 1.0;   // gaussian
    int degree = 2;       // poly_cutoff
    double radius = 2.0;  // poly_cutoff / indicator half-width
    std::string id;

    double operator()(const Vec3& v) const;
    // sup |grad_v h|; indicators have none (rejected by operator_gap).
    double gradient_bound() const;

    static TestFunction gaussian(const Vec3& center, double width, std::string id);
    static TestFunction poly(int degree, double radius, std::string id);
    static TestFunction box_indicator(const Vec3& center, double half, std::string id);
};

struct WeakGap {
    std::string test_id;
    double gap = 0.0;
    double stderr_ = 0.0;
};

struct DistanceReport {
    double tv_binned = 0.0;
    BootstrapCi tv_ci;
    bool occupancy_warning = false;  // >10% of occupied bins with <5 pooled entries
    std::vector<WeakGap> weak_gaps;
    double tv_collision_count = 0.0;  // TV of the n(Phi) marginals when known
};

struct PhaseSample {
    Vec3 x, v;
    int n_collisions = 0;
};

// Binned total variation plus weak gaps between two equal-time ensembles.
DistanceReport density_distance(const std::vector<PhaseSample>& a,
                                const std::vector<PhaseSample>& b, const PhaseBins& bins,
                                const std::vector<TestFunction>& tests, std::uint64_t seed);

struct OperatorGap {
    double gap = 0.0;       // <L^R f - L f, h> estimate (signed)
    double stderr_ = 0.0;
    double lr_value = 0.0;  // <L^R f, h>
    double l_value = 0.0;   // <L f, h>
    double c1_bound = 0.0;  // C1(R) * ||grad h|| * empirical second moment
    double c2_estimate = 0.0;
    double second_moment = 0.0;
    double r_max = 0.0;     // long-range impact-parameter truncation used
};

// Monte Carlo weak forms of the collision operators under phi and phi^R on
// common samples; the r-integral is quadrature per sample, zeta is sampled.
OperatorGap operator_gap(const std::vector<Vec3>& f_velocities, const VelocityDensity& g,
                         const PotentialPtr& p_long, double R, const TestFunction& h,
                         int mc_samples, double quad_tol, std::uint64_t seed);

struct C1Breakdown {
    double kappa_term = 0.0;    // int r kappa / eta^2
    double tail_term = 0.0;     // int_{R-1-1/eta}^inf r/(1+eta^2 r^s)
    double mid_term = 0.0;      // R^{-(s-3/2)} log^{-7/2} R
    double seam_term = 0.0;     // int_0^{R-1} r/((1-r^2/R^2) R^s log^3 R)
    double ball_term = 0.0;     // log^{-3} R int r/(1+r^s)
    double g_moment = 1.0;
    double total = 0.0;
};

// All five terms of the operator-difference constant with C = 1,
// eta = 1/log R.
C1Breakdown c1_formula(double R, double s, double g_moment);
double c2_formula(double s, double g_moment);

struct DivergenceCell {
    double epsilon = 0.0;
    std::uint64_t seed = 0;
    double median_gap = 0.0;
    BootstrapCi median_ci;
    double max_gap = 0.0;
    double fraction_differing = 0.0;
    WilsonInterval differing_ci;
    double fraction_not_restricted = 0.0;
    int trajectories = 0;
};

}  // namespace rgkit
