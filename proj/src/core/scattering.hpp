#pragma once

#include <optional>
#include <utility>

#include "core/potentials.hpp"
#include "core/vec.hpp"

namespace rgkit {

// Deterministic orthonormal completion of the unit vector what: Gram-Schmidt
// of the coordinate axis least aligned with what, then the cross product.
std::pair<Vec3, Vec3> plane_basis(const Vec3& what);

// Polar chart (r, zeta) of the collision plane orthogonal to w = v_star - v.
struct ImpactGeometry {
    double r = 0.0;
    double zeta = 0.0;
    Vec3 w;       // relative velocity v_star - v, nonzero
    Vec3 b1, b2;  // stored plane basis

    static ImpactGeometry make(double r, double zeta, const Vec3& w);
    // In-plane direction e(zeta) in the stored basis.
    Vec3 e_hat() const;
};

struct ScatterOutcome {
    double theta = 0.0;     // deviation angle in [0, pi]
    double rho_star = 0.0;  // closest approach
    Vec3 v_prime;
    Vec3 v_star_prime;
    Vec3 nu;                         // unit vector of the scattering map
    std::optional<double> tau_star;  // sojourn time below R (truncated only)
};

// Largest root of F(rho) = 1 - 2 psi(rho)/|w|^2 - r^2/rho^2, polished to
// |F| < 1e-12. Returns 0 when F has no root (identically free with r = 0).
double closest_approach(const RadialPotential& p, double r, double speed);

// theta(r, w) = pi - 2 * integral_{rho*}^{inf} r drho / (rho^2 sqrt(F)).
// The substitution rho = rho*/(1-u^2) removes the endpoint singularity; for
// truncated potentials the free segment beyond R is the closed-form arcsin.
double deviation_angle(const RadialPotential& p, double r, double speed, double tol);

// Sojourn time at separation < R for a truncated potential:
// 2 * integral_{rho*}^{R} drho / (|w| sqrt(F)).
double scattering_time(const RadialPotential& p, double r, double speed, double tol);

// Applies the scattering map given an explicit unit vector nu:
//   v' = v + (w . nu) nu,  v'_star = v_star - (w . nu) nu.
std::pair<Vec3, Vec3> apply_scatter(const Vec3& v, const Vec3& v_star, const Vec3& nu);

// Full binary-collision solve: deviation angle, nu = sin(theta/2) what -
// cos(theta/2) e(zeta), post velocities, closest approach, sojourn time.
// with_tau controls the (occasionally expensive) sojourn-time quadrature.
ScatterOutcome scatter(const RadialPotential& p, const ImpactGeometry& g, const Vec3& v,
                       const Vec3& v_star, double tol, bool with_tau = true);

struct AngleGap {
    double theta = 0.0;
    double theta_R = 0.0;
    double gap = 0.0;
};

// Deviation angles under phi and its truncation phi^R, and their difference.
AngleGap angle_gap(const RadialPotential& p_long, const RadialPotential& p_short, double r,
                   double speed, double tol);
AngleGap angle_gap(const PotentialPtr& p, double R, double r, double speed, double tol);

// kappa(r, R) = R^{-s} ( 1/(1 - r^2/R^2) + r / ((R-1)(1 - r^2/(R-1)^2)^{3/2}) ).
double kappa(double r, double R, double s);

}  // namespace rgkit
