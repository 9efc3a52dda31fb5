#include "core/scattering.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"
#include "core/quad.hpp"

namespace rgkit {

namespace {

// F(rho) = 1 - 2 psi(rho)/|w|^2 - r^2/rho^2; strictly increasing in rho for
// repulsive psi, so the largest root is the only one.
inline double turning_fn(const RadialPotential& p, double r, double w2, double rho) {
    const double q = r / rho;  // ratio first: rho*rho may underflow
    return 1.0 - 2.0 * p.psi(rho) / w2 - q * q;
}

inline double turning_dfn(const RadialPotential& p, double r, double w2, double rho) {
    return -2.0 * p.dpsi(rho) / w2 + 2.0 * r * r / (rho * rho * rho);
}

}  // namespace

double closest_approach(const RadialPotential& p, double r, double speed) {
    if (!(speed > 0.0)) throw ConfigError("closest_approach requires |w| > 0");
    if (r < 0.0) throw ConfigError("closest_approach requires r >= 0");
    const double w2 = speed * speed;

    // Lower end of the bracket: F <= 0 there.
    double lo;
    if (r > 0.0) {
        // Vanishing potential at r: psi <= psi(r) = 0 beyond, so the largest
        // root of F is exactly r.
        if (p.psi(r) == 0.0) return r;
        lo = r;
        if (turning_fn(p, r, w2, lo) > 0.0) {
            // Round-off only; polish below from this point.
            lo = r * (1.0 - 1e-9);
        }
    } else {
        lo = 1.0;
        int guard = 0;
        while (turning_fn(p, 0.0, w2, lo) > 0.0) {
            lo *= 0.5;
            if (++guard > 2000 || lo < 1e-300) return 0.0;  // free head-on path
        }
    }

    double hi = std::max(2.0 * std::max(r, 1.0), lo * 2.0);
    const double hi_limit = 1e6 * std::max(r, 1.0);
    while (turning_fn(p, r, w2, hi) <= 0.0) {
        hi *= 2.0;
        if (hi > hi_limit)
            throw numerical_error("closest_approach: bracketing failed below rho = 1e6 max(r,1)",
                                  turning_fn(p, r, w2, hi));
    }

    // Bisect to a narrow bracket, then Newton-polish the residual.
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (turning_fn(p, r, w2, mid) <= 0.0) lo = mid; else hi = mid;
        if (hi - lo <= 1e-3 * hi) break;
    }
    double rho = hi;
    for (int it = 0; it < 60; ++it) {
        const double f = turning_fn(p, r, w2, rho);
        if (std::abs(f) < 1e-13) break;
        const double df = turning_dfn(p, r, w2, rho);
        if (!(df > 0.0)) break;
        double next = rho - f / df;
        if (next <= lo || next >= hi * 1.5) next = 0.5 * (lo + hi);
        if (turning_fn(p, r, w2, next) <= 0.0) lo = next; else hi = next;
        rho = next;
    }
    if (std::abs(turning_fn(p, r, w2, rho)) > 1e-12)
        throw numerical_error("closest_approach: residual above 1e-12",
                              std::abs(turning_fn(p, r, w2, rho)));
    return rho;
}

namespace {

void check_angle_inputs(double speed, double tol) {
    if (!(speed > 0.0)) throw ConfigError("deviation_angle requires |w| > 0");
    if (!(tol >= 1e-13 && tol <= 1e-6))
        throw ConfigError("quadrature tolerance must lie in [1e-13, 1e-6]");
}

// Inside the roundoff-dominated zone around u = 0 the direct F is noise at
// the root-residual scale (~1e-13); substitute the leading Taylor model
// F ~ F'(rho*) rho* u^2 there and only there.
inline double floor_near_root(double f, double u, double taylor_c) {
    const double model = taylor_c * u * u;
    if (model > 0.0 && model < 1e-11) return std::max(f, model);
    return std::max(f, 1e-300);
}

// Integrand of the angle integral after rho = rho*/(1-u^2):
//   r drho/(rho^2 sqrt(F))  ->  2 r u / (rho* sqrt(F(rho(u)))) du.
// F vanishes like F'(rho*) rho* u^2 at u = 0; direct evaluation there is
// dominated by the root residual, so F is floored by its Taylor model.
struct AngleIntegrand {
    const RadialPotential& p;
    double r, w2, rho_star;
    double taylor_c;  // F'(rho*) rho*, clamped nonnegative

    double F_substituted(double u) const {
        const double one_m = 1.0 - u * u;
        const double rho = rho_star / one_m;
        const double q = (r / rho_star) * one_m;
        const double f = 1.0 - 2.0 * p.psi(rho) / w2 - q * q;
        return floor_near_root(f, u, taylor_c);
    }

    double operator()(double u) const {
        return 2.0 * r * u / (rho_star * std::sqrt(F_substituted(u)));
    }
};

inline double taylor_coefficient(const RadialPotential& p, double r, double w2,
                                 double rho_star) {
    if (rho_star <= 0.0) return 0.0;
    return std::max(turning_dfn(p, r, w2, rho_star) * rho_star, 0.0);
}

}  // namespace

double deviation_angle(const RadialPotential& p, double r, double speed, double tol) {
    check_angle_inputs(speed, tol);
    if (r < 0.0) throw ConfigError("deviation_angle requires r >= 0");
    if (r == 0.0) return M_PI;  // the r factor kills the integral

    const double w2 = speed * speed;
    const double rho_star = closest_approach(p, r, speed);
    if (rho_star == 0.0) return M_PI;
    // The potential vanishes on the whole orbit: exactly free, no deflection.
    if (p.psi(rho_star) == 0.0) return 0.0;

    const AngleIntegrand f{p, r, w2, rho_star, taylor_coefficient(p, r, w2, rho_star)};

    double integral, err;
    if (p.cutoff) {
        const double R = *p.cutoff;
        if (rho_star >= R) return 0.0;  // never inside the support
        // Numeric part on [rho*, R], closed-form arcsin(r/R) beyond: the free
        // integrand integrates to arcsin(r/rho)|.
        const double uR = std::sqrt(1.0 - rho_star / R);
        const QuadResult q = integrate(f, 0.0, uR, 0.5 * tol);
        integral = q.value + std::asin(std::clamp(r / R, 0.0, 1.0));
        err = q.error;
    } else {
        const QuadResult q = integrate(f, 0.0, 1.0, 0.5 * tol);
        integral = q.value;
        err = q.error;
    }
    if (err > tol)
        throw numerical_error("deviation_angle: quadrature tolerance not met", err);

    return std::clamp(M_PI - 2.0 * integral, 0.0, M_PI);
}

double scattering_time(const RadialPotential& p, double r, double speed, double tol) {
    check_angle_inputs(speed, tol);
    if (!p.cutoff) throw ConfigError("scattering_time requires a truncated potential");
    const double R = *p.cutoff;
    if (!(r >= 0.0 && r < R)) throw ConfigError("scattering_time requires 0 <= r < R");

    const double w2 = speed * speed;
    const double rho_star = closest_approach(p, r, speed);
    if (rho_star >= R) return 0.0;

    // tau can be large at small speeds; the tolerance is relative to the
    // chord-time lower bound once that exceeds unity.
    const double scale = std::max(1.0, 2.0 * (R - rho_star) / speed);
    double value, err;
    if (rho_star > 0.0) {
        // Same substitution as the angle integral:
        //   drho/(|w| sqrt(F)) -> 2 rho* u / ((1-u^2)^2 |w| sqrt(F)) du.
        const double taylor_c = taylor_coefficient(p, r, w2, rho_star);
        auto f = [&](double u) {
            const double one_m = 1.0 - u * u;
            const double rho = rho_star / one_m;
            const double F = floor_near_root(turning_fn(p, r, w2, rho), u, taylor_c);
            return 2.0 * rho_star * u / (one_m * one_m * speed * std::sqrt(F));
        };
        const double uR = std::sqrt(1.0 - rho_star / R);
        const QuadResult q = integrate(f, 0.0, uR, 0.5 * tol * scale);
        value = q.value;
        err = q.error;
    } else {
        // Head-on through a vanishing core (zero potential): plain chord.
        auto f = [&](double rho) {
            const double F = std::max(turning_fn(p, r, w2, rho), 1e-300);
            return 1.0 / (speed * std::sqrt(F));
        };
        const QuadResult q = integrate(f, rho_star, R, 0.5 * tol * scale);
        value = q.value;
        err = q.error;
    }
    if (err > tol * scale)
        throw numerical_error("scattering_time: quadrature tolerance not met", err);
    return 2.0 * value;
}

std::pair<Vec3, Vec3> plane_basis(const Vec3& what) {
    int least = 0;
    double best = std::abs(what[0]);
    for (int i = 1; i < 3; ++i) {
        if (std::abs(what[i]) < best) {
            best = std::abs(what[i]);
            least = i;
        }
    }
    Vec3 axis{0.0, 0.0, 0.0};
    axis[least] = 1.0;
    const Vec3 b1 = normalized(axis - what * dot(axis, what));
    const Vec3 b2 = cross(what, b1);
    return {b1, b2};
}

ImpactGeometry ImpactGeometry::make(double r, double zeta, const Vec3& w) {
    if (r < 0.0) throw ConfigError("impact parameter must be >= 0");
    if (!(norm2(w) > 0.0)) throw ConfigError("relative velocity must be nonzero");
    ImpactGeometry g;
    g.r = r;
    g.zeta = zeta;
    g.w = w;
    auto [b1, b2] = plane_basis(normalized(w));
    g.b1 = b1;
    g.b2 = b2;
    return g;
}

Vec3 ImpactGeometry::e_hat() const {
    return b1 * std::cos(zeta) + b2 * std::sin(zeta);
}

std::pair<Vec3, Vec3> apply_scatter(const Vec3& v, const Vec3& v_star, const Vec3& nu) {
    const Vec3 w = v_star - v;
    const Vec3 dv = nu * dot(w, nu);
    return {v + dv, v_star - dv};
}

ScatterOutcome scatter(const RadialPotential& p, const ImpactGeometry& g, const Vec3& v,
                       const Vec3& v_star, double tol, bool with_tau) {
    const Vec3 w = v_star - v;
    const double speed = norm(w);
    if (!(speed > 0.0)) throw ConfigError("scatter requires v != v_star");

    ScatterOutcome out;
    out.theta = deviation_angle(p, g.r, speed, tol);
    out.rho_star = closest_approach(p, g.r, speed);

    const Vec3 what = w / speed;
    // Orientation: nu = sin(theta/2) what - cos(theta/2) e(zeta); with e(zeta)
    // opposite the perpendicular offset, the map reproduces the trajectory's
    // outgoing direction.
    out.nu = what * std::sin(0.5 * out.theta) - g.e_hat() * std::cos(0.5 * out.theta);
    auto [vp, vsp] = apply_scatter(v, v_star, out.nu);
    out.v_prime = vp;
    out.v_star_prime = vsp;
    if (with_tau && p.cutoff && g.r < *p.cutoff)
        out.tau_star = scattering_time(p, g.r, speed, tol);
    return out;
}

AngleGap angle_gap(const RadialPotential& p_long, const RadialPotential& p_short, double r,
                   double speed, double tol) {
    AngleGap g;
    g.theta = deviation_angle(p_long, r, speed, tol);
    g.theta_R = deviation_angle(p_short, r, speed, tol);
    g.gap = g.theta - g.theta_R;
    return g;
}

AngleGap angle_gap(const PotentialPtr& p, double R, double r, double speed, double tol) {
    return angle_gap(*p, *truncate(p, R), r, speed, tol);
}

double kappa(double r, double R, double s) {
    if (!(r >= 0.0 && r < R - 1.0)) throw ConfigError("kappa requires 0 <= r < R - 1");
    const double a = 1.0 - (r * r) / (R * R);
    const double b = 1.0 - (r * r) / ((R - 1.0) * (R - 1.0));
    return std::pow(R, -s) * (1.0 / a + r / ((R - 1.0) * std::pow(b, 1.5)));
}

}  // namespace rgkit
