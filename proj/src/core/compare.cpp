#include "core/compare.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "core/errors.hpp"
#include "core/quad.hpp"
#include "core/scattering.hpp"

namespace rgkit {

TestFunction TestFunction::gaussian(const Vec3& center, double width, std::string id) {
    TestFunction h;
    h.kind = Kind::gaussian_bump;
    h.center = center;
    h.width = width;
    h.id = std::move(id);
    return h;
}

TestFunction TestFunction::poly(int degree, double radius, std::string id) {
    TestFunction h;
    h.kind = Kind::poly_cutoff;
    h.degree = degree;
    h.radius = radius;
    h.id = std::move(id);
    return h;
}

TestFunction TestFunction::box_indicator(const Vec3& center, double half, std::string id) {
    TestFunction h;
    h.kind = Kind::indicator;
    h.center = center;
    h.radius = half;
    h.id = std::move(id);
    return h;
}

double TestFunction::operator()(const Vec3& v) const {
    switch (kind) {
        case Kind::gaussian_bump: {
            const double q = norm2(v - center) / (2.0 * width * width);
            return std::exp(-q);
        }
        case Kind::poly_cutoff: {
            const double q = norm2(v) / (radius * radius);
            if (q >= 1.0) return 0.0;
            return std::pow(1.0 - q, degree);
        }
        case Kind::indicator: {
            for (int i = 0; i < 3; ++i)
                if (std::abs(v[i] - center[i]) > radius) return 0.0;
            return 1.0;
        }
    }
    return 0.0;
}

double TestFunction::gradient_bound() const {
    switch (kind) {
        case Kind::gaussian_bump:
            // max of |x| e^{-x^2/2w^2} / w^2 at |x| = w.
            return std::exp(-0.5) / width;
        case Kind::poly_cutoff: {
            // |h'| = 2 d |v| (1-q)^{d-1} / radius^2, maximized inside the ball.
            const double d = degree;
            const double q_star = 1.0 / (2.0 * d - 1.0);
            return 2.0 * d * std::sqrt(q_star) * std::pow(1.0 - q_star, d - 1.0) / radius;
        }
        case Kind::indicator:
            return 0.0;  // no finite gradient bound
    }
    return 0.0;
}

DistanceReport density_distance(const std::vector<PhaseSample>& a,
                                const std::vector<PhaseSample>& b, const PhaseBins& bins,
                                const std::vector<TestFunction>& tests, std::uint64_t seed) {
    if (a.size() < 10 || b.size() < 10)
        throw ConfigError("density_distance requires two nontrivial ensembles");
    DistanceReport rep;
    const std::size_t nb = bins.total();
    std::vector<double> pa(nb, 0.0), pb(nb, 0.0), pooled(nb, 0.0);
    for (const auto& s : a) pa[bins.index(s.x, s.v)] += 1.0 / a.size();
    for (const auto& s : b) pb[bins.index(s.x, s.v)] += 1.0 / b.size();

    double tv = 0.0;
    std::size_t occupied = 0, sparse = 0;
    for (std::size_t i = 0; i < nb; ++i) {
        tv += std::abs(pa[i] - pb[i]);
        const double pooled_count = pa[i] * a.size() + pb[i] * b.size();
        if (pooled_count > 0.0) {
            ++occupied;
            if (pooled_count < 5.0) ++sparse;
        }
    }
    rep.tv_binned = 0.5 * tv;
    rep.occupancy_warning = occupied > 0 && sparse * 10 > occupied;

    // Bootstrap over ensemble A's indices (B held fixed).
    {
        StreamRng rng(seed, rng_domain::kGeneric);
        std::vector<double> reps;
        for (int rep_i = 0; rep_i < 200; ++rep_i) {
            std::vector<double> pa2(nb, 0.0);
            for (std::size_t i = 0; i < a.size(); ++i) {
                const auto& s = a[static_cast<std::size_t>(rng.uniform() * a.size()) % a.size()];
                pa2[bins.index(s.x, s.v)] += 1.0 / a.size();
            }
            double t2 = 0.0;
            for (std::size_t i = 0; i < nb; ++i) t2 += std::abs(pa2[i] - pb[i]);
            reps.push_back(0.5 * t2);
        }
        std::sort(reps.begin(), reps.end());
        rep.tv_ci.lo = reps[static_cast<std::size_t>(0.025 * (reps.size() - 1))];
        rep.tv_ci.hi = reps[static_cast<std::size_t>(0.975 * (reps.size() - 1))];
    }

    for (const auto& h : tests) {
        std::vector<double> ha, hb;
        ha.reserve(a.size());
        hb.reserve(b.size());
        for (const auto& s : a) ha.push_back(h(s.v));
        for (const auto& s : b) hb.push_back(h(s.v));
        const auto ma = mean_stderr(ha), mb = mean_stderr(hb);
        WeakGap gap;
        gap.test_id = h.id;
        gap.gap = std::abs(ma.mean - mb.mean);
        gap.stderr_ = std::sqrt(ma.stderr_ * ma.stderr_ + mb.stderr_ * mb.stderr_);
        rep.weak_gaps.push_back(gap);
    }

    // Collision-count marginal TV.
    {
        std::map<int, double> ca, cb;
        for (const auto& s : a) ca[s.n_collisions] += 1.0 / a.size();
        for (const auto& s : b) cb[s.n_collisions] += 1.0 / b.size();
        double tvc = 0.0;
        for (const auto& [k, v] : ca) tvc += std::abs(v - (cb.count(k) ? cb[k] : 0.0));
        for (const auto& [k, v] : cb)
            if (!ca.count(k)) tvc += v;
        rep.tv_collision_count = 0.5 * tvc;
    }
    return rep;
}

namespace {

// Impulse-approximation deflection for a power-decay force: used in the far
// field where the quadrature's 1e-15 noise floor would otherwise dominate
// the (tiny) true angle. O(theta^2) accurate.
double grazing_theta(const RadialPotential& p, double r, double speed) {
    if (!(p.s > 2.0)) return 0.0;
    const double amp = 2.0 * p.s * 0.5 * std::sqrt(M_PI) *
                       std::tgamma(0.5 * (p.s + 1.0)) / std::tgamma(0.5 * (p.s + 2.0));
    return amp / (speed * speed * std::pow(r, p.s));
}

// Per-sample r-integral of (h(v'(r,zeta)) - h(v)) r dr. The core is direct
// adaptive quadrature; the far tail is compressed by r = rc/u and evaluated
// with the analytic grazing angle.
double weak_r_integral(const RadialPotential& p, const TestFunction& h, const Vec3& v,
                       const Vec3& v_star, double zeta, double r_max, double quad_tol) {
    const Vec3 w = v_star - v;
    const double speed = norm(w);
    if (speed <= 0.0) return 0.0;
    const double h_v = h(v);
    const Vec3 what = w / speed;
    const auto geom = ImpactGeometry::make(1.0, zeta, w);
    auto integrand = [&](double r) {
        double theta;
        if (p.cutoff && r >= *p.cutoff) {
            theta = 0.0;
        } else {
            const double graze = grazing_theta(p, r, speed);
            theta = (graze > 0.0 && graze < 1e-8 && r > 4.0 * std::max(p.rho2, 1.0))
                        ? graze
                        : deviation_angle(p, r, speed, quad_tol);
        }
        if (theta == 0.0) return 0.0;
        const Vec3 nu = what * std::sin(0.5 * theta) - geom.e_hat() * std::cos(0.5 * theta);
        const Vec3 vp = v + nu * dot(w, nu);
        return (h(vp) - h_v) * r;
    };
    const double tol = std::max(quad_tol, 1e-8);
    const double rc = std::min(r_max, std::max(12.0, 2.0 * std::max(p.rho2, 1.0)));
    double total = integrate(integrand, 0.0, rc, 0.5 * tol * std::max(1.0, rc), 400).value;
    if (rc < r_max) {
        auto tail = [&](double u) {
            return integrand(rc / u) * (rc / (u * u));
        };
        total += integrate(tail, rc / r_max, 1.0, 0.5 * tol, 200).value;
    }
    return total;
}

}  // namespace

OperatorGap operator_gap(const std::vector<Vec3>& f_velocities, const VelocityDensity& g,
                         const PotentialPtr& p_long, double R, const TestFunction& h,
                         int mc_samples, double quad_tol, std::uint64_t seed) {
    if (h.gradient_bound() <= 0.0)
        throw ConfigError("operator_gap requires a test function with a finite gradient bound");
    if (f_velocities.empty()) throw ConfigError("operator_gap requires a nonempty f-ensemble");

    auto p_short = truncate(p_long, R);

    // Long-range r-truncation: beyond r_max the grazing bound contributes
    // less than 1e-10 to the weak integral (|dh| <= ||grad h|| |w| theta;
    // theta ~ A / (|w|^2 r^s), so the tail is ~ ||grad h|| A r^{2-s}/(s-2)).
    const double s_exp = std::max(p_long->s, 2.5);
    const double amp = 8.0;  // conservative grazing amplitude for s ~ 4
    const double tail_target = 1e-10;
    const double r_max = std::min(
        1e6, std::max(2.0 * R,
                      std::pow(amp * h.gradient_bound() / ((s_exp - 2.0) * tail_target),
                               1.0 / (s_exp - 2.0))));

    StreamRng rng(seed, rng_domain::kGeneric);
    std::vector<double> gap_terms, lr_terms, l_terms, m2_terms;
    gap_terms.reserve(mc_samples);
    for (int i = 0; i < mc_samples; ++i) {
        const Vec3 v = f_velocities[static_cast<std::size_t>(rng.uniform() * f_velocities.size()) %
                                    f_velocities.size()];
        const Vec3 vs = g.sample(rng);
        const double zeta = rng.uniform(0.0, 2.0 * M_PI);
        const double speed = norm(vs - v);
        m2_terms.push_back(1.0 + norm2(v));
        if (speed <= 0.0) {
            gap_terms.push_back(0.0);
            lr_terms.push_back(0.0);
            l_terms.push_back(0.0);
            continue;
        }
        const double pref = 2.0 * M_PI * speed;
        const double i_short = weak_r_integral(*p_short, h, v, vs, zeta, R, quad_tol);
        const double i_long = weak_r_integral(*p_long, h, v, vs, zeta, r_max, quad_tol);
        lr_terms.push_back(pref * i_short);
        l_terms.push_back(pref * i_long);
        gap_terms.push_back(pref * (i_short - i_long));
    }
    OperatorGap out;
    const auto mg = mean_stderr(gap_terms);
    const auto ml = mean_stderr(l_terms);
    const auto mr = mean_stderr(lr_terms);
    const auto m2 = mean_stderr(m2_terms);
    out.gap = mg.mean;
    out.stderr_ = mg.stderr_;
    out.l_value = ml.mean;
    out.lr_value = mr.mean;
    out.second_moment = m2.mean;
    out.r_max = r_max;
    if (std::abs(mg.mean) > 0.0 && mg.stderr_ > 100.0 * std::abs(mg.mean) + 1.0)
        throw numerical_error("operator_gap: Monte Carlo variance overflow", mg.stderr_);
    out.c1_bound = c1_formula(R, s_exp, g.one_plus_second_moment()).total *
                   h.gradient_bound() * m2.mean;
    out.c2_estimate = std::abs(mr.mean) / (h.gradient_bound() * m2.mean);
    return out;
}

C1Breakdown c1_formula(double R, double s, double g_moment) {
    if (!(s > 2.0)) throw ConfigError("c1_formula requires s > 2");
    if (!(R > std::exp(1.0))) throw ConfigError("c1_formula requires R > e");
    C1Breakdown c;
    const double eta = 1.0 / std::log(R);
    c.g_moment = g_moment;
    const double split = R - 1.0 - 1.0 / eta;

    c.kappa_term = integrate([&](double r) { return r * kappa(r, R, s); }, 0.0,
                             std::max(split, 0.0) * (1.0 - 1e-12), 1e-12)
                       .value /
                   (eta * eta);
    // int_A^inf r/(1+eta^2 r^s): substitute r = A/u to compress the tail.
    {
        const double A = std::max(split, 1.0);
        auto f = [&](double u) {
            const double r = A / u;
            return (r / (1.0 + eta * eta * std::pow(r, s))) * (A / (u * u));
        };
        c.tail_term = integrate(f, 1e-8, 1.0, 1e-12).value;
    }
    c.mid_term = 1.0 / (std::pow(R, s - 1.5) * std::pow(std::log(R), 3.5));
    c.seam_term = integrate(
                      [&](double r) {
                          return r / ((1.0 - r * r / (R * R)) * std::pow(R, s) *
                                      std::pow(std::log(R), 3.0));
                      },
                      0.0, R - 1.0, 1e-12)
                      .value;
    {
        auto f = [&](double u) {
            const double r = (1.0 - u) / u;
            return (r / (1.0 + std::pow(r, s))) / (u * u);
        };
        c.ball_term = integrate(f, 1e-8, 1.0, 1e-12).value / std::pow(std::log(R), 3.0);
    }
    c.total = (c.kappa_term + c.tail_term + c.mid_term + c.seam_term + c.ball_term) * g_moment;
    return c;
}

double c2_formula(double s, double g_moment) {
    auto f = [&](double u) {
        const double r = (1.0 - u) / u;
        return (r / (1.0 + std::pow(r, s))) / (u * u);
    };
    return g_moment * integrate(f, 1e-8, 1.0, 1e-12).value;
}

}  // namespace rgkit
