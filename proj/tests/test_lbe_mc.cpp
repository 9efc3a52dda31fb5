#include <doctest.h>

#include <cmath>

#include "core/campaign.hpp"
#include "core/config.hpp"
#include "core/lbe_mc.hpp"
#include "core/potentials.hpp"
#include "core/rng.hpp"
#include "core/stats.hpp"

using namespace rgkit;

TEST_SUITE_BEGIN("lbe_mc");

TEST_CASE("loss rate closed forms") {
    // Point mass at the origin, |v| = 2, R = 5: nu = pi 25 2 = 50 pi.
    auto g0 = VelocityDensity::point({0, 0, 0});
    CHECK(loss_rate(g0, 5.0, {2.0, 0.0, 0.0}) == doctest::Approx(50.0 * M_PI).epsilon(1e-14));
    // v = 0, point mass at (1,0,0), R = 1: nu = pi.
    auto g1 = VelocityDensity::point({1, 0, 0});
    CHECK(loss_rate(g1, 1.0, {0, 0, 0}) == doctest::Approx(M_PI).epsilon(1e-14));
}

TEST_CASE("maxwellian and ball loss rates match Monte Carlo oracles") {
    StreamRng rng(123, rng_domain::kGeneric);
    const double R = 3.0;
    for (double speed : {0.0, 0.5, 1.7, 3.2}) {
        const Vec3 v{speed, 0.0, 0.0};
        for (auto g : {VelocityDensity::maxwellian(0.8), VelocityDensity::uniform_ball(1.4)}) {
            const int n = 200000;
            std::vector<double> draws;
            draws.reserve(n);
            for (int i = 0; i < n; ++i) draws.push_back(norm(v - g.sample(rng)));
            const auto ms = mean_stderr(draws);
            const double closed = loss_rate(g, R, v) / (M_PI * R * R);
            CHECK(std::abs(closed - ms.mean) < 4.0 * ms.stderr_);
        }
    }
}

TEST_CASE("jump sampler: r^2 uniform for point-mass g (KS)") {
    StreamRng rng(321, rng_domain::kGeneric);
    auto g = VelocityDensity::point({0, 0, 0});
    const double R = 4.0;
    const Vec3 v{1.0, 0.0, 0.0};
    std::vector<double> r2;
    for (int i = 0; i < 100000; ++i) {
        const auto d = sample_jump(rng, g, R, v);
        CHECK(norm(d.v_star) == 0.0);
        r2.push_back(d.r * d.r);
    }
    auto ks = ks_test(r2, [R](double t) { return std::clamp(t / (R * R), 0.0, 1.0); });
    CHECK(ks.p_value > 0.01);
}

TEST_CASE("jump sampler: zeta uniform (chi-square over 20 bins)") {
    StreamRng rng(55, rng_domain::kGeneric);
    auto g = VelocityDensity::maxwellian(1.0);
    const int n = 100000, bins = 20;
    std::vector<double> counts(bins, 0.0);
    for (int i = 0; i < n; ++i) {
        const auto d = sample_jump(rng, g, 5.0, {0.7, -0.2, 0.1});
        const int k = std::min(bins - 1, static_cast<int>(d.zeta / (2.0 * M_PI) * bins));
        counts[k] += 1.0;
    }
    const double expected = static_cast<double>(n) / bins;
    double chi2 = 0.0;
    for (double c : counts) chi2 += (c - expected) * (c - expected) / expected;
    CHECK(gamma_q(0.5 * (bins - 1), 0.5 * chi2) > 0.01);
}

TEST_CASE("v_star marginal tilts toward |v - v_star|: acceptance -> 1 for fast v") {
    StreamRng rng(8, rng_domain::kGeneric);
    auto g = VelocityDensity::uniform_ball(0.5);
    // For |v| >> radius the tilt factor is nearly constant, so accepted
    // samples look like plain g: second moment matches the untilted value.
    std::vector<double> m2;
    for (int i = 0; i < 50000; ++i) {
        const auto d = sample_jump(rng, g, 2.0, {30.0, 0.0, 0.0});
        m2.push_back(norm2(d.v_star));
    }
    const auto ms = mean_stderr(m2);
    CHECK(std::abs(ms.mean - 0.6 * 0.5 * 0.5) < 5.0 * ms.stderr_);
}

TEST_CASE("zero relative speed: no jumps, pure free flight") {
    StreamRng rng(77, rng_domain::kWalker);
    LbeParams par;
    par.p_short = truncate(make_power_law(4.0), 5.0);
    par.g = VelocityDensity::point({0.3, 0.0, 0.0});
    par.horizon = 2.0;
    JumpWalker w;
    w.state.x = {0.1, 0.1, 0.1};
    w.state.v = {0.3, 0.0, 0.0};
    w.tree.root_x = w.state.x;
    w.tree.root_v = w.state.v;
    auto out = evolve_walker(rng, w, par);
    CHECK(out.tree.n() == 0);
    CHECK(torus_dist(out.state.x, wrap01(Vec3{0.1, 0.1, 0.1} + Vec3{0.6, 0.0, 0.0})) < 1e-12);
}

TEST_CASE("waiting times are exponential at the loss rate (KS via thinning)") {
    StreamRng rng(999, rng_domain::kGeneric);
    auto g = VelocityDensity::maxwellian(1.0);
    const double R = 2.0;
    const Vec3 v{1.2, 0.0, 0.0};
    const double nu = loss_rate(g, R, v);
    std::vector<double> times;
    for (int i = 0; i < 100000; ++i)
        times.push_back(sample_first_jump_time(rng, g, R, v, 1e30));
    auto ks = ks_test(times, [nu](double t) { return 1.0 - std::exp(-nu * t); });
    CHECK(ks.p_value > 0.01);
}

TEST_CASE("jump counts are Poisson(nu T) when the map never deflects") {
    // Truncation of the zero potential: jumps exist but theta = 0, so the
    // rate never changes along a path.
    StreamRng master(4, rng_domain::kGeneric);
    auto pz = truncate(make_zero_potential(), 6.0);
    LbeParams par;
    par.p_short = pz;
    par.g = VelocityDensity::maxwellian(0.5);
    par.horizon = 0.08;
    const Vec3 v0{1.0, 0.0, 0.0};
    const double lambda = loss_rate(par.g, 6.0, v0) * par.horizon;
    const int n = 10000;
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        StreamRng rng(4, rng_domain::kWalker ^ static_cast<std::uint64_t>(i));
        JumpWalker w;
        w.state.x = {0.5, 0.5, 0.5};
        w.state.v = v0;
        total += static_cast<double>(evolve_walker(rng, w, par).tree.n());
    }
    const double mean = total / n;
    const double se = std::sqrt(lambda / n);
    CHECK(std::abs(mean - lambda) < 3.0 * se);
}

TEST_CASE("walker count is conserved and tree marginal is bitwise consistent") {
    RunConfig rc;
    rc.seed = 31;
    rc.epsilon_grid = {0.05};
    rc.potential_kind = "power_law";
    rc.background = VelocityDensity::maxwellian(1.0);
    rc.initial.velocity = VelocityDensity::maxwellian(1.0);
    rc.horizon = 0.6;
    const auto pR = rc.potential_truncated(0.05);
    const auto walkers = build_lbe_ensemble(rc, 0.05, 0, pR, 400, rc.horizon);
    CHECK(walkers.size() == 400);
    for (const auto& w : walkers) {
        const PhaseState replayed = replay_tree(w.tree, pR, rc.horizon, rc.quad_tol);
        CHECK(replayed.v.x == w.state.v.x);  // identical code path, bitwise
        CHECK(replayed.v.y == w.state.v.y);
        CHECK(replayed.v.z == w.state.v.z);
    }
}

TEST_CASE("equilibrium fixed point: maxwellian marginal is stationary (chi-square)") {
    RunConfig rc;
    rc.seed = 6;
    rc.epsilon_grid = {0.05};
    rc.potential_kind = "power_law";
    rc.background = VelocityDensity::maxwellian(1.0);
    rc.initial.velocity = VelocityDensity::maxwellian(1.0);
    rc.horizon = 0.5;
    const auto pR = rc.potential_truncated(0.05);
    const auto w0 = build_lbe_ensemble(rc, 0.05, 0, pR, 4000, 1e-9);
    const auto wT = build_lbe_ensemble(rc, 0.05, 0, pR, 4000, rc.horizon);
    std::vector<double> s0, sT;
    for (const auto& w : w0) s0.push_back(norm(w.state.v));
    for (const auto& w : wT) sT.push_back(norm(w.state.v));
    const auto chi = chi2_two_sample(s0, sT, 20);
    CHECK(chi.p_value > 0.01);
}

TEST_CASE("free-streaming pushforward when the rate vanishes") {
    StreamRng rng(2, rng_domain::kWalker);
    LbeParams par;
    par.p_short = truncate(make_power_law(4.0), 4.0);
    par.g = VelocityDensity::point({0.25, 0.0, 0.0});
    par.horizon = 1.2;
    JumpWalker w;
    w.state.x = {0.9, 0.4, 0.7};
    w.state.v = {0.25, 0.0, 0.0};  // equal to the background: nu = 0
    auto out = evolve_walker(rng, w, par);
    CHECK(out.tree.n() == 0);
    CHECK(torus_dist(out.state.x, wrap01(w.state.x + w.state.v * par.horizon)) < 1e-12);
}

TEST_CASE("second moment stays flat in equilibrium (slope CI contains zero)") {
    RunConfig rc;
    rc.seed = 13;
    rc.epsilon_grid = {0.05};
    rc.potential_kind = "power_law";
    rc.background = VelocityDensity::maxwellian(0.8);
    rc.initial.velocity = VelocityDensity::maxwellian(0.8);
    const auto pR = rc.potential_truncated(0.05);
    std::vector<double> ts, moments;
    for (double t : {0.05, 0.15, 0.25, 0.35, 0.45}) {
        const auto walkers = build_lbe_ensemble(rc, 0.05, 0, pR, 1500, t);
        double m = 0.0;
        for (const auto& w : walkers) m += 1.0 + norm2(w.state.v);
        ts.push_back(t);
        moments.push_back(m / walkers.size());
    }
    const auto fit = fit_slope(ts, moments);
    CHECK(fit.slope_lo <= 0.0);
    CHECK(fit.slope_hi >= 0.0);
}

TEST_CASE("estimate_density recovers f0 and reports weak integrals") {
    RunConfig rc;
    rc.seed = 21;
    rc.epsilon_grid = {0.05};
    rc.potential_kind = "power_law";
    rc.background = VelocityDensity::maxwellian(1.0);
    rc.initial.velocity = VelocityDensity::maxwellian(1.0);
    const auto pR = rc.potential_truncated(0.05);
    const auto walkers = build_lbe_ensemble(rc, 0.05, 0, pR, 5000, 1e-9);
    std::vector<double> vx;
    for (const auto& w : walkers) vx.push_back(w.state.v.x);
    auto ks = ks_test(vx, [](double t) { return 0.5 * (1.0 + std::erf(t / std::sqrt(2.0))); });
    CHECK(ks.p_value > 0.01);

    PhaseBins bins;
    auto est = estimate_density(walkers, bins,
                                {[](const Vec3&, const Vec3& v) { return norm2(v); }});
    double mass = 0.0;
    for (double m : est.bin_mass) mass += m;
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(est.weak_values[0] - 3.0) < 5.0 * est.weak_stderr[0]);
}

TEST_SUITE_END();
