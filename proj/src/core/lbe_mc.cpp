#include "core/lbe_mc.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"
#include "core/scattering.hpp"

namespace rgkit {

double loss_rate(const VelocityDensity& g, double R, const Vec3& v) {
    return M_PI * R * R * g.expected_abs_diff(v);
}

double loss_rate_majorant(const VelocityDensity& g, double R, double speed_bound) {
    return M_PI * R * R * (speed_bound + g.mean_abs_speed());
}

JumpDraw sample_jump(StreamRng& rng, const VelocityDensity& g, double R, const Vec3& v) {
    const double vnorm = norm(v);
    const double m1 = g.mean_abs_speed();
    if (vnorm + m1 <= 0.0) throw ConfigError("sample_jump requires a positive loss rate");
    // Dominating density ~ g(v*)(|v| + |v*|): a mixture of g and its
    // speed-tilted version; accept with the ratio |v - v*|/(|v| + |v*|).
    for (long it = 0; it < 1'000'000; ++it) {
        const bool tilted = rng.uniform() * (vnorm + m1) >= vnorm;
        const Vec3 vs = tilted ? g.sample_speed_tilted(rng) : g.sample(rng);
        const double rel = norm(v - vs);
        const double bound = vnorm + norm(vs);
        if (bound <= 0.0) continue;
        if (rng.uniform() * bound <= rel) {
            JumpDraw d;
            d.v_star = vs;
            d.r = R * std::sqrt(rng.uniform());  // density 2r/R^2
            d.zeta = rng.uniform(0.0, 2.0 * M_PI);
            return d;
        }
    }
    throw NumericalError("sample_jump: rejection loop overran 1e6 proposals");
}

namespace {

// Thinned waiting time: propose exponential clocks at the majorant rate and
// accept against the true rate. Exact because nu is constant between jumps.
double thinned_waiting_time(StreamRng& rng, const VelocityDensity& g, double R, const Vec3& v,
                            double t_max) {
    const double nu = loss_rate(g, R, v);
    if (nu <= 0.0) return t_max;
    const double nu_bar = std::max(loss_rate_majorant(g, R, norm(v)), nu);
    double t = 0.0;
    for (long it = 0; it < 100'000'000; ++it) {
        t += rng.exponential(nu_bar);
        if (t >= t_max) return t_max;
        if (rng.uniform() * nu_bar <= nu) return t;
    }
    throw NumericalError("thinned_waiting_time: proposal loop overran");
}

}  // namespace

double sample_first_jump_time(StreamRng& rng, const VelocityDensity& g, double R,
                              const Vec3& v, double t_max) {
    return thinned_waiting_time(rng, g, R, v, t_max);
}

JumpWalker evolve_walker(StreamRng& rng, JumpWalker w, const LbeParams& par) {
    if (!par.p_short->cutoff)
        throw ConfigError("evolve_walker requires a truncated potential");
    const double R = *par.p_short->cutoff;
    while (w.state.t < par.horizon) {
        const double wait =
            thinned_waiting_time(rng, par.g, R, w.state.v, par.horizon - w.state.t);
        w.state.x = wrap01(w.state.x + w.state.v * wait);
        w.state.t += wait;
        if (w.state.t >= par.horizon) break;
        const JumpDraw d = sample_jump(rng, par.g, R, w.state.v);
        const Vec3 wrel = d.v_star - w.state.v;
        if (norm(wrel) <= 0.0) continue;
        const auto geom = ImpactGeometry::make(d.r, d.zeta, wrel);
        const auto outc = scatter(*par.p_short, geom, w.state.v, d.v_star, par.quad_tol,
                                  /*with_tau=*/false);
        TreeNode node;
        node.t = w.state.t;
        node.r = d.r;
        node.zeta = d.zeta;
        node.v = d.v_star;
        w.tree.nodes.push_back(node);
        w.state.v = outc.v_prime;
    }
    return w;
}

std::size_t PhaseBins::index(const Vec3& x, const Vec3& v) const {
    auto clampi = [](int k, int n) { return std::clamp(k, 0, n - 1); };
    const int ix = clampi(static_cast<int>(x.x * nx), nx);
    const int iy = clampi(static_cast<int>(x.y * nx), nx);
    const int iz = clampi(static_cast<int>(x.z * nx), nx);
    auto vbin = [&](double c) {
        return clampi(static_cast<int>((c + vmax) / (2.0 * vmax) * nv), nv);
    };
    const int jx = vbin(v.x), jy = vbin(v.y), jz = vbin(v.z);
    std::size_t idx = static_cast<std::size_t>(ix);
    idx = idx * nx + iy;
    idx = idx * nx + iz;
    idx = idx * nv + jx;
    idx = idx * nv + jy;
    idx = idx * nv + jz;
    return idx;
}

DensityEstimate estimate_density(
    const std::vector<JumpWalker>& walkers, const PhaseBins& bins,
    const std::vector<std::function<double(const Vec3&, const Vec3&)>>& tests) {
    DensityEstimate est;
    est.bin_mass.assign(bins.total(), 0.0);
    const std::size_t n = walkers.size();
    if (n == 0) return est;
    std::vector<std::vector<double>> hvals(tests.size(), std::vector<double>{});
    std::vector<double> m2;
    m2.reserve(n);
    for (const auto& w : walkers) {
        est.bin_mass[bins.index(w.state.x, w.state.v)] += 1.0 / static_cast<double>(n);
        m2.push_back(1.0 + norm2(w.state.v));
        for (std::size_t k = 0; k < tests.size(); ++k)
            hvals[k].push_back(tests[k](w.state.x, w.state.v));
    }
    const auto ms = mean_stderr(m2);
    est.second_moment = ms.mean;
    est.second_moment_stderr = ms.stderr_;
    for (std::size_t k = 0; k < tests.size(); ++k) {
        const auto s = mean_stderr(hvals[k]);
        est.weak_values.push_back(s.mean);
        est.weak_stderr.push_back(jackknife_stderr(hvals[k]));
    }
    return est;
}

}  // namespace rgkit
