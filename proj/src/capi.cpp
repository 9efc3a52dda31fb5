#include "rgkit.h"

#include <cstring>
#include <string>

#include "core/campaign.hpp"
#include "core/compare.hpp"
#include "core/errors.hpp"
#include "core/potentials.hpp"
#include "core/scattering.hpp"

using namespace rgkit;

struct rg_potential {
    PotentialPtr p;
};

namespace {

thread_local std::string g_last_error;

rg_status fail(rg_status code, const char* what) {
    g_last_error = what;
    return code;
}

template <typename F>
rg_status guarded(F&& fn) {
    try {
        fn();
        return RG_OK;
    } catch (const ConfigError& e) {
        return fail(RG_ERR_CONFIG, e.what());
    } catch (const std::exception& e) {
        return fail(RG_ERR_NUMERICAL, e.what());
    }
}

}  // namespace

extern "C" {

const char* rg_last_error(void) { return g_last_error.c_str(); }

const char* rg_version(void) { return "rgkit 1.0.0"; }

rg_status rg_potential_power_law(double s, rg_potential** out) {
    return guarded([&] { *out = new rg_potential{make_power_law(s)}; });
}

rg_status rg_potential_stretched_exp(double c, double gamma, rg_potential** out) {
    return guarded([&] { *out = new rg_potential{make_stretched_exponential(c, gamma)}; });
}

rg_status rg_potential_truncate(const rg_potential* p, double R, rg_potential** out) {
    if (!p) return fail(RG_ERR_CONFIG, "null potential handle");
    return guarded([&] { *out = new rg_potential{truncate(p->p, R)}; });
}

void rg_potential_free(rg_potential* p) { delete p; }

rg_status rg_potential_eval(const rg_potential* p, double rho, double* psi, double* dpsi) {
    if (!p) return fail(RG_ERR_CONFIG, "null potential handle");
    return guarded([&] {
        if (psi) *psi = p->p->psi(rho);
        if (dpsi) *dpsi = p->p->dpsi(rho);
    });
}

rg_status rg_potential_validate(const rg_potential* p, int* all_pass, char* report,
                                size_t cap) {
    if (!p) return fail(RG_ERR_CONFIG, "null potential handle");
    return guarded([&] {
        const auto rep = validate_admissibility(*p->p, GridSpec{});
        if (all_pass) *all_pass = rep.all_pass() ? 1 : 0;
        if (report && cap > 0) {
            const std::string text = rep.summary();
            std::strncpy(report, text.c_str(), cap - 1);
            report[cap - 1] = '\0';
        }
    });
}

rg_status rg_closest_approach(const rg_potential* p, double r, double speed,
                              double* rho_star) {
    if (!p) return fail(RG_ERR_CONFIG, "null potential handle");
    return guarded([&] { *rho_star = closest_approach(*p->p, r, speed); });
}

rg_status rg_deviation_angle(const rg_potential* p, double r, double speed, double tol,
                             double* theta) {
    if (!p) return fail(RG_ERR_CONFIG, "null potential handle");
    return guarded([&] { *theta = deviation_angle(*p->p, r, speed, tol); });
}

rg_status rg_scattering_time(const rg_potential* p, double r, double speed, double tol,
                             double* tau_star) {
    if (!p) return fail(RG_ERR_CONFIG, "null potential handle");
    return guarded([&] { *tau_star = scattering_time(*p->p, r, speed, tol); });
}

rg_status rg_angle_gap(const rg_potential* p_long, double R, double r, double speed,
                       double tol, double* theta, double* theta_R, double* gap) {
    if (!p_long) return fail(RG_ERR_CONFIG, "null potential handle");
    return guarded([&] {
        const auto g = angle_gap(p_long->p, R, r, speed, tol);
        if (theta) *theta = g.theta;
        if (theta_R) *theta_R = g.theta_R;
        if (gap) *gap = g.gap;
    });
}

rg_status rg_kappa(double r, double R, double s, double* value) {
    return guarded([&] { *value = kappa(r, R, s); });
}

rg_status rg_scatter(const rg_potential* p, double r, double zeta, const double v[3],
                     const double v_star[3], double tol, double v_prime[3],
                     double v_star_prime[3], double* theta, double nu[3]) {
    if (!p) return fail(RG_ERR_CONFIG, "null potential handle");
    return guarded([&] {
        const Vec3 vv{v[0], v[1], v[2]};
        const Vec3 vs{v_star[0], v_star[1], v_star[2]};
        const auto geom = ImpactGeometry::make(r, zeta, vs - vv);
        const auto out = scatter(*p->p, geom, vv, vs, tol);
        if (v_prime) {
            v_prime[0] = out.v_prime.x;
            v_prime[1] = out.v_prime.y;
            v_prime[2] = out.v_prime.z;
        }
        if (v_star_prime) {
            v_star_prime[0] = out.v_star_prime.x;
            v_star_prime[1] = out.v_star_prime.y;
            v_star_prime[2] = out.v_star_prime.z;
        }
        if (theta) *theta = out.theta;
        if (nu) {
            nu[0] = out.nu.x;
            nu[1] = out.nu.y;
            nu[2] = out.nu.z;
        }
    });
}

rg_status rg_c1_formula(double R, double s, double g_moment, double* total) {
    return guarded([&] { *total = c1_formula(R, s, g_moment).total; });
}

rg_status rg_run(const char* subcommand, const char* config_path, const char* output_dir) {
    if (!subcommand || !config_path) return fail(RG_ERR_CONFIG, "null argument");
    const int code = run_subcommand(subcommand, config_path, output_dir ? output_dir : "");
    if (code == 0) return RG_OK;
    if (code == 1) return fail(RG_ERR_CONFIG, "run failed with config error");
    if (code == 3) return fail(RG_ERR_VALIDATION, "validation thresholds violated");
    return fail(RG_ERR_NUMERICAL, "run failed with numerical error");
}

}  // extern "C"
