#ifndef RGKIT_H
#define RGKIT_H

/* C API for the kinetic-theory toolkit: two-body scattering quantities,
 * radial potentials, and campaign drivers over JSON run configs. All handles
 * are opaque; every function returns a status code and reports details
 * through rg_last_error(). */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct rg_potential rg_potential;

typedef enum {
    RG_OK = 0,
    RG_ERR_CONFIG = 1,     /* invalid parameters or config file */
    RG_ERR_NUMERICAL = 2,  /* tolerance not met, bracketing failed, ... */
    RG_ERR_VALIDATION = 3  /* validate thresholds violated */
} rg_status;

/* Thread-local message describing the most recent failure. */
const char* rg_last_error(void);
const char* rg_version(void);

/* ---- potentials ----------------------------------------------------- */
rg_status rg_potential_power_law(double s, rg_potential** out);
rg_status rg_potential_stretched_exp(double c, double gamma, rg_potential** out);
rg_status rg_potential_truncate(const rg_potential* p, double R, rg_potential** out);
void rg_potential_free(rg_potential* p);
rg_status rg_potential_eval(const rg_potential* p, double rho, double* psi, double* dpsi);
/* Writes a human-readable admissibility report (truncated to cap bytes);
 * *all_pass is 1 when every sampled condition holds. */
rg_status rg_potential_validate(const rg_potential* p, int* all_pass, char* report,
                                size_t cap);

/* ---- two-body scattering -------------------------------------------- */
rg_status rg_closest_approach(const rg_potential* p, double r, double speed,
                              double* rho_star);
rg_status rg_deviation_angle(const rg_potential* p, double r, double speed, double tol,
                             double* theta);
rg_status rg_scattering_time(const rg_potential* p, double r, double speed, double tol,
                             double* tau_star);
rg_status rg_angle_gap(const rg_potential* p_long, double R, double r, double speed,
                       double tol, double* theta, double* theta_R, double* gap);
rg_status rg_kappa(double r, double R, double s, double* value);
/* Full scattering map for impact geometry (r, zeta) and velocities v, v_star;
 * outputs may be NULL when not wanted. */
rg_status rg_scatter(const rg_potential* p, double r, double zeta, const double v[3],
                     const double v_star[3], double tol, double v_prime[3],
                     double v_star_prime[3], double* theta, double nu[3]);

/* Operator-difference constant with C = 1, eta = 1/log R. */
rg_status rg_c1_formula(double R, double s, double g_moment, double* total);

/* ---- campaigns -------------------------------------------------------
 * subcommand: scatter | simulate-md | simulate-lbe | compare | sweep |
 * validate. output_dir may be NULL to use the config's output_dir. The
 * return value doubles as the CLI exit code contract. */
rg_status rg_run(const char* subcommand, const char* config_path, const char* output_dir);

#ifdef __cplusplus
}
#endif

#endif /* RGKIT_H */
