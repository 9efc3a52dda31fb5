#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace rgkit {

// A radial repulsive interaction potential psi(rho) with exact derivative.
// All quantities are dimensionless; the microscopic/macroscopic conversion
// lives entirely in the dynamics layer via epsilon.
class RadialPotential {
  public:
    enum class DecayLaw { power, stretched_exp, none };

    virtual ~RadialPotential() = default;

    virtual double psi(double rho) const = 0;
    // dpsi/drho; <= 0 for repulsive potentials.
    virtual double dpsi(double rho) const = 0;

    // Admissibility / decay metadata.
    double s = 0.0;       // claimed power decay exponent
    double gamma = 0.0;   // stretched-exponential exponent (0 when unused)
    double rho1 = 0.0;    // condition dpsi + psi <= 0 holds on (0, rho1)
    double rho2 = 0.0;    // decay bound claimed beyond rho2
    std::optional<double> cutoff;  // truncation radius R, transition width 1
    DecayLaw decay = DecayLaw::none;
    double decay_prefactor = 0.0;  // stretched law: -dpsi <= pre * exp(-rate * rho^(3/2+gamma))
    double decay_rate = 0.0;
    std::string name;
};

using PotentialPtr = std::shared_ptr<const RadialPotential>;

// psi(rho) = rho^{-s}; requires s > 2.
PotentialPtr make_power_law(double s);

// Force tail -dpsi = c exp(-c rho^{3/2+gamma}) beyond rho2 = 1, blended into a
// rho^{-3} core below via a C^2 partition of unity on [1/2, 1].
PotentialPtr make_stretched_exponential(double c, double gamma);

// The identically-zero potential (free motion); fails admissibility but is
// convenient for exact baselines.
PotentialPtr make_zero_potential();

// phi^R = Lambda^R * phi with the C^2 quintic smoothstep on [R-1, R].
// Requires R > 2. If p already carries a cutoff it must lie inside R-1.
PotentialPtr truncate(PotentialPtr p, double R);

// Cutoff profile Lambda^R: 1 on [0, R-1], quintic smoothstep down to 0 at R.
struct CutoffProfile {
    double R = 0.0;
    double lambda(double rho) const;
    double dlambda(double rho) const;
};

struct AdmissibilityCheck {
    std::string condition;
    bool pass = true;
    double worst_rho = 0.0;
    double worst_value = 0.0;  // most-violating sampled value (sign convention per condition)
};

struct AdmissibilityReport {
    std::vector<AdmissibilityCheck> checks;
    bool all_pass() const;
    std::string summary() const;
};

struct GridSpec {
    double rho_min = 1e-4;
    double rho_max = 50.0;
    int points = 2000;  // geometric grid, >= 1000 per the contract
};

// Samples the four admissibility conditions plus the claimed decay law.
// Failures are report entries, never exceptions.
AdmissibilityReport validate_admissibility(const RadialPotential& p, const GridSpec& grid);

}  // namespace rgkit
