#include "core/potentials.hpp"

#include <cmath>

#include <boost/math/special_functions/gamma.hpp>

#include "core/errors.hpp"

namespace rgkit {

namespace {

// Quintic smoothstep h: [0,1] -> [0,1], h(0)=0, h(1)=1, h', h'' vanish at both
// ends, so 1-h is C^2 across the seams.
inline double smoothstep(double u) { return u * u * u * (10.0 + u * (-15.0 + 6.0 * u)); }
inline double dsmoothstep(double u) { return 30.0 * u * u * (1.0 + u * (-2.0 + u)); }

class PowerLaw final : public RadialPotential {
  public:
    explicit PowerLaw(double s_in) {
        s = s_in;
        rho1 = s_in;
        rho2 = 1.0;
        decay = DecayLaw::power;
        name = "power_law";
    }
    double psi(double rho) const override { return std::pow(rho, -s); }
    double dpsi(double rho) const override { return -s * std::pow(rho, -s - 1.0); }
};

class Zero final : public RadialPotential {
  public:
    Zero() {
        rho1 = 1.0;
        rho2 = 1.0;
        name = "zero";
    }
    double psi(double) const override { return 0.0; }
    double dpsi(double) const override { return 0.0; }
};

// Tail: -dpsi = c exp(-c rho^p), p = 3/2 + gamma, so
// psi_tail(rho) = (c^{1-1/p}/p) * Gamma(1/p, c rho^p)   (upper incomplete).
// Core: A rho^{-3} with A = psi_tail(1), blended on [1/2, 1].
class StretchedExp final : public RadialPotential {
  public:
    StretchedExp(double c, double gamma_in) : c_(c), p_(1.5 + gamma_in) {
        gamma = gamma_in;
        s = 3.0;  // the core controls the small-rho behaviour
        rho1 = 3.0;
        rho2 = 1.0;
        decay = DecayLaw::stretched_exp;
        decay_prefactor = c;
        decay_rate = c;
        name = "stretched_exp";
        core_amp_ = psi_tail(1.0);
    }

    double psi(double rho) const override {
        if (rho >= rho2) return psi_tail(rho);
        if (rho <= 0.5 * rho2) return core_amp_ * std::pow(rho, -3.0);
        const double u = (rho - 0.5) / 0.5;
        const double blend = smoothstep(u);  // 0 at 1/2, 1 at 1
        return (1.0 - blend) * core_amp_ * std::pow(rho, -3.0) + blend * psi_tail(rho);
    }

    double dpsi(double rho) const override {
        if (rho >= rho2) return -force_tail(rho);
        const double dcore = -3.0 * core_amp_ * std::pow(rho, -4.0);
        if (rho <= 0.5 * rho2) return dcore;
        const double u = (rho - 0.5) / 0.5;
        const double blend = smoothstep(u);
        const double dblend = dsmoothstep(u) / 0.5;
        const double core = core_amp_ * std::pow(rho, -3.0);
        return (1.0 - blend) * dcore + blend * (-force_tail(rho)) +
               dblend * (psi_tail(rho) - core);
    }

    double force_tail(double rho) const { return c_ * std::exp(-c_ * std::pow(rho, p_)); }

    double psi_tail(double rho) const {
        const double a = 1.0 / p_;
        return std::pow(c_, 1.0 - a) / p_ *
               boost::math::tgamma(a, c_ * std::pow(rho, p_));
    }

  private:
    double c_;
    double p_;
    double core_amp_;
};

class Truncated final : public RadialPotential {
  public:
    Truncated(PotentialPtr base, double R) : base_(std::move(base)), profile_{R} {
        s = base_->s;
        gamma = base_->gamma;
        rho1 = base_->rho1;
        rho2 = base_->rho2;
        decay = base_->decay;
        decay_prefactor = base_->decay_prefactor;
        decay_rate = base_->decay_rate;
        cutoff = R;
        name = base_->name + "_R";
    }

    double psi(double rho) const override {
        if (rho <= profile_.R - 1.0) return base_->psi(rho);  // same code path as phi
        if (rho >= profile_.R) return 0.0;
        return profile_.lambda(rho) * base_->psi(rho);
    }

    double dpsi(double rho) const override {
        if (rho <= profile_.R - 1.0) return base_->dpsi(rho);
        if (rho >= profile_.R) return 0.0;
        return profile_.lambda(rho) * base_->dpsi(rho) +
               profile_.dlambda(rho) * base_->psi(rho);
    }

  private:
    PotentialPtr base_;
    CutoffProfile profile_;
};

}  // namespace

double CutoffProfile::lambda(double rho) const {
    if (rho <= R - 1.0) return 1.0;
    if (rho >= R) return 0.0;
    return 1.0 - smoothstep(rho - (R - 1.0));
}

double CutoffProfile::dlambda(double rho) const {
    if (rho <= R - 1.0 || rho >= R) return 0.0;
    return -dsmoothstep(rho - (R - 1.0));
}

PotentialPtr make_power_law(double s) {
    if (!(s > 2.0))
        throw ConfigError("power-law exponent must satisfy s > 2, got " + std::to_string(s));
    return std::make_shared<PowerLaw>(s);
}

PotentialPtr make_stretched_exponential(double c, double gamma) {
    if (!(c > 0.0)) throw ConfigError("stretched-exponential rate must be positive");
    if (!(gamma > 0.0)) throw ConfigError("stretched-exponential gamma must be positive");
    return std::make_shared<StretchedExp>(c, gamma);
}

PotentialPtr make_zero_potential() { return std::make_shared<Zero>(); }

PotentialPtr truncate(PotentialPtr p, double R) {
    // The transition band [R-1, R] must be nonempty, so R > 1; the scaling
    // regime R = eps^{-1/(3+gamma)} reaches down to ~1.8 at desk scale.
    if (!(R > 1.0)) throw ConfigError("truncation radius must satisfy R > 1");
    if (p->cutoff && *p->cutoff > R - 1.0)
        throw ConfigError("potential already truncated beyond R-1");
    return std::make_shared<Truncated>(std::move(p), R);
}

bool AdmissibilityReport::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

std::string AdmissibilityReport::summary() const {
    std::string out;
    for (const auto& c : checks) {
        out += c.condition + ": " + (c.pass ? "pass" : "FAIL");
        if (!c.pass)
            out += " (worst at rho=" + std::to_string(c.worst_rho) +
                   ", value=" + std::to_string(c.worst_value) + ")";
        out += "\n";
    }
    return out;
}

AdmissibilityReport validate_admissibility(const RadialPotential& p, const GridSpec& grid) {
    AdmissibilityReport rep;
    const int n = std::max(grid.points, 1000);
    std::vector<double> rho(n);
    const double lg0 = std::log(grid.rho_min), lg1 = std::log(grid.rho_max);
    for (int i = 0; i < n; ++i)
        rho[i] = std::exp(lg0 + (lg1 - lg0) * i / (n - 1.0));

    // (2) strictly decreasing
    {
        AdmissibilityCheck c{"(2) psi strictly decreasing"};
        double worst = 0.0;
        for (int i = 0; i + 1 < n; ++i) {
            const double lo_v = p.psi(rho[i]);
            const double d = p.psi(rho[i + 1]) - lo_v;
            // Ties are violations only above the underflow floor.
            const bool bad = d > 0.0 || (d == 0.0 && lo_v > 1e-290);
            if (bad && d >= worst) {
                worst = d;
                c.pass = false;
                c.worst_rho = rho[i];
                c.worst_value = d;
            }
        }
        rep.checks.push_back(c);
    }
    // (3a) psi -> 0 at infinity: tail sample small and still falling
    {
        AdmissibilityCheck c{"(3) psi -> 0 at infinity"};
        const double tail = p.psi(grid.rho_max);
        if (!(tail < 1e-2) || !(p.psi(grid.rho_max) <= p.psi(0.5 * grid.rho_max))) {
            c.pass = false;
            c.worst_rho = grid.rho_max;
            c.worst_value = tail;
        }
        rep.checks.push_back(c);
    }
    // (3b) psi -> infinity at 0: head sample large and still rising
    {
        AdmissibilityCheck c{"(3) psi -> infinity at 0"};
        const double head = p.psi(grid.rho_min);
        if (!(head > 1e2) || !(p.psi(grid.rho_min) >= p.psi(2.0 * grid.rho_min))) {
            c.pass = false;
            c.worst_rho = grid.rho_min;
            c.worst_value = head;
        }
        rep.checks.push_back(c);
    }
    // (4) dpsi + psi <= 0 on (0, rho1)
    {
        AdmissibilityCheck c{"(4) dpsi + psi <= 0 on (0, rho1)"};
        double worst = 0.0;
        for (int i = 0; i < n && rho[i] < p.rho1; ++i) {
            const double v = p.dpsi(rho[i]) + p.psi(rho[i]);
            if (v > 1e-12 && v > worst) {
                worst = v;
                c.pass = false;
                c.worst_rho = rho[i];
                c.worst_value = v;
            }
        }
        rep.checks.push_back(c);
    }
    // decay bound on (rho2, rho_max], against the claimed law
    {
        AdmissibilityCheck c{"decay bound beyond rho2"};
        const double slack = 1.0 + 1e-9;
        double worst = 0.0;
        for (int i = 0; i < n; ++i) {
            if (rho[i] <= p.rho2) continue;
            const double force = -p.dpsi(rho[i]);
            double bound = 0.0;
            switch (p.decay) {
                case RadialPotential::DecayLaw::power:
                    bound = p.s * std::pow(rho[i], -p.s - 1.0);
                    break;
                case RadialPotential::DecayLaw::stretched_exp:
                    bound = p.decay_prefactor *
                            std::exp(-p.decay_rate * std::pow(rho[i], 1.5 + p.gamma));
                    break;
                case RadialPotential::DecayLaw::none:
                    bound = force;  // nothing claimed
                    break;
            }
            const double excess = force - bound * slack;
            if (excess > 0.0 && excess > worst) {
                worst = excess;
                c.pass = false;
                c.worst_rho = rho[i];
                c.worst_value = excess;
            }
        }
        rep.checks.push_back(c);
    }
    return rep;
}

}  // namespace rgkit
