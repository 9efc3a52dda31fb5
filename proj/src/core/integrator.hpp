#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "core/errors.hpp"

namespace rgkit {

// Adaptive embedded Runge-Kutta: Dormand-Prince 5(4) on flat state vectors.
// deriv(y, dydt) fills dydt; both sized n.
class Rk45 {
  public:
    using Deriv = std::function<void(const std::vector<double>&, std::vector<double>&)>;

    double rtol = 1e-10;
    double atol = 1e-12;
    double h_min = 1e-15;

    struct StepResult {
        double h_taken = 0.0;
        double h_next = 0.0;
    };

    // Advances y by one accepted step of size <= h_try (h_try already capped
    // by the caller). Returns the step actually taken and a proposal.
    StepResult step(const Deriv& deriv, std::vector<double>& y, double h_try) const {
        const std::size_t n = y.size();
        scratch(n);
        double h = h_try;
        deriv(y, k1_);
        for (int attempt = 0; attempt < 60; ++attempt) {
            // Dormand-Prince tableau.
            for (std::size_t i = 0; i < n; ++i) yt_[i] = y[i] + h * (a21 * k1_[i]);
            deriv(yt_, k2_);
            for (std::size_t i = 0; i < n; ++i)
                yt_[i] = y[i] + h * (a31 * k1_[i] + a32 * k2_[i]);
            deriv(yt_, k3_);
            for (std::size_t i = 0; i < n; ++i)
                yt_[i] = y[i] + h * (a41 * k1_[i] + a42 * k2_[i] + a43 * k3_[i]);
            deriv(yt_, k4_);
            for (std::size_t i = 0; i < n; ++i)
                yt_[i] = y[i] + h * (a51 * k1_[i] + a52 * k2_[i] + a53 * k3_[i] + a54 * k4_[i]);
            deriv(yt_, k5_);
            for (std::size_t i = 0; i < n; ++i)
                yt_[i] = y[i] + h * (a61 * k1_[i] + a62 * k2_[i] + a63 * k3_[i] +
                                     a64 * k4_[i] + a65 * k5_[i]);
            deriv(yt_, k6_);
            for (std::size_t i = 0; i < n; ++i)
                y5_[i] = y[i] + h * (b1 * k1_[i] + b3 * k3_[i] + b4 * k4_[i] + b5 * k5_[i] +
                                     b6 * k6_[i]);
            deriv(y5_, k7_);

            double err = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double e = h * (e1 * k1_[i] + e3 * k3_[i] + e4 * k4_[i] + e5 * k5_[i] +
                                      e6 * k6_[i] + e7 * k7_[i]);
                const double sc = atol + rtol * std::max(std::abs(y[i]), std::abs(y5_[i]));
                err += (e / sc) * (e / sc);
            }
            err = std::sqrt(err / static_cast<double>(n));

            if (err <= 1.0 || h <= h_min) {
                y = y5_;
                StepResult r;
                r.h_taken = h;
                const double fac = (err > 0.0) ? 0.9 * std::pow(err, -0.2) : 5.0;
                r.h_next = h * std::min(5.0, std::max(0.2, fac));
                return r;
            }
            h *= std::max(0.1, 0.9 * std::pow(err, -0.25));
            if (h < h_min) h = h_min;
        }
        throw numerical_error("integrator: step-size underflow", h);
    }

  private:
    void scratch(std::size_t n) const {
        for (auto* v : {&k1_, &k2_, &k3_, &k4_, &k5_, &k6_, &k7_, &yt_, &y5_})
            if (v->size() != n) v->resize(n);
    }

    mutable std::vector<double> k1_, k2_, k3_, k4_, k5_, k6_, k7_, yt_, y5_;

    static constexpr double a21 = 1.0 / 5.0;
    static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
    static constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
    static constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                            a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
    static constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                            a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                            a65 = -5103.0 / 18656.0;
    static constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                            b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
    static constexpr double e1 = 35.0 / 384.0 - 5179.0 / 57600.0;
    static constexpr double e3 = 500.0 / 1113.0 - 7571.0 / 16695.0;
    static constexpr double e4 = 125.0 / 192.0 - 393.0 / 640.0;
    static constexpr double e5 = -2187.0 / 6784.0 + 92097.0 / 339200.0;
    static constexpr double e6 = 11.0 / 84.0 - 187.0 / 2100.0;
    static constexpr double e7 = -1.0 / 40.0;
};

}  // namespace rgkit
