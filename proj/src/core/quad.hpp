#pragma once

#include <cmath>
#include <queue>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "core/errors.hpp"

namespace rgkit {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
};

namespace quad_detail {

// One Gauss(7)/Kronrod(15) panel on [a,b]. Error uses the QUADPACK-style
// sharpening (200|K-G|)^{3/2}, capped by |K-G| itself.
template <typename F>
inline QuadResult gk15_panel(const F& f, double a, double b) {
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    using G = boost::math::quadrature::gauss<double, 7>;
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    const double f0 = f(mid);
    double kron = f0 * GK::weights()[0];
    double gauss = f0 * G::weights()[0];
    for (unsigned i = 2; i < GK::abscissa().size(); i += 2) {
        const double x = half * GK::abscissa()[i];
        const double fp = f(mid + x), fm = f(mid - x);
        kron += (fp + fm) * GK::weights()[i];
        gauss += (fp + fm) * G::weights()[i / 2];
    }
    for (unsigned i = 1; i < GK::abscissa().size(); i += 2) {
        const double x = half * GK::abscissa()[i];
        kron += (f(mid + x) + f(mid - x)) * GK::weights()[i];
    }
    const double diff = std::abs(kron - gauss) * half;
    QuadResult r;
    r.value = kron * half;
    const double sharpened = std::pow(200.0 * diff, 1.5);
    r.error = std::max(std::min(diff, sharpened), std::abs(r.value) * 1e-16);
    return r;
}

struct Interval {
    double a, b, value, error;
    bool operator<(const Interval& o) const { return error < o.error; }
};

}  // namespace quad_detail

// Globally adaptive Gauss-Kronrod to an absolute tolerance. Never throws on
// tolerance failure; the caller inspects .error against its own contract.
template <typename F>
QuadResult integrate(const F& f, double a, double b, double tol, int max_intervals = 2000) {
    QuadResult total;
    if (a == b) return total;
    std::priority_queue<quad_detail::Interval> heap;
    auto first = quad_detail::gk15_panel(f, a, b);
    if (!std::isfinite(first.value))
        throw numerical_error("quadrature: non-finite integrand", first.error);
    heap.push({a, b, first.value, first.error});
    total = first;
    int n = 1;
    while (total.error > tol && n < max_intervals) {
        const auto worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {  // cannot split further
            heap.push(worst);
            break;
        }
        auto left = quad_detail::gk15_panel(f, worst.a, mid);
        auto right = quad_detail::gk15_panel(f, mid, worst.b);
        if (!std::isfinite(left.value) || !std::isfinite(right.value))
            throw numerical_error("quadrature: non-finite integrand", total.error);
        total.value += left.value + right.value - worst.value;
        total.error += left.error + right.error - worst.error;
        heap.push({worst.a, mid, left.value, left.error});
        heap.push({mid, worst.b, right.value, right.error});
        ++n;
    }
    return total;
}

}  // namespace rgkit
