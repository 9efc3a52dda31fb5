#include "core/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include <boost/math/special_functions/gamma.hpp>

#include "core/rng.hpp"

namespace rgkit {

MeanStderr mean_stderr(std::span<const double> xs) {
    MeanStderr r;
    r.n = xs.size();
    if (r.n == 0) return r;
    double s = 0.0;
    for (double x : xs) s += x;
    r.mean = s / static_cast<double>(r.n);
    if (r.n < 2) return r;
    double ss = 0.0;
    for (double x : xs) ss += (x - r.mean) * (x - r.mean);
    r.stderr_ = std::sqrt(ss / (static_cast<double>(r.n) * (static_cast<double>(r.n) - 1.0)));
    return r;
}

WilsonInterval wilson(std::size_t successes, std::size_t n, double z) {
    WilsonInterval w;
    if (n == 0) return w;
    const double nh = static_cast<double>(n);
    const double p = static_cast<double>(successes) / nh;
    w.p_hat = p;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nh;
    const double center = (p + z2 / (2.0 * nh)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / nh + z2 / (4.0 * nh * nh)) / denom;
    w.lo = std::max(0.0, center - half);
    w.hi = std::min(1.0, center + half);
    return w;
}

namespace {

// Kolmogorov distribution survival function Q(lambda) = 2 sum (-1)^{k-1} e^{-2k^2 lambda^2}.
double kolmogorov_q(double lambda) {
    if (lambda < 1e-8) return 1.0;
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += (k % 2 == 1) ? term : -term;
        if (term < 1e-16) break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

}  // namespace

KsResult ks_test(std::vector<double> samples, const std::function<double(double)>& cdf) {
    KsResult r;
    const std::size_t n = samples.size();
    if (n == 0) return r;
    std::sort(samples.begin(), samples.end());
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double f = cdf(samples[i]);
        const double lo = static_cast<double>(i) / static_cast<double>(n);
        const double hi = static_cast<double>(i + 1) / static_cast<double>(n);
        d = std::max(d, std::max(std::abs(f - lo), std::abs(hi - f)));
    }
    r.statistic = d;
    const double sn = std::sqrt(static_cast<double>(n));
    // Stephens' small-sample adjustment.
    r.p_value = kolmogorov_q((sn + 0.12 + 0.11 / sn) * d);
    return r;
}

double gamma_q(double a, double x) { return boost::math::gamma_q(a, x); }

Chi2Result chi2_two_sample(std::span<const double> a, std::span<const double> b, int bins) {
    Chi2Result res;
    if (a.empty() || b.empty() || bins < 2) return res;
    double lo = a[0], hi = a[0];
    for (double x : a) { lo = std::min(lo, x); hi = std::max(hi, x); }
    for (double x : b) { lo = std::min(lo, x); hi = std::max(hi, x); }
    if (!(hi > lo)) return res;
    const double width = (hi - lo) / bins;

    std::vector<double> ca(bins, 0.0), cb(bins, 0.0);
    auto bin_of = [&](double x) {
        int k = static_cast<int>((x - lo) / width);
        return std::clamp(k, 0, bins - 1);
    };
    for (double x : a) ca[bin_of(x)] += 1.0;
    for (double x : b) cb[bin_of(x)] += 1.0;

    // Merge sparse bins (pooled expected count < 5) into their left neighbour.
    std::vector<std::pair<double, double>> merged;
    double accA = 0.0, accB = 0.0;
    for (int k = 0; k < bins; ++k) {
        accA += ca[k];
        accB += cb[k];
        if (accA + accB >= 10.0) {
            merged.emplace_back(accA, accB);
            accA = accB = 0.0;
        }
    }
    if (accA + accB > 0.0) {
        if (merged.empty()) merged.emplace_back(accA, accB);
        else {
            merged.back().first += accA;
            merged.back().second += accB;
        }
    }
    if (merged.size() < 2) return res;

    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    const double ka = std::sqrt(nb / na), kb = std::sqrt(na / nb);
    double chi2 = 0.0;
    for (auto& [xa, xb] : merged) {
        const double d = ka * xa - kb * xb;
        chi2 += d * d / (xa + xb);
    }
    res.statistic = chi2;
    res.dof = merged.size() - 1;
    res.p_value = gamma_q(0.5 * static_cast<double>(res.dof), 0.5 * chi2);
    return res;
}

SlopeFit fit_slope(std::span<const double> x, std::span<const double> y) {
    SlopeFit f;
    const std::size_t n = x.size();
    if (n < 3 || y.size() != n) return f;
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) { mx += x[i]; my += y[i]; }
    mx /= n; my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx <= 0.0) return f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (f.intercept + f.slope * x[i]);
        sse += r * r;
    }
    const double se = std::sqrt(sse / (static_cast<double>(n) - 2.0) / sxx);
    f.slope_lo = f.slope - 1.96 * se;
    f.slope_hi = f.slope + 1.96 * se;
    return f;
}

double jackknife_stderr(std::span<const double> xs) {
    const std::size_t n = xs.size();
    if (n < 2) return 0.0;
    double total = 0.0;
    for (double x : xs) total += x;
    const double mean = total / n;
    // For the sample mean the jackknife reduces to the usual stderr; kept in
    // this form so weighted estimators can reuse it.
    double ss = 0.0;
    for (double x : xs) {
        const double loo = (total - x) / (static_cast<double>(n) - 1.0);
        ss += (loo - mean) * (loo - mean);
    }
    return std::sqrt(ss * (static_cast<double>(n) - 1.0) / static_cast<double>(n));
}

BootstrapCi bootstrap_ci(std::span<const double> xs,
                         const std::function<double(std::span<const double>)>& stat,
                         int replicates, std::uint64_t seed) {
    BootstrapCi ci;
    const std::size_t n = xs.size();
    if (n == 0 || replicates < 4) return ci;
    StreamRng rng(seed, rng_domain::kGeneric);
    std::vector<double> reps(replicates, 0.0);
    std::vector<double> resampled(n);
    for (int r = 0; r < replicates; ++r) {
        for (std::size_t i = 0; i < n; ++i)
            resampled[i] = xs[static_cast<std::size_t>(rng.uniform() * n) % n];
        reps[r] = stat(resampled);
    }
    std::sort(reps.begin(), reps.end());
    ci.lo = reps[static_cast<std::size_t>(0.025 * (replicates - 1))];
    ci.hi = reps[static_cast<std::size_t>(0.975 * (replicates - 1))];
    return ci;
}

double median(std::vector<double> xs) {
    if (xs.empty()) return 0.0;
    std::sort(xs.begin(), xs.end());
    const std::size_t n = xs.size();
    return (n % 2 == 1) ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

}  // namespace rgkit
