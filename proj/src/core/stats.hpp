#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace rgkit {

struct MeanStderr {
    double mean = 0.0;
    double stderr_ = 0.0;
    std::size_t n = 0;
};

MeanStderr mean_stderr(std::span<const double> xs);

// Wilson score interval for a binomial proportion at ~95% (z = 1.96).
struct WilsonInterval {
    double p_hat = 0.0, lo = 0.0, hi = 0.0;
};
WilsonInterval wilson(std::size_t successes, std::size_t n, double z = 1.96);

// One-sample Kolmogorov-Smirnov test against a CDF. Returns the statistic
// and the asymptotic p-value from the Kolmogorov distribution.
struct KsResult {
    double statistic = 0.0;
    double p_value = 0.0;
};
KsResult ks_test(std::vector<double> samples, const std::function<double(double)>& cdf);

// Two-sample chi-square over equal-count-intent bins spanning the pooled
// range. Bins with too-low pooled counts are merged with neighbours.
struct Chi2Result {
    double statistic = 0.0;
    double p_value = 0.0;
    std::size_t dof = 0;
};
Chi2Result chi2_two_sample(std::span<const double> a, std::span<const double> b, int bins);

// Regularized upper incomplete gamma Q(a, x) = Gamma(a,x)/Gamma(a).
double gamma_q(double a, double x);

// Least-squares slope of y on x with a ~95% confidence interval.
struct SlopeFit {
    double slope = 0.0, intercept = 0.0;
    double slope_lo = 0.0, slope_hi = 0.0;
};
SlopeFit fit_slope(std::span<const double> x, std::span<const double> y);

// Jackknife standard error of the mean of h over samples.
double jackknife_stderr(std::span<const double> xs);

// Percentile bootstrap CI of a statistic of a sample (indices resampled).
struct BootstrapCi {
    double lo = 0.0, hi = 0.0;
};
BootstrapCi bootstrap_ci(std::span<const double> xs,
                         const std::function<double(std::span<const double>)>& stat,
                         int replicates, std::uint64_t seed);

double median(std::vector<double> xs);

}  // namespace rgkit
