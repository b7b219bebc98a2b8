#pragma once

#include <functional>
#include <span>
#include <vector>

namespace decosim::stats {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual_rms = 0.0;  // root mean square of fit residuals
};

// Ordinary least-squares line through (x, y). Requires x.size() == y.size() >= 2
// and non-degenerate x.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

struct MeanSem {
  double mean = 0.0;
  double sem = 0.0;  // standard error of the mean (0 for n < 2)
};

MeanSem mean_sem(std::span<const double> values);

// Pearson correlation coefficient; 0 for degenerate inputs.
double pearson(std::span<const double> x, std::span<const double> y);

// Survival function of the Kolmogorov distribution, Q(lambda) = P(K > lambda).
double kolmogorov_q(double lambda);

struct KsResult {
  double statistic = 0.0;  // sup |F_emp - F|
  double p_value = 1.0;
};

// One-sample Kolmogorov-Smirnov test of `samples` against the CDF `cdf`.
KsResult ks_test(std::vector<double> samples, const std::function<double(double)>& cdf);

// Two-sample Kolmogorov-Smirnov test.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

}  // namespace decosim::stats
