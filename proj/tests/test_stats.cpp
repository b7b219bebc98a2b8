#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "decosim/stats.hpp"

using namespace decosim;

TEST_CASE("fit_line recovers an exact line") {
  std::vector<double> x{1, 2, 3, 4, 5};
  std::vector<double> y;
  for (double v : x) y.push_back(2.5 * v - 1.0);
  const auto fit = stats::fit_line(x, y);
  CHECK(fit.slope == doctest::Approx(2.5).epsilon(1e-14));
  CHECK(fit.intercept == doctest::Approx(-1.0).epsilon(1e-13));
  CHECK(fit.residual_rms < 1e-12);
}

TEST_CASE("pearson detects perfect correlation and independence") {
  std::vector<double> x{1, 2, 3, 4, 5, 6};
  std::vector<double> y{2, 4, 6, 8, 10, 12};
  CHECK(stats::pearson(x, y) == doctest::Approx(1.0).epsilon(1e-12));
  std::vector<double> z{1, -1, -1, 1, 1, -1};
  CHECK(std::abs(stats::pearson(x, z)) < 0.2);
}

TEST_CASE("mean_sem matches hand computation") {
  std::vector<double> v{1.0, 2.0, 3.0, 4.0};
  const auto ms = stats::mean_sem(v);
  CHECK(ms.mean == doctest::Approx(2.5));
  // sd = sqrt(5/3), sem = sd/2
  CHECK(ms.sem == doctest::Approx(std::sqrt(5.0 / 3.0) / 2.0).epsilon(1e-12));
}

TEST_CASE("kolmogorov survival function reference values") {
  // Q(1.36) ~ 0.049, the classic 5% critical point
  CHECK(stats::kolmogorov_q(1.36) == doctest::Approx(0.049).epsilon(0.02));
  CHECK(stats::kolmogorov_q(1.63) == doctest::Approx(0.010).epsilon(0.05));
  CHECK(stats::kolmogorov_q(0.0) == 1.0);
}

TEST_CASE("ks test accepts matching distribution and rejects a shifted one") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> sample(20000);
  for (auto& s : sample) s = u(gen);

  auto uniform_cdf = [](double x) { return std::clamp(x, 0.0, 1.0); };
  const auto ok = stats::ks_test(sample, uniform_cdf);
  CHECK(ok.p_value > 0.01);

  auto shifted_cdf = [](double x) { return std::clamp(x - 0.05, 0.0, 1.0); };
  const auto bad = stats::ks_test(sample, shifted_cdf);
  CHECK(bad.p_value < 1e-6);
}

TEST_CASE("two-sample ks distinguishes distributions") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> a(5000), b(5000), c(5000);
  for (auto& s : a) s = u(gen);
  for (auto& s : b) s = u(gen);
  for (auto& s : c) s = std::pow(u(gen), 1.3);
  CHECK(stats::ks_two_sample(a, b).p_value > 0.01);
  CHECK(stats::ks_two_sample(a, c).p_value < 1e-4);
}
