#include <doctest.h>

#include <cmath>
#include <numeric>

#include "decosim/chaos.hpp"
#include "decosim/errors.hpp"
#include "decosim/stats.hpp"

using namespace decosim;
using namespace decosim::chaos;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("wigner sampler: mean spacing and small-spacing fraction") {
  const int m = 100000;
  const double delta = 1.0;
  const auto ens = sample_levels(EnsembleKind::WignerSurmise, m, delta, 424242);
  const auto s = spacings(ens);

  double mean = std::accumulate(s.begin(), s.end(), 0.0) / s.size();
  // levels are the cumulative spacings, so the first level is also a spacing
  mean = (mean * s.size() + ens.levels.front()) / m;
  CHECK(mean == doctest::Approx(delta).epsilon(0.01));

  // P(s < 0.1 delta) = 1 - exp(-pi 0.01 / 4) = 0.0078232
  int below = ens.levels.front() < 0.1 ? 1 : 0;
  for (double v : s) below += v < 0.1;
  CHECK(static_cast<double>(below) / m == doctest::Approx(0.0078232).epsilon(0.15));
}

TEST_CASE("poisson sampler: an order of magnitude more small spacings") {
  const int m = 100000;
  const auto ens = sample_levels(EnsembleKind::Poisson, m, 1.0, 90210);
  const auto s = spacings(ens);
  int below = ens.levels.front() < 0.1 ? 1 : 0;
  for (double v : s) below += v < 0.1;
  // P(s < 0.1 delta) = 1 - e^{-0.1} = 0.0951626
  CHECK(static_cast<double>(below) / m == doctest::Approx(0.0951626).epsilon(0.05));
}

TEST_CASE("wigner sampler passes a KS test against the analytic CDF") {
  const int m = 100000;
  const double delta = 0.7;
  const auto ens = sample_levels(EnsembleKind::WignerSurmise, m, delta, 1234);
  auto s = spacings(ens);
  s.push_back(ens.levels.front());
  const auto ks =
      stats::ks_test(s, [&](double v) { return wigner_spacing_cdf(v, delta); });
  CHECK(ks.p_value > 0.01);
}

TEST_CASE("levels are strictly increasing and deterministic in the seed") {
  const auto a = sample_levels(EnsembleKind::WignerSurmise, 5000, 1.0, 77);
  const auto b = sample_levels(EnsembleKind::WignerSurmise, 5000, 1.0, 77);
  CHECK(a.levels == b.levels);
  const auto c = sample_levels(EnsembleKind::WignerSurmise, 5000, 1.0, 78);
  CHECK(a.levels != c.levels);
  for (std::size_t i = 0; i + 1 < a.levels.size(); ++i)
    CHECK(a.levels[i] < a.levels[i + 1]);
  CHECK_THROWS_AS(sample_levels(EnsembleKind::Poisson, 1, 1.0, 0), InvalidSize);
  CHECK_THROWS_AS(sample_levels(EnsembleKind::Poisson, 10, 0.0, 0), InvalidSize);
}

TEST_CASE("goe levels: unfolded mean spacing within 2% and surmise-like statistics") {
  const int m = 1500;
  const double delta = 1.0;
  const auto ens = sample_levels(EnsembleKind::GOE, m, delta, 31337);
  const auto s = spacings(ens);
  const double mean = std::accumulate(s.begin(), s.end(), 0.0) / s.size();
  CHECK(mean == doctest::Approx(delta).epsilon(0.02));

  // two-sample KS against surmise-sampled spacings at the 1% level
  const auto ref = sample_levels(EnsembleKind::WignerSurmise, 20000, delta, 5150);
  const auto ks = stats::ks_two_sample(s, spacings(ref));
  CHECK(ks.p_value > 0.01);
}

TEST_CASE("coupling matrix: symmetric, traceless, unit off-diagonal variance") {
  const auto q = sample_coupling(1000, 99);
  CHECK(std::abs(q.q.trace()) < 1e-10);
  CHECK((q.q - q.q.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(near_diagonal_mean_sq(q) == doctest::Approx(1.0).epsilon(0.05));

  // diagonal variance 2 (before the O(1/M) trace shift)
  double acc = 0.0;
  for (int i = 0; i < 1000; ++i) acc += q.q(i, i) * q.q(i, i);
  CHECK(acc / 1000.0 == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("spectral_function: zero coupling gives zero estimate") {
  const auto levels = sample_levels(EnsembleKind::WignerSurmise, 100, 1.0, 1);
  CouplingMatrix q;
  q.q = Eigen::MatrixXd::Zero(100, 100);
  const auto r = spectral_function(levels, q, {0.0, 0.5, 1.0}, 0.6, true);
  for (double v : r) CHECK(v == 0.0);
}

TEST_CASE("spectral_function: two-level pair weights") {
  // M = 2, spacing s, |Q_12|^2 = q: the +s peak integrates to pi q / M and
  // the +-s pair together to the spec's 2 pi q / M.
  const double s = 1.0, qv = 2.25, sigma = 0.05;
  LevelEnsemble levels;
  levels.levels = {0.0, s};
  levels.delta = s;
  CouplingMatrix q;
  q.q = Eigen::MatrixXd::Zero(2, 2);
  q.q(0, 1) = q.q(1, 0) = std::sqrt(qv);

  std::vector<double> grid;
  const double step = sigma / 4.0;
  const int half = static_cast<int>(std::lround(2.0 / step));
  for (int i = -half; i <= half; ++i) grid.push_back(step * i);

  const auto r = spectral_function(levels, q, grid, sigma, true);
  double plus = 0.0, total = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    total += r[i] * step;
    if (grid[i] > 0.0) plus += r[i] * step;
  }
  CHECK(plus == doctest::Approx(kPi * qv / 2.0).epsilon(1e-3));
  CHECK(total == doctest::Approx(2.0 * kPi * qv / 2.0).epsilon(1e-3));

  // symmetric under w -> -w
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const std::size_t mirror = grid.size() - 1 - i;
    CHECK(r[i] == doctest::Approx(r[mirror]).epsilon(1e-9));
  }
}

TEST_CASE("spectral_function scales as c^2 under Q -> cQ and is shift invariant") {
  const auto levels = sample_levels(EnsembleKind::WignerSurmise, 200, 1.0, 7);
  const auto q = sample_coupling(200, 8);
  std::vector<double> grid;
  for (int i = 0; i < 40; ++i) grid.push_back(0.05 * i);

  const auto r1 = spectral_function(levels, q, grid, 0.08, true);

  CouplingMatrix q2 = q;
  q2.q *= 3.0;
  const auto r9 = spectral_function(levels, q2, grid, 0.08, true);
  for (std::size_t i = 0; i < grid.size(); ++i)
    CHECK(r9[i] == doctest::Approx(9.0 * r1[i]).epsilon(1e-12));

  LevelEnsemble shifted = levels;
  for (auto& e : shifted.levels) e += 123.456;
  const auto rs = spectral_function(shifted, q, grid, 0.08, true);
  for (std::size_t i = 0; i < grid.size(); ++i)
    CHECK(rs[i] == doctest::Approx(r1[i]).epsilon(1e-12));
}

TEST_CASE("spectral_function rejects sigma below the grid step") {
  const auto levels = sample_levels(EnsembleKind::Poisson, 50, 1.0, 3);
  const auto q = sample_coupling(50, 4);
  CHECK_THROWS_AS(spectral_function(levels, q, {0.0, 0.5, 1.0}, 0.1, true),
                  BroadeningTooSmall);
}

TEST_CASE("diagonal terms add a zero-frequency spike when included") {
  const auto levels = sample_levels(EnsembleKind::WignerSurmise, 400, 1.0, 11);
  const auto q = sample_coupling(400, 12);
  std::vector<double> grid;
  for (int i = 0; i < 60; ++i) grid.push_back(0.025 * i);
  const auto excl = spectral_function(levels, q, grid, 0.05, true);
  const auto incl = spectral_function(levels, q, grid, 0.05, false);
  CHECK(incl[0] > excl[0] + 10.0);  // delta spike at omega = 0
  // far from 0 the two agree
  CHECK(incl[40] == doctest::Approx(excl[40]).epsilon(1e-9));
}

TEST_CASE("ensemble estimate: determinism and basic shape") {
  EnsembleParams p;
  p.kind = EnsembleKind::WignerSurmise;
  p.size = 300;
  p.realizations = 8;
  p.sigma = 0.05;
  p.seed = 2024;
  const auto a = estimate_spectral_function(p);
  const auto b = estimate_spectral_function(p);
  CHECK(a.r == b.r);
  CHECK(a.r_sem == b.r_sem);
  CHECK(a.mean_coupling_sq == doctest::Approx(1.0).epsilon(0.1));
  CHECK(std::abs(a.correlation_q_spacing) < 0.2);
  for (double v : a.r) CHECK(v >= 0.0);

  // thread count must not change a single bit of the reduction
  setenv("DECOSIM_THREADS", "4", 1);
  const auto threaded = estimate_spectral_function(p);
  unsetenv("DECOSIM_THREADS");
  CHECK(threaded.r == a.r);
  CHECK(threaded.r_sem == a.r_sem);
  CHECK(threaded.mean_coupling_sq == a.mean_coupling_sq);
}

TEST_CASE("rate fit: wigner intercept consistent with zero, poisson positive") {
  EnsembleParams p;
  p.size = 500;
  p.realizations = 24;
  p.sigma = 0.05;
  p.seed = 99;

  p.kind = EnsembleKind::WignerSurmise;
  const auto wigner = dephasing_rate_from_spectrum(estimate_spectral_function(p));
  CHECK(std::abs(wigner.intercept) < 4.0 * wigner.intercept_sem);

  p.kind = EnsembleKind::Poisson;
  const auto poisson = dephasing_rate_from_spectrum(estimate_spectral_function(p));
  CHECK(poisson.intercept / poisson.intercept_sem > 3.0);
  CHECK(poisson.gamma > 0.0);
  // Poisson pair-difference density is exactly 1/delta, so gamma ~ pi/2 here
  CHECK(poisson.gamma == doctest::Approx(kPi / 2.0).epsilon(0.25));
}

TEST_CASE("rate fit validates its window") {
  EnsembleParams p;
  p.size = 100;
  p.realizations = 2;
  p.seed = 5;
  const auto est = estimate_spectral_function(p);
  CHECK_THROWS_AS(dephasing_rate_from_spectrum(est, {{2.0, 10.0}}), WindowOutsideGrid);
  CHECK_THROWS_AS(dephasing_rate_from_spectrum(est, {{0.5, 0.4}}), WindowOutsideGrid);
}
