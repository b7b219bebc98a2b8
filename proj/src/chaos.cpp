#include "decosim/chaos.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <random>
#include <string>
#include <thread>

#include "decosim/errors.hpp"
#include "decosim/rng.hpp"
#include "decosim/stats.hpp"

namespace decosim::chaos {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<double> cumulative_levels(std::vector<double> spacings) {
  std::vector<double> levels(spacings.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < spacings.size(); ++i) {
    acc += spacings[i];
    levels[i] = acc;
  }
  return levels;
}

double positive_uniform(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  double u = dist(gen);
  while (u == 0.0) u = dist(gen);  // keep spacings strictly positive
  return u;
}

// DECOSIM_THREADS (default 1) caps worker threads; results are identical for
// any thread count because every realization owns its derived seed and slot.
int thread_count() {
  const char* env = std::getenv("DECOSIM_THREADS");
  if (!env) return 1;
  const int n = std::atoi(env);
  return std::clamp(n, 1, 64);
}

std::vector<double> goe_levels(int size, double delta, std::mt19937_64& gen) {
  // Oversample, unfold with the semicircle CDF, keep the central bulk.
  const int pad = std::max(8, size / 10);
  const int big = size + 2 * pad;
  Eigen::MatrixXd h(big, big);
  std::normal_distribution<double> offdiag(0.0, 1.0);
  std::normal_distribution<double> diag(0.0, std::sqrt(2.0));
  for (int i = 0; i < big; ++i) {
    h(i, i) = diag(gen);
    for (int j = i + 1; j < big; ++j) {
      const double v = offdiag(gen);
      h(i, j) = v;
      h(j, i) = v;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  const Eigen::VectorXd eigs = es.eigenvalues();  // ascending

  const double radius = 2.0 * std::sqrt(static_cast<double>(big));
  auto semicircle_cdf = [&](double x) {
    const double z = std::clamp(x / radius, -1.0, 1.0);
    return 0.5 + (z * std::sqrt(1.0 - z * z) + std::asin(z)) / kPi;
  };
  std::vector<double> unfolded(big);
  for (int i = 0; i < big; ++i)
    unfolded[i] = delta * static_cast<double>(big) * semicircle_cdf(eigs(i));
  std::sort(unfolded.begin(), unfolded.end());
  return {unfolded.begin() + pad, unfolded.begin() + pad + size};
}

}  // namespace

std::string to_string(EnsembleKind kind) {
  switch (kind) {
    case EnsembleKind::WignerSurmise: return "wigner";
    case EnsembleKind::Poisson: return "poisson";
    case EnsembleKind::GOE: return "goe";
  }
  return "?";
}

double wigner_spacing_cdf(double s, double delta) {
  if (s <= 0.0) return 0.0;
  const double z = s / delta;
  return 1.0 - std::exp(-kPi * z * z / 4.0);
}

LevelEnsemble sample_levels(EnsembleKind kind, int size, double delta, std::uint64_t seed) {
  if (size < 2) throw InvalidSize("sample_levels: need size >= 2");
  if (!(delta > 0.0)) throw InvalidSize("sample_levels: need delta > 0");

  LevelEnsemble out;
  out.kind = kind;
  out.delta = delta;
  out.seed = seed;

  auto gen = rng::engine(seed);
  switch (kind) {
    case EnsembleKind::WignerSurmise: {
      std::vector<double> s(size);
      for (auto& v : s) {
        const double u = positive_uniform(gen);
        v = delta * std::sqrt(-(4.0 / kPi) * std::log1p(-u));
      }
      out.levels = cumulative_levels(std::move(s));
      break;
    }
    case EnsembleKind::Poisson: {
      std::vector<double> s(size);
      for (auto& v : s) v = -delta * std::log1p(-positive_uniform(gen));
      out.levels = cumulative_levels(std::move(s));
      break;
    }
    case EnsembleKind::GOE: {
      out.levels = goe_levels(size, delta, gen);
      break;
    }
  }
  for (std::size_t i = 0; i + 1 < out.levels.size(); ++i)
    if (!(out.levels[i] < out.levels[i + 1]))
      throw InvalidSize("sample_levels: degenerate levels sampled");
  return out;
}

std::vector<double> spacings(const LevelEnsemble& ensemble) {
  std::vector<double> s(ensemble.levels.size() - 1);
  for (std::size_t i = 0; i + 1 < ensemble.levels.size(); ++i)
    s[i] = ensemble.levels[i + 1] - ensemble.levels[i];
  return s;
}

CouplingMatrix sample_coupling(int size, std::uint64_t seed) {
  if (size < 2) throw InvalidSize("sample_coupling: need size >= 2");
  CouplingMatrix out;
  out.seed = seed;
  out.q.resize(size, size);

  auto gen = rng::engine(seed);
  std::normal_distribution<double> offdiag(0.0, 1.0);
  std::normal_distribution<double> diag(0.0, std::sqrt(2.0));
  for (int i = 0; i < size; ++i) {
    out.q(i, i) = diag(gen);
    for (int j = i + 1; j < size; ++j) {
      const double v = offdiag(gen);
      out.q(i, j) = v;
      out.q(j, i) = v;
    }
  }
  const double shift = out.q.trace() / static_cast<double>(size);
  for (int i = 0; i < size; ++i) out.q(i, i) -= shift;
  return out;
}

double near_diagonal_mean_sq(const CouplingMatrix& coupling) {
  const int n = static_cast<int>(coupling.q.rows());
  double acc = 0.0;
  for (int i = 0; i + 1 < n; ++i) acc += coupling.q(i, i + 1) * coupling.q(i, i + 1);
  return acc / static_cast<double>(n - 1);
}

std::vector<double> spectral_function(const LevelEnsemble& levels,
                                      const CouplingMatrix& coupling,
                                      const std::vector<double>& grid, double sigma,
                                      bool exclude_diagonal) {
  const int m = static_cast<int>(levels.levels.size());
  if (coupling.q.rows() != m)
    throw InvalidSize("spectral_function: levels and coupling sizes differ");
  if (grid.size() < 2) throw std::invalid_argument("spectral_function: need >= 2 grid points");
  if (!(sigma > 0.0)) throw BroadeningTooSmall("spectral_function: sigma must be > 0");
  double min_step = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    if (!(grid[i] < grid[i + 1]))
      throw std::invalid_argument("spectral_function: grid must be increasing");
    min_step = std::min(min_step, grid[i + 1] - grid[i]);
  }
  if (sigma < min_step)
    throw BroadeningTooSmall("spectral_function: sigma below the grid step");

  const double cutoff = 6.0 * sigma;
  const double lo = grid.front() - cutoff, hi = grid.back() + cutoff;
  const double norm = 1.0 / (sigma * std::sqrt(2.0 * kPi));
  const double weight_scale = kPi / static_cast<double>(m);
  const auto& e = levels.levels;

  std::vector<double> r(grid.size(), 0.0);
  auto deposit = [&](double d, double w) {
    // Gaussian kernel onto the grid points within the 6 sigma window.
    const auto first = std::lower_bound(grid.begin(), grid.end(), d - cutoff);
    for (auto it = first; it != grid.end() && *it <= d + cutoff; ++it) {
      const double z = (d - *it) / sigma;
      r[static_cast<std::size_t>(it - grid.begin())] += w * norm * std::exp(-0.5 * z * z);
    }
  };

  for (int row = 0; row < m; ++row) {
    if (!exclude_diagonal) {
      const double d = 0.0;
      if (d >= lo && d <= hi) deposit(d, weight_scale * coupling.q(row, row) * coupling.q(row, row));
    }
    // Ordered pairs (row, col), col != row, with e_row - e_col inside the
    // kernel-extended grid. Levels are sorted, so the admissible cols form a
    // contiguous index range around row.
    for (int col = row - 1; col >= 0; --col) {
      const double d = e[row] - e[col];  // > 0
      if (d > hi) break;
      if (d >= lo) deposit(d, weight_scale * coupling.q(row, col) * coupling.q(row, col));
    }
    for (int col = row + 1; col < m; ++col) {
      const double d = e[row] - e[col];  // < 0
      if (d < lo) break;
      if (d <= hi) deposit(d, weight_scale * coupling.q(row, col) * coupling.q(row, col));
    }
  }
  return r;
}

SpectralFunctionEstimate estimate_spectral_function(
    const EnsembleParams& params, const std::function<void(int, int)>& progress) {
  if (params.realizations < 1)
    throw InvalidSize("estimate_spectral_function: need >= 1 realization");
  if (params.bins < 2) throw InvalidSize("estimate_spectral_function: need >= 2 bins");
  if (!(params.grid_max > 0.0))
    throw std::invalid_argument("estimate_spectral_function: grid_max must be > 0");

  SpectralFunctionEstimate est;
  est.sigma = params.sigma;
  est.delta = params.delta;
  est.diagonal_excluded = params.exclude_diagonal;
  est.realizations = params.realizations;
  est.omega.resize(params.bins);
  for (int i = 0; i < params.bins; ++i)
    est.omega[i] = params.grid_max * params.delta * static_cast<double>(i) /
                   static_cast<double>(params.bins - 1);

  std::vector<double> qbar(params.realizations), corr(params.realizations);
  est.realization_curves.assign(params.realizations, {});

  std::mutex progress_mutex;
  std::atomic<int> completed{0};
  auto run_realization = [&](int r) {
    const auto levels = sample_levels(params.kind, params.size, params.delta,
                                      rng::derive_seed(params.seed, 2 * r));
    const auto coupling =
        sample_coupling(params.size, rng::derive_seed(params.seed, 2 * r + 1));
    est.realization_curves[r] =
        spectral_function(levels, coupling, est.omega, params.sigma, params.exclude_diagonal);
    qbar[r] = near_diagonal_mean_sq(coupling);

    const auto s = spacings(levels);
    std::vector<double> qsq(s.size());
    for (std::size_t i = 0; i < s.size(); ++i)
      qsq[i] = coupling.q(i, i + 1) * coupling.q(i, i + 1);
    corr[r] = stats::pearson(s, qsq);
    if (progress) {
      const std::lock_guard<std::mutex> lock(progress_mutex);
      progress(++completed, params.realizations);
    }
  };

  const int workers = std::min(thread_count(), params.realizations);
  if (workers <= 1) {
    for (int r = 0; r < params.realizations; ++r) run_realization(r);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (int r = next.fetch_add(1); r < params.realizations; r = next.fetch_add(1))
          run_realization(r);
      });
    for (auto& t : pool) t.join();
  }

  est.r.assign(est.omega.size(), 0.0);
  est.r_sem.assign(est.omega.size(), 0.0);
  for (std::size_t b = 0; b < est.omega.size(); ++b) {
    std::vector<double> column(params.realizations);
    for (int r = 0; r < params.realizations; ++r) column[r] = est.realization_curves[r][b];
    const auto ms = stats::mean_sem(column);
    est.r[b] = ms.mean;
    est.r_sem[b] = ms.sem;
  }
  est.mean_coupling_sq = stats::mean_sem(qbar).mean;
  est.correlation_q_spacing = stats::mean_sem(corr).mean;
  return est;
}

RateFromSpectrum dephasing_rate_from_spectrum(
    const SpectralFunctionEstimate& estimate,
    std::optional<std::pair<double, double>> window) {
  const auto [w_lo, w_hi] = window.value_or(
      std::make_pair(2.0 * estimate.sigma, estimate.delta / 4.0));
  if (!(w_lo < w_hi)) throw WindowOutsideGrid("dephasing_rate_from_spectrum: empty window");
  if (estimate.omega.empty() || w_lo < estimate.omega.front() - 1e-12 ||
      w_hi > estimate.omega.back() + 1e-12)
    throw WindowOutsideGrid("dephasing_rate_from_spectrum: window outside the grid");

  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < estimate.omega.size(); ++i)
    if (estimate.omega[i] >= w_lo && estimate.omega[i] <= w_hi) idx.push_back(i);
  if (idx.size() < 3)
    throw WindowOutsideGrid("dephasing_rate_from_spectrum: fewer than 3 bins in window");

  std::vector<double> x(idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k) x[k] = estimate.omega[idx[k]];

  // Fit each realization, then aggregate: neighbouring bins share broadened
  // pairs, so the realization scatter is the honest error estimate.
  std::vector<double> slopes, intercepts;
  if (!estimate.realization_curves.empty()) {
    for (const auto& curve : estimate.realization_curves) {
      std::vector<double> y(idx.size());
      for (std::size_t k = 0; k < idx.size(); ++k) y[k] = curve[idx[k]];
      const auto fit = stats::fit_line(x, y);
      slopes.push_back(fit.slope);
      intercepts.push_back(fit.intercept);
    }
  } else {
    std::vector<double> y(idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k) y[k] = estimate.r[idx[k]];
    const auto fit = stats::fit_line(x, y);
    slopes.push_back(fit.slope);
    intercepts.push_back(fit.intercept);
  }

  const auto slope_ms = stats::mean_sem(slopes);
  const auto intercept_ms = stats::mean_sem(intercepts);
  RateFromSpectrum out;
  out.slope = slope_ms.mean;
  out.slope_sem = slope_ms.sem;
  out.intercept = intercept_ms.mean;
  out.intercept_sem = intercept_ms.sem;
  out.gamma = out.intercept / 2.0;
  out.gamma_sem = out.intercept_sem / 2.0;
  out.window = {w_lo, w_hi};
  return out;
}

}  // namespace decosim::chaos
