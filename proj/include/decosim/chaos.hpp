#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace decosim::chaos {

// Chaotic-vs-regular environment spectra: nearest-neighbour level statistics,
// random Hermitian traceless couplings, and the broadened spectral function
//   R(w) = (pi/M) sum_{m,m'} |Q_{mm'}|^2 delta_sigma((e_m - e_{m'}) - w)
// whose w -> 0 limit sets the pure dephasing rate gamma = R(0)/2.

enum class EnsembleKind { WignerSurmise, Poisson, GOE };

std::string to_string(EnsembleKind kind);

struct LevelEnsemble {
  std::vector<double> levels;  // strictly increasing
  double delta = 1.0;          // target mean nearest-neighbour spacing
  EnsembleKind kind = EnsembleKind::WignerSurmise;
  std::uint64_t seed = 0;
};

// WignerSurmise: i.i.d. spacings via the inverse CDF
//   s = delta * sqrt(-(4/pi) ln(1 - u))
// of the normalized surmise p(s) = (pi s / 2 delta^2) exp(-pi s^2 / 4 delta^2).
// Poisson: exponential spacings of mean delta. GOE: eigenvalues of a real
// symmetric Gaussian matrix, unfolded with the semicircle CDF to local mean
// spacing delta (central bulk kept).
LevelEnsemble sample_levels(EnsembleKind kind, int size, double delta, std::uint64_t seed);

std::vector<double> spacings(const LevelEnsemble& ensemble);

// Normalized Wigner surmise CDF at spacing s (mean delta).
double wigner_spacing_cdf(double s, double delta);

struct CouplingMatrix {
  Eigen::MatrixXd q;  // real symmetric, trace-projected to zero
  std::uint64_t seed = 0;
};

// Independent Gaussian entries: off-diagonal variance 1, diagonal variance 2.
CouplingMatrix sample_coupling(int size, std::uint64_t seed);

// Mean |Q_{m,m+1}|^2 over the first off-diagonal (the Q-bar^2 of the
// low-frequency surmise estimate).
double near_diagonal_mean_sq(const CouplingMatrix& coupling);

// Single-realization broadened spectral function on `grid`; the delta is
// replaced by a Gaussian of width sigma. Throws BroadeningTooSmall when
// sigma is below the grid step.
std::vector<double> spectral_function(const LevelEnsemble& levels,
                                      const CouplingMatrix& coupling,
                                      const std::vector<double>& grid, double sigma,
                                      bool exclude_diagonal);

struct SpectralFunctionEstimate {
  std::vector<double> omega;
  std::vector<double> r;      // ensemble mean per bin
  std::vector<double> r_sem;  // per-bin standard error over realizations
  double sigma = 0.0;
  bool diagonal_excluded = true;
  double delta = 1.0;
  int realizations = 0;
  double mean_coupling_sq = 0.0;       // measured Q-bar^2
  double correlation_q_spacing = 0.0;  // mean Pearson corr(|Q_{m,m+1}|^2, s_m)
  // Per-realization curves; kept so rate fits can propagate errors through
  // the realization scatter (bins are kernel-correlated).
  std::vector<std::vector<double>> realization_curves;
};

struct EnsembleParams {
  EnsembleKind kind = EnsembleKind::WignerSurmise;
  int size = 1000;          // M
  int realizations = 32;
  double delta = 1.0;
  double sigma = 0.05;
  std::uint64_t seed = 0;
  double grid_max = 3.0;    // in units of delta
  int bins = 120;
  bool exclude_diagonal = true;
};

// Averages spectral_function over independent (levels, Q) realizations with
// per-realization seeds derived from the master seed (levels: stream 2r,
// coupling: stream 2r+1).
SpectralFunctionEstimate estimate_spectral_function(
    const EnsembleParams& params, const std::function<void(int, int)>& progress = {});

struct RateFromSpectrum {
  double gamma = 0.0;
  double gamma_sem = 0.0;
  double slope = 0.0;
  double slope_sem = 0.0;
  double intercept = 0.0;
  double intercept_sem = 0.0;
  std::pair<double, double> window{0.0, 0.0};
};

// Linear fit R ~ a + b w on the window (default [2 sigma, delta/4]);
// gamma = a/2. Parameter errors come from the scatter of per-realization
// fits. Throws WindowOutsideGrid when the window misses the grid.
RateFromSpectrum dephasing_rate_from_spectrum(
    const SpectralFunctionEstimate& estimate,
    std::optional<std::pair<double, double>> window = std::nullopt);

}  // namespace decosim::chaos
