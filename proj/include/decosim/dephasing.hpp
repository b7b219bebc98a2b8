#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include "decosim/spectral_weight.hpp"

namespace decosim::dephasing {

// Exactly solvable spin-boson pure dephasing. Everything derives from the
// decoherence functional
//   gamma_t = 2 ||g - g_t||^2 = 4 int J(w) (1 - cos(w t)) dw
// and the dressing-phase pieces t E_g + int J(w) sin(w t) dw of the exact
// time evolution; no bath operators are ever represented.

struct QubitAmplitudes {
  std::complex<double> plus{1.0, 0.0};
  std::complex<double> minus{0.0, 0.0};

  // Validates |plus|^2 + |minus|^2 = 1 within 1e-12.
  QubitAmplitudes(std::complex<double> plus, std::complex<double> minus);
  static QubitAmplitudes normalized(std::complex<double> plus, std::complex<double> minus);
};

struct QubitDensityMatrix {
  // Row/column 0 is the sigma_3 = +1 eigenstate.
  Eigen::Matrix2cd rho = Eigen::Matrix2cd::Zero();

  double trace_defect() const;
  double hermiticity_defect() const;
  double min_eigenvalue() const;
  double purity() const;  // Tr rho^2
};

// gamma_t >= 0; exact 0 at t = 0. Admits VanHoveSingular weights: the
// (1 - cos) factor regularizes an w^-2 infrared singularity.
double gamma_t(const SpectralWeight& weight, double t);

// t E_g + int J(w) sin(w t) dw. Requires finite dressing energy.
double global_phase(const SpectralWeight& weight, double t);

// Diagonal fixed at (|psi_+|^2, |psi_-|^2); off-diagonal damped by e^{-gamma_t}.
QubitDensityMatrix reduced_state(const QubitAmplitudes& psi, const SpectralWeight& weight,
                                 double t);

struct GroundOverlap {
  double value = 1.0;
  // Set when ||g|| = inf: the dressed states leave the bare Hilbert space and
  // the overlap is reported as its degenerate limit 0.
  bool disjoint = false;
};

// |<bare vacuum | dressed ground state>|^2 = exp(-||g||^2).
GroundOverlap ground_overlap(const SpectralWeight& weight);

// |<W(f) vac, W(g) vac>|^2 = exp(-||f - g||^2) with f = sqrt(J_f), g = sqrt(J_g).
double coherent_overlap(const SpectralWeight& weight_f, const SpectralWeight& weight_g);

// 8 ||g||^2, the saturation ceiling of gamma_t; +inf for singular weights.
double false_decoherence_bound(const SpectralWeight& weight);

struct RateEstimate {
  double slope = 0.0;
  double intercept = 0.0;
  std::pair<double, double> window{0.0, 0.0};
  double residual = 0.0;  // rms of fit residuals
  // 2 pi lim_{w->0} w^2 J(w) where the kind has an analytic limit.
  std::optional<double> analytic_candidate;
  int samples = 0;
};

// Least-squares line through (t, gamma_t) over `samples` uniform points in
// the window. Large residual (not an error) signals nonlinear growth.
RateEstimate asymptotic_rate(const SpectralWeight& weight, std::pair<double, double> window,
                             int samples);

struct DephasingTrajectory {
  std::vector<double> times;
  std::vector<double> gamma;
  std::vector<double> phase;  // NaN-filled when E_g diverges
  std::vector<QubitDensityMatrix> states;
  bool phase_valid = true;
};

DephasingTrajectory make_trajectory(const QubitAmplitudes& psi, const SpectralWeight& weight,
                                    std::vector<double> times);

}  // namespace decosim::dephasing
