#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <vector>

namespace decosim::mastereq {

// hbar = k_B = 1 throughout.

using Potential = std::function<double(double)>;

// Density matrix rho(x, x') on a uniform position grid; continuum
// normalization sum(diag) * dx = 1.
struct GridDensityMatrix {
  Eigen::VectorXd x;
  Eigen::MatrixXcd rho;

  double dx() const;
  double trace_defect() const;        // |Tr rho * dx - 1|
  double hermiticity_defect() const;  // max |rho - rho^dagger|
  double min_eigenvalue() const;      // of rho * dx
  double purity() const;              // Tr (rho dx)^2

  static GridDensityMatrix from_wavefunction(const Eigen::VectorXcd& psi,
                                             const Eigen::VectorXd& x);
};

// Normalized superposition of two Gaussian packets centred at +-separation/2.
GridDensityMatrix gaussian_pair_state(int points, double lo, double hi, double separation,
                                      double sigma);

// Closed-form pure-decoherence propagation:
//   rho(x, x', t) = rho0 * exp(-i (V(x) - V(x')) t) * exp(-gamma (x - x')^2 t).
GridDensityMatrix evolve_pure_decoherence_exact(const GridDensityMatrix& rho0,
                                                const Potential& potential, double gamma,
                                                double t);

// Fixed-step RK4 on d rho/dt = -i [V(X), rho] - gamma [X, [X, rho]] in the
// position representation (X diagonal there). Stability heuristic:
// dt * (max|V| + gamma * span(x)^2) < 0.1, else StepTooLarge.
GridDensityMatrix evolve_pure_decoherence_numeric(const GridDensityMatrix& rho0,
                                                  const Potential& potential, double gamma,
                                                  double t, double dt);

// Truncated ladder-operator X and P at a reference mass/frequency.
// [X, P] = i on the leading (n-1) x (n-1) block; truncation breaks only the
// last row/column.
struct OscillatorOperators {
  int n = 0;
  double mass = 1.0;
  double omega = 1.0;
  Eigen::MatrixXcd X, P;

  static OscillatorOperators make(int n, double mass, double omega);
};

// X eigenbasis (numerical position representation of the truncated space).
struct XEigenBasis {
  Eigen::VectorXd x;   // eigenvalues, ascending
  Eigen::MatrixXd u;   // columns are eigenvectors; rho_pos = u^T rho u
};
XEigenBasis x_eigenbasis(const OscillatorOperators& ops);

Eigen::VectorXcd coherent_state(int n, std::complex<double> alpha);
Eigen::VectorXcd cat_state(int n, std::complex<double> alpha);  // |a> + |-a>, normalized

struct CLParams {
  double mass = 1.0;
  double eta = 0.0;          // friction constant
  double temperature = 1.0;
  Potential potential;       // nullptr means V = 0
};

struct CLOptions {
  double dt = 1e-3;
  double t_final = 1.0;
  int stride = 10;                // record every `stride` steps
  double leak_threshold = 1e-6;   // top-two-level population monitor
};

struct CLSample {
  double t = 0.0;
  Eigen::MatrixXcd rho;
  double trace_dev = 0.0;
  double herm_dev = 0.0;
  double min_eig = 0.0;
  double leak = 0.0;
  double purity = 0.0;
};

struct CLTrajectory {
  std::vector<CLSample> samples;
  double max_trace_dev = 0.0;
  double max_herm_dev = 0.0;
  double max_leak = 0.0;
  double min_eigenvalue = 0.0;
};

// Fixed-step RK4 on the Caldeira-Leggett generator
//   d rho/dt = -i [H, rho] - i eta [X, {P, rho}] - 2 M eta T [X, [X, rho]],
// H = P^2/2M + V(X). Trace and Hermiticity are preserved by the generator;
// the recorded drifts bound integrator error. Negative eigenvalues are
// logged, not failed: the generator is not completely positive. Throws
// TruncationLeak when the top-two-level population exceeds the threshold.
CLTrajectory evolve_caldeira_leggett(const Eigen::MatrixXcd& rho0,
                                     const OscillatorOperators& ops, const CLParams& params,
                                     const CLOptions& opts);

// V(X) built through the X eigendecomposition; zero matrix when V is null.
Eigen::MatrixXcd potential_matrix(const OscillatorOperators& ops, const Potential& potential);

}  // namespace decosim::mastereq
