#include "decosim/master_equation.hpp"

#include <cmath>
#include <limits>

#include "decosim/errors.hpp"

namespace decosim::mastereq {

namespace {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;
using namespace std::complex_literals;

void check_uniform_grid(const VectorXd& x) {
  if (x.size() < 2) throw GridMismatch("grid needs >= 2 points");
  const double step = x(1) - x(0);
  if (!(step > 0.0)) throw GridMismatch("grid must be increasing");
  for (Eigen::Index i = 1; i + 1 < x.size(); ++i)
    if (std::abs((x(i + 1) - x(i)) - step) > 1e-9 * std::abs(step))
      throw GridMismatch("grid must be uniform");
}

VectorXd sample_potential(const Potential& potential, const VectorXd& x) {
  VectorXd v = VectorXd::Zero(x.size());
  if (potential)
    for (Eigen::Index i = 0; i < x.size(); ++i) v(i) = potential(x(i));
  return v;
}

}  // namespace

double GridDensityMatrix::dx() const { return x(1) - x(0); }

double GridDensityMatrix::trace_defect() const {
  return std::abs(rho.trace().real() * dx() - 1.0) + std::abs(rho.trace().imag() * dx());
}

double GridDensityMatrix::hermiticity_defect() const {
  return (rho - rho.adjoint()).cwiseAbs().maxCoeff();
}

double GridDensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(rho * dx());
  return es.eigenvalues().minCoeff();
}

double GridDensityMatrix::purity() const {
  const MatrixXcd s = rho * dx();
  return (s * s).trace().real();
}

GridDensityMatrix GridDensityMatrix::from_wavefunction(const VectorXcd& psi,
                                                       const VectorXd& x) {
  if (psi.size() != x.size()) throw GridMismatch("psi and grid size differ");
  check_uniform_grid(x);
  GridDensityMatrix out;
  out.x = x;
  const double dx = x(1) - x(0);
  const double norm_sq = psi.squaredNorm() * dx;
  if (!(norm_sq > 0.0)) throw std::invalid_argument("from_wavefunction: zero state");
  out.rho = (psi * psi.adjoint()) / norm_sq;
  return out;
}

GridDensityMatrix gaussian_pair_state(int points, double lo, double hi, double separation,
                                      double sigma) {
  if (points < 2) throw GridMismatch("gaussian_pair_state: points < 2");
  if (!(hi > lo) || !(sigma > 0.0))
    throw std::invalid_argument("gaussian_pair_state: bad geometry");
  VectorXd x(points);
  for (int i = 0; i < points; ++i)
    x(i) = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
  VectorXcd psi(points);
  const double a = separation / 2.0;
  for (int i = 0; i < points; ++i) {
    const double dplus = x(i) - a, dminus = x(i) + a;
    psi(i) = std::exp(-dplus * dplus / (4.0 * sigma * sigma)) +
             std::exp(-dminus * dminus / (4.0 * sigma * sigma));
  }
  return GridDensityMatrix::from_wavefunction(psi, x);
}

GridDensityMatrix evolve_pure_decoherence_exact(const GridDensityMatrix& rho0,
                                                const Potential& potential, double gamma,
                                                double t) {
  if (!(gamma >= 0.0) || !(t >= 0.0))
    throw std::invalid_argument("evolve_pure_decoherence_exact: gamma, t must be >= 0");
  check_uniform_grid(rho0.x);
  const VectorXd v = sample_potential(potential, rho0.x);

  GridDensityMatrix out;
  out.x = rho0.x;
  out.rho = rho0.rho;
  const Eigen::Index n = rho0.x.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double dv = v(i) - v(j);
      const double dxij = rho0.x(i) - rho0.x(j);
      out.rho(i, j) *= std::exp(std::complex<double>(-gamma * dxij * dxij * t, -dv * t));
    }
  }
  return out;
}

GridDensityMatrix evolve_pure_decoherence_numeric(const GridDensityMatrix& rho0,
                                                  const Potential& potential, double gamma,
                                                  double t, double dt) {
  if (!(gamma >= 0.0) || !(t >= 0.0) || !(dt > 0.0))
    throw std::invalid_argument("evolve_pure_decoherence_numeric: bad gamma/t/dt");
  check_uniform_grid(rho0.x);
  const VectorXd v = sample_potential(potential, rho0.x);

  const double span = rho0.x(rho0.x.size() - 1) - rho0.x(0);
  const double vmax = v.cwiseAbs().maxCoeff();
  if (dt * (vmax + gamma * span * span) >= 0.1)
    throw StepTooLarge("evolve_pure_decoherence_numeric: dt * (max|V| + gamma span^2) >= 0.1");

  // In the position representation both commutators are diagonal in (x, x'):
  // d rho_ij/dt = lambda_ij rho_ij with
  // lambda_ij = -i (V_i - V_j) - gamma (x_i - x_j)^2.
  const Eigen::Index n = rho0.x.size();
  MatrixXcd lambda(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const double dxij = rho0.x(i) - rho0.x(j);
      lambda(i, j) = std::complex<double>(-gamma * dxij * dxij, -(v(i) - v(j)));
    }

  GridDensityMatrix out;
  out.x = rho0.x;
  out.rho = rho0.rho;

  const long steps = std::lround(t / dt);
  if (std::abs(steps * dt - t) > 1e-9 * std::max(1.0, t))
    throw std::invalid_argument("evolve_pure_decoherence_numeric: t must be a multiple of dt");
  MatrixXcd k1(n, n), k2(n, n), k3(n, n), k4(n, n);
  for (long s = 0; s < steps; ++s) {
    k1 = lambda.cwiseProduct(out.rho);
    k2 = lambda.cwiseProduct(out.rho + (dt / 2.0) * k1);
    k3 = lambda.cwiseProduct(out.rho + (dt / 2.0) * k2);
    k4 = lambda.cwiseProduct(out.rho + dt * k3);
    out.rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return out;
}

OscillatorOperators OscillatorOperators::make(int n, double mass, double omega) {
  if (n < 2) throw std::invalid_argument("OscillatorOperators: n < 2");
  if (!(mass > 0.0) || !(omega > 0.0))
    throw std::invalid_argument("OscillatorOperators: mass, omega must be > 0");
  OscillatorOperators ops;
  ops.n = n;
  ops.mass = mass;
  ops.omega = omega;

  MatrixXcd a = MatrixXcd::Zero(n, n);
  for (int k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  const MatrixXcd adag = a.adjoint();

  const double x0 = std::sqrt(1.0 / (2.0 * mass * omega));
  const double p0 = std::sqrt(mass * omega / 2.0);
  ops.X = x0 * (a + adag);
  ops.P = 1.0i * p0 * (adag - a);
  return ops;
}

XEigenBasis x_eigenbasis(const OscillatorOperators& ops) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(ops.X.real());
  XEigenBasis out;
  out.x = es.eigenvalues();
  out.u = es.eigenvectors();
  return out;
}

VectorXcd coherent_state(int n, std::complex<double> alpha) {
  VectorXcd psi(n);
  // c_k = e^{-|a|^2/2} a^k / sqrt(k!), truncated then renormalized.
  psi(0) = std::exp(-0.5 * std::norm(alpha));
  for (int k = 1; k < n; ++k) psi(k) = psi(k - 1) * alpha / std::sqrt(static_cast<double>(k));
  psi.normalize();
  return psi;
}

VectorXcd cat_state(int n, std::complex<double> alpha) {
  VectorXcd psi = coherent_state(n, alpha) + coherent_state(n, -alpha);
  const double norm = psi.norm();
  if (!(norm > 0.0)) throw std::invalid_argument("cat_state: degenerate alpha");
  return psi / norm;
}

Eigen::MatrixXcd potential_matrix(const OscillatorOperators& ops, const Potential& potential) {
  if (!potential) return MatrixXcd::Zero(ops.n, ops.n);
  const auto basis = x_eigenbasis(ops);
  VectorXd v(ops.n);
  for (int i = 0; i < ops.n; ++i) v(i) = potential(basis.x(i));
  const MatrixXd vx = basis.u * v.asDiagonal() * basis.u.transpose();
  return vx.cast<std::complex<double>>();
}

CLTrajectory evolve_caldeira_leggett(const MatrixXcd& rho0, const OscillatorOperators& ops,
                                     const CLParams& params, const CLOptions& opts) {
  const int n = ops.n;
  if (rho0.rows() != n || rho0.cols() != n)
    throw GridMismatch("evolve_caldeira_leggett: rho0 does not match operators");
  if (!(params.mass > 0.0) || !(params.eta >= 0.0) || !(params.temperature > 0.0))
    throw std::invalid_argument("evolve_caldeira_leggett: need M > 0, eta >= 0, T > 0");
  if (!(opts.dt > 0.0) || !(opts.t_final >= 0.0) || opts.stride < 1)
    throw std::invalid_argument("evolve_caldeira_leggett: bad dt/t_final/stride");

  const MatrixXcd& X = ops.X;
  const MatrixXcd& P = ops.P;
  const MatrixXcd H =
      (P * P) / (2.0 * params.mass) + potential_matrix(ops, params.potential);
  const double diffusion = 2.0 * params.mass * params.eta * params.temperature;

  // Superoperator norm bound for the RK4 stability pre-check.
  const double h_norm = H.operatorNorm();
  const double x_norm = X.operatorNorm();
  const double p_norm = P.operatorNorm();
  const double gen_bound =
      2.0 * h_norm + 4.0 * params.eta * x_norm * p_norm + 8.0 * diffusion * x_norm * x_norm;
  if (opts.dt * gen_bound >= 2.5)
    throw StepTooLarge("evolve_caldeira_leggett: dt exceeds the RK4 stability bound");

  auto rhs = [&](const MatrixXcd& rho) -> MatrixXcd {
    MatrixXcd out = -1.0i * (H * rho - rho * H);
    if (params.eta > 0.0) {
      const MatrixXcd anti = P * rho + rho * P;
      out -= 1.0i * params.eta * (X * anti - anti * X);
      const MatrixXcd xc = X * rho - rho * X;
      out -= diffusion * (X * xc - xc * X);
    }
    return out;
  };

  const long steps = std::lround(opts.t_final / opts.dt);
  CLTrajectory traj;
  traj.min_eigenvalue = std::numeric_limits<double>::infinity();

  MatrixXcd rho = rho0;
  auto record = [&](long step) {
    CLSample s;
    s.t = static_cast<double>(step) * opts.dt;
    s.rho = rho;
    s.trace_dev = std::abs(rho.trace() - 1.0);
    s.herm_dev = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    s.leak = rho(n - 1, n - 1).real() + rho(n - 2, n - 2).real();
    s.purity = (rho * rho).trace().real();
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(rho);
    s.min_eig = es.eigenvalues().minCoeff();
    traj.max_trace_dev = std::max(traj.max_trace_dev, s.trace_dev);
    traj.max_herm_dev = std::max(traj.max_herm_dev, s.herm_dev);
    traj.max_leak = std::max(traj.max_leak, s.leak);
    traj.min_eigenvalue = std::min(traj.min_eigenvalue, s.min_eig);
    traj.samples.push_back(std::move(s));
    if (traj.max_leak > opts.leak_threshold)
      throw TruncationLeak("evolve_caldeira_leggett: top-two-level population " +
                           std::to_string(traj.max_leak) + " exceeds threshold");
  };

  record(0);
  for (long s = 1; s <= steps; ++s) {
    const MatrixXcd k1 = rhs(rho);
    const MatrixXcd k2 = rhs(rho + (opts.dt / 2.0) * k1);
    const MatrixXcd k3 = rhs(rho + (opts.dt / 2.0) * k2);
    const MatrixXcd k4 = rhs(rho + opts.dt * k3);
    rho += (opts.dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    // Cheap per-step leak monitor; full diagnostics at stride points.
    const double leak = rho(n - 1, n - 1).real() + rho(n - 2, n - 2).real();
    traj.max_leak = std::max(traj.max_leak, leak);
    if (traj.max_leak > opts.leak_threshold)
      throw TruncationLeak("evolve_caldeira_leggett: top-two-level population " +
                           std::to_string(traj.max_leak) + " exceeds threshold");
    if (s % opts.stride == 0 || s == steps) record(s);
  }
  return traj;
}

}  // namespace decosim::mastereq
