#include "decosim/dephasing.hpp"

#include <cmath>
#include <limits>

#include "decosim/errors.hpp"
#include "decosim/quadrature.hpp"
#include "decosim/stats.hpp"

namespace decosim::dephasing {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
constexpr double kTwoPi = 6.283185307179586476925;

double weight_value(const SpectralWeight& w, double omega) { return w(omega); }

// Quadrature of J(w) * f(w) over the support with oscillation panels for
// angular rate t.
template <typename F>
double support_integral(const SpectralWeight& w, double t, const F& integrand) {
  if (w.is_zero()) return 0.0;
  quad::Options opt;
  auto res = quad::integrate_oscillatory(integrand, w.omega_min(), w.omega_c(), t, opt);
  if (!res.converged)
    throw QuadratureFailure("dephasing quadrature did not reach the requested tolerance");
  return res.value;
}

}  // namespace

QubitAmplitudes::QubitAmplitudes(std::complex<double> p, std::complex<double> m)
    : plus(p), minus(m) {
  const double norm = std::norm(plus) + std::norm(minus);
  if (std::abs(norm - 1.0) > 1e-12)
    throw std::invalid_argument("QubitAmplitudes: |psi_+|^2 + |psi_-|^2 must be 1");
}

QubitAmplitudes QubitAmplitudes::normalized(std::complex<double> p, std::complex<double> m) {
  const double norm = std::sqrt(std::norm(p) + std::norm(m));
  if (norm == 0.0) throw std::invalid_argument("QubitAmplitudes: zero vector");
  return QubitAmplitudes(p / norm, m / norm);
}

double QubitDensityMatrix::trace_defect() const { return std::abs(rho.trace() - 1.0); }

double QubitDensityMatrix::hermiticity_defect() const {
  return (rho - rho.adjoint()).cwiseAbs().maxCoeff();
}

double QubitDensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(rho);
  return es.eigenvalues().minCoeff();
}

double QubitDensityMatrix::purity() const { return (rho * rho).trace().real(); }

double gamma_t(const SpectralWeight& weight, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("gamma_t: t must be >= 0");
  if (t == 0.0 || weight.is_zero()) return 0.0;
  // J (1 - cos wt) ~ w^(alpha + 2) near 0: integrable for every kind here,
  // but keep the analytic gate explicit.
  if (weight.omega_min() == 0.0 && weight.infrared_exponent() + 2.0 <= -1.0)
    throw DivergentIntegral("gamma_t: regularized integrand diverges");
  // 1 - cos(wt) computed as 2 sin^2(wt/2): no cancellation where the
  // singular kinds amplify the infrared region.
  const double value = support_integral(weight, t, [&](double w) {
    const double s = std::sin(0.5 * w * t);
    return weight_value(weight, w) * 2.0 * s * s;
  });
  return 4.0 * value;
}

double global_phase(const SpectralWeight& weight, double t) {
  if (weight.is_zero()) return 0.0;
  if (!moment_converges(weight, 1))
    throw DivergentIntegral("global_phase: dressing energy E_g diverges");
  const double dressing = moment(weight, 1);
  const double sine_part = support_integral(
      weight, t, [&](double w) { return weight_value(weight, w) * std::sin(w * t); });
  return t * dressing + sine_part;
}

QubitDensityMatrix reduced_state(const QubitAmplitudes& psi, const SpectralWeight& weight,
                                 double t) {
  const double decay = std::exp(-gamma_t(weight, t));
  QubitDensityMatrix out;
  const std::complex<double> coherence = psi.plus * std::conj(psi.minus) * decay;
  out.rho(0, 0) = std::norm(psi.plus);
  out.rho(1, 1) = std::norm(psi.minus);
  out.rho(0, 1) = coherence;
  out.rho(1, 0) = std::conj(coherence);
  return out;
}

GroundOverlap ground_overlap(const SpectralWeight& weight) {
  GroundOverlap out;
  const auto cls = classify(weight);
  if (cls.label == StabilityClass::Label::VanHoveSingular) {
    out.value = 0.0;
    out.disjoint = true;
    return out;
  }
  out.value = std::exp(-cls.norm_sq);
  return out;
}

double coherent_overlap(const SpectralWeight& weight_f, const SpectralWeight& weight_g) {
  if (!moment_converges(weight_f, 0) || !moment_converges(weight_g, 0))
    throw DivergentIntegral("coherent_overlap: both weights must be Stable");
  // ||f - g||^2 = ||f||^2 + ||g||^2 - 2 <f, g>, cross term over the support
  // intersection.
  const double norm_f = weight_f.is_zero() ? 0.0 : moment(weight_f, 0);
  const double norm_g = weight_g.is_zero() ? 0.0 : moment(weight_g, 0);
  double cross = 0.0;
  if (!weight_f.is_zero() && !weight_g.is_zero()) {
    const double lo = std::max(weight_f.omega_min(), weight_g.omega_min());
    const double hi = std::min(weight_f.omega_c(), weight_g.omega_c());
    if (lo < hi) {
      quad::Options opt;
      auto res = quad::integrate(
          [&](double w) { return std::sqrt(weight_f(w) * weight_g(w)); }, lo, hi, opt);
      if (!res.converged)
        throw QuadratureFailure("coherent_overlap quadrature did not converge");
      cross = res.value;
    }
  }
  const double dist_sq = std::max(0.0, norm_f + norm_g - 2.0 * cross);
  return std::exp(-dist_sq);
}

double false_decoherence_bound(const SpectralWeight& weight) {
  const auto cls = classify(weight);
  if (cls.label == StabilityClass::Label::VanHoveSingular)
    return std::numeric_limits<double>::infinity();
  return 8.0 * cls.norm_sq;
}

RateEstimate asymptotic_rate(const SpectralWeight& weight, std::pair<double, double> window,
                             int samples) {
  const auto [t1, t2] = window;
  if (!(t1 > 0.0) || !(t2 > t1))
    throw WindowTooNarrow("asymptotic_rate: need t2 > t1 > 0");
  if (samples < 8) throw WindowTooNarrow("asymptotic_rate: need >= 8 samples");

  std::vector<double> ts(samples), gs(samples);
  for (int i = 0; i < samples; ++i) {
    ts[i] = t1 + (t2 - t1) * static_cast<double>(i) / static_cast<double>(samples - 1);
    gs[i] = gamma_t(weight, ts[i]);
  }
  const auto fit = stats::fit_line(ts, gs);

  RateEstimate out;
  out.slope = fit.slope;
  out.intercept = fit.intercept;
  out.residual = fit.residual_rms;
  out.window = window;
  out.samples = samples;
  if (auto lim = weight.limit_w2_j()) out.analytic_candidate = kTwoPi * *lim;
  return out;
}

DephasingTrajectory make_trajectory(const QubitAmplitudes& psi, const SpectralWeight& weight,
                                    std::vector<double> times) {
  if (times.empty()) throw std::invalid_argument("make_trajectory: empty time grid");
  for (std::size_t i = 0; i + 1 < times.size(); ++i)
    if (!(times[i] < times[i + 1]))
      throw std::invalid_argument("make_trajectory: times must be strictly increasing");
  if (times.front() < 0.0) throw std::invalid_argument("make_trajectory: negative time");

  DephasingTrajectory out;
  out.times = std::move(times);
  out.phase_valid = moment_converges(weight, 1);
  const double bound = false_decoherence_bound(weight);

  const std::size_t n = out.times.size();
  out.gamma.resize(n);
  out.phase.resize(n);
  out.states.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = out.times[i];
    const double g = gamma_t(weight, t);
    if (g < 0.0 || g > bound * (1.0 + 1e-9))
      throw QuadratureFailure("trajectory: gamma_t outside [0, 8||g||^2]");
    out.gamma[i] = g;
    out.phase[i] = out.phase_valid ? global_phase(weight, t) : kNan;

    const double decay = std::exp(-g);
    const std::complex<double> coherence = psi.plus * std::conj(psi.minus) * decay;
    out.states[i].rho(0, 0) = std::norm(psi.plus);
    out.states[i].rho(1, 1) = std::norm(psi.minus);
    out.states[i].rho(0, 1) = coherence;
    out.states[i].rho(1, 0) = std::conj(coherence);
  }
  return out;
}

}  // namespace decosim::dephasing
