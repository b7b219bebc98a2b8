#include "decosim/spectral_weight.hpp"

#include <cmath>
#include <limits>

#include "decosim/errors.hpp"
#include "decosim/quadrature.hpp"

namespace decosim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTwoPi = 6.283185307179586476925;

void check_support(double amplitude, double omega_min, double omega_c) {
  if (!std::isfinite(amplitude) || amplitude < 0.0)
    throw InvalidWeight("amplitude must be finite and >= 0");
  if (!std::isfinite(omega_min) || omega_min < 0.0)
    throw InvalidWeight("omega_min must be finite and >= 0");
  if (!std::isfinite(omega_c) || !(omega_c > omega_min))
    throw InvalidWeight("omega_c must be finite and > omega_min");
}

}  // namespace

std::string to_string(WeightKind kind) {
  switch (kind) {
    case WeightKind::PowerLaw: return "power-law";
    case WeightKind::Flat: return "flat";
    case WeightKind::Ohmic: return "ohmic";
    case WeightKind::InverseSquare: return "inverse-square";
    case WeightKind::Tabulated: return "tabulated";
  }
  return "?";
}

SpectralWeight::SpectralWeight(WeightKind kind, double amplitude, double kappa,
                               double omega_min, double omega_c,
                               std::shared_ptr<const MonotoneCubic> table)
    : kind_(kind),
      amplitude_(amplitude),
      kappa_(kappa),
      omega_min_(omega_min),
      omega_c_(omega_c),
      table_(std::move(table)) {}

SpectralWeight SpectralWeight::power_law(double amplitude, double kappa, double omega_min,
                                         double omega_c) {
  check_support(amplitude, omega_min, omega_c);
  if (!std::isfinite(kappa) || kappa <= 0.0)
    throw InvalidWeight("power-law weight requires kappa > 0");
  return SpectralWeight(WeightKind::PowerLaw, amplitude, kappa, omega_min, omega_c, nullptr);
}

SpectralWeight SpectralWeight::flat(double amplitude, double omega_min, double omega_c) {
  check_support(amplitude, omega_min, omega_c);
  return SpectralWeight(WeightKind::Flat, amplitude, 0.0, omega_min, omega_c, nullptr);
}

SpectralWeight SpectralWeight::ohmic(double amplitude, double omega_min, double omega_c) {
  check_support(amplitude, omega_min, omega_c);
  return SpectralWeight(WeightKind::Ohmic, amplitude, 0.0, omega_min, omega_c, nullptr);
}

SpectralWeight SpectralWeight::inverse_square(double amplitude, double omega_min,
                                              double omega_c) {
  check_support(amplitude, omega_min, omega_c);
  return SpectralWeight(WeightKind::InverseSquare, amplitude, 0.0, omega_min, omega_c,
                        nullptr);
}

SpectralWeight SpectralWeight::tabulated(std::vector<double> omega,
                                         std::vector<double> values) {
  if (omega.size() < 2 || omega.size() != values.size())
    throw InvalidWeight("tabulated weight needs >= 2 (omega, J) pairs");
  if (omega.front() < 0.0) throw InvalidWeight("tabulated weight needs omega >= 0");
  for (std::size_t i = 0; i + 1 < omega.size(); ++i)
    if (!(omega[i] < omega[i + 1]))
      throw InvalidWeight("tabulated omega grid must be strictly increasing");
  for (double v : values) {
    if (!std::isfinite(v)) throw InvalidWeight("tabulated J values must be finite");
    if (v < 0.0) throw InvalidWeight("tabulated J values must be >= 0");
  }
  const double lo = omega.front(), hi = omega.back();
  std::shared_ptr<const MonotoneCubic> table;
  try {
    table = std::make_shared<const MonotoneCubic>(std::move(omega), std::move(values));
  } catch (const std::invalid_argument& e) {
    throw InvalidWeight(e.what());
  }
  return SpectralWeight(WeightKind::Tabulated, 1.0, 0.0, lo, hi, std::move(table));
}

SpectralWeight SpectralWeight::zero() {
  return SpectralWeight(WeightKind::Flat, 0.0, 0.0, 0.0, 1.0, nullptr);
}

double SpectralWeight::operator()(double omega) const {
  if (omega < omega_min_ || omega > omega_c_) return 0.0;
  switch (kind_) {
    case WeightKind::PowerLaw: return amplitude_ * std::pow(omega, kappa_ - 1.0);
    case WeightKind::Flat: return amplitude_;
    case WeightKind::Ohmic: return amplitude_ / omega;
    case WeightKind::InverseSquare: return amplitude_ / (omega * omega);
    case WeightKind::Tabulated: return (*table_)(omega);
  }
  return 0.0;
}

double SpectralWeight::infrared_exponent() const {
  switch (kind_) {
    case WeightKind::PowerLaw: return kappa_ - 1.0;
    case WeightKind::Flat: return 0.0;
    case WeightKind::Ohmic: return -1.0;
    case WeightKind::InverseSquare: return -2.0;
    case WeightKind::Tabulated: return 0.0;
  }
  return 0.0;
}

std::optional<double> SpectralWeight::limit_w2_j() const {
  switch (kind_) {
    case WeightKind::InverseSquare: return amplitude_;
    case WeightKind::PowerLaw:
    case WeightKind::Flat:
    case WeightKind::Ohmic: return 0.0;
    case WeightKind::Tabulated: return std::nullopt;
  }
  return std::nullopt;
}

bool moment_converges(const SpectralWeight& weight, int p) {
  if (p < 0) throw std::invalid_argument("moment: p must be >= 0");
  if (weight.is_zero()) return true;
  if (weight.omega_min() > 0.0) return true;
  // Infrared behaviour w^(p + alpha) integrates iff p + alpha > -1.
  return static_cast<double>(p) + weight.infrared_exponent() > -1.0;
}

double moment(const SpectralWeight& weight, int p) {
  if (!moment_converges(weight, p))
    throw DivergentIntegral("moment p=" + std::to_string(p) + " diverges for " +
                            to_string(weight.kind()) + " weight with omega_min = 0");
  if (weight.is_zero()) return 0.0;

  const double a = weight.omega_min();
  const double b = weight.omega_c();
  const double amp = weight.amplitude();
  quad::Options opt;  // rel_tol 1e-10, hard segment cap

  quad::Result res;
  switch (weight.kind()) {
    case WeightKind::PowerLaw: {
      const double kappa = weight.kappa();
      if (p == 0 && kappa < 1.0) {
        // w = u^(1/kappa) turns A w^(kappa-1) dw into (A/kappa) du.
        const double ua = std::pow(a, kappa), ub = std::pow(b, kappa);
        res = quad::integrate([&](double) { return amp / kappa; }, ua, ub, opt);
      } else {
        const double e = static_cast<double>(p) + kappa - 1.0;
        res = quad::integrate([&](double w) { return amp * std::pow(w, e); }, a, b, opt);
      }
      break;
    }
    case WeightKind::Flat:
      res = quad::integrate(
          [&](double w) { return amp * std::pow(w, static_cast<double>(p)); }, a, b, opt);
      break;
    case WeightKind::Ohmic:
      res = quad::integrate(
          [&](double w) { return amp * std::pow(w, static_cast<double>(p) - 1.0); }, a, b,
          opt);
      break;
    case WeightKind::InverseSquare:
      res = quad::integrate(
          [&](double w) { return amp * std::pow(w, static_cast<double>(p) - 2.0); }, a, b,
          opt);
      break;
    case WeightKind::Tabulated: {
      const auto& knots = weight.table()->knots();
      res = quad::integrate_segmented(
          [&](double w) { return std::pow(w, static_cast<double>(p)) * (*weight.table())(w); },
          knots, opt);
      break;
    }
  }
  if (!res.converged)
    throw QuadratureFailure("moment quadrature did not reach the requested tolerance");
  return res.value;
}

StabilityClass classify(const SpectralWeight& weight) {
  StabilityClass out;
  out.norm_sq = moment_converges(weight, 0) ? moment(weight, 0) : kInf;
  out.dressing_energy = moment_converges(weight, 1) ? moment(weight, 1) : kInf;
  out.label = std::isfinite(out.norm_sq) ? StabilityClass::Label::Stable
                                         : StabilityClass::Label::VanHoveSingular;
  return out;
}

double spectral_density_vacuum(const SpectralWeight& weight, double omega) {
  if (omega < 0.0) throw std::invalid_argument("spectral_density_vacuum: omega < 0");
  if (omega < weight.omega_min() || omega > weight.omega_c()) return 0.0;
  // Evaluated from the kind's closed form so the infrared limit is exact
  // (w^2 * J stays finite for the singular kinds).
  switch (weight.kind()) {
    case WeightKind::PowerLaw:
      return kTwoPi * weight.amplitude() * std::pow(omega, 1.0 + weight.kappa());
    case WeightKind::Flat: return kTwoPi * weight.amplitude() * omega * omega;
    case WeightKind::Ohmic: return kTwoPi * weight.amplitude() * omega;
    case WeightKind::InverseSquare: return kTwoPi * weight.amplitude();
    case WeightKind::Tabulated: return kTwoPi * omega * omega * (*weight.table())(omega);
  }
  return 0.0;
}

ThermalDensity spectral_density_thermal(const SpectralWeight& weight, double omega,
                                        double temperature) {
  if (!(omega > 0.0)) throw NonPositiveFrequency("spectral_density_thermal: omega must be > 0");
  if (!(temperature > 0.0))
    throw std::invalid_argument("spectral_density_thermal: temperature must be > 0");
  ThermalDensity out;
  out.value = (temperature / omega) * spectral_density_vacuum(weight, omega);
  out.low_frequency_valid = omega <= temperature / 10.0;
  return out;
}

}  // namespace decosim
