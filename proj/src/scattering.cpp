#include "decosim/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "decosim/errors.hpp"
#include "decosim/quadrature.hpp"

namespace decosim::scattering {

namespace {

constexpr double kPi = 3.14159265358979323846;

}  // namespace

DensityFunction DensityFunction::constant(double value) {
  if (!(value >= 0.0) || !std::isfinite(value))
    throw std::invalid_argument("DensityFunction::constant: need value >= 0");
  return DensityFunction(Kind::Constant, value, nullptr);
}

DensityFunction DensityFunction::thermal(double temperature) {
  if (!(temperature > 0.0))
    throw std::invalid_argument("DensityFunction::thermal: need temperature > 0");
  return DensityFunction(Kind::Thermal, temperature, nullptr);
}

DensityFunction DensityFunction::tabulated(std::vector<double> omega,
                                           std::vector<double> density) {
  for (double v : density)
    if (!(v >= 0.0)) throw std::invalid_argument("DensityFunction::tabulated: n(w) < 0");
  auto table = std::make_shared<const MonotoneCubic>(std::move(omega), std::move(density));
  return DensityFunction(Kind::Tabulated, 0.0, std::move(table));
}

double DensityFunction::operator()(double omega) const {
  switch (kind_) {
    case Kind::Constant: return parameter_;
    case Kind::Thermal: {
      if (!(omega > 0.0)) return std::numeric_limits<double>::infinity();
      return 1.0 / std::expm1(omega / parameter_);
    }
    case Kind::Tabulated: {
      if (omega < table_->knots().front() || omega > table_->knots().back()) return 0.0;
      return (*table_)(omega);
    }
  }
  return 0.0;
}

double scattering_rate(const ScatteringChannel& channel) {
  const auto& f = channel.coupling;
  if (!moment_converges(f, 0))
    throw InvalidWeight("scattering_rate: coupling weight F must be Stable");
  if (f.is_zero()) return 0.0;

  // Infrared convergence of F^2 n: exponent 2 alpha_F + alpha_n > -1 when the
  // support reaches w = 0.
  if (f.omega_min() == 0.0 &&
      2.0 * f.infrared_exponent() + channel.density.infrared_exponent() <= -1.0)
    throw DivergentIntegral("scattering_rate: F^2 n diverges at omega = 0");

  std::vector<double> breaks{f.omega_min(), f.omega_c()};
  if (const auto* table = channel.density.table()) {
    for (double k : table->knots())
      if (k > f.omega_min() && k < f.omega_c()) breaks.push_back(k);
  }
  std::sort(breaks.begin(), breaks.end());

  quad::Options opt;
  auto res = quad::integrate_segmented(
      [&](double w) {
        const double fw = f(w);
        return fw * fw * channel.density(w);
      },
      breaks, opt);
  if (!res.converged)
    throw QuadratureFailure("scattering_rate quadrature did not converge");
  return kPi * res.value;
}

std::vector<FamilyMember> small_norm_family(double gamma_target,
                                            const std::vector<double>& widths, double omega0,
                                            const DensityFunction& density) {
  if (!(gamma_target > 0.0) || !std::isfinite(gamma_target))
    throw InvalidTarget("small_norm_family: gamma_target must be > 0");
  const double n0 = density(omega0);
  if (!(n0 > 0.0) || !std::isfinite(n0))
    throw InvalidTarget("small_norm_family: density must be positive at omega0");
  if (widths.empty()) throw std::invalid_argument("small_norm_family: empty widths");
  for (std::size_t i = 0; i < widths.size(); ++i) {
    if (!(widths[i] > 0.0)) throw std::invalid_argument("small_norm_family: width <= 0");
    if (i > 0 && !(widths[i] < widths[i - 1]))
      throw std::invalid_argument("small_norm_family: widths must be decreasing");
  }

  std::vector<FamilyMember> family;
  family.reserve(widths.size());
  for (double w : widths) {
    if (omega0 - w / 2.0 < 0.0)
      throw std::invalid_argument("small_norm_family: box extends below omega = 0");
    const double height = std::sqrt(gamma_target / (kPi * w * n0));
    const auto box = SpectralWeight::flat(height, omega0 - w / 2.0, omega0 + w / 2.0);
    FamilyMember member;
    member.width = w;
    member.norm_sq = height * w;
    member.rate = scattering_rate({box, density});
    family.push_back(member);
  }
  return family;
}

}  // namespace decosim::scattering
