#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "decosim/interp.hpp"

namespace decosim {

enum class WeightKind { PowerLaw, Flat, Ohmic, InverseSquare, Tabulated };

std::string to_string(WeightKind kind);

// Coupling spectral weight J(w) = |g(w)|^2 on the support [omega_min, omega_c],
// identically zero outside. Only |g|^2 is represented: every quantity computed
// from it is insensitive to the formfactor's phase, so g is taken real
// nonnegative, g = sqrt(J). Immutable after construction.
//
// Analytic kinds:
//   PowerLaw       J = A w^(kappa-1), kappa > 0
//   Flat           J = A
//   Ohmic          J = A / w
//   InverseSquare  J = A / w^2
// Tabulated weights interpolate (w, J) samples with a monotone cubic and
// forbid extrapolation. Ohmic/InverseSquare supports reaching w = 0 are
// admitted; they are exactly the infrared-singular models, and classify()
// reports them as VanHoveSingular. amplitude = 0 builds the zero weight.
class SpectralWeight {
 public:
  static SpectralWeight power_law(double amplitude, double kappa, double omega_min,
                                  double omega_c);
  static SpectralWeight flat(double amplitude, double omega_min, double omega_c);
  static SpectralWeight ohmic(double amplitude, double omega_min, double omega_c);
  static SpectralWeight inverse_square(double amplitude, double omega_min, double omega_c);
  static SpectralWeight tabulated(std::vector<double> omega, std::vector<double> values);
  static SpectralWeight zero();

  WeightKind kind() const { return kind_; }
  double amplitude() const { return amplitude_; }
  double kappa() const { return kappa_; }
  double omega_min() const { return omega_min_; }
  double omega_c() const { return omega_c_; }
  bool is_zero() const { return amplitude_ == 0.0 && kind_ != WeightKind::Tabulated; }

  // J(w); zero outside the support. Singular kinds return +inf at w = 0.
  double operator()(double omega) const;

  // Exponent alpha with J ~ w^alpha as w -> 0+ for the kind's analytic form.
  // Governs every infrared convergence decision; Tabulated weights are
  // bounded, so alpha = 0.
  double infrared_exponent() const;

  // lim_{w->0+} w^2 J(w) of the analytic form (the infrared class of the
  // coupling, independent of the omega_min cutoff). Absent for Tabulated.
  std::optional<double> limit_w2_j() const;

  const MonotoneCubic* table() const { return table_.get(); }

 private:
  SpectralWeight(WeightKind kind, double amplitude, double kappa, double omega_min,
                 double omega_c, std::shared_ptr<const MonotoneCubic> table);

  WeightKind kind_;
  double amplitude_;
  double kappa_;
  double omega_min_;
  double omega_c_;
  std::shared_ptr<const MonotoneCubic> table_;
};

struct StabilityClass {
  enum class Label { Stable, VanHoveSingular };
  Label label = Label::Stable;
  double norm_sq = 0.0;          // ||g||^2; +inf when divergent
  double dressing_energy = 0.0;  // E_g = <g, h1 g>; +inf when divergent
};

// Analytic convergence check for int w^p J(w) dw. Never decided by watching
// quadrature diverge.
bool moment_converges(const SpectralWeight& weight, int p);

// int_{omega_min}^{omega_c} w^p J(w) dw to relative accuracy 1e-10.
// Endpoint singularities (PowerLaw, p = 0, kappa < 1) are removed by the
// substitution w = u^(1/kappa). Throws DivergentIntegral when the analytic
// check fails.
double moment(const SpectralWeight& weight, int p);

// Stable iff ||g||^2 is finite (decided analytically); divergent fields are
// reported as +inf.
StabilityClass classify(const SpectralWeight& weight);

// Vacuum spectral density 2 pi w^2 J(w); zero outside the support.
double spectral_density_vacuum(const SpectralWeight& weight, double omega);

struct ThermalDensity {
  double value = 0.0;
  bool low_frequency_valid = true;  // false when omega > temperature / 10
};

// Low-frequency thermal spectral density (T/w) * vacuum value, valid for
// w << T; the flag reports whether the query is inside that regime.
ThermalDensity spectral_density_thermal(const SpectralWeight& weight, double omega,
                                        double temperature);

}  // namespace decosim
