#pragma once

#include <memory>
#include <vector>

#include "decosim/interp.hpp"
#include "decosim/spectral_weight.hpp"

namespace decosim::scattering {

// Boson occupation density n(w) >= 0 of the reference state.
class DensityFunction {
 public:
  enum class Kind { Constant, Thermal, Tabulated };

  static DensityFunction constant(double value);
  static DensityFunction thermal(double temperature);  // 1 / (e^{w/T} - 1)
  static DensityFunction tabulated(std::vector<double> omega, std::vector<double> density);

  double operator()(double omega) const;
  Kind kind() const { return kind_; }
  // Exponent of n(w) as w -> 0+ (thermal occupation diverges like T/w).
  double infrared_exponent() const { return kind_ == Kind::Thermal ? -1.0 : 0.0; }
  const MonotoneCubic* table() const { return table_.get(); }

 private:
  DensityFunction(Kind kind, double parameter, std::shared_ptr<const MonotoneCubic> table)
      : kind_(kind), parameter_(parameter), table_(std::move(table)) {}

  Kind kind_;
  double parameter_;
  std::shared_ptr<const MonotoneCubic> table_;
};

// Elastic-scattering channel: F(w) = |f(w)|^2 must be Stable (finite ||f||^2 —
// the whole point is that it can be made arbitrarily small).
struct ScatteringChannel {
  SpectralWeight coupling;  // F = |f|^2
  DensityFunction density;  // n(w)
};

// Markovian low-density Born dephasing rate, pi * int F(w)^2 n(w) dw.
double scattering_rate(const ScatteringChannel& channel);

struct FamilyMember {
  double width = 0.0;
  double norm_sq = 0.0;  // ||f||^2 of the member
  double rate = 0.0;     // recomputed through scattering_rate
};

// Box profiles F of height sqrt(gamma_target / (pi w n(omega0))) centred at
// omega0: every member reproduces gamma_target while ||f||^2 shrinks as
// sqrt(w).
std::vector<FamilyMember> small_norm_family(double gamma_target,
                                            const std::vector<double>& widths, double omega0,
                                            const DensityFunction& density);

}  // namespace decosim::scattering
