#pragma once

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <vector>

namespace decosim::quad {

// Globally adaptive Gauss-Kronrod (G7, K15) quadrature. Fixed relative
// tolerance, hard segment cap, caller-supplied breakpoints, and a helper
// that pre-splits oscillatory integrands into panels no wider than a
// quarter oscillation period. Refinement order depends only on integrand
// values, so results are deterministic for a given platform.

struct Options {
  double rel_tol = 1e-10;
  double abs_tol = 0.0;
  int max_segments = 200000;
};

struct Result {
  double value = 0.0;
  double error_estimate = 0.0;
  int segments = 0;
  bool converged = false;
};

namespace detail {

// K15 abscissae on [0, 1]; odd indices (plus the centre) are the G7 points.
inline constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715526, 0.169004726639268, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
inline constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <typename F>
Segment gk15(const F& f, double a, double b) {
  const double half = 0.5 * (b - a);
  const double centre = 0.5 * (a + b);

  const double fc = f(centre);
  double resg = fc * kWg[3];
  double resk = fc * kWgk[7];
  double resabs = std::abs(resk);

  double fv1[7], fv2[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    fv1[j] = f(centre - dx);
    fv2[j] = f(centre + dx);
    const double sum = fv1[j] + fv2[j];
    resk += kWgk[j] * sum;
    resabs += kWgk[j] * (std::abs(fv1[j]) + std::abs(fv2[j]));
    if (j % 2 == 1) resg += kWg[j / 2] * sum;
  }

  const double reskh = resk * 0.5;
  double resasc = kWgk[7] * std::abs(fc - reskh);
  for (int j = 0; j < 7; ++j)
    resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));

  Segment s;
  s.a = a;
  s.b = b;
  s.value = resk * half;
  resasc *= std::abs(half);
  double err = std::abs((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0)
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  s.error = err;
  return s;
}

}  // namespace detail

// Integrate f over consecutive [breakpoints[i], breakpoints[i+1]] panels,
// then refine the worst panel until the summed error estimate is below
// max(abs_tol, rel_tol * |value|) or the segment cap is reached.
template <typename F>
Result integrate_segmented(const F& f, const std::vector<double>& breakpoints,
                           const Options& opt = {}) {
  if (breakpoints.size() < 2)
    throw std::invalid_argument("integrate_segmented: need >= 2 breakpoints");
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i)
    if (!(breakpoints[i] <= breakpoints[i + 1]))
      throw std::invalid_argument("integrate_segmented: breakpoints not increasing");

  Result out;
  std::priority_queue<detail::Segment> heap;
  double value = 0.0, error = 0.0;
  int segments = 0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (breakpoints[i] == breakpoints[i + 1]) continue;
    auto s = detail::gk15(f, breakpoints[i], breakpoints[i + 1]);
    value += s.value;
    error += s.error;
    heap.push(s);
    ++segments;
  }
  if (segments == 0) {
    out.converged = true;
    return out;
  }

  auto tolerance = [&] { return std::max(opt.abs_tol, opt.rel_tol * std::abs(value)); };
  while (error > tolerance() && segments < opt.max_segments && !heap.empty()) {
    const auto worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) continue;  // interval at FP resolution
    auto left = detail::gk15(f, worst.a, mid);
    auto right = detail::gk15(f, mid, worst.b);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++segments;
  }

  out.value = value;
  out.error_estimate = error;
  out.segments = segments;
  out.converged = std::isfinite(value) && error <= tolerance();
  return out;
}

template <typename F>
Result integrate(const F& f, double a, double b, const Options& opt = {}) {
  if (!(a <= b)) throw std::invalid_argument("integrate: need a <= b");
  return integrate_segmented(f, std::vector<double>{a, b}, opt);
}

inline std::vector<double> oscillation_panels(double a, double b, double angular_rate) {
  if (!(a <= b)) throw std::invalid_argument("oscillation_panels: need a <= b");
  constexpr double kPi = 3.14159265358979323846;
  constexpr std::size_t kPanelCap = 2'000'000;
  std::size_t n = 1;
  const double rate = std::abs(angular_rate);
  if (rate > 0.0 && b > a) {
    const double width = kPi / (4.0 * rate);
    const double count = std::ceil((b - a) / width);
    if (count > static_cast<double>(kPanelCap))
      throw std::invalid_argument("oscillation_panels: panel cap exceeded");
    n = static_cast<std::size_t>(count);
  }
  std::vector<double> edges(n + 1);
  for (std::size_t i = 0; i <= n; ++i)
    edges[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n);
  edges.front() = a;
  edges.back() = b;
  return edges;
}

// Integrand containing cos/sin(angular_rate * x): panels no wider than a
// quarter period, then adaptive refinement as usual.
template <typename F>
Result integrate_oscillatory(const F& f, double a, double b, double angular_rate,
                             const Options& opt = {}) {
  return integrate_segmented(f, oscillation_panels(a, b, angular_rate), opt);
}

}  // namespace decosim::quad
