#pragma once

// Shared numerical machinery: half-line quadrature with exponential tail
// control, bracketed root finding, damped 2-D Newton and sign-change scans.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <queue>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "wavefront/errors.hpp"

namespace wavefront {

using complex = std::complex<double>;

struct QuadratureSettings {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  // The improper tail is dropped once its envelope bound falls below
  // tail_cut * abs_tol.
  double tail_cut = 1e-2;
  int max_subdivisions = 4000;

  void validate() const;
};

/// Exponential bound |f(x)| <= C e^{-rho |x|}.
struct Envelope {
  double C = 1.0;
  double rho = 1.0;
};

enum class Side { left, right };

struct Bracket {
  double lo;
  double hi;
  double f_lo;
  double f_hi;
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

namespace detail {

template <class T>
struct Panel {
  double a;
  double b;
  T value;
  double error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

template <class F>
auto gauss_kronrod_panel(const F& f, double a, double b, double& error) {
  using boost::math::quadrature::gauss_kronrod;
  return gauss_kronrod<double, 21>::integrate(f, a, b, 0, 0.0, &error);
}

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const complex& v) { return std::abs(v); }

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (G10/K21) quadrature on [lo, hi].
///
/// Works for real- and complex-valued integrands; for complex values the real
/// and imaginary parts share one panel subdivision and the panel error is the
/// modulus of the complex Kronrod-Gauss difference.
template <class F>
auto integrate(const F& f, double lo, double hi,
               const QuadratureSettings& settings = {},
               int initial_panels = 16) {
  using T = std::decay_t<std::invoke_result_t<const F&, double>>;
  settings.validate();
  if (hi == lo) return T{};
  if (hi < lo) return T(-integrate(f, hi, lo, settings, initial_panels));

  std::priority_queue<detail::Panel<T>> panels;
  T total{};
  double total_error = 0.0;
  const int n0 = std::max(1, initial_panels);
  const double width = (hi - lo) / n0;
  for (int i = 0; i < n0; ++i) {
    const double a = lo + i * width;
    const double b = (i + 1 == n0) ? hi : lo + (i + 1) * width;
    double err = 0.0;
    T v = detail::gauss_kronrod_panel(f, a, b, err);
    total += v;
    total_error += err;
    panels.push({a, b, v, err});
  }

  int count = n0;
  auto target = [&] {
    return std::max(settings.abs_tol, settings.rel_tol * detail::magnitude(total));
  };
  while (total_error > target()) {
    if (count >= settings.max_subdivisions) {
      throw NonConvergence("quadrature: subdivision budget exhausted (error " +
                           std::to_string(total_error) + ")");
    }
    detail::Panel<T> worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      throw NonConvergence("quadrature: panel width underflow");
    }
    double e1 = 0.0;
    double e2 = 0.0;
    T v1 = detail::gauss_kronrod_panel(f, worst.a, mid, e1);
    T v2 = detail::gauss_kronrod_panel(f, mid, worst.b, e2);
    total += v1 + v2 - worst.value;
    total_error += e1 + e2 - worst.error;
    panels.push({worst.a, mid, v1, e1});
    panels.push({mid, worst.b, v2, e2});
    ++count;
    if (total_error < 0.0) total_error = 0.0;
  }
  return total;
}

/// Length of the half-line kept by integrate_halfline for a given envelope.
double halfline_truncation(const Envelope& envelope, const QuadratureSettings& settings);

/// Improper integral over (-inf, 0] (Side::left) or [0, inf) (Side::right).
///
/// The tail beyond X is dropped where C e^{-rho X} / rho < tail_cut * abs_tol.
template <class F>
auto integrate_halfline(const F& f, Side side, const Envelope& envelope,
                        const QuadratureSettings& settings = {}) {
  using T = std::decay_t<std::invoke_result_t<const F&, double>>;
  if (!(envelope.rho > 0.0) || !(envelope.C >= 0.0) || !std::isfinite(envelope.C)) {
    throw InvalidEnvelope("integrate_halfline: envelope needs rho > 0 and finite C >= 0");
  }
  const double cut = halfline_truncation(envelope, settings);
  if (cut <= 0.0) return T{};
  // One initial panel per decay length keeps oscillatory tails resolved.
  const int panels = static_cast<int>(std::clamp(std::ceil(cut * envelope.rho), 8.0, 512.0));
  if (side == Side::right) return integrate(f, 0.0, cut, settings, panels);
  return integrate(f, -cut, 0.0, settings, panels);
}

/// Safeguarded bracketed root finding (TOMS 748: bisection interleaved with
/// inverse quadratic/cubic interpolation). Stops when the bracket is no wider
/// than tol or an exact zero is hit.
double find_root_bracketed(const std::function<double(double)>& g, Bracket bracket,
                           double tol = 1e-10, int max_iter = 200);

/// Convenience overload that evaluates the endpoints.
double find_root_bracketed(const std::function<double(double)>& g, double lo, double hi,
                           double tol = 1e-10, int max_iter = 200);

struct Solve2dResult {
  Vec2 x;
  double residual;  // infinity norm of F at x
  int iterations;
};

/// Damped Newton iteration with a central-difference Jacobian
/// (h_i = max(1e-6, 1e-6 |x_i|)) and step halving on residual increase.
Solve2dResult solve_2d(const std::function<Vec2(Vec2)>& F, Vec2 x0, double tol = 1e-8,
                       int max_iter = 100);

/// Brackets for every sign alternation of g sampled on a strictly increasing
/// grid. Exact zeros on the grid are skipped over.
std::vector<Bracket> scan_sign_changes(const std::function<double(double)>& g,
                                       std::span<const double> grid);

/// Same scan over precomputed samples.
std::vector<Bracket> sign_changes(std::span<const double> grid, std::span<const double> values);

std::vector<double> linspace(double lo, double hi, std::size_t n);

/// Runs fn(i) for i in [0, n) on a bounded worker pool. The cap comes from the
/// WAVEFRONT_THREADS environment variable when set.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);
std::size_t worker_count();

}  // namespace wavefront
