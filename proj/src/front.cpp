#include "wavefront/front.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wavefront/io.hpp"

namespace wavefront {

namespace {

struct Rates {
  double r_minus, r_plus, k_minus, k_plus;
};

Rates rates(const FrontSolution& f) {
  const double c0 = f.params.c0;
  const double mu = f.mu0;
  if (!(mu > 0.0) || !(mu < c0)) throw DomainError("front speed outside (0, c0)");
  if (std::isinf(c0)) return {1.0, 1.0, 1.0 / mu, 1.0 / mu};
  return {c0 / (c0 - mu), c0 / (c0 + mu), 1.0 / mu - 1.0 / c0, 1.0 / mu + 1.0 / c0};
}

// The convolution term J with U = alpha F(x*) - alpha J and U' = (alpha/mu) J.
double memory_term(const FrontSolution& f, double z) {
  const Rates r = rates(f);
  if (z <= 0.0) return f.kernel.weighted_cdf(r.k_minus, r.r_minus * z);
  const double x = r.r_plus * z;
  return std::exp(-r.k_plus * x) * f.kernel.left_laplace(r.k_minus) +
         f.kernel.right().weighted_head(r.k_plus, x);
}

double memory_term_quadrature(const FrontSolution& f, double z, const QuadratureSettings& s) {
  const Rates r = rates(f);
  const double mu = f.mu0;
  const auto& env = f.kernel.envelope();
  // int_{-inf}^{z} c(x) e^{(x - z)/mu} K(c(x) x) dx with c = r_- (x < 0), r_+ (x > 0).
  auto weighted = [&](double x) {
    const double c = x < 0.0 ? r.r_minus : r.r_plus;
    return c * std::exp((x - z) / mu) * f.kernel(c * x);
  };
  const double top = std::min(z, 0.0);
  // Left part shifted so the half-line routine sees (-inf, 0].
  const double left = integrate_halfline([&](double t) { return weighted(t + top); }, Side::left,
                                         Envelope{r.r_minus * env.C, 1.0 / mu + r.r_minus * env.rho}, s);
  if (z <= 0.0) return left;
  const int panels = static_cast<int>(std::clamp(std::ceil(z * f.kernel.max_frequency()), 8.0, 2048.0));
  return left + integrate(weighted, 0.0, z, s, panels);
}

}  // namespace

double front_forcing(const FrontSolution& f, double z) {
  const Rates r = rates(f);
  return f.params.alpha * f.kernel.cdf(z <= 0.0 ? r.r_minus * z : r.r_plus * z);
}

double front_value(const FrontSolution& f, double z) {
  return front_forcing(f, z) - f.params.alpha * memory_term(f, z);
}

double front_derivative(const FrontSolution& f, double z) {
  return f.params.alpha / f.mu0 * memory_term(f, z);
}

double front_value_quadrature(const FrontSolution& f, double z, const QuadratureSettings& s) {
  const Rates r = rates(f);
  const double x = z <= 0.0 ? r.r_minus * z : r.r_plus * z;
  const auto& env = f.kernel.envelope();
  // alpha int_{-inf}^x K, split at the origin.
  const double top = std::min(x, 0.0);
  double mass = integrate_halfline([&](double t) { return f.kernel(t + top); }, Side::left, env, s);
  if (x > 0.0) {
    const int panels = static_cast<int>(std::clamp(std::ceil(x * f.kernel.max_frequency()), 8.0, 2048.0));
    mass += integrate([&](double t) { return f.kernel(t); }, 0.0, x, s, panels);
  }
  return f.params.alpha * (mass - memory_term_quadrature(f, z, s));
}

double front_derivative_quadrature(const FrontSolution& f, double z, const QuadratureSettings& s) {
  return f.params.alpha / f.mu0 * memory_term_quadrature(f, z, s);
}

double default_front_window(const Kernel& kernel) { return 40.0 / kernel.envelope().rho; }

FrontValidation validate_front(const FrontSolution& f, double z_window, int n_samples, double tol,
                               double tail_tol) {
  if (z_window <= 0.0) z_window = default_front_window(f.kernel);
  if (n_samples < 100) throw InvalidParameter("validate_front: n_samples must be >= 100");
  const double alpha = f.params.alpha;
  const double theta = f.params.theta;

  FrontValidation v;
  v.z_window = z_window;
  v.threshold_at_zero = front_value(f, 0.0);
  v.derivative_at_zero = front_derivative(f, 0.0);
  v.left_limit = front_value(f, -z_window);
  v.right_limit = front_value(f, z_window);
  v.left_max = -std::numeric_limits<double>::infinity();
  v.right_min = std::numeric_limits<double>::infinity();

  const std::function<double(double)> dU = [&](double z) { return front_derivative(f, z); };
  for (int side = 0; side < 2; ++side) {
    const double sgn = side == 0 ? -1.0 : 1.0;
    // Samples on (0, z_window], mirrored for the left side.
    std::vector<double> grid(static_cast<std::size_t>(n_samples));
    for (int i = 0; i < n_samples; ++i) grid[static_cast<std::size_t>(i)] = z_window * (i + 1.0) / n_samples;
    if (side == 0) {
      std::reverse(grid.begin(), grid.end());
      for (auto& z : grid) z = -z;
    }
    std::vector<double> points = grid;
    std::vector<double> slopes(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) slopes[i] = dU(grid[i]);
    // Extrema of U sit at sign changes of U'.
    for (const auto& br : sign_changes(grid, slopes)) {
      points.push_back(find_root_bracketed(dU, br, 1e-12 * std::max(1.0, std::abs(br.lo))));
      ++v.interior_extrema;
    }
    for (double z : points) {
      const double u = front_value(f, z);
      if (sgn < 0) v.left_max = std::max(v.left_max, u);
      else v.right_min = std::min(v.right_min, u);
    }
  }

  v.pass = std::abs(v.threshold_at_zero - theta) <= tol && v.derivative_at_zero > 0.0 &&
           v.left_max < theta && v.right_min > theta &&
           std::abs(v.left_limit) <= tail_tol * alpha &&
           std::abs(v.right_limit - alpha) <= tail_tol * alpha;
  return v;
}

std::vector<FrontSample> front_profile(const FrontSolution& f, double z_lo, double z_hi, int n) {
  if (!(z_lo < z_hi)) throw InvalidParameter("front_profile: need z_lo < z_hi");
  if (n < 2) throw InvalidParameter("front_profile: need n >= 2");
  std::vector<FrontSample> rows;
  for (double z : linspace(z_lo, z_hi, static_cast<std::size_t>(n))) {
    rows.push_back({z, front_value(f, z), front_derivative(f, z)});
  }
  return rows;
}

std::string front_profile_csv(const std::vector<FrontSample>& rows) {
  std::ostringstream os;
  os << "z,U,Uprime\n";
  for (const auto& r : rows) os << fmt_num(r.z) << ',' << fmt_num(r.U) << ',' << fmt_num(r.Uprime) << '\n';
  return os.str();
}

}  // namespace wavefront
