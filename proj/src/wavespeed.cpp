#include "wavefront/wavespeed.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "wavefront/io.hpp"

namespace wavefront {

void ModelParams::validate() const {
  if (!std::isfinite(alpha) || !std::isfinite(theta) || !(theta > 0.0) || !(2.0 * theta < alpha)) {
    throw InvalidParameter("model parameters need 0 < 2 theta < alpha");
  }
  if (!(c0 > 0.0)) throw InvalidParameter("axonal speed c0 must be positive or inf");
}

double speed_exponent(double c0, double mu) {
  if (!(mu > 0.0) || !(mu < c0)) {
    throw DomainError("wave speed mu = " + std::to_string(mu) + " outside (0, c0)");
  }
  return 1.0 / mu - 1.0 / c0;
}

double phi(const Kernel& kernel, double c0, double mu) {
  return kernel.left_laplace(speed_exponent(c0, mu));
}

double phi_quadrature(const Kernel& kernel, double c0, double mu,
                      const QuadratureSettings& settings) {
  const double kappa = speed_exponent(c0, mu);
  const auto& env = kernel.envelope();
  return integrate_halfline([&](double x) { return std::exp(kappa * x) * kernel(x); }, Side::left,
                            Envelope{env.C, env.rho + kappa}, settings);
}

double zeta(const Kernel& kernel, double c0, int n, double mu) {
  return kernel.lambda_poly(n).laplace(speed_exponent(c0, mu));
}

double zeta_quadrature(const Kernel& kernel, double c0, int n, double mu,
                       const QuadratureSettings& settings) {
  const double kappa = speed_exponent(c0, mu);
  const auto& env = kernel.envelope();
  // |Lambda^n K(x)| <= C max(1, rho^-2) (1 + |x|)^{n+1}; half of kappa absorbs the growth.
  const double rho = 0.5 * kappa;
  const double growth = std::exp(rho) * std::pow((n + 1) / (std::numbers::e * rho), n + 1);
  const double C = env.C * std::max(1.0, 1.0 / (env.rho * env.rho)) * std::max(1.0, growth);
  return integrate_halfline(
      [&](double x) { return std::exp(kappa * x) * lambda_n_quadrature(kernel, n, x, settings); },
      Side::left, Envelope{C, rho}, settings);
}

double phi_derivative(const Kernel& kernel, double c0, double mu) {
  return zeta(kernel, c0, 0, mu) / (mu * mu);
}

std::string to_string(SpeedCertificate c) {
  switch (c) {
    case SpeedCertificate::strictly_increasing: return "strictly_increasing";
    case SpeedCertificate::single_max_above_half: return "single_max_above_half";
    case SpeedCertificate::single_min_below_zero: return "single_min_below_zero";
    case SpeedCertificate::numerical_only: break;
  }
  return "numerical_only";
}

std::vector<double> speed_grid(double c0, int n_points) {
  if (n_points < 2) throw InvalidParameter("speed grid needs at least 2 points");
  std::vector<double> mus(static_cast<std::size_t>(n_points));
  for (int i = 0; i < n_points; ++i) {
    const double t = (i + 1.0) / (n_points + 1.0);
    mus[static_cast<std::size_t>(i)] = std::isinf(c0) ? t / (1.0 - t) : c0 * t;
  }
  return mus;
}

std::vector<std::pair<double, double>> phi_profile(const Kernel& kernel, double c0, int n_points) {
  std::vector<std::pair<double, double>> out;
  for (double mu : speed_grid(c0, n_points)) out.emplace_back(mu, phi(kernel, c0, mu));
  return out;
}

std::string phi_profile_csv(const std::vector<std::pair<double, double>>& profile) {
  std::ostringstream os;
  os << "mu,phi\n";
  for (const auto& [mu, v] : profile) os << fmt_num(mu) << ',' << fmt_num(v) << '\n';
  return os.str();
}

WaveSpeedResult solve_wave_speed(const Kernel& kernel, const ModelParams& params,
                                 const WaveSpeedConditionReport& condition) {
  params.validate();
  const double c0 = params.c0;
  const double target = params.target();
  const std::function<double(double)> g = [&](double mu) { return phi(kernel, c0, mu) - target; };

  const double mu_hi = std::isinf(c0) ? (1.0 - 1e-6) / 1e-6 : c0 * (1.0 - 1e-6);
  double mu_lo = std::min(1.0, 0.5 * mu_hi);
  for (int i = 0; i < 200 && !(phi(kernel, c0, mu_lo) < target / 10.0); ++i) mu_lo *= 0.5;
  const double f_lo = g(mu_lo);
  const double f_hi = g(mu_hi);
  if (!(f_lo < 0.0) || !(f_hi > 0.0)) {
    throw NoRoot("compatibility equation has no sign change on the speed bracket");
  }

  // Dense scan: the certificate promises exactly one crossing.
  int crossings = 0;
  {
    const auto grid = speed_grid(c0, kUniquenessScanPoints);
    std::vector<double> vals(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) vals[i] = g(grid[i]);
    crossings = static_cast<int>(sign_changes(grid, vals).size());
  }
  if (crossings > 1) {
    throw MultipleRoots("speed index crosses 1/2 - theta/alpha " + std::to_string(crossings) +
                        " times; the kernel is misclassified");
  }

  WaveSpeedResult res;
  res.mu0 = find_root_bracketed(g, Bracket{mu_lo, mu_hi, f_lo, f_hi},
                                1e-14 * std::max(1.0, mu_lo), 400);
  res.residual = std::abs(g(res.mu0));
  switch (condition.kind) {
    case WaveSpeedKind::A: res.certificate = SpeedCertificate::strictly_increasing; break;
    case WaveSpeedKind::B:
      res.certificate = condition.tail_sign < 0 ? SpeedCertificate::single_max_above_half
                                                : SpeedCertificate::numerical_only;
      break;
    case WaveSpeedKind::C:
      res.certificate = condition.tail_sign > 0 ? SpeedCertificate::single_min_below_zero
                                                : SpeedCertificate::numerical_only;
      break;
    case WaveSpeedKind::none: res.certificate = SpeedCertificate::numerical_only; break;
  }
  res.phi_samples = phi_profile(kernel, c0, 200);
  return res;
}

}  // namespace wavefront
