#pragma once

// Speed index phi(mu) = int_{-inf}^0 e^{kappa x} K(x) dx, kappa = 1/mu - 1/c0,
// its moments zeta_n, and the compatibility solve phi(mu) = 1/2 - theta/alpha.

#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "wavefront/kernel.hpp"

namespace wavefront {

inline constexpr double kInfiniteSpeed = std::numeric_limits<double>::infinity();

struct ModelParams {
  double alpha = 1.0;
  double theta = 0.4;
  double c0 = kInfiniteSpeed;  // axonal speed; +inf means no delay

  /// Throws InvalidParameter unless 0 < 2 theta < alpha and c0 > 0.
  void validate() const;
  double target() const { return 0.5 - theta / alpha; }
};

/// kappa = 1/mu - 1/c0; throws DomainError unless 0 < mu < c0.
double speed_exponent(double c0, double mu);

double phi(const Kernel& kernel, double c0, double mu);
double phi_quadrature(const Kernel& kernel, double c0, double mu,
                      const QuadratureSettings& settings = {});

/// zeta_n(mu) = int_{-inf}^0 e^{kappa x} Lambda^n K(x) dx
double zeta(const Kernel& kernel, double c0, int n, double mu);
double zeta_quadrature(const Kernel& kernel, double c0, int n, double mu,
                       const QuadratureSettings& settings = {});

/// d phi / d mu = zeta_0 / mu^2
double phi_derivative(const Kernel& kernel, double c0, double mu);

enum class SpeedCertificate {
  strictly_increasing,
  single_max_above_half,
  single_min_below_zero,
  numerical_only
};
std::string to_string(SpeedCertificate c);

struct WaveSpeedResult {
  double mu0 = 0.0;
  double residual = 0.0;
  SpeedCertificate certificate = SpeedCertificate::numerical_only;
  std::vector<std::pair<double, double>> phi_samples;
};

/// Open grid of (0, c0), or mu = t/(1-t) over t in (0, 1) when c0 is infinite.
std::vector<double> speed_grid(double c0, int n_points);

std::vector<std::pair<double, double>> phi_profile(const Kernel& kernel, double c0, int n_points);
std::string phi_profile_csv(const std::vector<std::pair<double, double>>& profile);

inline constexpr int kUniquenessScanPoints = 10000;

WaveSpeedResult solve_wave_speed(const Kernel& kernel, const ModelParams& params,
                                 const WaveSpeedConditionReport& condition);

}  // namespace wavefront
