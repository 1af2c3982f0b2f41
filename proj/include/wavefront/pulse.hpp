#pragma once

// Fast traveling pulses of the system with slow linear feedback
//   u_t + u + w = alpha int K(x - y) H(u(y, t) - theta) dy,  w_t = eps (u - gamma w),
// without axonal delay.

#include <string>
#include <vector>

#include "wavefront/front.hpp"

namespace wavefront {

struct PulseParams {
  double alpha = 1.0;
  double theta = 0.4;
  double gamma = 1e-3;
  double epsilon = 1e-3;

  /// Throws InvalidParameter outside 0 < 2 theta < alpha < (1+gamma) theta/gamma,
  /// or when the eigenvalues below are complex.
  void validate() const;
};

struct EigenPair {
  double omega1;
  double omega2;
  double one_minus_omega1;  // 1 - omega1 without cancellation
};

EigenPair omega_eigenvalues(double epsilon, double gamma);

struct PulseState {
  double U;
  double W;
};

/// Closed form of the variation-of-parameters solution.
PulseState pulse_value(const Kernel& kernel, const PulseParams& params, double mu, double Z,
                       double z);
/// Same integrals by direct quadrature.
PulseState pulse_value_quadrature(const Kernel& kernel, const PulseParams& params, double mu,
                                  double Z, double z, const QuadratureSettings& settings = {});

struct PulseRoot {
  double mu;
  double Z;
  double residual;
};

struct PulseSolution {
  Kernel kernel;
  PulseParams params;
  double mu = 0.0;
  double Z = 0.0;
  double residual = 0.0;
  double front_speed = 0.0;
  std::vector<PulseRoot> roots;  // every distinct converged multistart root
};

/// Width after which the slow variable on the excited branch reaches the back
/// level w_J = alpha - 2 theta.
double singular_width(const PulseParams& params, double mu);

PulseSolution solve_pulse(const Kernel& kernel, const PulseParams& params, double front_speed);

struct PhasePoint {
  double U, W;
};

/// Front, excited slow branch, back at w_J, rest branch back to the origin.
std::vector<PhasePoint> singular_orbit(const Kernel& kernel, double alpha, double theta,
                                       double gamma, int n_per_segment = 400);

struct PortraitSample {
  double z, U, W;
};

struct PhasePortrait {
  std::vector<PortraitSample> samples;
  std::vector<PhasePoint> singular_overlay;
};

/// z_window <= 0 selects [-40/rho, Z + 10 mu/omega2 + 40/rho].
PhasePortrait phase_portrait(const PulseSolution& solution, double z_window = 0.0, int n = 4000);

/// Symmetric Hausdorff distance between two polylines.
double hausdorff_distance(const std::vector<PhasePoint>& a, const std::vector<PhasePoint>& b);

std::string portrait_csv(const PhasePortrait& portrait);
std::string singular_csv(const std::vector<PhasePoint>& orbit);
std::string pulse_json(const PulseSolution& solution);

}  // namespace wavefront
