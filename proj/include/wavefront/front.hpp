#pragma once

// Traveling front U(z) connecting 0 to alpha, with U(0) = theta.

#include <string>
#include <vector>

#include "wavefront/wavespeed.hpp"

namespace wavefront {

struct FrontSolution {
  Kernel kernel;
  ModelParams params;
  double mu0 = 0.0;
};

/// Closed form, exact for every supported kernel family.
double front_value(const FrontSolution& front, double z);
double front_derivative(const FrontSolution& front, double z);

/// Direct quadrature of the variation-of-parameters integrals.
double front_value_quadrature(const FrontSolution& front, double z,
                              const QuadratureSettings& settings = {});
double front_derivative_quadrature(const FrontSolution& front, double z,
                                   const QuadratureSettings& settings = {});

/// alpha int_{-inf}^{c0 z/(c0 + sgn(z) mu0)} K, the right-hand side of
/// mu0 U' + U = alpha F.
double front_forcing(const FrontSolution& front, double z);

struct FrontValidation {
  double threshold_at_zero = 0.0;
  double derivative_at_zero = 0.0;
  double left_max = 0.0;
  double right_min = 0.0;
  double left_limit = 0.0;
  double right_limit = 0.0;
  double z_window = 0.0;
  int interior_extrema = 0;  // sign changes of U' found on the sampled window
  bool pass = false;
};

/// Default sampling half-width 40/rho.
double default_front_window(const Kernel& kernel);

/// tol bounds |U(0) - theta|; tail_tol bounds both limits (relative to alpha).
FrontValidation validate_front(const FrontSolution& front, double z_window = 0.0,
                               int n_samples = 4000, double tol = 1e-8, double tail_tol = 1e-5);

struct FrontSample {
  double z, U, Uprime;
};

std::vector<FrontSample> front_profile(const FrontSolution& front, double z_lo, double z_hi, int n);
std::string front_profile_csv(const std::vector<FrontSample>& rows);

}  // namespace wavefront
