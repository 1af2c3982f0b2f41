#pragma once

// Evans function E(lambda) = 1 - phi(mu0/(lambda+1)) / phi(mu0) of a front,
// right-half-plane scans by the argument principle, and the rational-Laplace
// stability certificate.

#include <string>
#include <vector>

#include "wavefront/front.hpp"

namespace wavefront {

struct EvansContext {
  FrontSolution front;
  double phi_mu0 = 0.0;
};

EvansContext make_evans_context(const FrontSolution& front);

/// Closed form; throws DomainError unless Re(lambda) > -1.
complex evans(const EvansContext& ctx, complex lambda);
complex evans_quadrature(const EvansContext& ctx, complex lambda,
                         const QuadratureSettings& settings = {});

struct EssentialSpectrum {
  double real_part = -1.0;
  std::string description = "vertical line Re(lambda) = -1";
};
EssentialSpectrum essential_spectrum();

/// mu0 phi'(mu0) / phi(mu0); throws NonPositive if the value is not positive.
double evans_derivative_at_zero(const EvansContext& ctx);

struct EvansSample {
  complex lambda;
  double modulus;
};

struct EvansScan {
  double delta = 0.0;
  double R = 0.0;
  int n_grid = 0;
  int contour_points = 0;  // samples used after adaptive refinement
  std::vector<EvansSample> grid;
  double min_modulus = 0.0;
  int winding_number = 0;
  bool stable = false;
  std::string kappa0;  // what the scan establishes about the spectral gap
};

inline constexpr double kModulusFloor = 1e-6;

EvansScan scan_right_half_plane(const EvansContext& ctx, double delta = 1e-3, double R = 50.0,
                                int n_grid = 128, int n_contour = 4096);

/// Zeros of E inside the circle |lambda - center| = radius.
int winding_number_circle(const EvansContext& ctx, complex center, double radius, int n = 512);

std::string evans_scan_csv(const EvansScan& scan);
std::string evans_scan_json(const EvansScan& scan);

struct RationalLaplaceCertificate {
  int p_degree = -1;
  int q_degree = -1;
  bool applicable = false;
  bool spectrally_stable = false;
  std::vector<complex> pbar_roots;
};

RationalLaplaceCertificate rational_laplace_certificate(const Kernel& kernel,
                                                        const EvansContext& ctx);

}  // namespace wavefront
