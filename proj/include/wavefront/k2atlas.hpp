#pragma once

// The one-parameter family K2(x; a) = A e^{-a|x|}(a sin|x| + cos x) on the
// (a, theta) plane, with alpha = 1 and no axonal delay.

#include <optional>
#include <string>
#include <vector>

#include "wavefront/kernel.hpp"

namespace wavefront::k2 {

/// Normalizing constant (a^2 + 1)/(4a).
double amplitude(double a);

/// int_{-inf}^0 |x| K2(x; a) dx = (3a^2 - 1)/(4a(a^2 + 1)).
double f_moment(double a);

/// Root of f_moment bracketed by a sign scan over (0.05, 5).
double a_star(double tol = 1e-12);

/// Left zeros -M_j of K2: M_j(a) = j pi - arctan(1/a), j >= 1.
double left_zero(double a, int j);

struct QuadraticCoefficients {
  double c2, c1, c0;
};
QuadraticCoefficients quadratic_coefficients(double a, double theta);

/// mu = 1/x_+ with x_+ the positive root of c2 x^2 + c1 x + c0 = 0.
double quadratic_wave_speed(double a, double theta);

/// 1/2 - int_{-M_2(a)}^0 K2(x; a) dx
double g_threshold(double a);

enum class ClassKind { A, B, boundary };
std::string to_string(ClassKind k);

struct AtlasPoint {
  double a = 0.0;
  double theta = 0.0;
  bool in_region = false;
  ClassKind class_kind = ClassKind::boundary;
  std::optional<double> mu0;
};

struct AtlasGrid {
  double a_lo, a_hi, theta_lo, theta_hi;
  int n_a, n_theta;
  double a_star;
  std::vector<AtlasPoint> points;  // row-major: theta index outer, a index inner

  const AtlasPoint& at(int i_a, int i_theta) const {
    return points[static_cast<std::size_t>(i_theta) * static_cast<std::size_t>(n_a) +
                  static_cast<std::size_t>(i_a)];
  }
};

AtlasPoint atlas_point(double a, double theta);

AtlasGrid region_scan(double a_lo = 0.05, double a_hi = 3.0, double theta_lo = 0.01,
                      double theta_hi = 0.49, int n_a = 300, int n_theta = 300);

std::string atlas_csv(const AtlasGrid& grid);
std::string atlas_json(const AtlasGrid& grid);

inline KernelSpec spec(double a) { return {form::ExpSinCos{a}}; }

}  // namespace wavefront::k2
