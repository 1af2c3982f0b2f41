#pragma once

// Coupling kernels of the form e^{-a|x|} (trigonometric or linear factor),
// their normalization, zero-crossing structure, repeated integrals Lambda^n K,
// and the A/B/C class verdict.

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "wavefront/errors.hpp"
#include "wavefront/exp_poly.hpp"
#include "wavefront/numerics.hpp"

namespace wavefront {

namespace form {
/// (rho/2) e^{-rho|x|}
struct Exponential {
  double rho = 1.0;
};
/// A e^{-a|x|}(cos(bx) + c)
struct ExpCosPlus {
  double a = 0.2, b = 2.0, c = 0.4;
};
/// A e^{-a|x|}(a sin|x| + cos x)
struct ExpSinCos {
  double a = 0.3;
};
/// A e^{-a|x|}(c - cos(bx))
struct ExpConstMinusCos {
  double a = 0.2, b = 2.0, c = 0.4;
};
/// A e^{-a|x|}(b cos(cx + d) + e sin(cx + f)); not symmetric in general.
struct ExpTrig {
  double a = 1.0, b = 1.0, c = 0.0, d = 0.0, e = 0.0, f = 0.0;
};
/// A e^{-a|x|}(c - b|x|)
struct ExpLinear {
  double a = 1.0, b = 0.0, c = 1.0;
};
}  // namespace form

struct KernelSpec {
  std::variant<form::Exponential, form::ExpCosPlus, form::ExpSinCos, form::ExpConstMinusCos,
               form::ExpTrig, form::ExpLinear>
      form;

  /// Throws InvalidParameter on a non-positive decay rate or non-finite parameter.
  void validate() const;
  std::string form_name() const;
  /// Decay rate of the e^{-a|x|} factor.
  double decay() const;

  /// Aliases k1, k2, k3, exp.
  static KernelSpec builtin(std::string_view alias);
};

class Kernel {
 public:
  const KernelSpec& spec() const { return spec_; }
  /// Normalizing constant; for non-symmetric kernels each side has its own.
  double amplitude() const { return amp_left_; }
  double amplitude_left() const { return amp_left_; }
  double amplitude_right() const { return amp_right_; }
  const Envelope& envelope() const { return envelope_; }
  bool symmetric() const { return symmetric_; }

  /// y -> K(-y) and y -> K(y) on y >= 0.
  const ExpPoly& left() const { return left_; }
  const ExpPoly& right() const { return right_; }

  double operator()(double x) const;

  /// int_{-inf}^x K.
  double cdf(double x) const;
  /// int_{-inf}^x e^{w (t - x)} K(t) dt, w > 0.
  double weighted_cdf(double w, double x) const;
  /// int_{-inf}^0 e^{s x} K(x) dx.
  double left_laplace(double s) const;
  complex left_laplace(complex s) const;

  /// Lambda^n K as a function of y = -x >= 0 (closed form).
  const ExpPoly& lambda_poly(int n) const;

  /// Largest |Im rate|, i.e. the fastest oscillation frequency.
  double max_frequency() const;

  static constexpr int kMaxLambdaOrder = 12;

 private:
  friend Kernel normalize(const KernelSpec& spec, const QuadratureSettings& settings);
  KernelSpec spec_;
  double amp_left_ = 1.0;
  double amp_right_ = 1.0;
  Envelope envelope_;
  bool symmetric_ = true;
  ExpPoly left_;
  ExpPoly right_;
  std::vector<ExpPoly> lambda_;
};

/// Scales the spec so each half-line integral equals 1/2. The amplitude comes
/// from the closed-form half integral, checked against quadrature.
Kernel normalize(const KernelSpec& spec, const QuadratureSettings& settings = {});

double eval(const Kernel& kernel, double x);

struct Crossing {
  double location;  // > 0; the zero sits at -location on the left side
  int slope_sign;   // sign of K' at the zero
};

struct ZeroStructure {
  std::vector<Crossing> left_crossings;
  std::vector<Crossing> right_crossings;
  bool left_truncated = false;
  bool right_truncated = false;
  double window = 0.0;

  bool truncated() const { return left_truncated || right_truncated; }
};

/// Radius where the envelope drops below 1e-12.
double default_window(const Kernel& kernel);

/// grid_density <= 0 selects 32 max(1, frequency) points per unit length.
ZeroStructure zero_structure(const Kernel& kernel, double window, double grid_density = 0.0);

/// Lambda^n K(x), x <= 0, from the closed form.
double lambda_n(const Kernel& kernel, int n, double x);
/// Same value by one quadrature of the Cauchy repeated-integral formula.
double lambda_n_quadrature(const Kernel& kernel, int n, double x,
                           const QuadratureSettings& settings = {});

enum class WaveSpeedKind { A, B, C, none };

struct WaveSpeedConditionReport {
  WaveSpeedKind kind = WaveSpeedKind::none;
  int order = 0;
  std::optional<double> switch_point;
  /// Sign of Lambda^n K(x) as x -> -inf: +1, -1, or 0 when it decays.
  int tail_sign = 0;
  std::vector<std::pair<double, double>> evidence_grid;

  std::string label() const;  // "A2", "B2", "C1", "none"
};

WaveSpeedConditionReport wave_speed_condition(const Kernel& kernel, int n_max = 6,
                                              double window = 0.0);

struct ThresholdMargin {
  Side side;
  int index;        // crossing index n in M_n or N_n
  double location;
  double value;     // alpha/2 -+ alpha * partial integral
  double bound;     // theta
  double slack;     // bound - value (left) or value - bound (right); must be positive
  bool tail_bound = false;  // envelope estimate covering crossings past the window
};

struct SideVerdict {
  // zero: L_0 / R_0; positive: L_j / R_k; negative: L_-j / R_-k.
  enum class Kind { zero, positive, negative, fail } kind = Kind::fail;
  int count = 0;
  bool infinite = false;

  std::string label(char letter) const;  // e.g. "L_inf", "R_-inf", "L_0", "L_3"
};

struct ThresholdConditionReport {
  SideVerdict left;
  SideVerdict right;
  std::vector<ThresholdMargin> margins;
  std::optional<ThresholdMargin> failure;
};

class MarginViolation : public Error {
 public:
  MarginViolation(const std::string& what, ThresholdConditionReport report)
      : Error(what), report_(std::move(report)) {}
  const ThresholdConditionReport& report() const { return report_; }

 private:
  ThresholdConditionReport report_;
};

/// Slack below which a margin counts as violated.
inline constexpr double kMarginTolerance = 1e-9;

ThresholdConditionReport threshold_conditions(const Kernel& kernel, const ZeroStructure& zeros,
                                              double alpha, double theta);

enum class KernelClass { A, B, C, unclassified };

struct KernelClassReport {
  KernelClass cls = KernelClass::unclassified;
  int j = 0;
  int k = 0;
  bool j_infinite = false;
  bool k_infinite = false;
  WaveSpeedConditionReport wave_speed;
  ThresholdConditionReport threshold;
  ZeroStructure zeros;

  std::string label() const;  // "A_{inf,inf}", "C_{inf,inf}", "unclassified"
};

KernelClassReport classify(const Kernel& kernel, double alpha, double theta, int n_max = 6,
                           double window = 0.0);

}  // namespace wavefront
