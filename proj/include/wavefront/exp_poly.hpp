#pragma once

// Finite sums  sum_i c_i y^{m_i} e^{beta_i y}  on y >= 0 with complex c_i, beta_i.
// Every half-kernel of the supported families is such a sum (trig factors are
// split into conjugate exponential pairs), so all transforms and repeated
// integrals used by the toolkit have exact closed forms.

#include <complex>
#include <vector>

namespace wavefront {

struct ExpTerm {
  std::complex<double> coef;
  std::complex<double> rate;
  int power = 0;
};

/// Dense complex polynomial, coefficient of s^k at index k.
using Poly = std::vector<std::complex<double>>;

Poly poly_mul(const Poly& a, const Poly& b);
Poly poly_add(const Poly& a, const Poly& b);
Poly poly_scale(const Poly& a, std::complex<double> s);
/// p(alpha * x + beta) as a polynomial in x.
Poly poly_compose_affine(const Poly& p, std::complex<double> alpha, std::complex<double> beta);
std::complex<double> poly_eval(const Poly& p, std::complex<double> x);
/// Degree after dropping leading coefficients below rel_tol * max |coef|.
int poly_degree(const Poly& p, double rel_tol = 1e-12);
/// Roots of a polynomial of degree <= 2 (after trimming).
std::vector<std::complex<double>> poly_roots_upto_quadratic(const Poly& p, double rel_tol = 1e-12);

class ExpPoly {
 public:
  ExpPoly() = default;
  explicit ExpPoly(std::vector<ExpTerm> terms);

  const std::vector<ExpTerm>& terms() const { return terms_; }

  double value(double y) const;
  std::complex<double> value_complex(std::complex<double> y) const;

  /// int_Y^inf e^{-w (y - Y)} f(y) dy. Requires Re(rate - w) < 0 for every term.
  std::complex<double> weighted_tail(std::complex<double> w, double Y) const;
  double weighted_tail(double w, double Y) const;

  /// int_0^inf e^{-s y} f(y) dy.
  std::complex<double> laplace(std::complex<double> s) const { return weighted_tail(s, 0.0); }
  double laplace(double s) const { return weighted_tail(s, 0.0); }

  /// int_0^Y e^{w (t - Y)} f(t) dt.
  std::complex<double> weighted_head(std::complex<double> w, double Y) const;
  double weighted_head(double w, double Y) const;

  /// Antiderivative vanishing at y = 0.
  ExpPoly primitive() const;
  /// y * f(y).
  ExpPoly times_y() const;
  ExpPoly scaled(std::complex<double> s) const;

  /// Terms with rate exactly zero, i.e. the part surviving as y -> inf.
  ExpPoly polynomial_part() const;
  /// lim_{y->inf} f(y) sign (+1, -1, or 0 when it decays to zero), judged by
  /// the leading power of the polynomial part.
  int asymptotic_sign() const;

  /// Laplace transform as p(s)/q(s) with q = prod (s - beta_r)^{max power + 1}.
  void rational_laplace(Poly& p, Poly& q) const;

 private:
  std::vector<ExpTerm> terms_;
};

}  // namespace wavefront
