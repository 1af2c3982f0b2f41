#include "wavefront/exp_poly.hpp"

#include <algorithm>
#include <cmath>

#include "wavefront/errors.hpp"

namespace wavefront {

using cplx = std::complex<double>;

namespace {

bool same_rate(cplx a, cplx b) {
  return std::abs(a - b) <= 1e-14 * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// Antiderivative polynomial of t^m e^{g t}: e^{g t} P(t) with
// P(t) = sum_k (-1)^k m!/((m-k)! g^{k+1}) t^{m-k}.
cplx antideriv_poly(int m, cplx g, double t) {
  cplx sum = 0.0;
  cplx gpow = g;  // g^{k+1}
  double ratio = 1.0;  // m!/(m-k)!
  for (int k = 0; k <= m; ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    sum += sign * ratio / gpow * std::pow(t, m - k);
    ratio *= (m - k);
    gpow *= g;
  }
  return sum;
}

// int_0^Y t^m e^{g t} dt by its power series, used when |g| Y is small.
cplx head_series(int m, cplx g, double Y) {
  cplx sum = 0.0;
  cplx term = std::pow(Y, m + 1);  // g^j Y^{m+j+1} / j!
  for (int j = 0; j < 400; ++j) {
    const cplx add = term / static_cast<double>(m + j + 1);
    sum += add;
    if (std::abs(add) <= 1e-17 * std::abs(sum) && j > 2) break;
    term *= g * Y / static_cast<double>(j + 1);
  }
  return sum;
}

}  // namespace

Poly poly_mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

Poly poly_add(const Poly& a, const Poly& b) {
  Poly out(std::max(a.size(), b.size()), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  return out;
}

Poly poly_scale(const Poly& a, cplx s) {
  Poly out = a;
  for (auto& c : out) c *= s;
  return out;
}

Poly poly_compose_affine(const Poly& p, cplx alpha, cplx beta) {
  // Horner in polynomial arithmetic.
  Poly out;
  const Poly lin{beta, alpha};
  for (auto it = p.rbegin(); it != p.rend(); ++it) {
    out = poly_add(poly_mul(out, lin), Poly{*it});
  }
  return out;
}

cplx poly_eval(const Poly& p, cplx x) {
  cplx v = 0.0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) v = v * x + *it;
  return v;
}

int poly_degree(const Poly& p, double rel_tol) {
  double scale = 0.0;
  for (const auto& c : p) scale = std::max(scale, std::abs(c));
  for (int k = static_cast<int>(p.size()) - 1; k >= 0; --k) {
    if (std::abs(p[static_cast<std::size_t>(k)]) > rel_tol * scale) return k;
  }
  return -1;
}

std::vector<cplx> poly_roots_upto_quadratic(const Poly& p, double rel_tol) {
  const int deg = poly_degree(p, rel_tol);
  if (deg > 2) throw InvalidParameter("poly_roots_upto_quadratic: degree exceeds 2");
  if (deg <= 0) return {};
  if (deg == 1) return {-p[0] / p[1]};
  const cplx a = p[2];
  const cplx b = p[1];
  const cplx c = p[0];
  cplx disc = std::sqrt(b * b - 4.0 * a * c);
  // Choose the sign that avoids cancellation.
  if (std::real(std::conj(b) * disc) < 0.0) disc = -disc;
  const cplx q = -0.5 * (b + disc);
  if (q == 0.0) return {0.0, 0.0};
  return {q / a, c / q};
}

ExpPoly::ExpPoly(std::vector<ExpTerm> terms) {
  for (const auto& t : terms) {
    if (t.coef == 0.0) continue;
    auto it = std::find_if(terms_.begin(), terms_.end(), [&](const ExpTerm& u) {
      return u.power == t.power && same_rate(u.rate, t.rate);
    });
    if (it == terms_.end()) {
      terms_.push_back(t);
    } else {
      it->coef += t.coef;
    }
  }
  std::erase_if(terms_, [](const ExpTerm& t) { return t.coef == 0.0; });
}

double ExpPoly::value(double y) const { return std::real(value_complex(y)); }

cplx ExpPoly::value_complex(cplx y) const {
  cplx v = 0.0;
  for (const auto& t : terms_) v += t.coef * std::pow(y, t.power) * std::exp(t.rate * y);
  return v;
}

cplx ExpPoly::weighted_tail(cplx w, double Y) const {
  cplx v = 0.0;
  for (const auto& t : terms_) {
    const cplx g = t.rate - w;
    if (!(std::real(g) < 0.0)) {
      throw DomainError("ExpPoly::weighted_tail: integrand does not decay");
    }
    v -= t.coef * std::exp(t.rate * Y) * antideriv_poly(t.power, g, Y);
  }
  return v;
}

double ExpPoly::weighted_tail(double w, double Y) const {
  return std::real(weighted_tail(cplx(w, 0.0), Y));
}

cplx ExpPoly::weighted_head(cplx w, double Y) const {
  cplx v = 0.0;
  if (Y == 0.0) return v;
  for (const auto& t : terms_) {
    const cplx g = t.rate + w;
    if (std::abs(g) * Y <= 2.0 + t.power) {
      v += t.coef * std::exp(-w * Y) * head_series(t.power, g, Y);
    } else {
      v += t.coef * (std::exp(t.rate * Y) * antideriv_poly(t.power, g, Y) -
                     std::exp(-w * Y) * antideriv_poly(t.power, g, 0.0));
    }
  }
  return v;
}

double ExpPoly::weighted_head(double w, double Y) const {
  return std::real(weighted_head(cplx(w, 0.0), Y));
}

ExpPoly ExpPoly::primitive() const {
  std::vector<ExpTerm> out;
  for (const auto& t : terms_) {
    const int m = t.power;
    if (t.rate == 0.0) {
      out.push_back({t.coef / static_cast<double>(m + 1), 0.0, m + 1});
      continue;
    }
    cplx gpow = t.rate;
    double ratio = 1.0;
    for (int k = 0; k <= m; ++k) {
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;
      out.push_back({t.coef * sign * ratio / gpow, t.rate, m - k});
      ratio *= (m - k);
      gpow *= t.rate;
    }
    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
    out.push_back({-t.coef * sign * factorial(m) / std::pow(t.rate, m + 1), 0.0, 0});
  }
  return ExpPoly(std::move(out));
}

ExpPoly ExpPoly::times_y() const {
  std::vector<ExpTerm> out = terms_;
  for (auto& t : out) ++t.power;
  return ExpPoly(std::move(out));
}

ExpPoly ExpPoly::scaled(cplx s) const {
  std::vector<ExpTerm> out = terms_;
  for (auto& t : out) t.coef *= s;
  return ExpPoly(std::move(out));
}

ExpPoly ExpPoly::polynomial_part() const {
  std::vector<ExpTerm> out;
  for (const auto& t : terms_)
    if (t.rate == 0.0) out.push_back(t);
  return ExpPoly(std::move(out));
}

int ExpPoly::asymptotic_sign() const {
  double scale = 0.0;
  for (const auto& t : terms_) scale = std::max(scale, std::abs(t.coef));
  int best_power = -1;
  double lead = 0.0;
  for (const auto& t : terms_) {
    if (t.rate != 0.0) continue;
    if (std::abs(t.coef) <= 1e-12 * scale) continue;
    if (t.power > best_power) {
      best_power = t.power;
      lead = std::real(t.coef);
    }
  }
  if (best_power < 0) return 0;
  return lead > 0.0 ? 1 : -1;
}

void ExpPoly::rational_laplace(Poly& p, Poly& q) const {
  struct Group {
    cplx rate;
    int max_power;
  };
  std::vector<Group> groups;
  for (const auto& t : terms_) {
    auto it = std::find_if(groups.begin(), groups.end(),
                           [&](const Group& g) { return same_rate(g.rate, t.rate); });
    if (it == groups.end()) {
      groups.push_back({t.rate, t.power});
    } else {
      it->max_power = std::max(it->max_power, t.power);
    }
  }
  auto linear_power = [](cplx root, int k) {
    Poly out{1.0};
    for (int i = 0; i < k; ++i) out = poly_mul(out, Poly{-root, 1.0});
    return out;
  };
  q = Poly{1.0};
  for (const auto& g : groups) q = poly_mul(q, linear_power(g.rate, g.max_power + 1));
  p = Poly{0.0};
  for (const auto& t : terms_) {
    Poly num{t.coef * factorial(t.power)};
    for (const auto& g : groups) {
      if (same_rate(g.rate, t.rate)) {
        num = poly_mul(num, linear_power(g.rate, g.max_power - t.power));
      } else {
        num = poly_mul(num, linear_power(g.rate, g.max_power + 1));
      }
    }
    p = poly_add(p, num);
  }
}

}  // namespace wavefront
