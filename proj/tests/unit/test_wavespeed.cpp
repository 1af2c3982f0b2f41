#include <doctest.h>

#include <cmath>

#include "wavefront/wavespeed.hpp"

using namespace wavefront;

namespace {

Kernel builtin(const char* alias) { return normalize(KernelSpec::builtin(alias)); }

// Sign changes of phi - level on n interior points of (0, c0).
int dense_roots(const Kernel& k, double c0, double level, int n, double* last = nullptr) {
  int count = 0;
  double prev_mu = 0.0;
  double prev = -level;
  for (int i = 1; i <= n; ++i) {
    const double mu = c0 * i / (n + 1.0);
    const double v = phi(k, c0, mu) - level;
    if (prev * v < 0.0) {
      ++count;
      if (last) *last = find_root_bracketed([&](double m) { return phi(k, c0, m) - level; }, prev_mu, mu, 1e-15);
    }
    prev = v;
    prev_mu = mu;
  }
  return count;
}

}  // namespace

TEST_CASE("phi: exponential kernel closed form") {
  const Kernel e = builtin("exp");
  for (double mu : {0.1, 0.5, 1.0, 7.0}) CHECK(phi(e, kInfiniteSpeed, mu) == doctest::Approx(mu / (2 * (mu + 1))));
  CHECK(phi(e, kInfiniteSpeed, 1.0) == doctest::Approx(0.25));
  // finite c0: kappa = 1/mu - 1/c0, phi = 1/(2(kappa + 1))
  CHECK(phi(e, 2.0, 0.5) == doctest::Approx(1.0 / (2.0 * (2.0 - 0.5 + 1.0))));
}

TEST_CASE("phi: limits at both ends of the speed range") {
  for (const char* alias : {"k1", "k2", "k3"}) {
    const Kernel k = builtin(alias);
    CHECK(std::abs(phi(k, 1.0, 1.0 - 1e-9) - 0.5) < 1e-6);
    CHECK(std::abs(phi(k, 1.0, 1e-5)) < 1e-4);
  }
  CHECK_THROWS_AS(phi(builtin("k1"), 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(phi(builtin("k1"), 1.0, -0.1), DomainError);
  CHECK_THROWS_AS(speed_exponent(kInfiniteSpeed, 0.0), DomainError);
}

TEST_CASE("phi: closed form against quadrature") {
  QuadratureSettings s;
  s.abs_tol = 1e-13;
  s.rel_tol = 1e-12;
  for (const char* alias : {"exp", "k1", "k2", "k3"}) {
    const Kernel k = builtin(alias);
    for (double mu : linspace(0.02, 0.98, 50)) {
      const double cf = phi(k, 1.0, mu);
      const double q = phi_quadrature(k, 1.0, mu, s);
      CHECK_MESSAGE(std::abs(cf - q) <= 1e-9 * std::max(std::abs(cf), 1e-3), alias, " mu=", mu);
    }
  }
}

TEST_CASE("zeta: moments and the derivative of phi") {
  const Kernel k2 = builtin("k2");
  for (double mu : {0.05, 0.3, 0.8}) {
    const double h = 1e-5 * mu;
    const double fd = (phi(k2, 1.0, mu + h) - phi(k2, 1.0, mu - h)) / (2 * h);
    CHECK(zeta(k2, 1.0, 0, mu) == doctest::Approx(mu * mu * fd).epsilon(1e-6));
    CHECK(phi_derivative(k2, 1.0, mu) == doctest::Approx(fd).epsilon(1e-6));
    for (int n = 0; n <= 2; ++n) {
      CHECK(std::abs(zeta(k2, 1.0, n, mu) - zeta_quadrature(k2, 1.0, n, mu)) < 1e-8);
    }
  }
  const Kernel e = builtin("exp");
  for (double mu : linspace(0.05, 20.0, 30)) CHECK(zeta(e, kInfiniteSpeed, 1, mu) > 0.0);
  // zeta_2 of K2 changes sign once, + to -
  int changes = 0;
  double prev = zeta(k2, 1.0, 2, 1e-3);
  CHECK(prev > 0.0);
  for (double mu : linspace(2e-3, 0.999, 2000)) {
    const double v = zeta(k2, 1.0, 2, mu);
    if (prev * v < 0.0) ++changes;
    prev = v;
  }
  CHECK(changes == 1);
  CHECK(prev < 0.0);
}

TEST_CASE("solve_wave_speed: exponential kernel inversion") {
  const Kernel e = builtin("exp");
  const auto r = solve_wave_speed(e, {1.0, 0.4, kInfiniteSpeed}, wave_speed_condition(e));
  CHECK(std::abs(r.mu0 - 0.25) < 1e-10);
  CHECK(r.certificate == SpeedCertificate::strictly_increasing);
  for (double theta : {0.1, 0.2, 0.45}) {
    const auto s = solve_wave_speed(e, {1.0, theta, kInfiniteSpeed}, wave_speed_condition(e));
    CHECK(s.mu0 == doctest::Approx((1 - 2 * theta) / (2 * theta)).epsilon(1e-10));
  }
}

TEST_CASE("solve_wave_speed: example kernels match a dense scan") {
  const std::vector<std::pair<const char*, SpeedCertificate>> cases{
      {"k1", SpeedCertificate::strictly_increasing},
      {"k2", SpeedCertificate::single_max_above_half},
      {"k3", SpeedCertificate::single_min_below_zero}};
  for (const auto& [alias, cert] : cases) {
    const Kernel k = builtin(alias);
    const ModelParams p{1.0, 0.4, 1.0};
    const auto r = solve_wave_speed(k, p, wave_speed_condition(k));
    double scan_root = 0.0;
    CHECK(dense_roots(k, 1.0, p.target(), 20000, &scan_root) == 1);
    CHECK(std::abs(r.mu0 - scan_root) < 1e-8);
    CHECK(r.residual <= 1e-10);
    CHECK(r.certificate == cert);
    CHECK(r.mu0 > 0.0);
    CHECK(r.mu0 < 1.0);
  }
}

TEST_CASE("solve_wave_speed: parameter validation") {
  const Kernel e = builtin("exp");
  CHECK_THROWS_AS(solve_wave_speed(e, {1.0, 0.5, 1.0}, wave_speed_condition(e)), InvalidParameter);
  CHECK_THROWS_AS(solve_wave_speed(e, {1.0, 0.4, -1.0}, wave_speed_condition(e)), InvalidParameter);
}

TEST_CASE("phi_profile: shapes of the example kernels") {
  const auto e = phi_profile(builtin("exp"), kInfiniteSpeed, 5);
  REQUIRE(e.size() == 5);
  for (const auto& [mu, v] : e) CHECK(v == doctest::Approx(mu / (2 * (mu + 1))));

  auto diffs = [](const std::vector<std::pair<double, double>>& prof) {
    std::vector<double> d;
    for (std::size_t i = 0; i + 1 < prof.size(); ++i) d.push_back(prof[i + 1].second - prof[i].second);
    return d;
  };
  const auto p1 = phi_profile(builtin("k1"), 1.0, 400);
  for (double d : diffs(p1)) CHECK(d > 0.0);
  CHECK(p1.front().second < 0.01);
  CHECK(p1.back().second > 0.49);

  const auto p2 = phi_profile(builtin("k2"), 1.0, 400);
  double max2 = -1.0;
  for (const auto& s : p2) max2 = std::max(max2, s.second);
  CHECK(max2 > 0.5);
  int flips = 0;
  const auto d2 = diffs(p2);
  for (std::size_t i = 0; i + 1 < d2.size(); ++i) flips += (d2[i] > 0) != (d2[i + 1] > 0) ? 1 : 0;
  CHECK(flips == 1);
  CHECK(d2.front() > 0.0);

  const auto p3 = phi_profile(builtin("k3"), 1.0, 400);
  double min3 = 1.0;
  for (const auto& s : p3) min3 = std::min(min3, s.second);
  CHECK(min3 < 0.0);
  const auto d3 = diffs(p3);
  flips = 0;
  for (std::size_t i = 0; i + 1 < d3.size(); ++i) flips += (d3[i] > 0) != (d3[i + 1] > 0) ? 1 : 0;
  CHECK(flips == 1);
  CHECK(d3.front() < 0.0);

  const std::string csv = phi_profile_csv(e);
  CHECK(csv.rfind("mu,phi\n", 0) == 0);
  CHECK_THROWS_AS(phi_profile(builtin("exp"), 1.0, 1), InvalidParameter);
}
