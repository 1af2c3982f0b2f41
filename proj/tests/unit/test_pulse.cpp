#include <doctest.h>

#include <cmath>

#include <json.hpp>

#include "wavefront/pulse.hpp"

using namespace wavefront;

namespace {

struct Fixture {
  Kernel kernel;
  double front_speed;
};

Fixture fixture(const char* alias) {
  Kernel k = normalize(KernelSpec::builtin(alias));
  const double mu = solve_wave_speed(k, {1.0, 0.4, kInfiniteSpeed}, wave_speed_condition(k)).mu0;
  return {std::move(k), mu};
}

}  // namespace

TEST_CASE("omega_eigenvalues") {
  const auto e = omega_eigenvalues(1e-3, 1e-3);
  // roots of w^2 - (1 + gamma eps) w + eps (1 + gamma)
  const double b = 1.0 + 1e-6;
  const double c = 1e-3 * (1.0 + 1e-3);
  const double r = std::sqrt(b * b - 4 * c);
  CHECK(e.omega1 == doctest::Approx((b + r) / 2).epsilon(1e-14));
  CHECK(e.omega2 == doctest::Approx(2 * c / (b + r)).epsilon(1e-14));
  CHECK(e.omega1 + e.omega2 == doctest::Approx(1.000001).epsilon(1e-14));
  CHECK(e.omega1 * e.omega2 == doctest::Approx(0.001001).epsilon(1e-13));
  CHECK(e.one_minus_omega1 == doctest::Approx(1.0 - e.omega1).epsilon(1e-10));
  const auto tiny = omega_eigenvalues(1e-12, 1e-3);
  CHECK(std::abs(tiny.omega1 - 1.0) < 1e-11);
  CHECK(tiny.omega2 < 1e-11);
  CHECK_THROWS_AS(omega_eigenvalues(0.3, 0.1), ComplexEigenvalues);
  CHECK_THROWS_AS(omega_eigenvalues(-1e-3, 0.1), InvalidParameter);
}

TEST_CASE("PulseParams validation") {
  CHECK_NOTHROW(PulseParams{}.validate());
  CHECK_THROWS_AS((PulseParams{1.0, 0.6, 1e-3, 1e-3}.validate()), InvalidParameter);
  // alpha must stay below (1 + gamma) theta / gamma
  CHECK_THROWS_AS((PulseParams{1.0, 0.4, 1.0, 1e-3}.validate()), InvalidParameter);
  CHECK_THROWS_AS((PulseParams{1.0, 0.4, 1e-3, 0.3}.validate()), InvalidParameter);
}

TEST_CASE("pulse_value: closed form against quadrature") {
  const Fixture f = fixture("k2");
  const PulseParams p;
  for (double z : {-8.0, 0.0, 3.0, 15.0, 27.0, 40.0}) {
    const auto cf = pulse_value(f.kernel, p, 0.12, 26.0, z);
    const auto q = pulse_value_quadrature(f.kernel, p, 0.12, 26.0, z);
    CHECK(std::abs(cf.U - q.U) < 1e-8);
    CHECK(std::abs(cf.W - q.W) < 1e-8);
  }
  CHECK_THROWS_AS(pulse_value(f.kernel, p, -0.1, 26.0, 0.0), DomainError);
}

TEST_CASE("pulse_value: wide pulse at small epsilon approaches the front") {
  const Fixture f = fixture("k1");
  const PulseParams p{1.0, 0.4, 1e-3, 1e-9};
  const FrontSolution front{f.kernel, {1.0, 0.4, kInfiniteSpeed}, f.front_speed};
  for (double z : {-10.0, -1.0, 0.0, 2.0, 10.0}) {
    CHECK(std::abs(pulse_value(f.kernel, p, f.front_speed, 1e4, z).U - front_value(front, z)) < 1e-4);
  }
}

TEST_CASE("solve_pulse: K1 fast pulse") {
  const Fixture f = fixture("k1");
  const PulseParams p;
  const PulseSolution s = solve_pulse(f.kernel, p, f.front_speed);
  CHECK(s.residual <= 1e-8);
  CHECK(s.mu > 0.5 * f.front_speed);
  CHECK(s.Z > 0.0);
  // independent residual by direct quadrature
  CHECK(std::abs(pulse_value_quadrature(f.kernel, p, s.mu, s.Z, 0.0).U - 0.4) < 1e-8);
  CHECK(std::abs(pulse_value_quadrature(f.kernel, p, s.mu, s.Z, s.Z).U - 0.4) < 1e-8);
  for (const auto& r : s.roots) CHECK(r.mu <= s.mu);
  CHECK(s.roots.size() >= 2);

  // traveling-coordinate system residual with finite differences
  const double h = 1e-4;
  double worst = 0.0;
  for (double z : linspace(-30.0, s.Z + 60.0, 100)) {
    const auto v = pulse_value(f.kernel, p, s.mu, s.Z, z);
    const auto vp = pulse_value(f.kernel, p, s.mu, s.Z, z + h);
    const auto vm = pulse_value(f.kernel, p, s.mu, s.Z, z - h);
    const double du = (vp.U - vm.U) / (2 * h);
    const double dw = (vp.W - vm.W) / (2 * h);
    const double drive = f.kernel.cdf(z) - f.kernel.cdf(z - s.Z);
    worst = std::max(worst, std::abs(s.mu * du + v.U + v.W - drive));
    worst = std::max(worst, std::abs(s.mu * dw - p.epsilon * (v.U - p.gamma * v.W)));
  }
  CHECK(worst <= 1e-6);

  // above threshold on a single interval
  int crossings = 0;
  double prev = pulse_value(f.kernel, p, s.mu, s.Z, -40.0).U - 0.4;
  for (double z : linspace(-40.0, s.Z + 200.0, 6000)) {
    const double v = pulse_value(f.kernel, p, s.mu, s.Z, z).U - 0.4;
    if (prev * v < 0.0) ++crossings;
    prev = v;
  }
  CHECK(crossings == 2);
}

TEST_CASE("solve_pulse: K2 and K3 converge") {
  for (const char* alias : {"k2", "k3"}) {
    const Fixture f = fixture(alias);
    const PulseSolution s = solve_pulse(f.kernel, PulseParams{}, f.front_speed);
    CHECK(s.residual <= 1e-8);
    CHECK(std::abs(s.mu - f.front_speed) < 0.2 * f.front_speed);
  }
}

TEST_CASE("solve_pulse: speed approaches the front speed as epsilon shrinks") {
  const Fixture f = fixture("k2");
  double prev = 1e9;
  for (double eps : {1e-3, 1e-4, 1e-5}) {
    const PulseSolution s = solve_pulse(f.kernel, {1.0, 0.4, 1e-3, eps}, f.front_speed);
    const double gap = std::abs(s.mu - f.front_speed);
    CHECK(gap < prev);
    prev = gap;
  }
  CHECK(prev <= 1e-2 * f.front_speed);
  CHECK_THROWS_AS(solve_pulse(f.kernel, PulseParams{}, -1.0), InvalidParameter);
}

TEST_CASE("singular_width and orbit") {
  const PulseParams p;
  const double wj = 1.0 - 0.8;
  CHECK(singular_width(p, 0.5) == doctest::Approx(0.5 / (1e-3 * 1.001) * std::log(1.0 / (1.0 - 1.001 * wj))));
  const Fixture f = fixture("k1");
  const auto orbit = singular_orbit(f.kernel, 1.0, 0.4, 1e-3, 100);
  CHECK(orbit.front().U == 0.0);
  CHECK(orbit.front().W == 0.0);
  CHECK(orbit.back().U == doctest::Approx(0.0));
  CHECK(orbit.back().W == doctest::Approx(0.0));
  bool reaches_corner = false;
  for (const auto& q : orbit) reaches_corner |= (q.U == 1.0 && q.W == 0.0);
  CHECK(reaches_corner);
  // slow pieces lie on U + W = alpha (active) or U + W = 0 (rest)
  for (const auto& q : orbit) {
    if (q.W > 0.0 && q.W < wj - 1e-12) {
      CHECK((std::abs(q.U + q.W - 1.0) < 1e-12 || std::abs(q.U + q.W) < 1e-12));
    }
  }
}

TEST_CASE("phase_portrait and exports") {
  const Fixture f = fixture("k3");
  const PulseSolution s = solve_pulse(f.kernel, PulseParams{}, f.front_speed);
  const PhasePortrait pp = phase_portrait(s);
  REQUIRE(pp.samples.size() > 100);
  for (std::size_t i = 0; i + 1 < pp.samples.size(); ++i) CHECK(pp.samples[i].z < pp.samples[i + 1].z);
  CHECK(std::abs(pp.samples.front().U) < 1e-4);
  CHECK(std::abs(pp.samples.back().U) < 1e-4);
  CHECK(std::abs(pp.samples.back().W) < 1e-4);
  CHECK_FALSE(pp.singular_overlay.empty());
  const PhasePortrait small = phase_portrait(s, 10.0, 3);
  CHECK(small.samples.size() >= 3);
  CHECK(portrait_csv(pp).rfind("z,U,W\n", 0) == 0);
  CHECK(singular_csv(pp.singular_overlay).rfind("U_sing,W_sing\n", 0) == 0);
  const auto j = nlohmann::json::parse(pulse_json(s));
  CHECK(j["mu"].get<double>() == s.mu);
  CHECK(j["Z"].get<double>() == s.Z);
  CHECK(j["epsilon"].get<double>() == 1e-3);
}

TEST_CASE("hausdorff_distance") {
  const std::vector<PhasePoint> a{{0, 0}, {1, 0}, {1, 1}};
  CHECK(hausdorff_distance(a, a) == 0.0);
  const std::vector<PhasePoint> b{{0, 0.25}, {1, 0.25}};
  // farthest point of a from b is (1, 1); of b from a is 0.25 away
  CHECK(hausdorff_distance(a, b) == doctest::Approx(0.75));
  const std::vector<PhasePoint> dense{{0, 0}, {0.5, 0}, {1, 0}, {1, 0.5}, {1, 1}};
  CHECK(hausdorff_distance(a, dense) == doctest::Approx(0.0));
  CHECK_THROWS_AS(hausdorff_distance({}, a), InvalidParameter);
}

TEST_CASE("phase portrait approaches the singular orbit as epsilon shrinks") {
  for (const char* alias : {"k1", "k2", "k3"}) {
    CAPTURE(alias);
    const Fixture f = fixture(alias);
    double prev = 1e9;
    for (double eps : {1e-3, 1e-4, 1e-5}) {
      PulseParams p;
      p.epsilon = eps;
      const PhasePortrait pp = phase_portrait(solve_pulse(f.kernel, p, f.front_speed));
      std::vector<PhasePoint> curve;
      for (const auto& q : pp.samples) curve.push_back({q.U, q.W});
      const double h = hausdorff_distance(curve, pp.singular_overlay);
      CHECK(h < 0.7 * prev);
      prev = h;
    }
    CHECK(prev < 5e-3);
  }
}

TEST_CASE("singular orbit reaches the front extrema") {
  const Fixture f = fixture("k2");
  const auto orbit = singular_orbit(f.kernel, 1.0, 0.4, 1e-3, 50);
  const FrontSolution front{f.kernel, {1.0, 0.4, kInfiniteSpeed}, f.front_speed};
  // dense oracle for max U on the front
  double umax = 0.0;
  for (double z : linspace(0.0, 30.0, 300001)) umax = std::max(umax, front_value(front, z));
  double reach = 0.0;
  for (const auto& q : orbit)
    if (q.W == 0.0) reach = std::max(reach, q.U);
  CHECK(reach == doctest::Approx(umax).epsilon(1e-9));
}
