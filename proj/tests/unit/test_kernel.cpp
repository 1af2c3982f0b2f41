#include <doctest.h>

#include <cmath>
#include <numbers>

#include "wavefront/kernel.hpp"
#include "wavefront/kernel_json.hpp"

using namespace wavefront;

namespace {

QuadratureSettings fine() {
  QuadratureSettings s;
  s.abs_tol = 1e-12;
  s.rel_tol = 1e-12;
  return s;
}

double half_integral(const Kernel& k, Side side) {
  return integrate_halfline([&](double x) { return k(x); }, side, k.envelope(), fine());
}

}  // namespace

TEST_CASE("normalize: builtin kernels integrate to 1/2 per side") {
  for (const char* alias : {"exp", "k1", "k2", "k3"}) {
    const Kernel k = normalize(KernelSpec::builtin(alias));
    CHECK(std::abs(half_integral(k, Side::left) - 0.5) < 1e-8);
    CHECK(std::abs(half_integral(k, Side::right) - 0.5) < 1e-8);
  }
}

TEST_CASE("normalize: amplitudes from elementary integrals") {
  // int_0^inf e^{-ax}(cos bx + c) = a/(a^2+b^2) + c/a
  const double a = 0.2, b = 2.0, c = 0.4;
  const Kernel k1 = normalize(KernelSpec::builtin("k1"));
  CHECK(k1.amplitude() == doctest::Approx(0.5 / (a / (a * a + b * b) + c / a)).epsilon(1e-12));
  // int_0^inf e^{-ax}(a sin x + cos x) = 2a/(a^2+1)
  const Kernel k2 = normalize(KernelSpec::builtin("k2"));
  CHECK(k2.amplitude() == doctest::Approx(0.5 * (0.09 + 1.0) / 0.6).epsilon(1e-12));
  const Kernel e = normalize(KernelSpec::builtin("exp"));
  CHECK(e(0.0) == doctest::Approx(0.5));
  CHECK(e(-2.0) == doctest::Approx(0.5 * std::exp(-2.0)));
}

TEST_CASE("normalize: non-symmetric forms get one amplitude per side") {
  const Kernel k = normalize({form::ExpTrig{1.0, 1.0, 0.5, 0.2, 0.2, -0.1}});
  CHECK_FALSE(k.symmetric());
  CHECK(k.amplitude_left() != doctest::Approx(k.amplitude_right()));
  CHECK(std::abs(half_integral(k, Side::left) - 0.5) < 1e-8);
  CHECK(std::abs(half_integral(k, Side::right) - 0.5) < 1e-8);
}

TEST_CASE("normalize: invalid and degenerate specs") {
  CHECK_THROWS_AS(normalize({form::ExpSinCos{-0.3}}), InvalidParameter);
  CHECK_THROWS_AS(normalize({form::ExpCosPlus{0.2, NAN, 0.4}}), InvalidParameter);
  // c = a^2/(a^2+b^2) makes the half integral vanish
  CHECK_THROWS_AS(normalize({form::ExpConstMinusCos{0.2, 2.0, 0.04 / 4.04}}), DegenerateKernel);
  CHECK_THROWS_AS(normalize({form::ExpLinear{1.0, 2.0, 1.0}}), DegenerateKernel);
}

TEST_CASE("eval: symmetry and envelope") {
  for (const char* alias : {"exp", "k1", "k2", "k3"}) {
    const Kernel k = normalize(KernelSpec::builtin(alias));
    CHECK(k.symmetric());
    for (double x : {0.3, 1.7, 4.2}) CHECK(k(x) == doctest::Approx(k(-x)).epsilon(1e-14));
    const auto& env = k.envelope();
    for (double x : linspace(-50.0, 50.0, 10000)) {
      CHECK_MESSAGE(std::abs(k(x)) <= env.C * std::exp(-env.rho * std::abs(x)) * (1.0 + 1e-12), alias, " x=", x);
    }
  }
}

TEST_CASE("zero_structure: K2 zeros sit at j pi - arctan(1/a)") {
  const double a = 0.3;
  const Kernel k = normalize(KernelSpec::builtin("k2"));
  CHECK(std::abs(k(-(std::numbers::pi - std::atan(1.0 / a)))) < 1e-12);
  const ZeroStructure z = zero_structure(k, 40.0);
  REQUIRE(z.left_crossings.size() >= 12);
  for (std::size_t j = 0; j < z.left_crossings.size(); ++j) {
    const double oracle = static_cast<double>(j + 1) * std::numbers::pi - std::atan(1.0 / a);
    CHECK(std::abs(z.left_crossings[j].location - oracle) < 1e-10);
    // first crossing: K rises through zero toward the positive core
    CHECK(z.left_crossings[j].slope_sign == (j % 2 == 0 ? 1 : -1));
  }
  CHECK(z.right_crossings.size() == z.left_crossings.size());
  CHECK(z.right_crossings.front().slope_sign == -1);
}

TEST_CASE("zero_structure: positive kernel and inhibitory core") {
  const ZeroStructure e = zero_structure(normalize(KernelSpec::builtin("exp")), 30.0);
  CHECK(e.left_crossings.empty());
  CHECK(e.right_crossings.empty());
  CHECK_FALSE(e.truncated());
  const Kernel k3 = normalize(KernelSpec::builtin("k3"));
  CHECK(k3(0.0) < 0.0);
  const ZeroStructure z3 = zero_structure(k3, default_window(k3));
  REQUIRE_FALSE(z3.left_crossings.empty());
  CHECK(z3.left_crossings.front().slope_sign == -1);
  CHECK(z3.truncated());
}

TEST_CASE("zero_structure: tangential zero is reported") {
  // cos(bx) + 1 touches zero at bx = pi without crossing
  const Kernel k = normalize({form::ExpCosPlus{0.2, 2.0, 1.0}});
  CHECK_THROWS_AS(zero_structure(k, 20.0), TangentialZero);
  CHECK_THROWS_AS(zero_structure(k, -1.0), InvalidParameter);
}

TEST_CASE("lambda_n: closed form against the Cauchy quadrature") {
  for (const char* alias : {"k1", "k2", "k3"}) {
    const Kernel k = normalize(KernelSpec::builtin(alias));
    for (int n = 0; n <= 4; ++n) {
      CHECK(lambda_n(k, n, 0.0) == doctest::Approx(0.0));
      for (double x : {-0.7, -3.3, -11.0, -25.0}) {
        CHECK_MESSAGE(std::abs(lambda_n(k, n, x) - lambda_n_quadrature(k, n, x, fine())) < 1e-9, alias, " n=", n);
      }
    }
  }
  const Kernel e = normalize(KernelSpec::builtin("exp"));
  // int_{-inf}^0 |x| e^x / 2 = 1/2
  CHECK(lambda_n(e, 1, -60.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK_THROWS_AS(lambda_n(e, 1, 1.0), DomainError);
}

TEST_CASE("lambda_n: recursion by one quadrature") {
  const Kernel k = normalize(KernelSpec::builtin("k2"));
  for (int n = 1; n <= 3; ++n) {
    for (double x : {-1.0, -4.5, -9.0}) {
      const double inner = integrate([&](double s) { return lambda_n(k, n - 1, s); }, x, 0.0, fine(), 32);
      CHECK(std::abs(lambda_n(k, n, x) - inner) < 1e-9);
    }
  }
}

TEST_CASE("wave_speed_condition: example kernels") {
  const auto w1 = wave_speed_condition(normalize(KernelSpec::builtin("k1")));
  CHECK(w1.label() == "A2");
  const auto w2 = wave_speed_condition(normalize(KernelSpec::builtin("k2")));
  CHECK(w2.label() == "B2");
  REQUIRE(w2.switch_point);
  CHECK(*w2.switch_point > 0.0);
  CHECK(w2.tail_sign < 0);
  const auto w3 = wave_speed_condition(normalize(KernelSpec::builtin("k3")));
  CHECK(w3.label() == "C1");
  CHECK(w3.tail_sign > 0);
  CHECK(wave_speed_condition(normalize(KernelSpec::builtin("exp"))).label() == "A1");
  CHECK_FALSE(w2.evidence_grid.empty());
}

TEST_CASE("wave_speed_condition: B2 sign pattern of Lambda^2 K2") {
  const Kernel k = normalize(KernelSpec::builtin("k2"));
  const double B = *wave_speed_condition(k).switch_point;
  for (double x : linspace(-30.0, -1e-3, 3000)) {
    const double v = lambda_n(k, 2, x);
    if (x > -B + 1e-6) CHECK(v >= -1e-12);
    if (x < -B - 1e-6) CHECK(v <= 1e-12);
  }
}

TEST_CASE("threshold_conditions: example verdicts") {
  const Kernel k1 = normalize(KernelSpec::builtin("k1"));
  const auto t1 = threshold_conditions(k1, zero_structure(k1, default_window(k1)), 1.0, 0.4);
  CHECK(t1.left.label('L') == "L_inf");
  CHECK(t1.right.label('R') == "R_inf");
  for (const auto& m : t1.margins) CHECK(m.slack > kMarginTolerance);

  const Kernel k3 = normalize(KernelSpec::builtin("k3"));
  const auto t3 = threshold_conditions(k3, zero_structure(k3, default_window(k3)), 1.0, 0.4);
  CHECK(t3.left.label('L') == "L_-inf");
  CHECK(t3.right.label('R') == "R_-inf");

  const Kernel e = normalize(KernelSpec::builtin("exp"));
  const auto te = threshold_conditions(e, zero_structure(e, 30.0), 1.0, 0.3);
  CHECK(te.left.label('L') == "L_0");
  CHECK(te.right.label('R') == "R_0");
  CHECK(te.margins.empty());
}

TEST_CASE("threshold_conditions: first even crossing margin by hand") {
  // alpha/2 - alpha int_{-M_2}^0 K < theta with M_2 the second left zero of K2
  const double a = 0.3;
  const Kernel k = normalize(KernelSpec::builtin("k2"));
  const double M2 = 2.0 * std::numbers::pi - std::atan(1.0 / a);
  const double partial = integrate([&](double x) { return k(x); }, -M2, 0.0, fine(), 16);
  const auto rep = threshold_conditions(k, zero_structure(k, default_window(k)), 1.0, 0.4);
  bool found = false;
  for (const auto& m : rep.margins) {
    if (m.side == Side::left && m.index == 2 && !m.tail_bound) {
      found = true;
      CHECK(std::abs(m.value - (0.5 - partial)) < 1e-10);
      CHECK(m.slack == doctest::Approx(0.4 - (0.5 - partial)));
    }
  }
  CHECK(found);
}

TEST_CASE("threshold_conditions: violation carries the failing margin") {
  // K2 at small a fails the even-crossing margin at theta = 0.4
  const Kernel k = normalize({form::ExpSinCos{0.1}});
  const ZeroStructure z = zero_structure(k, default_window(k));
  try {
    threshold_conditions(k, z, 1.0, 0.4);
    FAIL("expected MarginViolation");
  } catch (const MarginViolation& e) {
    REQUIRE(e.report().failure);
    CHECK(e.report().failure->slack <= kMarginTolerance);
  }
  CHECK_THROWS_AS(threshold_conditions(k, z, 1.0, 0.6), InvalidParameter);
}

TEST_CASE("classify: example kernels") {
  CHECK(classify(normalize(KernelSpec::builtin("k1")), 1.0, 0.4).label() == "A_{inf,inf}");
  CHECK(classify(normalize(KernelSpec::builtin("k2")), 1.0, 0.4).label() == "B_{inf,inf}");
  CHECK(classify(normalize(KernelSpec::builtin("k3")), 1.0, 0.4).label() == "C_{inf,inf}");
  const auto e = classify(normalize(KernelSpec::builtin("exp")), 1.0, 0.4);
  CHECK(e.cls == KernelClass::A);
  CHECK(e.j == 0);
  CHECK(e.k == 0);
  const auto bad = classify(normalize({form::ExpSinCos{0.1}}), 1.0, 0.4);
  CHECK(bad.cls == KernelClass::unclassified);
  CHECK(bad.label() == "unclassified");
}

TEST_CASE("classify: lateral inhibition kernels close as A_{1,1} or B_{1,1}") {
  for (double b : {0.3, 0.5, 0.9}) {
    const Kernel k = normalize({form::ExpLinear{1.0, b, 1.0}});
    const ZeroStructure z = zero_structure(k, default_window(k));
    REQUIRE(z.left_crossings.size() == 1);
    CHECK(z.left_crossings.front().location == doctest::Approx(1.0 / b));
    const auto rep = classify(k, 1.0, 0.45);
    CHECK((rep.label() == "A_{1,1}" || rep.label() == "B_{1,1}"));
  }
}

TEST_CASE("kernel JSON round trip and strict parsing") {
  const std::vector<KernelSpec> specs{{form::Exponential{2.0}},       {form::ExpCosPlus{0.2, 2.0, 0.4}},
                                      {form::ExpSinCos{0.3}},         {form::ExpConstMinusCos{0.2, 2.0, 0.4}},
                                      {form::ExpTrig{1, 2, 3, 4, 5, 6}}, {form::ExpLinear{1.0, 0.5, 1.0}}};
  for (const auto& s : specs) {
    const auto j = kernel_spec_to_json(s);
    CHECK(kernel_spec_to_json(kernel_spec_from_json(j)) == j);
  }
  CHECK(kernel_spec_to_json(specs[2]).dump() == R"({"form":"exp_sin_cos","params":{"a":0.3}})");
  using nlohmann::json;
  CHECK_THROWS_AS(kernel_spec_from_json(json::parse(R"({"form":"gauss","params":{}})")), InvalidParameter);
  CHECK_THROWS_AS(kernel_spec_from_json(json::parse(R"({"form":"exp_sin_cos","params":{}})")), InvalidParameter);
  CHECK_THROWS_AS(kernel_spec_from_json(json::parse(R"({"form":"exp_sin_cos","params":{"a":1,"b":2}})")),
                  InvalidParameter);
  CHECK_THROWS_AS(KernelSpec::builtin("k9"), InvalidParameter);
}
