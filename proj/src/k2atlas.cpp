#include "wavefront/k2atlas.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "wavefront/io.hpp"

namespace wavefront::k2 {

namespace {

void check_a(double a) {
  if (!(a > 0.0) || !std::isfinite(a)) throw InvalidParameter("K2 family needs a > 0");
}

}  // namespace

double amplitude(double a) {
  check_a(a);
  return (a * a + 1.0) / (4.0 * a);
}

double f_moment(double a) {
  check_a(a);
  return (3.0 * a * a - 1.0) / (4.0 * a * (a * a + 1.0));
}

double a_star(double tol) {
  if (!(tol > 0.0)) throw InvalidParameter("a_star: tol must be positive");
  const auto grid = linspace(0.05, 5.0, 200);
  const auto brackets = scan_sign_changes([](double a) { return f_moment(a); }, grid);
  if (brackets.empty()) throw NoSignChange("f(a) has no sign change on (0.05, 5)");
  return find_root_bracketed([](double a) { return f_moment(a); }, brackets.front(), tol);
}

double left_zero(double a, int j) {
  check_a(a);
  if (j < 1) throw InvalidParameter("zero index starts at 1");
  return j * std::numbers::pi - std::atan(1.0 / a);
}

QuadraticCoefficients quadratic_coefficients(double a, double theta) {
  return {2.0 * a * (1.0 - 2.0 * theta), 3.0 * a * a - 8.0 * a * a * theta - 1.0,
          -4.0 * a * theta * (a * a + 1.0)};
}

double quadratic_wave_speed(double a, double theta) {
  check_a(a);
  if (!(theta > 0.0) || !(theta < 0.5)) throw InvalidParameter("quadratic speed needs 0 < theta < 1/2");
  const auto [c2, c1, c0] = quadratic_coefficients(a, theta);
  const double disc = c1 * c1 - 4.0 * c2 * c0;
  if (disc < 0.0) throw NoPositiveRoot("wave speed quadratic has complex roots");
  const double q = -0.5 * (c1 + std::copysign(std::sqrt(disc), c1));
  double best = -1.0;
  if (q != 0.0) {
    best = std::max(best, q / c2);
    best = std::max(best, c0 / q);
  }
  if (!(best > 0.0)) throw NoPositiveRoot("wave speed quadratic has no positive root");
  return 1.0 / best;
}

double g_threshold(double a) {
  check_a(a);
  // e^{-ay}(P sin y + Q cos y) is an antiderivative of e^{-ay}(a sin y + cos y).
  const double P = (1.0 - a * a) / (1.0 + a * a);
  const double Q = -2.0 * a / (1.0 + a * a);
  const double M2 = left_zero(a, 2);
  const double partial = std::exp(-a * M2) * (P * std::sin(M2) + Q * std::cos(M2)) - Q;
  return 0.5 - amplitude(a) * partial;
}

std::string to_string(ClassKind k) {
  switch (k) {
    case ClassKind::A: return "A";
    case ClassKind::B: return "B";
    case ClassKind::boundary: break;
  }
  return "boundary";
}

namespace {

ClassKind kind_for(double a) {
  const double f = f_moment(a);
  if (std::abs(f) <= 1e-14) return ClassKind::boundary;
  return f > 0.0 ? ClassKind::A : ClassKind::B;
}

}  // namespace

AtlasPoint atlas_point(double a, double theta) {
  AtlasPoint p;
  p.a = a;
  p.theta = theta;
  p.class_kind = kind_for(a);
  p.in_region = theta > 0.0 && theta < 0.5 && g_threshold(a) < theta;
  if (p.in_region) p.mu0 = quadratic_wave_speed(a, theta);
  return p;
}

AtlasGrid region_scan(double a_lo, double a_hi, double theta_lo, double theta_hi, int n_a,
                      int n_theta) {
  if (n_a < 2 || n_theta < 2) throw InvalidParameter("atlas resolution must be >= 2 per axis");
  if (!(a_lo > 0.0) || !(a_lo < a_hi)) throw InvalidParameter("atlas a range must lie in (0, inf)");
  if (!(theta_lo > 0.0) || !(theta_lo < theta_hi) || !(theta_hi < 0.5)) {
    throw InvalidParameter("atlas theta range must lie in (0, 1/2)");
  }
  AtlasGrid grid{a_lo, a_hi, theta_lo, theta_hi, n_a, n_theta, a_star(), {}};
  const auto as = linspace(a_lo, a_hi, static_cast<std::size_t>(n_a));
  const auto ts = linspace(theta_lo, theta_hi, static_cast<std::size_t>(n_theta));
  std::vector<double> g(as.size());
  std::vector<ClassKind> kinds(as.size());
  for (std::size_t i = 0; i < as.size(); ++i) {
    g[i] = g_threshold(as[i]);
    kinds[i] = kind_for(as[i]);
  }
  grid.points.resize(as.size() * ts.size());
  parallel_for(ts.size(), [&](std::size_t k) {
    for (std::size_t i = 0; i < as.size(); ++i) {
      AtlasPoint& p = grid.points[k * as.size() + i];
      p.a = as[i];
      p.theta = ts[k];
      p.class_kind = kinds[i];
      p.in_region = g[i] < ts[k];
      if (p.in_region) p.mu0 = quadratic_wave_speed(as[i], ts[k]);
    }
  });
  return grid;
}

std::string atlas_csv(const AtlasGrid& grid) {
  std::ostringstream os;
  os << "a,theta,in_region,class,mu\n";
  for (const auto& p : grid.points) {
    os << fmt_num(p.a) << ',' << fmt_num(p.theta) << ',' << (p.in_region ? 1 : 0) << ','
       << to_string(p.class_kind) << ',' << (p.mu0 ? fmt_num(*p.mu0) : std::string()) << '\n';
  }
  return os.str();
}

std::string atlas_json(const AtlasGrid& grid) {
  std::size_t inside = 0;
  for (const auto& p : grid.points) inside += p.in_region ? 1 : 0;
  nlohmann::ordered_json j;
  j["a_star"] = grid.a_star;
  j["n_a"] = grid.n_a;
  j["n_theta"] = grid.n_theta;
  j["a_range"] = {grid.a_lo, grid.a_hi};
  j["theta_range"] = {grid.theta_lo, grid.theta_hi};
  j["in_region_count"] = inside;
  return j.dump(2) + "\n";
}

}  // namespace wavefront::k2
