#include "wavefront/pulse.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "wavefront/io.hpp"

namespace wavefront {

void PulseParams::validate() const {
  if (!(theta > 0.0) || !(2.0 * theta < alpha)) {
    throw InvalidParameter("pulse parameters need 0 < 2 theta < alpha");
  }
  if (!(gamma > 0.0) || !(epsilon > 0.0)) {
    throw InvalidParameter("pulse parameters need gamma > 0 and epsilon > 0");
  }
  if (!(alpha < (1.0 + gamma) * theta / gamma)) {
    throw InvalidParameter("pulse parameters need alpha < (1 + gamma) theta / gamma");
  }
  const double disc = (1.0 - gamma * epsilon) * (1.0 - gamma * epsilon) - 4.0 * epsilon;
  if (!(disc > 0.0)) throw InvalidParameter("pulse parameters need (1 - gamma eps)^2 > 4 eps");
}

EigenPair omega_eigenvalues(double epsilon, double gamma) {
  if (!(epsilon > 0.0) || !(gamma > 0.0)) {
    throw InvalidParameter("omega_eigenvalues: epsilon and gamma must be positive");
  }
  const double disc = (1.0 - gamma * epsilon) * (1.0 - gamma * epsilon) - 4.0 * epsilon;
  if (disc < 0.0) throw ComplexEigenvalues("(1 - gamma eps)^2 - 4 eps < 0");
  const double r = std::sqrt(disc);
  const double omega1 = 0.5 * (1.0 + gamma * epsilon + r);
  // Product and complement forms avoid cancellation for small epsilon.
  const double omega2 = 2.0 * epsilon * (1.0 + gamma) / (1.0 + gamma * epsilon + r);
  const double one_minus_omega1 = 2.0 * epsilon / (1.0 - gamma * epsilon + r);
  return {omega1, omega2, one_minus_omega1};
}

namespace {

struct Weights {
  EigenPair e;
  double w1, w2;      // omega_i / mu
  double cu1, cu2;    // U coefficients of e^{w_i x}
  double cw1, cw2;    // W coefficients of e^{w_i x}
};

Weights weights(const PulseParams& p, double mu) {
  Weights w;
  w.e = omega_eigenvalues(p.epsilon, p.gamma);
  const double d = w.e.omega1 - w.e.omega2;
  w.w1 = w.e.omega1 / mu;
  w.w2 = w.e.omega2 / mu;
  w.cu1 = (1.0 - w.e.omega2) / w.e.omega1 / d;
  w.cu2 = -w.e.one_minus_omega1 / w.e.omega2 / d;
  w.cw1 = -1.0 / w.e.omega1 / d;
  w.cw2 = 1.0 / w.e.omega2 / d;
  return w;
}

void check_shape(double mu, double Z) {
  if (!(mu > 0.0) || !(Z > 0.0)) throw DomainError("pulse needs mu > 0 and Z > 0");
}

}  // namespace

PulseState pulse_value(const Kernel& kernel, const PulseParams& p, double mu, double Z, double z) {
  check_shape(mu, Z);
  const Weights w = weights(p, mu);
  const double mass = kernel.cdf(z) - kernel.cdf(z - Z);
  const double g1 = kernel.weighted_cdf(w.w1, z) - kernel.weighted_cdf(w.w1, z - Z);
  const double g2 = kernel.weighted_cdf(w.w2, z) - kernel.weighted_cdf(w.w2, z - Z);
  const double a = p.alpha;
  const double U = a * p.gamma / (1.0 + p.gamma) * mass - a * (w.cu1 * g1 + w.cu2 * g2);
  const double W = a / (1.0 + p.gamma) * mass - p.epsilon * a * (w.cw1 * g1 + w.cw2 * g2);
  return {U, W};
}

PulseState pulse_value_quadrature(const Kernel& kernel, const PulseParams& p, double mu, double Z,
                                  double z, const QuadratureSettings& s) {
  check_shape(mu, Z);
  const Weights w = weights(p, mu);
  const auto& env = kernel.envelope();
  const double freq = kernel.max_frequency();

  auto finite_piece = [&](const auto& f, double lo, double hi) {
    if (!(hi > lo)) return 0.0;
    const int panels = static_cast<int>(std::clamp(std::ceil((hi - lo) * std::max(freq, env.rho)), 8.0, 4096.0));
    return integrate(f, lo, hi, s, panels);
  };
  // Integrates f over (-inf, top], breaking at the kernel kinks in `breaks`.
  auto line_integral = [&](const auto& f, double top, std::vector<double> breaks, double bound) {
    double lower = top;
    for (double b : breaks) lower = std::min(lower, b);
    double total = integrate_halfline([&](double t) { return f(t + lower); }, Side::left,
                                      Envelope{bound, env.rho}, s);
    breaks.push_back(lower);
    breaks.push_back(top);
    std::sort(breaks.begin(), breaks.end());
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
      const double lo = std::max(breaks[i], lower);
      const double hi = std::min(breaks[i + 1], top);
      total += finite_piece(f, lo, hi);
    }
    return total;
  };

  auto drive = [&](double x) { return kernel(x) - kernel(x - Z); };
  const double cmax_u = std::abs(w.cu1) + std::abs(w.cu2);
  const double cmax_w = std::abs(w.cw1) + std::abs(w.cw2);
  std::vector<double> kinks;
  for (double b : {0.0, Z})
    if (b < z) kinks.push_back(b);

  const double conv_u = line_integral(
      [&](double x) {
        return (w.cu1 * std::exp(w.w1 * (x - z)) + w.cu2 * std::exp(w.w2 * (x - z))) * drive(x);
      },
      z, kinks, 2.0 * env.C * cmax_u);
  const double conv_w = line_integral(
      [&](double x) {
        return (w.cw1 * std::exp(w.w1 * (x - z)) + w.cw2 * std::exp(w.w2 * (x - z))) * drive(x);
      },
      z, kinks, 2.0 * env.C * cmax_w);

  double mass = 0.0;
  {
    const double lo = z - Z;
    if (lo < 0.0 && z > 0.0) {
      mass = finite_piece([&](double x) { return kernel(x); }, lo, 0.0) +
             finite_piece([&](double x) { return kernel(x); }, 0.0, z);
    } else {
      mass = finite_piece([&](double x) { return kernel(x); }, lo, z);
    }
  }
  const double a = p.alpha;
  return {a * p.gamma / (1.0 + p.gamma) * mass - a * conv_u,
          a / (1.0 + p.gamma) * mass - p.epsilon * a * conv_w};
}

double singular_width(const PulseParams& p, double mu) {
  const double wj = p.alpha - 2.0 * p.theta;
  const double ceiling = p.alpha / (1.0 + p.gamma);
  if (!(wj > 0.0) || !(wj < ceiling)) {
    throw NoBackLevel("back level alpha - 2 theta lies outside (0, alpha/(1+gamma))");
  }
  return mu / (p.epsilon * (1.0 + p.gamma)) * std::log(1.0 / (1.0 - wj / ceiling));
}

PulseSolution solve_pulse(const Kernel& kernel, const PulseParams& params, double front_speed) {
  params.validate();
  if (!(front_speed > 0.0)) throw InvalidParameter("solve_pulse: front speed must be positive");
  const double Z0 = singular_width(params, front_speed);
  const double rho = kernel.envelope().rho;
  const std::vector<double> seeds{Z0, 0.5 * Z0, 2.0 * Z0, 5.0 / rho, 10.0 / rho, 20.0 / rho,
                                  40.0 / rho};

  const std::function<Vec2(Vec2)> residual = [&](Vec2 v) -> Vec2 {
    if (!(v.x > 0.0) || !(v.y > 0.0)) {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      return {nan, nan};
    }
    return {pulse_value(kernel, params, v.x, v.y, 0.0).U - params.theta,
            pulse_value(kernel, params, v.x, v.y, v.y).U - params.theta};
  };

  std::vector<std::optional<PulseRoot>> found(seeds.size());
  parallel_for(seeds.size(), [&](std::size_t i) {
    try {
      const auto r = solve_2d(residual, {front_speed, seeds[i]}, 1e-12, 100);
      found[i] = PulseRoot{r.x.x, r.x.y, r.residual};
    } catch (const Error&) {
    }
  });

  PulseSolution sol{kernel, params, 0.0, 0.0, 0.0, front_speed, {}};
  for (const auto& f : found) {
    if (!f) continue;
    const bool dup = std::any_of(sol.roots.begin(), sol.roots.end(), [&](const PulseRoot& r) {
      return std::abs(r.mu - f->mu) <= 1e-7 * r.mu && std::abs(r.Z - f->Z) <= 1e-6 * r.Z;
    });
    if (!dup) sol.roots.push_back(*f);
  }
  if (sol.roots.empty()) throw NonConvergence("pulse compatibility solve failed from every seed");
  const auto fast = std::max_element(sol.roots.begin(), sol.roots.end(),
                                     [](const PulseRoot& a, const PulseRoot& b) { return a.mu < b.mu; });
  if (fast->mu < 0.5 * front_speed) {
    throw SlowBranchOnly("every converged pulse is more than 50% slower than the front");
  }
  sol.mu = fast->mu;
  sol.Z = fast->Z;
  sol.residual = fast->residual;
  return sol;
}

namespace {

std::vector<PhasePoint> singular_orbit_at(const Kernel& kernel, double alpha, double theta,
                                          double gamma, double mu, int n) {
  const double wj = alpha - 2.0 * theta;
  if (!(wj > 0.0) || !(wj < alpha / (1.0 + gamma))) {
    throw NoBackLevel("back level alpha - 2 theta lies outside (0, alpha/(1+gamma))");
  }
  const FrontSolution front{kernel, {alpha, theta, kInfiniteSpeed}, mu};
  const double window = default_front_window(kernel);
  auto zs = linspace(-window, window, static_cast<std::size_t>(n));
  // The horizontal segments must reach the true extrema of U, not the sampled ones.
  const auto dU = [&](double z) { return front_derivative(front, z); };
  const double step = 0.1 / std::max(1.0, kernel.max_frequency());
  const auto scan = linspace(-window, window, static_cast<std::size_t>(2.0 * window / step) + 2);
  for (const auto& b : scan_sign_changes(dU, scan)) {
    zs.push_back(find_root_bracketed(dU, b, 1e-12));
  }
  std::sort(zs.begin(), zs.end());
  std::vector<double> u(zs.size());
  for (std::size_t i = 0; i < zs.size(); ++i) u[i] = front_value(front, zs[i]);

  std::vector<PhasePoint> orbit;
  orbit.push_back({0.0, 0.0});
  for (double v : u) orbit.push_back({v, 0.0});
  orbit.push_back({alpha, 0.0});
  for (double w : linspace(0.0, wj, static_cast<std::size_t>(n))) orbit.push_back({alpha - w, w});
  // The back is the front reflected through the level w_J.
  for (double v : u) orbit.push_back({alpha - wj - v, wj});
  orbit.push_back({-wj, wj});
  for (double w : linspace(wj, 0.0, static_cast<std::size_t>(n))) orbit.push_back({-w, w});
  return orbit;
}

}  // namespace

std::vector<PhasePoint> singular_orbit(const Kernel& kernel, double alpha, double theta,
                                       double gamma, int n_per_segment) {
  const ModelParams mp{alpha, theta, kInfiniteSpeed};
  const auto ws = solve_wave_speed(kernel, mp, wave_speed_condition(kernel));
  return singular_orbit_at(kernel, alpha, theta, gamma, ws.mu0, std::max(2, n_per_segment));
}

PhasePortrait phase_portrait(const PulseSolution& sol, double z_window, int n) {
  if (n < 3) throw InvalidParameter("phase_portrait: need n >= 3");
  const double rho = sol.kernel.envelope().rho;
  const auto e = omega_eigenvalues(sol.params.epsilon, sol.params.gamma);
  const double edge = 40.0 / rho;
  double z_lo = -edge;
  double z_hi = sol.Z + 10.0 * sol.mu / e.omega2 + edge;
  if (z_window > 0.0) {
    z_lo = -z_window;
    z_hi = sol.Z + z_window;
  }
  // Uniform coverage plus dense sampling through the two fast transitions.
  std::vector<double> zs = linspace(z_lo, z_hi, static_cast<std::size_t>(std::max(3, n / 4)));
  const std::size_t dense = static_cast<std::size_t>(std::max(2, (n - n / 4) / 2));
  for (double z : linspace(std::max(z_lo, -edge), std::min(z_hi, edge), dense)) zs.push_back(z);
  for (double z : linspace(std::max(z_lo, sol.Z - edge), std::min(z_hi, sol.Z + edge), dense))
    zs.push_back(z);
  std::sort(zs.begin(), zs.end());
  zs.erase(std::unique(zs.begin(), zs.end()), zs.end());

  PhasePortrait out;
  out.samples.resize(zs.size());
  parallel_for(zs.size(), [&](std::size_t i) {
    const auto s = pulse_value(sol.kernel, sol.params, sol.mu, sol.Z, zs[i]);
    out.samples[i] = {zs[i], s.U, s.W};
  });
  out.singular_overlay = singular_orbit_at(sol.kernel, sol.params.alpha, sol.params.theta,
                                           sol.params.gamma, sol.front_speed, 400);
  return out;
}

namespace {

double point_segment(PhasePoint p, PhasePoint a, PhasePoint b) {
  const double dx = b.U - a.U;
  const double dy = b.W - a.W;
  const double len2 = dx * dx + dy * dy;
  double t = 0.0;
  if (len2 > 0.0) t = std::clamp(((p.U - a.U) * dx + (p.W - a.W) * dy) / len2, 0.0, 1.0);
  return std::hypot(p.U - (a.U + t * dx), p.W - (a.W + t * dy));
}

double directed(const std::vector<PhasePoint>& from, const std::vector<PhasePoint>& to) {
  std::vector<double> best(from.size());
  parallel_for(from.size(), [&](std::size_t i) {
    double d = std::numeric_limits<double>::infinity();
    if (to.size() == 1) d = std::hypot(from[i].U - to[0].U, from[i].W - to[0].W);
    for (std::size_t k = 0; k + 1 < to.size(); ++k) d = std::min(d, point_segment(from[i], to[k], to[k + 1]));
    best[i] = d;
  });
  return best.empty() ? 0.0 : *std::max_element(best.begin(), best.end());
}

}  // namespace

double hausdorff_distance(const std::vector<PhasePoint>& a, const std::vector<PhasePoint>& b) {
  if (a.empty() || b.empty()) throw InvalidParameter("hausdorff_distance: empty polyline");
  return std::max(directed(a, b), directed(b, a));
}

std::string portrait_csv(const PhasePortrait& p) {
  std::ostringstream os;
  os << "z,U,W\n";
  for (const auto& s : p.samples) os << fmt_num(s.z) << ',' << fmt_num(s.U) << ',' << fmt_num(s.W) << '\n';
  return os.str();
}

std::string singular_csv(const std::vector<PhasePoint>& orbit) {
  std::ostringstream os;
  os << "U_sing,W_sing\n";
  for (const auto& s : orbit) os << fmt_num(s.U) << ',' << fmt_num(s.W) << '\n';
  return os.str();
}

std::string pulse_json(const PulseSolution& sol) {
  nlohmann::ordered_json j;
  j["mu"] = sol.mu;
  j["Z"] = sol.Z;
  j["residual"] = sol.residual;
  j["epsilon"] = sol.params.epsilon;
  j["gamma"] = sol.params.gamma;
  j["front_speed"] = sol.front_speed;
  j["roots"] = nlohmann::ordered_json::array();
  for (const auto& r : sol.roots) j["roots"].push_back({{"mu", r.mu}, {"Z", r.Z}, {"residual", r.residual}});
  return j.dump(2) + "\n";
}

}  // namespace wavefront
