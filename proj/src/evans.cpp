#include "wavefront/evans.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "wavefront/io.hpp"

namespace wavefront {

namespace {

constexpr double kPi = std::numbers::pi;

complex laplace_argument(const EvansContext& ctx, complex lambda) {
  if (!(std::real(lambda) > -1.0)) {
    throw DomainError("Evans function is defined for Re(lambda) > -1");
  }
  const double mu = ctx.front.mu0;
  return (lambda + 1.0) / mu - 1.0 / ctx.front.params.c0;
}

double wrap_phase(double d) {
  while (d > kPi) d -= 2 * kPi;
  while (d <= -kPi) d += 2 * kPi;
  return d;
}

// Accumulated phase change of E along a parametrized path, refining any step
// whose phase jump exceeds pi/2.
struct PhaseWalker {
  const EvansContext& ctx;
  int samples = 0;
  double min_modulus = std::numeric_limits<double>::infinity();

  complex at(const std::function<complex(double)>& path, double t) {
    const complex e = evans(ctx, path(t));
    ++samples;
    min_modulus = std::min(min_modulus, std::abs(e));
    return e;
  }

  double segment(const std::function<complex(double)>& path, double t0, complex e0, double t1,
                 complex e1, int depth) {
    const double d = wrap_phase(std::arg(e1) - std::arg(e0));
    if (std::abs(d) <= kPi / 2) return d;
    if (depth >= 30) {
      if (std::abs(d) >= kPi - 1e-9) {
        throw ContourTooCoarse("phase jump of E stays >= pi after refinement");
      }
      return d;
    }
    const double tm = 0.5 * (t0 + t1);
    const complex em = at(path, tm);
    return segment(path, t0, e0, tm, em, depth + 1) + segment(path, tm, em, t1, e1, depth + 1);
  }

  double walk(const std::function<complex(double)>& path, int n) {
    double total = 0.0;
    double t_prev = 0.0;
    complex e_prev = at(path, 0.0);
    for (int i = 1; i <= n; ++i) {
      const double t = static_cast<double>(i) / n;
      const complex e = at(path, t);
      total += segment(path, t_prev, e_prev, t, e, 0);
      t_prev = t;
      e_prev = e;
    }
    return total;
  }
};

}  // namespace

EvansContext make_evans_context(const FrontSolution& front) {
  return {front, phi(front.kernel, front.params.c0, front.mu0)};
}

complex evans(const EvansContext& ctx, complex lambda) {
  return 1.0 - ctx.front.kernel.left_laplace(laplace_argument(ctx, lambda)) / ctx.phi_mu0;
}

complex evans_quadrature(const EvansContext& ctx, complex lambda,
                         const QuadratureSettings& settings) {
  const complex s = laplace_argument(ctx, lambda);
  const auto& kernel = ctx.front.kernel;
  const auto& env = kernel.envelope();
  const complex transform = integrate_halfline(
      [&](double x) { return std::exp(s * x) * kernel(x); }, Side::left,
      Envelope{env.C, env.rho + std::real(s)}, settings);
  return 1.0 - transform / ctx.phi_mu0;
}

EssentialSpectrum essential_spectrum() { return {}; }

double evans_derivative_at_zero(const EvansContext& ctx) {
  const auto& f = ctx.front;
  const double d = f.mu0 * phi_derivative(f.kernel, f.params.c0, f.mu0) / ctx.phi_mu0;
  if (!(d > 0.0)) {
    throw NonPositive("E'(0) = " + std::to_string(d) + " is not positive; lambda = 0 is not simple");
  }
  return d;
}

int winding_number_circle(const EvansContext& ctx, complex center, double radius, int n) {
  PhaseWalker walker{ctx};
  const std::function<complex(double)> path = [&](double t) {
    return center + radius * std::exp(complex(0.0, 2 * kPi * t));
  };
  return static_cast<int>(std::lround(walker.walk(path, n) / (2 * kPi)));
}

EvansScan scan_right_half_plane(const EvansContext& ctx, double delta, double R, int n_grid,
                                int n_contour) {
  if (!(delta > 0.0) || !(delta < R)) throw InvalidParameter("Evans scan needs 0 < delta < R");
  if (n_grid < 64 || n_contour < 64) throw InvalidParameter("Evans scan grids must be >= 64");

  EvansScan scan;
  scan.delta = delta;
  scan.R = R;
  scan.n_grid = n_grid;

  const auto re = linspace(0.0, R, static_cast<std::size_t>(n_grid));
  const auto im = linspace(-R, R, static_cast<std::size_t>(n_grid));
  std::vector<EvansSample> cells(re.size() * im.size());
  std::vector<char> keep(cells.size(), 0);
  parallel_for(re.size(), [&](std::size_t i) {
    for (std::size_t k = 0; k < im.size(); ++k) {
      const complex lam(re[i], im[k]);
      const std::size_t idx = i * im.size() + k;
      if (std::abs(lam) < delta) continue;
      cells[idx] = {lam, std::abs(evans(ctx, lam))};
      keep[idx] = 1;
    }
  });
  double min_mod = std::numeric_limits<double>::infinity();
  for (std::size_t idx = 0; idx < cells.size(); ++idx) {
    if (!keep[idx]) continue;
    scan.grid.push_back(cells[idx]);
    min_mod = std::min(min_mod, cells[idx].modulus);
  }

  // Boundary of {Re >= 0, delta <= |lambda| <= R}, counterclockwise; the
  // point budget is split by arc length.
  const double outer = kPi * R;
  const double axis = R - delta;
  const double inner = kPi * delta;
  const double total = outer + 2 * axis + inner;
  auto share = [&](double len) {
    return std::max(16, static_cast<int>(std::lround(n_contour * len / total)));
  };
  PhaseWalker walker{ctx};
  double phase = 0.0;
  phase += walker.walk([&](double t) { return R * std::exp(complex(0.0, kPi * (t - 0.5))); },
                       share(outer));
  phase += walker.walk([&](double t) { return complex(0.0, R - t * axis); }, share(axis));
  phase += walker.walk([&](double t) { return delta * std::exp(complex(0.0, kPi * (0.5 - t))); },
                       share(inner));
  phase += walker.walk([&](double t) { return complex(0.0, -delta - t * axis); }, share(axis));
  scan.winding_number = static_cast<int>(std::lround(phase / (2 * kPi)));
  scan.contour_points = walker.samples;
  scan.min_modulus = std::min(min_mod, walker.min_modulus);
  scan.stable = scan.winding_number == 0 && scan.min_modulus > kModulusFloor;
  scan.kappa0 = scan.winding_number == 0
                    ? "not established: no zeros found in the scanned region"
                    : "zeros detected inside the scanned region";
  return scan;
}

std::string evans_scan_csv(const EvansScan& scan) {
  std::ostringstream os;
  os << "re_lambda,im_lambda,abs_evans\n";
  for (const auto& s : scan.grid) {
    os << fmt_num(std::real(s.lambda)) << ',' << fmt_num(std::imag(s.lambda)) << ','
       << fmt_num(s.modulus) << '\n';
  }
  return os.str();
}

std::string evans_scan_json(const EvansScan& scan) {
  nlohmann::ordered_json j;
  j["delta"] = scan.delta;
  j["R"] = scan.R;
  j["winding"] = scan.winding_number;
  j["min_modulus"] = scan.min_modulus;
  j["stable"] = scan.stable;
  j["n_grid"] = scan.n_grid;
  j["contour_points"] = scan.contour_points;
  j["kappa0"] = scan.kappa0;
  return j.dump(2) + "\n";
}

RationalLaplaceCertificate rational_laplace_certificate(const Kernel& kernel,
                                                        const EvansContext& ctx) {
  RationalLaplaceCertificate cert;
  Poly p;
  Poly q;
  kernel.left().rational_laplace(p, q);
  cert.p_degree = std::max(0, poly_degree(p));
  cert.q_degree = poly_degree(q);
  cert.applicable = cert.p_degree <= 2 && cert.q_degree <= 2;
  if (!cert.applicable) return cert;

  // pbar(lambda) = phi(mu0) q(s) - p(s) with s = lambda/mu0 + 1/mu0 - 1/c0.
  const double mu = ctx.front.mu0;
  const complex s0 = 1.0 / mu - 1.0 / ctx.front.params.c0;
  const Poly qs = poly_compose_affine(q, 1.0 / mu, s0);
  const Poly ps = poly_compose_affine(p, 1.0 / mu, s0);
  const Poly pbar = poly_add(poly_scale(qs, ctx.phi_mu0), poly_scale(ps, -1.0));
  cert.pbar_roots = poly_roots_upto_quadratic(pbar);
  // One root is lambda = 0; every other root must lie in the open left half-plane.
  auto nearest = std::min_element(cert.pbar_roots.begin(), cert.pbar_roots.end(),
                                  [](complex a, complex b) { return std::abs(a) < std::abs(b); });
  bool has_zero = nearest != cert.pbar_roots.end() && std::abs(*nearest) < 1e-8;
  bool others_negative = true;
  for (auto it = cert.pbar_roots.begin(); it != cert.pbar_roots.end(); ++it) {
    if (it == nearest) continue;
    if (!(std::real(*it) < 0.0)) others_negative = false;
  }
  cert.spectrally_stable = has_zero && others_negative;
  return cert;
}

}  // namespace wavefront
