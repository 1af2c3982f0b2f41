#include "wavefront/numerics.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>

#include <boost/math/tools/toms748_solve.hpp>

namespace wavefront {

void QuadratureSettings::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || !(tail_cut > 0.0) || max_subdivisions < 1) {
    throw InvalidParameter("QuadratureSettings: tolerances must be positive and max_subdivisions >= 1");
  }
}

double halfline_truncation(const Envelope& envelope, const QuadratureSettings& settings) {
  settings.validate();
  if (envelope.C == 0.0) return 0.0;
  const double level = settings.tail_cut * settings.abs_tol * envelope.rho;
  return std::max(0.0, std::log(envelope.C / level) / envelope.rho);
}

double find_root_bracketed(const std::function<double(double)>& g, Bracket bracket, double tol,
                           int max_iter) {
  if (!(bracket.lo < bracket.hi)) {
    throw InvalidParameter("find_root_bracketed: need lo < hi");
  }
  if (bracket.f_lo == 0.0) return bracket.lo;
  if (bracket.f_hi == 0.0) return bracket.hi;
  if (!(bracket.f_lo * bracket.f_hi < 0.0)) {
    throw NoSignChange("find_root_bracketed: no sign change on [" + std::to_string(bracket.lo) +
                       ", " + std::to_string(bracket.hi) + "]");
  }
  const double width_tol = std::max(tol, 4.0 * std::numeric_limits<double>::epsilon() *
                                             std::max(std::abs(bracket.lo), std::abs(bracket.hi)));
  auto done = [width_tol](double a, double b) { return std::abs(b - a) <= width_tol; };
  std::uintmax_t iters = static_cast<std::uintmax_t>(max_iter);
  auto [a, b] = boost::math::tools::toms748_solve(g, bracket.lo, bracket.hi, bracket.f_lo,
                                                  bracket.f_hi, done, iters);
  if (!done(a, b) && g(a) != 0.0 && g(b) != 0.0) {
    throw MaxIterations("find_root_bracketed: iteration budget exhausted");
  }
  if (a == b) return a;
  const double mid = 0.5 * (a + b);
  return std::clamp(mid, bracket.lo, bracket.hi);
}

double find_root_bracketed(const std::function<double(double)>& g, double lo, double hi, double tol,
                           int max_iter) {
  return find_root_bracketed(g, Bracket{lo, hi, g(lo), g(hi)}, tol, max_iter);
}

namespace {

double inf_norm(Vec2 v) { return std::max(std::abs(v.x), std::abs(v.y)); }

}  // namespace

Solve2dResult solve_2d(const std::function<Vec2(Vec2)>& F, Vec2 x0, double tol, int max_iter) {
  Vec2 x = x0;
  Vec2 fx = F(x);
  double res = inf_norm(fx);
  for (int it = 0; it <= max_iter; ++it) {
    if (!std::isfinite(res)) throw NonConvergence("solve_2d: non-finite residual");
    if (res <= tol) return {x, res, it};
    if (it == max_iter) break;

    const double hx = std::max(1e-6, 1e-6 * std::abs(x.x));
    const double hy = std::max(1e-6, 1e-6 * std::abs(x.y));
    const Vec2 fxp = F({x.x + hx, x.y});
    const Vec2 fxm = F({x.x - hx, x.y});
    const Vec2 fyp = F({x.x, x.y + hy});
    const Vec2 fym = F({x.x, x.y - hy});
    const double j11 = (fxp.x - fxm.x) / (2 * hx);
    const double j21 = (fxp.y - fxm.y) / (2 * hx);
    const double j12 = (fyp.x - fym.x) / (2 * hy);
    const double j22 = (fyp.y - fym.y) / (2 * hy);
    const double det = j11 * j22 - j12 * j21;
    const double scale = std::max({std::abs(j11 * j22), std::abs(j12 * j21), 1e-300});
    if (!std::isfinite(det) || std::abs(det) <= 1e-14 * scale) {
      throw SingularJacobian("solve_2d: singular finite-difference Jacobian");
    }
    const Vec2 step{(j22 * fx.x - j12 * fx.y) / det, (-j21 * fx.x + j11 * fx.y) / det};

    double t = 1.0;
    Vec2 trial{};
    Vec2 ftrial{};
    double trial_res = 0.0;
    bool accepted = false;
    for (int halving = 0; halving < 40; ++halving) {
      trial = {x.x - t * step.x, x.y - t * step.y};
      ftrial = F(trial);
      trial_res = inf_norm(ftrial);
      if (std::isfinite(trial_res) && trial_res < res) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      throw NonConvergence("solve_2d: damping could not reduce the residual");
    }
    x = trial;
    fx = ftrial;
    res = trial_res;
  }
  throw MaxIterations("solve_2d: iteration budget exhausted");
}

std::vector<Bracket> sign_changes(std::span<const double> grid, std::span<const double> values) {
  std::vector<Bracket> out;
  std::ptrdiff_t last = -1;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (values[i] == 0.0 || std::isnan(values[i])) continue;
    if (last >= 0 && (values[static_cast<std::size_t>(last)] > 0.0) != (values[i] > 0.0)) {
      const auto l = static_cast<std::size_t>(last);
      out.push_back({grid[l], grid[i], values[l], values[i]});
    }
    last = static_cast<std::ptrdiff_t>(i);
  }
  return out;
}

std::vector<Bracket> scan_sign_changes(const std::function<double(double)>& g,
                                       std::span<const double> grid) {
  if (grid.size() < 2) throw InvalidParameter("scan_sign_changes: grid needs >= 2 points");
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw InvalidParameter("scan_sign_changes: grid must be strictly increasing");
    }
    values[i] = g(grid[i]);
  }
  return sign_changes(grid, values);
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  if (n > 0) out.back() = hi;
  return out;
}

std::size_t worker_count() {
  std::size_t n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("WAVEFRONT_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1) n = std::min(n, static_cast<std::size_t>(cap));
  }
  return n;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min(worker_count(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n && !failed; i = next++) {
        try {
          fn(i);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace wavefront
