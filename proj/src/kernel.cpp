#include "wavefront/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/tools/minima.hpp>

namespace wavefront {

namespace {

using cplx = std::complex<double>;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

// e^{-a y}(B cos(w y + d) + E sin(w y + f)) as exponential terms.
void push_trig(std::vector<ExpTerm>& out, double a, double w, double B, double d, double E,
               double f) {
  const cplx i(0.0, 1.0);
  const cplx up(-a, w);
  const cplx down(-a, -w);
  out.push_back({0.5 * B * std::exp(i * d), up, 0});
  out.push_back({0.5 * B * std::exp(-i * d), down, 0});
  out.push_back({E * std::exp(i * f) / (2.0 * i), up, 0});
  out.push_back({-E * std::exp(-i * f) / (2.0 * i), down, 0});
}

// Unnormalized half-kernels y -> k(-y), y -> k(y).
std::pair<ExpPoly, ExpPoly> raw_halves(const KernelSpec& spec) {
  std::vector<ExpTerm> left;
  std::vector<ExpTerm> right;
  std::visit(overloaded{
                 [&](const form::Exponential& k) {
                   right.push_back({1.0, -k.rho, 0});
                   left = right;
                 },
                 [&](const form::ExpCosPlus& k) {
                   push_trig(right, k.a, k.b, 1.0, 0.0, 0.0, 0.0);
                   right.push_back({k.c, -k.a, 0});
                   left = right;
                 },
                 [&](const form::ExpSinCos& k) {
                   push_trig(right, k.a, 1.0, 1.0, 0.0, k.a, 0.0);
                   left = right;
                 },
                 [&](const form::ExpConstMinusCos& k) {
                   push_trig(right, k.a, k.b, -1.0, 0.0, 0.0, 0.0);
                   right.push_back({k.c, -k.a, 0});
                   left = right;
                 },
                 [&](const form::ExpTrig& k) {
                   push_trig(right, k.a, k.c, k.b, k.d, k.e, k.f);
                   // x = -y: b cos(cy - d) - e sin(cy - f)
                   push_trig(left, k.a, k.c, k.b, -k.d, -k.e, -k.f);
                 },
                 [&](const form::ExpLinear& k) {
                   right.push_back({k.c, -k.a, 0});
                   right.push_back({-k.b, -k.a, 1});
                   left = right;
                 },
             },
             spec.form);
  return {ExpPoly(std::move(left)), ExpPoly(std::move(right))};
}

// Bound on int_0^inf |f| used to judge a half integral as numerically zero.
double absolute_scale(const ExpPoly& f) {
  double s = 0.0;
  for (const auto& t : f.terms()) {
    double fact = 1.0;
    for (int i = 2; i <= t.power; ++i) fact *= i;
    s += std::abs(t.coef) * fact / std::pow(-std::real(t.rate), t.power + 1);
  }
  return s;
}

Envelope envelope_for(const KernelSpec& spec, double amp) {
  return std::visit(
      overloaded{
          [&](const form::Exponential& f) { return Envelope{amp, f.rho}; },
          [&](const form::ExpCosPlus& f) { return Envelope{amp * (1.0 + std::abs(f.c)), f.a}; },
          [&](const form::ExpSinCos& f) { return Envelope{amp * std::hypot(f.a, 1.0), f.a}; },
          [&](const form::ExpConstMinusCos& f) {
            return Envelope{amp * (1.0 + std::abs(f.c)), f.a};
          },
          [&](const form::ExpTrig& f) {
            return Envelope{amp * (std::abs(f.b) + std::abs(f.e)), f.a};
          },
          // |c - b y| e^{-a y/2} <= |c| + |b| y e^{-a y/2} <= |c| + 2|b|/(a e)
          [&](const form::ExpLinear& f) {
            return Envelope{amp * (std::abs(f.c) + 2.0 * std::abs(f.b) / (f.a * std::numbers::e)),
                            f.a / 2.0};
          },
      },
      spec.form);
}

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

void KernelSpec::validate() const {
  auto finite = [](std::initializer_list<double> xs) {
    return std::all_of(xs.begin(), xs.end(), [](double x) { return std::isfinite(x); });
  };
  const bool ok = std::visit(
      overloaded{
          [&](const form::Exponential& k) { return finite({k.rho}) && k.rho > 0.0; },
          [&](const form::ExpCosPlus& k) { return finite({k.a, k.b, k.c}) && k.a > 0.0; },
          [&](const form::ExpSinCos& k) { return finite({k.a}) && k.a > 0.0; },
          [&](const form::ExpConstMinusCos& k) { return finite({k.a, k.b, k.c}) && k.a > 0.0; },
          [&](const form::ExpTrig& k) {
            return finite({k.a, k.b, k.c, k.d, k.e, k.f}) && k.a > 0.0;
          },
          [&](const form::ExpLinear& k) { return finite({k.a, k.b, k.c}) && k.a > 0.0; },
      },
      form);
  if (!ok) {
    throw InvalidParameter("kernel " + form_name() +
                           ": decay rate must be positive and every parameter finite");
  }
}

std::string KernelSpec::form_name() const {
  return std::visit(overloaded{
                        [](const form::Exponential&) { return std::string("exponential"); },
                        [](const form::ExpCosPlus&) { return std::string("exp_cos_plus"); },
                        [](const form::ExpSinCos&) { return std::string("exp_sin_cos"); },
                        [](const form::ExpConstMinusCos&) {
                          return std::string("exp_const_minus_cos");
                        },
                        [](const form::ExpTrig&) { return std::string("exp_trig"); },
                        [](const form::ExpLinear&) { return std::string("exp_linear"); },
                    },
                    form);
}

double KernelSpec::decay() const {
  return std::visit(overloaded{
                        [](const form::Exponential& k) { return k.rho; },
                        [](const auto& k) { return k.a; },
                    },
                    form);
}

KernelSpec KernelSpec::builtin(std::string_view alias) {
  if (alias == "k1") return {form::ExpCosPlus{0.2, 2.0, 0.4}};
  if (alias == "k2") return {form::ExpSinCos{0.3}};
  if (alias == "k3") return {form::ExpConstMinusCos{0.2, 2.0, 0.4}};
  if (alias == "exp") return {form::Exponential{1.0}};
  throw InvalidParameter("unknown kernel alias '" + std::string(alias) + "'");
}

double Kernel::operator()(double x) const {
  return x < 0.0 ? left_.value(-x) : right_.value(x);
}

double Kernel::cdf(double x) const {
  if (x <= 0.0) return left_.weighted_tail(0.0, -x);
  return left_.laplace(0.0) + right_.weighted_head(0.0, x);
}

double Kernel::weighted_cdf(double w, double x) const {
  if (x <= 0.0) return left_.weighted_tail(w, -x);
  return std::exp(-w * x) * left_.laplace(w) + right_.weighted_head(w, x);
}

double Kernel::left_laplace(double s) const { return left_.laplace(s); }

complex Kernel::left_laplace(complex s) const { return left_.laplace(s); }

const ExpPoly& Kernel::lambda_poly(int n) const {
  if (n < 0 || n > kMaxLambdaOrder) {
    throw InvalidParameter("lambda order must lie in [0, " + std::to_string(kMaxLambdaOrder) + "]");
  }
  return lambda_[static_cast<std::size_t>(n)];
}

double Kernel::max_frequency() const {
  double w = 0.0;
  for (const auto* half : {&left_, &right_})
    for (const auto& t : half->terms()) w = std::max(w, std::abs(std::imag(t.rate)));
  return w;
}

Kernel normalize(const KernelSpec& spec, const QuadratureSettings& settings) {
  spec.validate();
  auto [left_raw, right_raw] = raw_halves(spec);

  const double half_left = left_raw.laplace(0.0);
  const double half_right = right_raw.laplace(0.0);
  const double floor = 1e-12;
  if (!(half_left > floor * absolute_scale(left_raw)) ||
      !(half_right > floor * absolute_scale(right_raw))) {
    throw DegenerateKernel("kernel " + spec.form_name() +
                           ": half-line integral is not positive, cannot normalize to 1/2");
  }

  // Cross-check the closed-form half integrals by quadrature.
  const Envelope raw_env = envelope_for(spec, 1.0);
  const double q_left = integrate_halfline([&](double x) { return left_raw.value(-x); },
                                           Side::left, raw_env, settings);
  const double q_right = integrate_halfline([&](double x) { return right_raw.value(x); },
                                            Side::right, raw_env, settings);
  const double check_tol = 1e-7 * std::max(1.0, absolute_scale(left_raw));
  if (std::abs(q_left - half_left) > check_tol || std::abs(q_right - half_right) > check_tol) {
    throw NonConvergence("normalize: closed-form and quadrature half integrals disagree");
  }

  Kernel k;
  k.spec_ = spec;
  k.amp_left_ = 0.5 / half_left;
  k.amp_right_ = 0.5 / half_right;
  k.left_ = left_raw.scaled(k.amp_left_);
  k.right_ = right_raw.scaled(k.amp_right_);

  k.symmetric_ = true;
  for (double y : {0.0, 0.137, 0.71, 1.3, 2.9, 4.4, 7.7, 11.9}) {
    const double l = k.left_.value(y);
    const double r = k.right_.value(y);
    if (std::abs(l - r) > 1e-13 * std::max({1.0, std::abs(l), std::abs(r)})) {
      k.symmetric_ = false;
      break;
    }
  }

  k.envelope_ = envelope_for(spec, std::max(k.amp_left_, k.amp_right_));

  k.lambda_.reserve(Kernel::kMaxLambdaOrder + 1);
  k.lambda_.push_back(k.left_.times_y());
  for (int n = 1; n <= Kernel::kMaxLambdaOrder; ++n) {
    k.lambda_.push_back(k.lambda_.back().primitive());
  }
  return k;
}

double eval(const Kernel& kernel, double x) { return kernel(x); }

double default_window(const Kernel& kernel) {
  const auto& env = kernel.envelope();
  return std::max(1.0, std::log(env.C / 1e-12) / env.rho);
}

namespace {

void scan_side(const Kernel& kernel, const ExpPoly& f, Side side, double window, double density,
               std::vector<Crossing>& out, bool& truncated) {
  const auto& env = kernel.envelope();
  const auto n = static_cast<std::size_t>(std::ceil(window * density)) + 1;
  const std::vector<double> grid = linspace(0.0, window, std::max<std::size_t>(n, 2));
  std::vector<double> vals(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) vals[i] = f.value(grid[i]);
  const std::function<double(double)> g = [&f](double y) { return f.value(y); };

  std::vector<double> roots;
  for (const auto& br : sign_changes(grid, vals)) {
    roots.push_back(find_root_bracketed(g, br, 1e-13 * std::max(1.0, br.hi), 300));
  }

  // Dips that approach zero without a sign change between grid points.
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
    const int s = sign_of(vals[i]);
    if (s == 0 || sign_of(vals[i - 1]) != s || sign_of(vals[i + 1]) != s) continue;
    if (std::abs(vals[i]) > std::abs(vals[i - 1]) || std::abs(vals[i]) > std::abs(vals[i + 1])) {
      continue;
    }
    auto [ymin, fmin] = boost::math::tools::brent_find_minima(
        [&](double y) { return s * f.value(y); }, grid[i - 1], grid[i + 1], 40);
    const double local_scale = env.C * std::exp(-env.rho * ymin);
    if (fmin < -1e-8 * local_scale) {
      // Two crossings inside one grid cell.
      roots.push_back(find_root_bracketed(g, grid[i - 1], ymin, 1e-13 * std::max(1.0, ymin)));
      roots.push_back(find_root_bracketed(g, ymin, grid[i + 1], 1e-13 * std::max(1.0, ymin)));
    } else if (fmin <= 1e-8 * local_scale) {
      throw TangentialZero("kernel touches zero without crossing near x = " +
                           std::to_string(side == Side::left ? -ymin : ymin));
    }
  }
  std::sort(roots.begin(), roots.end());

  for (double r : roots) {
    // Sign on the side nearer the origin.
    const double inner = f.value(r - 1e-7 * std::max(1.0, r));
    const int inner_sign = sign_of(inner);
    out.push_back({r, side == Side::left ? inner_sign : -inner_sign});
  }
  truncated = false;
  if (out.size() >= 2) {
    const double gap = out.back().location - out[out.size() - 2].location;
    truncated = window - out.back().location <= 2.0 * gap + 1e-12;
  }
}

}  // namespace

ZeroStructure zero_structure(const Kernel& kernel, double window, double grid_density) {
  if (!(window > 0.0)) throw InvalidParameter("zero_structure: window must be positive");
  if (grid_density <= 0.0) grid_density = 32.0 * std::max(1.0, kernel.max_frequency());
  ZeroStructure z;
  z.window = window;
  scan_side(kernel, kernel.left(), Side::left, window, grid_density, z.left_crossings,
            z.left_truncated);
  scan_side(kernel, kernel.right(), Side::right, window, grid_density, z.right_crossings,
            z.right_truncated);
  return z;
}

double lambda_n(const Kernel& kernel, int n, double x) {
  if (x > 0.0) throw DomainError("lambda_n: x must be <= 0");
  return kernel.lambda_poly(n).value(-x);
}

double lambda_n_quadrature(const Kernel& kernel, int n, double x,
                           const QuadratureSettings& settings) {
  if (x > 0.0) throw DomainError("lambda_n: x must be <= 0");
  if (n < 0) throw InvalidParameter("lambda_n: n must be >= 0");
  if (n == 0) return std::abs(x) * kernel(x);
  double fact = 1.0;
  for (int i = 2; i < n; ++i) fact *= i;
  // Lambda^n K(x) = int_x^0 (s - x)^{n-1}/(n-1)! |s| K(s) ds
  const int panels = static_cast<int>(std::clamp(std::ceil(-x * kernel.max_frequency()), 8.0, 512.0));
  return integrate([&](double s) { return std::pow(s - x, n - 1) / fact * std::abs(s) * kernel(s); },
                   x, 0.0, settings, panels);
}

std::string WaveSpeedConditionReport::label() const {
  switch (kind) {
    case WaveSpeedKind::A: return "A" + std::to_string(order);
    case WaveSpeedKind::B: return "B" + std::to_string(order);
    case WaveSpeedKind::C: return "C" + std::to_string(order);
    case WaveSpeedKind::none: break;
  }
  return "none";
}

WaveSpeedConditionReport wave_speed_condition(const Kernel& kernel, int n_max, double window) {
  if (n_max < 1) throw InvalidParameter("wave_speed_condition: n_max must be >= 1");
  n_max = std::min(n_max, Kernel::kMaxLambdaOrder);
  if (window <= 0.0) window = default_window(kernel);

  // Uniform half resolves oscillations, geometric half resolves the origin.
  std::vector<double> ys = linspace(0.0, window, 1000);
  const double y0 = 1e-4 * window;
  for (int i = 0; i < 1000; ++i) ys.push_back(y0 * std::pow(window / y0, i / 999.0));
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());

  for (int n = 1; n <= n_max; ++n) {
    const ExpPoly& lam = kernel.lambda_poly(n);
    std::vector<double> vals(ys.size());
    double scale = 0.0;
    for (std::size_t i = 0; i < ys.size(); ++i) {
      vals[i] = lam.value(ys[i]);
      scale = std::max(scale, std::abs(vals[i]));
    }
    const double tol = 1e-9 * scale;
    std::vector<int> signs(vals.size());
    for (std::size_t i = 0; i < vals.size(); ++i)
      signs[i] = std::abs(vals[i]) <= tol ? 0 : sign_of(vals[i]);

    int first = 0;
    int changes = 0;
    int last = 0;
    std::size_t change_at = 0;
    bool any_negative = false;
    for (std::size_t i = 0; i < signs.size(); ++i) {
      if (signs[i] == 0) continue;
      if (signs[i] < 0) any_negative = true;
      if (first == 0) first = signs[i];
      if (last != 0 && signs[i] != last) {
        ++changes;
        change_at = i;
      }
      last = signs[i];
    }
    const int tail = lam.asymptotic_sign();

    WaveSpeedConditionReport rep;
    rep.order = n;
    rep.tail_sign = tail;
    if (!any_negative && tail >= 0) {
      rep.kind = WaveSpeedKind::A;
    } else if (first > 0 && changes == 1 && tail <= 0) {
      rep.kind = WaveSpeedKind::B;
    } else if (first < 0 && changes == 1 && tail >= 0) {
      rep.kind = WaveSpeedKind::C;
    } else {
      continue;
    }
    if (rep.kind != WaveSpeedKind::A) {
      std::size_t prev = change_at - 1;
      while (signs[prev] == 0) --prev;
      const std::function<double(double)> g = [&lam](double y) { return lam.value(y); };
      rep.switch_point = find_root_bracketed(
          g, Bracket{ys[prev], ys[change_at], vals[prev], vals[change_at]}, 1e-12);
    }
    rep.evidence_grid.reserve(ys.size());
    for (std::size_t i = ys.size(); i-- > 0;) rep.evidence_grid.emplace_back(-ys[i], vals[i]);
    return rep;
  }
  WaveSpeedConditionReport none;
  none.kind = WaveSpeedKind::none;
  return none;
}

std::string SideVerdict::label(char letter) const {
  std::string base(1, letter);
  switch (kind) {
    case Kind::zero: return base + "_0";
    case Kind::fail: return base + "_fail";
    case Kind::positive:
      return base + "_" + (infinite ? std::string("inf") : std::to_string(count));
    case Kind::negative:
      return base + "_-" + (infinite ? std::string("inf") : std::to_string(count));
  }
  return base;
}

namespace {

SideVerdict assess_side(const Kernel& kernel, Side side, const std::vector<Crossing>& crossings,
                        bool truncated, double alpha, double theta,
                        std::vector<ThresholdMargin>& margins,
                        std::optional<ThresholdMargin>& failure) {
  const ExpPoly& f = side == Side::left ? kernel.left() : kernel.right();
  SideVerdict v;
  v.count = static_cast<int>(crossings.size());
  auto record = [&](ThresholdMargin m) {
    margins.push_back(m);
    if (!(m.slack > kMarginTolerance) && !failure) failure = m;
  };

  if (crossings.empty()) {
    v.kind = f.value(0.0) >= 0.0 ? SideVerdict::Kind::zero : SideVerdict::Kind::fail;
    return v;
  }
  // Orientation from the first crossing: excitation near the origin means
  // K' > 0 at -M_1 on the left and K' < 0 at N_1 on the right.
  const int excitatory = side == Side::left ? 1 : -1;
  const bool positive = crossings.front().slope_sign == excitatory;
  v.kind = positive ? SideVerdict::Kind::positive : SideVerdict::Kind::negative;
  v.infinite = truncated;

  // Even crossings for L_j / R_k, odd crossings from M_3 on for L_-j, every
  // odd crossing for R_-k.
  const std::size_t start = positive ? 2 : (side == Side::left ? 3 : 1);
  for (std::size_t idx = start; idx <= crossings.size(); idx += 2) {
    const double loc = crossings[idx - 1].location;
    const double partial = f.weighted_head(0.0, loc);
    ThresholdMargin m{side, static_cast<int>(idx), loc, 0.0, theta, 0.0};
    if (side == Side::left) {
      m.value = alpha / 2 - alpha * partial;
      m.slack = theta - m.value;
    } else {
      m.value = alpha / 2 + alpha * partial;
      m.slack = m.value - theta;
    }
    record(m);
  }
  if (truncated) {
    // Every crossing past the last enumerated one has its partial integral
    // within alpha C e^{-rho M}/rho of the full half integral.
    const auto& env = kernel.envelope();
    const double loc = crossings.back().location;
    ThresholdMargin m{side, v.count + 1, loc, alpha * env.C * std::exp(-env.rho * loc) / env.rho,
                      side == Side::left ? theta : alpha - theta, 0.0, true};
    m.slack = m.bound - m.value;
    record(m);
  }
  return v;
}

}  // namespace

ThresholdConditionReport threshold_conditions(const Kernel& kernel, const ZeroStructure& zeros,
                                              double alpha, double theta) {
  if (!(theta > 0.0) || !(2.0 * theta < alpha)) {
    throw InvalidParameter("threshold_conditions: need 0 < 2 theta < alpha");
  }
  ThresholdConditionReport rep;
  rep.left = assess_side(kernel, Side::left, zeros.left_crossings, zeros.left_truncated, alpha,
                         theta, rep.margins, rep.failure);
  rep.right = assess_side(kernel, Side::right, zeros.right_crossings, zeros.right_truncated, alpha,
                          theta, rep.margins, rep.failure);
  if (rep.failure) {
    const auto& m = *rep.failure;
    if (m.side == Side::left) rep.left.kind = SideVerdict::Kind::fail;
    if (m.side == Side::right) rep.right.kind = SideVerdict::Kind::fail;
    throw MarginViolation(std::string(m.side == Side::left ? "left" : "right") +
                              " threshold margin fails at crossing " + std::to_string(m.index) +
                              (m.tail_bound ? " (tail bound)" : "") +
                              ": slack " + std::to_string(m.slack),
                          rep);
  }
  if (rep.left.kind == SideVerdict::Kind::fail || rep.right.kind == SideVerdict::Kind::fail) {
    throw MarginViolation("kernel is non-positive next to the origin with no crossing", rep);
  }
  return rep;
}

std::string KernelClassReport::label() const {
  auto idx = [](int n, bool inf) { return inf ? std::string("inf") : std::to_string(n); };
  const std::string jk = "_{" + idx(j, j_infinite) + "," + idx(k, k_infinite) + "}";
  switch (cls) {
    case KernelClass::A: return "A" + jk;
    case KernelClass::B: return "B" + jk;
    case KernelClass::C: return "C" + jk;
    case KernelClass::unclassified: break;
  }
  return "unclassified";
}

KernelClassReport classify(const Kernel& kernel, double alpha, double theta, int n_max,
                           double window) {
  if (!(theta > 0.0) || !(2.0 * theta < alpha)) {
    throw InvalidParameter("classify: need 0 < 2 theta < alpha");
  }
  if (window <= 0.0) window = default_window(kernel);
  KernelClassReport rep;
  rep.zeros = zero_structure(kernel, window);
  rep.wave_speed = wave_speed_condition(kernel, n_max, window);
  try {
    rep.threshold = threshold_conditions(kernel, rep.zeros, alpha, theta);
  } catch (const MarginViolation& e) {
    rep.threshold = e.report();
    return rep;
  }

  using K = SideVerdict::Kind;
  const auto& L = rep.threshold.left;
  const auto& R = rep.threshold.right;
  const bool left_plain = L.kind == K::zero || L.kind == K::positive;
  const bool right_plain = R.kind == K::zero || R.kind == K::positive;
  const bool right_negative = R.kind == K::zero || R.kind == K::negative;
  switch (rep.wave_speed.kind) {
    case WaveSpeedKind::A:
      if (left_plain && right_plain) rep.cls = KernelClass::A;
      break;
    case WaveSpeedKind::B:
      if (L.kind == K::positive && right_plain) rep.cls = KernelClass::B;
      break;
    case WaveSpeedKind::C:
      if (L.kind == K::negative && right_negative) rep.cls = KernelClass::C;
      break;
    case WaveSpeedKind::none: break;
  }
  if (rep.cls != KernelClass::unclassified) {
    rep.j = L.kind == K::zero ? 0 : L.count;
    rep.k = R.kind == K::zero ? 0 : R.count;
    rep.j_infinite = L.infinite;
    rep.k_infinite = R.infinite;
  }
  return rep;
}

}  // namespace wavefront
