#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wavefront/evans.hpp"
#include "wavefront/io.hpp"
#include "wavefront/k2atlas.hpp"
#include "wavefront/kernel_json.hpp"
#include "wavefront/pulse.hpp"

namespace wavefront::cli {

namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

struct RunConfig {
  std::string kernel = "k1";
  double alpha = 1.0;
  double theta = 0.4;
  std::string c0 = "1";
  std::string out = ".";
  std::string format = "csv";
  // pulse
  double epsilon = 1e-3;
  double gamma = 1e-3;
  std::vector<double> sweep;
  // evans
  double delta = 1e-3;
  double R = 50.0;
  int grid = 128;
  int contour = 4096;
  // atlas
  double a_lo = 0.05, a_hi = 3.0, theta_lo = 0.01, theta_hi = 0.49;
  int n_a = 300, n_theta = 300;
};

// Raised for bad flags or parameters; maps to exit code 1.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when an analysis reaches a negative verdict; maps to exit code 2.
struct NegativeVerdict : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double parse_c0(const std::string& text) {
  if (text == "inf" || text == "Inf" || text == "infinity") return kInfiniteSpeed;
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw UsageError("--c0: trailing characters in '" + text + "'");
    return v;
  } catch (const std::logic_error&) {
    throw UsageError("--c0 must be a number or 'inf', got '" + text + "'");
  }
}

KernelSpec load_kernel_spec(const std::string& name) {
  if (name == "k1" || name == "k2" || name == "k3" || name == "exp") return KernelSpec::builtin(name);
  std::ifstream in(name);
  if (!in) throw UsageError("--kernel: '" + name + "' is neither a builtin alias nor a readable file");
  try {
    return kernel_spec_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("--kernel: " + name + ": " + e.what());
  }
}

Kernel load_kernel(const RunConfig& cfg) {
  const KernelSpec spec = load_kernel_spec(cfg.kernel);
  try {
    spec.validate();
  } catch (const InvalidParameter& e) {
    throw UsageError(e.what());
  }
  return normalize(spec);
}

ModelParams model_params(const RunConfig& cfg) {
  ModelParams p{cfg.alpha, cfg.theta, parse_c0(cfg.c0)};
  try {
    p.validate();
  } catch (const InvalidParameter& e) {
    throw UsageError(e.what());
  }
  return p;
}

PulseParams pulse_params(const RunConfig& cfg, double epsilon) {
  PulseParams p{cfg.alpha, cfg.theta, cfg.gamma, epsilon};
  try {
    p.validate();
  } catch (const InvalidParameter& e) {
    throw UsageError(e.what());
  }
  return p;
}

// Flat key/value summary, written as JSON or as a two-column CSV.
class Summary {
 public:
  void add(const std::string& key, const std::string& value) { rows_.emplace_back(key, value); }
  void add(const std::string& key, double value) { add(key, fmt_num(value)); }
  void add(const std::string& key, int value) { add(key, std::to_string(value)); }
  void add(const std::string& key, bool value) { add(key, std::string(value ? "true" : "false")); }
  void add(const std::string& key, const char* value) { add(key, std::string(value)); }

  void print(std::ostream& os) const {
    for (const auto& [k, v] : rows_) os << k << ": " << v << '\n';
  }
  std::string csv() const {
    std::ostringstream os;
    os << "key,value\n";
    for (const auto& [k, v] : rows_) os << k << ',' << v << '\n';
    return os.str();
  }
  std::string json() const {
    ordered_json j = ordered_json::object();
    for (const auto& [k, v] : rows_) j[k] = v;
    return j.dump(2) + "\n";
  }

 private:
  std::vector<std::pair<std::string, std::string>> rows_;
};

class Outputs {
 public:
  Outputs(const RunConfig& cfg, std::ostream& out) : dir_(cfg.out), format_(cfg.format), out_(out) {}

  void file(const std::string& name, const std::string& content) {
    write_file_atomic(dir_ / name, content);
    out_ << "wrote " << (dir_ / name).string() << '\n';
  }
  void summary(const std::string& stem, const Summary& s) {
    s.print(out_);
    file(stem + "." + format_, format_ == "json" ? s.json() : s.csv());
  }

 private:
  fs::path dir_;
  std::string format_;
  std::ostream& out_;
};

void kernel_summary(Summary& s, const RunConfig& cfg, const Kernel& k) {
  s.add("kernel", cfg.kernel);
  s.add("form", k.spec().form_name());
  s.add("amplitude", k.amplitude());
}

std::string zeros_csv(const ZeroStructure& z) {
  std::ostringstream os;
  os << "side,index,location,slope_sign\n";
  int i = 1;
  for (const auto& c : z.left_crossings) os << "left," << i++ << ',' << fmt_num(c.location) << ',' << c.slope_sign << '\n';
  i = 1;
  for (const auto& c : z.right_crossings) os << "right," << i++ << ',' << fmt_num(c.location) << ',' << c.slope_sign << '\n';
  return os.str();
}

std::string margins_csv(const ThresholdConditionReport& r) {
  std::ostringstream os;
  os << "side,index,location,value,bound,slack,tail_bound\n";
  for (const auto& m : r.margins) {
    os << (m.side == Side::left ? "left" : "right") << ',' << m.index << ',' << fmt_num(m.location) << ','
       << fmt_num(m.value) << ',' << fmt_num(m.bound) << ',' << fmt_num(m.slack) << ','
       << (m.tail_bound ? 1 : 0) << '\n';
  }
  return os.str();
}

std::string evidence_csv(const WaveSpeedConditionReport& w) {
  std::ostringstream os;
  os << "x,lambda_n\n";
  for (const auto& [x, v] : w.evidence_grid) os << fmt_num(x) << ',' << fmt_num(v) << '\n';
  return os.str();
}

int cmd_classify(const RunConfig& cfg, std::ostream& out) {
  const ModelParams p = model_params(cfg);
  const Kernel k = load_kernel(cfg);
  const auto rep = classify(k, p.alpha, p.theta);
  Summary s;
  kernel_summary(s, cfg, k);
  s.add("alpha", p.alpha);
  s.add("theta", p.theta);
  s.add("class", rep.label());
  s.add("wave_speed_condition", rep.wave_speed.label());
  if (rep.wave_speed.switch_point) s.add("switch_point", *rep.wave_speed.switch_point);
  s.add("left", rep.threshold.left.label('L'));
  s.add("right", rep.threshold.right.label('R'));
  s.add("left_crossings", static_cast<int>(rep.zeros.left_crossings.size()));
  s.add("right_crossings", static_cast<int>(rep.zeros.right_crossings.size()));
  s.add("window", rep.zeros.window);
  if (rep.threshold.failure) {
    s.add("failed_side", rep.threshold.failure->side == Side::left ? "left" : "right");
    s.add("failed_index", rep.threshold.failure->index);
    s.add("failed_slack", rep.threshold.failure->slack);
  }
  Outputs o(cfg, out);
  o.summary("classify", s);
  o.file("zeros.csv", zeros_csv(rep.zeros));
  o.file("margins.csv", margins_csv(rep.threshold));
  o.file("lambda_evidence.csv", evidence_csv(rep.wave_speed));
  if (rep.cls == KernelClass::unclassified) throw NegativeVerdict("kernel is unclassified");
  return kOk;
}

struct SpeedStage {
  Kernel kernel;
  ModelParams params;
  KernelClassReport report;
  WaveSpeedResult speed;
};

SpeedStage speed_stage(const RunConfig& cfg) {
  const ModelParams p = model_params(cfg);
  Kernel k = load_kernel(cfg);
  auto rep = classify(k, p.alpha, p.theta);
  WaveSpeedResult ws;
  try {
    ws = solve_wave_speed(k, p, rep.wave_speed);
  } catch (const NoRoot& e) {
    throw NegativeVerdict(e.what());
  } catch (const MultipleRoots& e) {
    throw NegativeVerdict(e.what());
  }
  return {std::move(k), p, std::move(rep), std::move(ws)};
}

void speed_summary(Summary& s, const RunConfig& cfg, const SpeedStage& st) {
  kernel_summary(s, cfg, st.kernel);
  s.add("alpha", st.params.alpha);
  s.add("theta", st.params.theta);
  s.add("c0", st.params.c0);
  s.add("class", st.report.label());
  s.add("mu0", st.speed.mu0);
  s.add("residual", st.speed.residual);
  s.add("certificate", to_string(st.speed.certificate));
}

int cmd_speed(const RunConfig& cfg, std::ostream& out) {
  const SpeedStage st = speed_stage(cfg);
  Summary s;
  speed_summary(s, cfg, st);
  Outputs o(cfg, out);
  o.summary("speed", s);
  o.file("phi_profile.csv", phi_profile_csv(phi_profile(st.kernel, st.params.c0, 400)));
  return kOk;
}

int cmd_front(const RunConfig& cfg, std::ostream& out) {
  const SpeedStage st = speed_stage(cfg);
  const FrontSolution front{st.kernel, st.params, st.speed.mu0};
  const FrontValidation v = validate_front(front);
  Summary s;
  speed_summary(s, cfg, st);
  s.add("U0", v.threshold_at_zero);
  s.add("Uprime0", v.derivative_at_zero);
  s.add("left_max", v.left_max);
  s.add("right_min", v.right_min);
  s.add("left_limit", v.left_limit);
  s.add("right_limit", v.right_limit);
  s.add("z_window", v.z_window);
  s.add("interior_extrema", v.interior_extrema);
  s.add("pass", v.pass);
  Outputs o(cfg, out);
  o.summary("front", s);
  o.file("front_profile.csv", front_profile_csv(front_profile(front, -v.z_window, v.z_window, 2001)));
  o.file("phi_profile.csv", phi_profile_csv(phi_profile(st.kernel, st.params.c0, 400)));
  if (!v.pass) throw NegativeVerdict("front validation failed");
  return kOk;
}

int cmd_evans(const RunConfig& cfg, std::ostream& out) {
  if (!(cfg.delta > 0.0) || !(cfg.R > cfg.delta)) throw UsageError("need 0 < --delta < --R");
  if (cfg.grid < 64 || cfg.contour < 64) throw UsageError("--grid and --contour must be at least 64");
  const SpeedStage st = speed_stage(cfg);
  const FrontSolution front{st.kernel, st.params, st.speed.mu0};
  const EvansContext ctx = make_evans_context(front);
  const EvansScan scan = scan_right_half_plane(ctx, cfg.delta, cfg.R, cfg.grid, cfg.contour);
  const auto cert = rational_laplace_certificate(st.kernel, ctx);
  Summary s;
  speed_summary(s, cfg, st);
  s.add("evans_at_zero", std::abs(evans(ctx, 0.0)));
  s.add("evans_derivative_at_zero", evans_derivative_at_zero(ctx));
  s.add("essential_spectrum", essential_spectrum().description);
  s.add("delta", scan.delta);
  s.add("R", scan.R);
  s.add("winding", scan.winding_number);
  s.add("min_modulus", scan.min_modulus);
  s.add("stable", scan.stable);
  s.add("kappa0", scan.kappa0);
  s.add("certificate_applicable", cert.applicable);
  s.add("certificate_degrees", std::to_string(cert.p_degree) + "/" + std::to_string(cert.q_degree));
  s.add("certificate_stable", cert.spectrally_stable);
  Outputs o(cfg, out);
  o.summary("evans", s);
  o.file("evans_grid.csv", evans_scan_csv(scan));
  o.file("evans_scan.json", evans_scan_json(scan));
  if (!scan.stable) throw NegativeVerdict("Evans scan did not certify stability");
  return kOk;
}

int cmd_atlas(const RunConfig& cfg, std::ostream& out) {
  if (!(cfg.a_lo > 0.0) || !(cfg.a_hi > cfg.a_lo)) throw UsageError("need 0 < --a-lo < --a-hi");
  if (!(cfg.theta_lo > 0.0) || !(cfg.theta_hi > cfg.theta_lo) || !(cfg.theta_hi < 0.5)) {
    throw UsageError("need 0 < --theta-lo < --theta-hi < 1/2");
  }
  if (cfg.n_a < 2 || cfg.n_theta < 2) throw UsageError("atlas resolution must be at least 2 per axis");
  const auto grid = k2::region_scan(cfg.a_lo, cfg.a_hi, cfg.theta_lo, cfg.theta_hi, cfg.n_a, cfg.n_theta);
  int inside = 0;
  for (const auto& p : grid.points) inside += p.in_region ? 1 : 0;
  Summary s;
  s.add("a_star", grid.a_star);
  s.add("n_a", grid.n_a);
  s.add("n_theta", grid.n_theta);
  s.add("in_region", inside);
  Outputs o(cfg, out);
  o.summary("atlas_summary", s);
  o.file("atlas.csv", k2::atlas_csv(grid));
  o.file("atlas.json", k2::atlas_json(grid));
  return kOk;
}

PulseSolution pulse_or_verdict(const Kernel& k, const PulseParams& p, double front_speed) {
  try {
    return solve_pulse(k, p, front_speed);
  } catch (const SlowBranchOnly& e) {
    throw NegativeVerdict(e.what());
  } catch (const NonConvergence& e) {
    throw NegativeVerdict(e.what());
  } catch (const NoBackLevel& e) {
    throw NegativeVerdict(e.what());
  }
}

int cmd_pulse(const RunConfig& cfg, std::ostream& out) {
  if (parse_c0(cfg.c0) != kInfiniteSpeed) throw UsageError("pulses are computed without delay; use --c0 inf");
  RunConfig front_cfg = cfg;
  front_cfg.c0 = "inf";
  const PulseParams pp = pulse_params(cfg, cfg.epsilon);
  for (double e : cfg.sweep) pulse_params(cfg, e);
  const SpeedStage st = speed_stage(front_cfg);
  const double front_speed = st.speed.mu0;
  const PulseSolution sol = pulse_or_verdict(st.kernel, pp, front_speed);
  const PhasePortrait portrait = phase_portrait(sol);
  std::vector<PhasePoint> curve;
  curve.reserve(portrait.samples.size());
  for (const auto& p : portrait.samples) curve.push_back({p.U, p.W});
  const double hd = hausdorff_distance(curve, portrait.singular_overlay);

  Summary s;
  kernel_summary(s, cfg, st.kernel);
  s.add("alpha", pp.alpha);
  s.add("theta", pp.theta);
  s.add("epsilon", pp.epsilon);
  s.add("gamma", pp.gamma);
  s.add("front_speed", front_speed);
  s.add("mu", sol.mu);
  s.add("Z", sol.Z);
  s.add("residual", sol.residual);
  s.add("roots", static_cast<int>(sol.roots.size()));
  s.add("hausdorff_to_singular", hd);
  Outputs o(cfg, out);
  o.summary("pulse_summary", s);
  o.file("pulse.json", pulse_json(sol));
  o.file("portrait.csv", portrait_csv(portrait));
  o.file("singular.csv", singular_csv(portrait.singular_overlay));
  if (!cfg.sweep.empty()) {
    std::ostringstream os;
    os << "epsilon,mu,Z,residual,abs_mu_minus_front\n";
    for (double e : cfg.sweep) {
      const PulseSolution si = pulse_or_verdict(st.kernel, pulse_params(cfg, e), front_speed);
      os << fmt_num(e) << ',' << fmt_num(si.mu) << ',' << fmt_num(si.Z) << ',' << fmt_num(si.residual) << ','
         << fmt_num(std::abs(si.mu - front_speed)) << '\n';
      out << "epsilon " << fmt_num(e) << ": mu " << fmt_num(si.mu) << ", |mu - mu_front| "
          << fmt_num(std::abs(si.mu - front_speed)) << '\n';
    }
    o.file("sweep.csv", os.str());
  }
  return kOk;
}

ordered_json seed(const std::string& name, const std::string& command, std::vector<std::string> args) {
  return {{"name", name}, {"command", command}, {"args", std::move(args)}};
}

int cmd_seeds(const RunConfig& cfg, std::ostream& out) {
  ordered_json list = ordered_json::array();
  const std::vector<std::string> model{"--alpha", "1", "--theta", "0.4"};
  auto args = [&](const std::string& k, std::vector<std::string> extra) {
    std::vector<std::string> a{"--kernel", k};
    a.insert(a.end(), model.begin(), model.end());
    a.insert(a.end(), extra.begin(), extra.end());
    return a;
  };
  for (const std::string k : {"k1", "k2", "k3"}) {
    list.push_back(seed("margins_" + k, "classify", args(k, {"--out", "margins/" + k})));
  }
  for (const std::string k : {"k1", "k2", "k3"}) {
    list.push_back(seed("phi_" + k, "speed", args(k, {"--c0", "1", "--out", "phi/" + k})));
    list.push_back(seed("front_" + k, "front", args(k, {"--c0", "1", "--out", "front/" + k})));
    list.push_back(seed("evans_" + k, "evans",
                        args(k, {"--c0", "1", "--delta", "1e-3", "--R", "50", "--out", "evans/" + k})));
  }
  list.push_back(seed("atlas", "atlas", {"--out", "atlas"}));
  for (const std::string k : {"k1", "k2", "k3"}) {
    list.push_back(seed("pulse_" + k, "pulse",
                        args(k, {"--c0", "inf", "--epsilon", "1e-3", "--gamma", "1e-3", "--sweep",
                                 "1e-3,1e-4,1e-5", "--out", "pulse/" + k})));
  }
  const std::string text = list.dump(2) + "\n";
  out << text;
  Outputs(cfg, out).file("seeds.json", text);
  return kOk;
}

void add_model_options(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--kernel", cfg.kernel, "builtin alias (k1, k2, k3, exp) or path to a kernel JSON file");
  sub->add_option("--alpha", cfg.alpha, "synaptic strength");
  sub->add_option("--theta", cfg.theta, "firing threshold");
  sub->add_option("--c0", cfg.c0, "axonal speed, a number or inf");
}

void add_output_options(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--out", cfg.out, "output directory");
  sub->add_option("--format", cfg.format, "summary format")->check(CLI::IsMember({"csv", "json"}));
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Traveling fronts and pulses in a Heaviside neural field with axonal delay"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  auto* classify_cmd = app.add_subcommand("classify", "kernel class and threshold margins");
  auto* speed_cmd = app.add_subcommand("speed", "unique wave speed and phi profile");
  auto* front_cmd = app.add_subcommand("front", "front profile and validation");
  auto* evans_cmd = app.add_subcommand("evans", "Evans function scan of the right half-plane");
  auto* atlas_cmd = app.add_subcommand("atlas", "(a, theta) atlas of the sin-cos kernel family");
  auto* pulse_cmd = app.add_subcommand("pulse", "fast pulse with slow linear feedback");
  auto* seeds_cmd = app.add_subcommand("seeds", "manifest of the standard reproduction runs");

  for (auto* sub : {classify_cmd, speed_cmd, front_cmd, evans_cmd, pulse_cmd}) add_model_options(sub, cfg);
  for (auto* sub : {classify_cmd, speed_cmd, front_cmd, evans_cmd, atlas_cmd, pulse_cmd, seeds_cmd}) {
    add_output_options(sub, cfg);
  }
  pulse_cmd->add_option("--epsilon", cfg.epsilon, "slow time scale");
  pulse_cmd->add_option("--gamma", cfg.gamma, "feedback decay");
  pulse_cmd->add_option("--sweep", cfg.sweep, "extra epsilon values for a convergence table")->delimiter(',');
  evans_cmd->add_option("--delta", cfg.delta, "inner radius of the scanned region");
  evans_cmd->add_option("--R", cfg.R, "outer radius of the scanned region");
  evans_cmd->add_option("--grid", cfg.grid, "modulus grid points per axis");
  evans_cmd->add_option("--contour", cfg.contour, "initial contour samples");
  atlas_cmd->add_option("--a-lo", cfg.a_lo, "lower decay rate a");
  atlas_cmd->add_option("--a-hi", cfg.a_hi, "upper decay rate a");
  atlas_cmd->add_option("--theta-lo", cfg.theta_lo, "lower threshold");
  atlas_cmd->add_option("--theta-hi", cfg.theta_hi, "upper threshold");
  atlas_cmd->add_option("--n-a", cfg.n_a, "grid points in a");
  atlas_cmd->add_option("--n-theta", cfg.n_theta, "grid points in theta");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (*classify_cmd) return cmd_classify(cfg, out);
    if (*speed_cmd) return cmd_speed(cfg, out);
    if (*front_cmd) return cmd_front(cfg, out);
    if (*evans_cmd) return cmd_evans(cfg, out);
    if (*atlas_cmd) return cmd_atlas(cfg, out);
    if (*pulse_cmd) {
      if (pulse_cmd->count("--c0") == 0) cfg.c0 = "inf";
      return cmd_pulse(cfg, out);
    }
    if (*seeds_cmd) return cmd_seeds(cfg, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const InvalidParameter& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const NegativeVerdict& e) {
    err << "verdict: " << e.what() << '\n';
    return kNegative;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  }
  return kUsage;
}

}  // namespace wavefront::cli
