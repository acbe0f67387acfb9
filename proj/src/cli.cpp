#include "mns/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>
#include <system_error>

#include "mns/helmholtz.hpp"
#include "mns/snapshot.hpp"

namespace mns::cli {

namespace fs = std::filesystem;
using diagnostics::DiagnosticsSeries;
using diagnostics::SupnormReport;
using diagnostics::SweepReport;
using fields::Norm;
using fields::VectorField;
using solver::Method;
using solver::Solution;
using solver::Trajectory;

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = v.find(',', start);
    out.push_back(trim(std::string_view(v).substr(start, comma == std::string::npos ? std::string::npos : comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_double(const std::string& key, const std::string& raw) {
  std::string v = raw;
  double factor = 1.0;
  if (v.size() >= 2 && v.compare(v.size() - 2, 2, "pi") == 0) {
    factor = std::numbers::pi;
    v = trim(std::string_view(v).substr(0, v.size() - 2));
    if (!v.empty() && v.back() == '*') v = trim(std::string_view(v).substr(0, v.size() - 1));
    if (v.empty()) return factor;
  }
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(x))
    throw ConfigError(key + ": not a number: '" + raw + "'");
  return x * factor;
}

int parse_int(const std::string& key, const std::string& v) {
  int x = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size()) throw ConfigError(key + ": not an integer: '" + v + "'");
  return x;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

const char* initial_name(InitialData d) {
  switch (d) {
    case InitialData::taylor_green: return "taylor_green";
    case InitialData::divfree_bump: return "divfree_bump";
    case InitialData::shear_flow: return "shear";
    case InitialData::snapshot: return "snapshot";
  }
  return "?";
}

template <class T>
std::string join(const std::vector<T>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    if constexpr (std::is_same_v<T, int>)
      out += std::to_string(xs[i]);
    else
      out += fmt(xs[i]);
  }
  return out;
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string hex(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

/// Files written by one command, listed in the manifest with size and hash.
class Outputs {
 public:
  explicit Outputs(fs::path dir) : dir_(std::move(dir)) {}
  const fs::path& dir() const { return dir_; }
  void text(const std::string& name, const std::string& contents) {
    fields::write_file_atomic(dir_ / name, contents);
    files_.emplace_back(name, contents);
  }
  void snapshot(const std::string& name, const VectorField& u, double t) {
    fields::write_snapshot(dir_ / name, u, t);
    files_.emplace_back(name, read_file(dir_ / name));
  }
  std::string listing() const {
    std::string out;
    for (const auto& [name, bytes] : files_)
      out += name + " = " + std::to_string(bytes.size()) + " " + hex(fnv1a(bytes)) + "\n";
    return out;
  }

 private:
  fs::path dir_;
  std::vector<std::pair<std::string, std::string>> files_;
};

struct Manifest {
  std::string command;
  std::string status = "ok";
  int exit_code = kOk;
  std::string message;
  std::string result;
  std::string slabs;

  std::string render(const RunConfig& cfg, const Outputs& files) const {
    std::string out = "# mns manifest\ncommand = " + command + "\nstatus = " + status +
                      "\nexit_code = " + std::to_string(exit_code) + "\n";
    if (!message.empty()) out += "message = " + message + "\n";
    out += "\n[config]\n" + config_text(cfg);
    if (!result.empty()) out += "\n[result]\n" + result;
    if (!slabs.empty()) out += "\n[slabs]\n# index = t0 t1 iterations converged halvings residuals...\n" + slabs;
    out += "\n[files]\n# name = bytes fnv1a64\n" + files.listing();
    return out;
  }
};

std::string slab_listing(const std::vector<solver::PicardState>& slabs) {
  std::string out;
  for (std::size_t i = 0; i < slabs.size(); ++i) {
    const auto& s = slabs[i];
    out += "slab." + std::to_string(i) + " = " + fmt(s.t0) + " " + fmt(s.t1) + " " + std::to_string(s.iterations) +
           " " + (s.converged ? "true" : "false") + " " + std::to_string(s.halvings);
    for (double r : s.residuals) out += " " + fmt(r);
    out += "\n";
  }
  return out;
}

std::string series_csv(const DiagnosticsSeries& s) {
  std::ostringstream out;
  diagnostics::write_series_csv(out, s);
  return out.str();
}

std::string supnorm_csv(const SupnormReport& r) {
  std::string out = "t,ratio,running_sup,excursion\n";
  for (std::size_t i = 0; i < r.times.size(); ++i)
    out += fmt(r.times[i]) + "," + fmt(r.ratios[i]) + "," + fmt(r.running[i]) + "," +
           (r.ratios[i] > 1.0 + r.slack ? "1" : "0") + "\n";
  return out;
}

std::string probe_csv(const std::vector<diagnostics::GradientProbe>& probes) {
  std::string out = "component,direction,lhs,shape,gradient_term,implied_constant\n";
  for (const auto& p : probes)
    out += std::to_string(p.component) + "," + std::to_string(p.direction) + "," + fmt(p.lhs) + "," + fmt(p.shape) +
           "," + fmt(p.gradient_term) + "," + fmt(p.implied_constant) + "\n";
  return out;
}

/// Validation and initial data; ConfigError on any problem.
VectorField prepare(const RunConfig& cfg) {
  cfg.validate();
  return initial_field(cfg);
}

int config_failure(std::ostream& log, const std::exception& e) {
  log << "config error: " << e.what() << "\n";
  return kUsageError;
}

bool prepare_dir(const fs::path& dir, std::ostream& log) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    log << "cannot create output directory " << dir.string() << "\n";
    return false;
  }
  return true;
}

/// Snapshots and diagnostics of a trajectory; fills the manifest result.
void write_trajectory(const Trajectory& traj, const VectorField& u_o, const RunConfig& cfg, Outputs& out,
                      Manifest& man) {
  for (std::size_t i = 0; i < traj.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "snap_%05zu.mnsf", i);
    out.snapshot(name, traj.field(i), traj.times()[i]);
  }
  const auto series = diagnostics::energy_budget(traj, cfg.solver.nu, cfg.solver.sobolev_order, cfg.stride);
  out.text("diagnostics.csv", series_csv(series));

  const bool linear = !cfg.solver.nonlinear;
  SupnormReport sup;
  try {
    sup = diagnostics::supnorm_monitor(traj, u_o, linear, cfg.supnorm_slack);
  } catch (const diagnostics::ContractionViolation& e) {
    sup = diagnostics::supnorm_monitor(traj, u_o, false, cfg.supnorm_slack);
    sup.linear = true;
    man.status = "contraction_violation";
    man.exit_code = kCheckFailed;
    man.message = e.what();
  }
  out.text("supnorm.csv", supnorm_csv(sup));
  out.text("gradient_probe.csv", probe_csv(diagnostics::gradient_bound_probe(traj, u_o)));

  man.result += "sample_count = " + std::to_string(traj.size()) + "\n";
  man.result += "t_end = " + fmt(traj.end()) + "\n";
  man.result += "max_relative_budget_residual = " + fmt(series.max_relative_residual) + "\n";
  man.result += "max_l2_excess = " + fmt(series.max_l2_excess) + "\n";
  man.result += "divfree_residual = " + fmt(diagnostics::divfree_residual(traj)) + "\n";
  man.result += std::string("supnorm_linear = ") + (sup.linear ? "true" : "false") + "\n";
  man.result += "supnorm_max_ratio = " + fmt(sup.max_ratio) + "\n";
  man.result += std::string("supnorm_attained_only_at_start = ") + (sup.attained_only_at_start ? "true" : "false") + "\n";
  man.result += "supnorm_slack = " + fmt(sup.slack) + "\n";
  man.result += "supnorm_excursions = " + std::to_string(sup.excursions.size()) + "\n";
}

}  // namespace

// ---------------------------------------------------------------------------
// Config

void RunConfig::validate() const {
  try {
    solver.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  auto need = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(what);
  };
  need(std::isfinite(amplitude), "amplitude must be finite");
  need(stride >= 1, "stride must be at least 1");
  need(samples >= 0, "samples must be non-negative");
  need(supnorm_slack >= 0.0, "supnorm_slack must be non-negative");
  if (initial == InitialData::divfree_bump) {
    const double l = solver.grid.side_length();
    need(bump_radius > 0.0 && bump_radius < l / 4.0, "bump_radius must lie in (0, length / 4)");
    for (double c : bump_center) need(std::isfinite(c), "bump_center must be finite");
  }
  if (initial == InitialData::snapshot) need(!snapshot.empty(), "initial = snapshot needs a snapshot path");
  for (double g : gammas) need(g >= 0.0, "gammas must be non-negative");
  for (int a : alphas) need(a >= 1, "alphas must be positive integers");
  for (double n : nus) need(n > 0.0, "nus must be positive");
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{
      "points",       "length",        "gamma",        "nu",          "sobolev_order", "horizon",
      "substeps",     "picard_tolerance", "max_picard_iterations", "slab_constant", "max_halvings", "dealias",
      "nonlinear",    "blowup_factor", "direct_dt",    "cfl_limit",   "method",        "initial",
      "amplitude",    "bump_radius",   "bump_center",  "snapshot",    "output",        "stride",
      "samples",      "supnorm_slack", "gammas",       "alphas",      "nus"};
  return keys;
}

RunConfig parse_config(const std::string& text, const fs::path& base_dir) {
  std::map<std::string, std::string> values;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  const auto& keys = config_keys();
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    const std::string where = "line " + std::to_string(lineno) + ": ";
    if (eq == std::string::npos) throw ConfigError(where + "expected key = value");
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) throw ConfigError(where + "unknown key '" + key + "'");
    if (value.empty()) throw ConfigError(where + "empty value for '" + key + "'");
    if (!values.emplace(key, value).second) throw ConfigError(where + "duplicate key '" + key + "'");
  }

  RunConfig cfg;
  auto& s = cfg.solver;
  int points = s.grid.points();
  double length = s.grid.side_length();
  for (const auto& [key, v] : values) {
    if (key == "points") points = parse_int(key, v);
    else if (key == "length") length = parse_double(key, v);
    else if (key == "gamma") s.gamma = parse_double(key, v);
    else if (key == "nu") s.nu = parse_double(key, v);
    else if (key == "sobolev_order") s.sobolev_order = parse_int(key, v);
    else if (key == "horizon") s.horizon = parse_double(key, v);
    else if (key == "substeps") s.substeps = parse_int(key, v);
    else if (key == "picard_tolerance") s.picard_tolerance = parse_double(key, v);
    else if (key == "max_picard_iterations") s.max_picard_iterations = parse_int(key, v);
    else if (key == "slab_constant") s.slab_constant = parse_double(key, v);
    else if (key == "max_halvings") s.max_halvings = parse_int(key, v);
    else if (key == "dealias") s.dealias = parse_bool(key, v);
    else if (key == "nonlinear") s.nonlinear = parse_bool(key, v);
    else if (key == "blowup_factor") s.blowup_factor = parse_double(key, v);
    else if (key == "direct_dt") s.direct_dt = parse_double(key, v);
    else if (key == "cfl_limit") s.cfl_limit = parse_double(key, v);
    else if (key == "method") {
      if (v == "picard") s.method = Method::picard;
      else if (v == "direct") s.method = Method::direct;
      else throw ConfigError("method: expected picard or direct, got '" + v + "'");
    } else if (key == "initial") {
      if (v == "taylor_green") cfg.initial = InitialData::taylor_green;
      else if (v == "divfree_bump") cfg.initial = InitialData::divfree_bump;
      else if (v == "shear") cfg.initial = InitialData::shear_flow;
      else if (v == "snapshot") cfg.initial = InitialData::snapshot;
      else throw ConfigError("initial: expected taylor_green, divfree_bump, shear or snapshot, got '" + v + "'");
    } else if (key == "amplitude") cfg.amplitude = parse_double(key, v);
    else if (key == "bump_radius") cfg.bump_radius = parse_double(key, v);
    else if (key == "bump_center") {
      const auto parts = split_list(v);
      if (parts.size() != 3) throw ConfigError("bump_center: expected three numbers");
      for (int i = 0; i < 3; ++i) cfg.bump_center[i] = parse_double(key, parts[i]);
    } else if (key == "snapshot") {
      fs::path p(v);
      cfg.snapshot = (p.is_relative() && !base_dir.empty()) ? base_dir / p : p;
    } else if (key == "output") cfg.output = v;
    else if (key == "stride") cfg.stride = parse_int(key, v);
    else if (key == "samples") cfg.samples = parse_int(key, v);
    else if (key == "supnorm_slack") cfg.supnorm_slack = parse_double(key, v);
    else if (key == "gammas") {
      cfg.gammas.clear();
      for (const auto& p : split_list(v)) cfg.gammas.push_back(parse_double(key, p));
    } else if (key == "alphas") {
      cfg.alphas.clear();
      for (const auto& p : split_list(v)) cfg.alphas.push_back(parse_int(key, p));
    } else if (key == "nus") {
      cfg.nus.clear();
      for (const auto& p : split_list(v)) cfg.nus.push_back(parse_double(key, p));
    }
  }
  try {
    s.grid = fields::TorusGrid(length, points);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("grid: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

RunConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path());
}

std::string config_text(const RunConfig& cfg) {
  const auto& s = cfg.solver;
  std::string out;
  auto put = [&](const char* key, const std::string& v) { out += std::string(key) + " = " + v + "\n"; };
  auto b = [](bool x) { return std::string(x ? "true" : "false"); };
  put("points", std::to_string(s.grid.points()));
  put("length", fmt(s.grid.side_length()));
  put("gamma", fmt(s.gamma));
  put("nu", fmt(s.nu));
  put("sobolev_order", std::to_string(s.sobolev_order));
  put("horizon", fmt(s.horizon));
  put("substeps", std::to_string(s.substeps));
  put("picard_tolerance", fmt(s.picard_tolerance));
  put("max_picard_iterations", std::to_string(s.max_picard_iterations));
  put("slab_constant", fmt(s.slab_constant));
  put("max_halvings", std::to_string(s.max_halvings));
  put("dealias", b(s.dealias));
  put("nonlinear", b(s.nonlinear));
  put("blowup_factor", fmt(s.blowup_factor));
  put("direct_dt", fmt(s.direct_dt));
  put("cfl_limit", fmt(s.cfl_limit));
  put("method", solver::to_string(s.method));
  put("initial", initial_name(cfg.initial));
  put("amplitude", fmt(cfg.amplitude));
  put("bump_radius", fmt(cfg.bump_radius));
  put("bump_center", join(std::vector<double>(cfg.bump_center.begin(), cfg.bump_center.end())));
  if (!cfg.snapshot.empty()) put("snapshot", cfg.snapshot.string());
  put("output", cfg.output.string());
  put("stride", std::to_string(cfg.stride));
  put("samples", std::to_string(cfg.samples));
  put("supnorm_slack", fmt(cfg.supnorm_slack));
  put("gammas", join(cfg.gammas));
  put("alphas", join(cfg.alphas));
  put("nus", join(cfg.nus));
  return out;
}

VectorField initial_field(const RunConfig& cfg) {
  const auto& g = cfg.solver.grid;
  switch (cfg.initial) {
    case InitialData::taylor_green: return fields::taylor_green(g, cfg.amplitude);
    case InitialData::shear_flow: return fields::shear_flow(g, cfg.amplitude);
    case InitialData::divfree_bump:
      return fields::make_divfree_bump(g, cfg.bump_center, cfg.bump_radius, cfg.amplitude);
    case InitialData::snapshot: {
      auto snap = [&] {
        try {
          return fields::read_snapshot(cfg.snapshot);
        } catch (const std::exception& e) {
          throw ConfigError(std::string("snapshot: ") + e.what());
        }
      }();
      if (!(snap.field.grid() == g))
        throw ConfigError("snapshot grid (N = " + std::to_string(snap.field.grid().points()) +
                          ", L = " + fmt(snap.field.grid().side_length()) + ") does not match points and length");
      return snap.field;
    }
  }
  throw ConfigError("unknown initial data");
}

std::vector<double> output_times(const RunConfig& cfg) {
  if (cfg.samples == 0) return {};
  if (cfg.solver.horizon == 0.0) return {0.0};
  return diagnostics::uniform_times(cfg.solver.horizon, cfg.samples);
}

// ---------------------------------------------------------------------------
// Commands

int cmd_solve(const RunConfig& cfg, const fs::path& out_dir, std::ostream& log) {
  VectorField u_o(cfg.solver.grid);
  try {
    u_o = prepare(cfg);
  } catch (const std::exception& e) {
    return config_failure(log, e);
  }
  if (!prepare_dir(out_dir, log)) return kUsageError;
  Outputs out(out_dir);
  Manifest man;
  man.command = "solve";
  out.text("config.txt", config_text(cfg));

  Solution sol;
  try {
    sol = solver::solve(u_o, cfg.solver, output_times(cfg));
  } catch (const solver::PicardFailure& e) {
    man.slabs = slab_listing(e.slabs());
    if (!e.partial().empty()) write_trajectory(e.partial(), u_o, cfg, out, man);
    man.status = "picard_failure";
    man.exit_code = kSolverFailure;
    man.message = e.what();
    out.text("manifest.txt", man.render(cfg, out));
    log << "picard failure: " << e.what() << "\n";
    return kSolverFailure;
  } catch (const solver::CflViolation& e) {
    man.status = "cfl_violation";
    man.exit_code = kSolverFailure;
    man.message = e.what();
    out.text("manifest.txt", man.render(cfg, out));
    log << "solver failure: " << e.what() << "\n";
    return kSolverFailure;
  }
  man.slabs = slab_listing(sol.slabs);
  write_trajectory(sol.trajectory, u_o, cfg, out, man);
  man.result += "steps = " + std::to_string(sol.steps) + "\n";
  man.result += std::string("blowup_alert = ") + (sol.blowup_alert ? "true" : "false") + "\n";
  if (sol.blowup_alert) {
    man.result += "blowup_time = " + fmt(sol.blowup_time) + "\n";
    man.status = "blowup_guard";
    man.exit_code = kBlowup;
  }
  out.text("manifest.txt", man.render(cfg, out));
  log << "solve: " << sol.trajectory.size() << " samples, status " << man.status << ", output " << out_dir.string()
      << "\n";
  return man.exit_code;
}

int cmd_sweep(const RunConfig& cfg, const std::string& kind, const fs::path& out_dir, std::ostream& log) {
  if (kind != "gamma" && kind != "alpha" && kind != "nu") {
    log << "unknown sweep kind '" << kind << "' (expected gamma, alpha or nu)\n";
    return kUsageError;
  }
  VectorField u_o(cfg.solver.grid);
  try {
    u_o = prepare(cfg);
  } catch (const std::exception& e) {
    return config_failure(log, e);
  }
  if (!prepare_dir(out_dir, log)) return kUsageError;
  const auto times = cfg.samples > 0 ? output_times(cfg) : diagnostics::uniform_times(cfg.solver.horizon, 10);
  Outputs out(out_dir);
  Manifest man;
  man.command = "sweep " + kind;
  out.text("config.txt", config_text(cfg));
  SweepReport rep;
  try {
    if (kind == "gamma") rep = diagnostics::gamma_sweep(u_o, cfg.gammas, cfg.solver, times);
    else if (kind == "alpha") rep = diagnostics::alpha_sweep(u_o, cfg.alphas, cfg.solver, times);
    else rep = diagnostics::nu_sweep(u_o, cfg.nus, cfg.solver, times);
  } catch (const solver::ConfigError& e) {
    return config_failure(log, e);
  } catch (const std::invalid_argument& e) {
    return config_failure(log, e);
  } catch (const std::exception& e) {
    man.status = "solver_failure";
    man.exit_code = kSolverFailure;
    man.message = e.what();
    out.text("manifest.txt", man.render(cfg, out));
    log << "solver failure: " << e.what() << "\n";
    return kSolverFailure;
  }
  std::ostringstream csv, summary;
  diagnostics::write_sweep_csv(csv, rep);
  diagnostics::write_sweep_summary(summary, rep);
  out.text("sweep.csv", csv.str());
  out.text("sweep_summary.txt", summary.str());
  man.result = summary.str();
  if (!rep.passed) {
    man.status = "check_failed";
    man.exit_code = kCheckFailed;
  }
  out.text("manifest.txt", man.render(cfg, out));
  log << summary.str();
  return man.exit_code;
}

int cmd_scale_check(const RunConfig& cfg, std::ostream& log) {
  VectorField u_o(cfg.solver.grid);
  try {
    u_o = prepare(cfg);
  } catch (const std::exception& e) {
    return config_failure(log, e);
  }
  const double linf0 = norm(u_o, Norm::linf());
  const double l20 = norm(u_o, Norm::l2());
  const double slab0 = solver::step_rule(u_o, cfg.solver, std::numeric_limits<double>::infinity());
  log << "# alpha, Linf ratio (law alpha), L2 ratio (law alpha^-1/2), slab ratio, divergence\n";
  for (int a : cfg.alphas) {
    VectorField ua(cfg.solver.grid);
    try {
      ua = fields::apply_initial_scaling(u_o, a);
    } catch (const std::exception& e) {
      return config_failure(log, e);
    }
    const double rinf = linf0 > 0 ? norm(ua, Norm::linf()) / linf0 : 0.0;
    const double rl2 = l20 > 0 ? norm(ua, Norm::l2()) / l20 : 0.0;
    const double slab = solver::step_rule(ua, cfg.solver, std::numeric_limits<double>::infinity());
    log << "alpha = " << a << ", linf_ratio = " << fmt(rinf) << ", l2_ratio = " << fmt(rl2)
        << ", l2_law = " << fmt(1.0 / std::sqrt(a)) << ", slab_ratio = " << fmt(slab / slab0)
        << ", divergence = " << fmt(norm(fields::divergence(ua), Norm::linf())) << "\n";
  }
  return kOk;
}

int cmd_pressure(const RunConfig& cfg, const fs::path& out_dir, std::ostream& log) {
  VectorField u_o(cfg.solver.grid);
  try {
    u_o = prepare(cfg);
  } catch (const std::exception& e) {
    return config_failure(log, e);
  }
  fields::ScalarField p(cfg.solver.grid);
  try {
    p = helmholtz::pressure_nonlinear(u_o);
  } catch (const std::exception& e) {
    log << "pressure: " << e.what() << "\n";
    return kCheckFailed;
  }
  if (!prepare_dir(out_dir, log)) return kUsageError;
  const auto grad = fields::gradient(p);
  // N(u) = P N(u) - grad p.
  const auto nl = fields::to_real(helmholtz::advective_term(u_o));
  const auto split = helmholtz::leray_project(nl) - grad;
  const double residual = norm(split - nl, Norm::linf());
  double mean = 0.0;
  for (double x : p.samples()) mean += x;
  mean /= static_cast<double>(p.samples().size());
  Outputs out(out_dir);
  out.snapshot("pressure_gradient.mnsf", grad, 0.0);
  std::string text;
  text += "pressure_l2 = " + fmt(norm(p, Norm::l2())) + "\n";
  text += "pressure_linf = " + fmt(norm(p, Norm::linf())) + "\n";
  text += "pressure_mean = " + fmt(mean) + "\n";
  text += "gradient_l2 = " + fmt(norm(grad, Norm::l2())) + "\n";
  text += "gradient_linf = " + fmt(norm(grad, Norm::linf())) + "\n";
  text += "decomposition_residual = " + fmt(residual) + "\n";
  out.text("pressure.txt", text);
  log << text;
  return kOk;
}

int cmd_norms(const RunConfig& cfg, std::ostream& log) {
  VectorField u_o(cfg.solver.grid);
  try {
    u_o = prepare(cfg);
  } catch (const std::exception& e) {
    return config_failure(log, e);
  }
  log << "L1 = " << fmt(norm(u_o, Norm::l1())) << "\n";
  log << "L2 = " << fmt(norm(u_o, Norm::l2())) << "\n";
  log << "Linf = " << fmt(norm(u_o, Norm::linf())) << "\n";
  for (int m = 0; m <= fields::kDefaultMaxSobolevOrder; ++m)
    log << "H" << m << " = " << fmt(norm(u_o, Norm::hm(m))) << "\n";
  for (int m = 0; m <= 2; ++m) log << "C" << m << " = " << fmt(norm(u_o, Norm::cm(m))) << "\n";
  log << "divergence_linf = " << fmt(norm(fields::divergence(u_o), Norm::linf())) << "\n";
  log << "step_rule = " << fmt(solver::step_rule(u_o, cfg.solver, cfg.solver.horizon)) << "\n";
  return kOk;
}

}  // namespace mns::cli
