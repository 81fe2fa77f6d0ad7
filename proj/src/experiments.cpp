#include "nlcd/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <limits>

#include "nlcd/io.hpp"
#include "nlcd/metrics.hpp"

namespace nlcd {

namespace {

[[noreturn]] void bad_field(const std::string& field, const std::string& detail) {
  throw Error(ErrorCode::ConfigParse, field + ": " + detail);
}

double get_num(const json& root, const char* sec, const char* key) {
  const json& v = root.at(sec).at(key);
  if (!v.is_number()) bad_field(std::string(sec) + "." + key, "expected a number");
  return v.get<double>();
}

int get_int(const json& root, const char* sec, const char* key) {
  const json& v = root.at(sec).at(key);
  if (!v.is_number_integer()) bad_field(std::string(sec) + "." + key, "expected an integer");
  return v.get<int>();
}

std::string get_str(const json& root, const char* sec, const char* key) {
  const json& v = root.at(sec).at(key);
  if (!v.is_string()) bad_field(std::string(sec) + "." + key, "expected a string");
  return v.get<std::string>();
}

std::vector<double> get_vec(const json& root, const char* sec, const char* key) {
  const json& v = root.at(sec).at(key);
  if (!v.is_array()) bad_field(std::string(sec) + "." + key, "expected an array of numbers");
  std::vector<double> out;
  for (const json& e : v) {
    if (!e.is_number()) bad_field(std::string(sec) + "." + key, "expected an array of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

void merge_strict(json& base, const json& user, const std::string& prefix) {
  for (auto it = user.begin(); it != user.end(); ++it) {
    const std::string path = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (!base.contains(it.key())) {
      throw Error(ErrorCode::ConfigParse, "unknown config key: " + path);
    }
    json& slot = base[it.key()];
    if (slot.is_object()) {
      if (!it.value().is_object()) bad_field(path, "expected an object");
      merge_strict(slot, it.value(), path);
    } else {
      slot = it.value();
    }
  }
}

std::vector<double> parse_p_list(const json& config) {
  const json& arr = config.at("rates").at("p");
  if (!arr.is_array() || arr.empty()) bad_field("rates.p", "expected a non-empty array");
  std::vector<double> ps;
  for (const json& e : arr) {
    if (e.is_string()) {
      const std::string s = e.get<std::string>();
      if (s == "inf" || s == "Inf" || s == "infinity") {
        ps.push_back(kPInf);
        continue;
      }
      bad_field("rates.p", "unknown entry \"" + s + "\" (use numbers >= 1 or \"inf\")");
    }
    if (!e.is_number() || e.get<double>() < 1.0) {
      bad_field("rates.p", "entries must be numbers >= 1 or \"inf\"");
    }
    ps.push_back(e.get<double>());
  }
  return ps;
}

std::string p_name(double p) {
  if (p == kPInf) return "pinf";
  if (p == 1.0) return "p1";
  if (p == 2.0) return "p2";
  return "p" + format_short(p);
}

json fit_to_json(const RateFit& fit) {
  return json{{"exponent", fit.exponent},
              {"log_constant", fit.log_constant},
              {"residual", fit.residual},
              {"window", {fit.window_lo, fit.window_hi}},
              {"correction", fit.correction == RateCorrection::SqrtLog ? "sqrt_log" : "none"}};
}

std::string snapshot_name(size_t index, double time) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "snapshot_%04zu_t%s.csv", index, format_short(time).c_str());
  return buf;
}

}  // namespace

Mutation parse_mutation(const std::string& name) {
  if (name.empty() || name == "none") return Mutation::None;
  if (name == "kernel") return Mutation::Kernel;
  if (name == "profile") return Mutation::Profile;
  if (name == "flux") return Mutation::Flux;
  throw Error(ErrorCode::InvalidArgument,
              "unknown mutation \"" + name + "\" (choose kernel, profile, or flux)");
}

json default_config() {
  json c;
  c["experiment"] = "run";
  c["kernel"] = {{"family", "exponential"}, {"param", 1.0}, {"tol", 1e-12}, {"table", ""}};
  c["riemann"] = {{"u_minus", -1.0}, {"u_plus", 1.0}};
  c["profile"] = {{"kind", "tanh"}, {"delta", 1.0}, {"a", 1.0},
                  {"center", 0.0},  {"xs", json::array()}, {"vals", json::array()}};
  c["grid"] = {{"mode", "fan"}, {"h", 0.05}, {"margin", 0.0},
               {"left", -50.0}, {"right", 50.0}, {"n", 0}};
  c["solver"] = {{"epsilon", 0.0},
                 {"cfl", 0.3},
                 {"t_end", 100.0},
                 {"integrator", "ssp_rk2"},
                 {"conv_path", "auto"},
                 {"snapshots", json::array({1.0, 10.0, 100.0})}};
  c["rates"] = {{"window", json::array({10.0, 1000.0})},
                {"p", json::array({1.0, 2.0, "inf"})},
                {"replay", nullptr}};
  c["eps"] = {{"values", json::array({0.1, 0.05, 0.025, 0.0125, 0.0})},
              {"t_eval", 10.0},
              {"window", json::array({-20.0, 20.0})}};
  c["checks"] = {{"seed", 20260817},
                 {"draws", 200},
                 {"gradient_times", json::array({1.0, 10.0, 100.0})},
                 {"crossval_tol", 1e-3}};
  c["output"] = {{"dir", "out"}};
  return c;
}

json load_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::ConfigParse, "cannot open config file " + path);
  try {
    return json::parse(f);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ConfigParse, path + ": " + e.what());
  }
}

void apply_override(json& config, const std::string& assignment) {
  const size_t eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw Error(ErrorCode::ConfigParse, "--set needs key=value, got \"" + assignment + "\"");
  }
  const std::string path = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  json value = json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;  // unquoted strings pass through
  json* cur = &config;
  size_t start = 0;
  while (true) {
    const size_t dot = path.find('.', start);
    const std::string key = path.substr(start, dot == std::string::npos ? dot : dot - start);
    if (key.empty()) throw Error(ErrorCode::ConfigParse, "--set path has an empty segment: " + path);
    if (dot == std::string::npos) {
      (*cur)[key] = value;
      return;
    }
    cur = &((*cur)[key]);
    start = dot + 1;
  }
}

json effective_config(const json& user) {
  if (!user.is_object()) throw Error(ErrorCode::ConfigParse, "config root must be a JSON object");
  json merged = default_config();
  merge_strict(merged, user, "");
  return merged;
}

Problem build_problem(const json& config, Mutation mutation) {
  Problem p;
  p.mutation = mutation;

  const double um = get_num(config, "riemann", "u_minus");
  const double up = get_num(config, "riemann", "u_plus");
  if (!(um < up)) bad_field("riemann.u_minus", "must be strictly less than riemann.u_plus");
  p.riemann = RiemannData(um, up);

  const std::string family = get_str(config, "kernel", "family");
  const double param = get_num(config, "kernel", "param");
  p.kernel_tol = get_num(config, "kernel", "tol");
  if (!(p.kernel_tol > 0.0) || !(p.kernel_tol < 1e-6)) {
    bad_field("kernel.tol", "must lie in (0, 1e-6)");
  }
  try {
    if (family == "exponential") {
      p.kernel = make_exponential_kernel(param);
    } else if (family == "gaussian") {
      p.kernel = make_gaussian_kernel(param);
    } else if (family == "bump") {
      p.kernel = make_bump_kernel(param);
    } else if (family == "tabulated") {
      const std::string table = get_str(config, "kernel", "table");
      if (table.empty()) bad_field("kernel.table", "tabulated kernel needs a table path");
      p.kernel = load_tabulated_kernel(table);
    } else {
      bad_field("kernel.family", "unknown family \"" + family + "\"");
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigParse) throw;
    bad_field("kernel", e.what());
  }

  const std::string kind = get_str(config, "profile", "kind");
  try {
    if (kind == "tanh") {
      p.profile = tanh_ramp(get_num(config, "profile", "delta"), get_num(config, "profile", "center"));
    } else if (kind == "linear") {
      p.profile =
          piecewise_linear_ramp(get_num(config, "profile", "a"), get_num(config, "profile", "center"));
    } else if (kind == "custom") {
      p.profile = custom_profile(get_vec(config, "profile", "xs"), get_vec(config, "profile", "vals"));
    } else {
      bad_field("profile.kind", "unknown kind \"" + kind + "\"");
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigParse) throw;
    bad_field("profile", e.what());
  }

  p.solver.epsilon = get_num(config, "solver", "epsilon");
  p.solver.cfl = get_num(config, "solver", "cfl");
  p.solver.t_end = get_num(config, "solver", "t_end");
  p.solver.snapshot_times = get_vec(config, "solver", "snapshots");
  const std::string integ = get_str(config, "solver", "integrator");
  if (integ == "ssp_rk2") {
    p.solver.integrator = Integrator::SspRk2;
  } else if (integ == "ssp_rk3") {
    p.solver.integrator = Integrator::SspRk3;
  } else {
    bad_field("solver.integrator", "unknown integrator \"" + integ + "\"");
  }
  const std::string path = get_str(config, "solver", "conv_path");
  if (path == "auto") {
    p.solver.conv_path = ConvPath::Auto;
  } else if (path == "direct") {
    p.solver.conv_path = ConvPath::Direct;
  } else if (path == "fft") {
    p.solver.conv_path = ConvPath::Fft;
  } else {
    bad_field("solver.conv_path", "unknown path \"" + path + "\"");
  }
  if (mutation == Mutation::Flux) p.solver.flux = FluxKind::NonconservativeDownwind;
  try {
    validate(p.solver);
  } catch (const Error& e) {
    bad_field("solver", e.what());
  }

  const std::string mode = get_str(config, "grid", "mode");
  try {
    if (mode == "fan") {
      const double h = get_num(config, "grid", "h");
      if (!(h > 0.0)) bad_field("grid.h", "must be > 0");
      double margin = get_num(config, "grid", "margin");
      if (!(margin > 0.0)) {
        const double nu = p.solver.epsilon + 0.5 * kernel_moment(p.kernel, 2);
        margin = std::max(20.0, 7.5 * std::sqrt(nu * p.solver.t_end));
      }
      const double left = std::floor((um * p.solver.t_end - margin) / h) * h;
      const double right = std::ceil((up * p.solver.t_end + margin) / h) * h;
      const int n = static_cast<int>(std::lround((right - left) / h)) + 1;
      p.grid = make_grid(left, right, n);
    } else if (mode == "explicit") {
      p.grid = make_grid(get_num(config, "grid", "left"), get_num(config, "grid", "right"),
                         get_int(config, "grid", "n"));
    } else {
      bad_field("grid.mode", "unknown mode \"" + mode + "\" (use fan or explicit)");
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigParse) throw;
    bad_field("grid", e.what());
  }
  return p;
}

NonlocalOp make_operator(const Problem& prob) {
  if (prob.mutation == Mutation::Kernel) {
    DiscreteKernel k = discretize_kernel(prob.kernel, prob.grid.h(), prob.kernel_tol);
    // Rotate the weights one node: mass is conserved, mirror symmetry is not.
    std::vector<double> w(k.weights.size());
    for (size_t i = 0; i < w.size(); ++i) w[(i + 1) % w.size()] = k.weights[i];
    k.weights = std::move(w);
    return NonlocalOp(prob.grid, k);
  }
  return NonlocalOp(prob.grid, prob.kernel, prob.kernel_tol);
}

FieldState initial_state(const Problem& prob) {
  FieldState s = sample_initial(prob.grid, prob.riemann.u_minus, prob.riemann.u_plus, prob.profile);
  if (prob.mutation == Mutation::Profile) {
    // Narrow dip past the ramp center; deep enough to break monotonicity.
    const double depth = 0.3 * (prob.riemann.u_plus - prob.riemann.u_minus);
    for (int i = 0; i < s.grid.n; ++i) {
      const double z = (s.grid.x(i) - 1.0) / 0.25;
      s.values[static_cast<size_t>(i)] -= depth * std::exp(-z * z);
    }
  }
  return s;
}

Trajectory run_problem(const Problem& prob) {
  NonlocalOp op = make_operator(prob);
  return integrate(op, initial_state(prob), prob.solver);
}

std::string resolve_out_dir(const json& config, const std::string& cli_out) {
  if (!cli_out.empty()) return cli_out;
  if (const char* env = std::getenv("NLCD_OUT_DIR"); env && *env) return env;
  return get_str(config, "output", "dir");
}

int cmd_run(const json& config, const std::string& out_dir) {
  const Problem p = build_problem(config);
  NonlocalOp op = make_operator(p);
  const Trajectory traj = integrate(op, initial_state(p), p.solver);

  ensure_dir(out_dir);
  write_snapshot_csv(out_dir + "/initial.csv", traj.initial);
  for (size_t i = 0; i < traj.snapshots.size(); ++i) {
    write_snapshot_csv(out_dir + "/" + snapshot_name(i, traj.snapshots[i].time), traj.snapshots[i]);
  }

  double min_dt = std::numeric_limits<double>::infinity();
  double min_diff = std::numeric_limits<double>::infinity();
  double max_abs = 0.0;
  for (const StepDiagnostics& d : traj.steps) {
    min_dt = std::min(min_dt, d.dt);
    min_diff = std::min(min_diff, d.min_one_sided_diff);
    max_abs = std::max(max_abs, d.max_abs_u);
  }
  json meta;
  meta["config"] = config;
  meta["diagnostics"] = {{"steps", traj.steps.size()},
                         {"final_time", traj.steps.empty() ? 0.0 : traj.steps.back().time},
                         {"min_dt", min_dt},
                         {"max_abs_u", max_abs},
                         {"min_one_sided_diff", min_diff},
                         {"snapshots", traj.snapshots.size()}};
  write_text_file(out_dir + "/run_meta.json", meta.dump(2) + "\n");
  std::cout << "wrote " << traj.snapshots.size() << " snapshots to " << out_dir << "\n";
  return 0;
}

int cmd_rates(const json& config, const std::string& out_dir) {
  ensure_dir(out_dir);
  const json& replay = config.at("rates").at("replay");
  if (!replay.is_null()) {
    // Replay mode: fit a supplied (t, err) series instead of running a solve.
    if (!replay.is_object() || !replay.contains("times") || !replay.contains("errors")) {
      bad_field("rates.replay", "expected an object with times and errors arrays");
    }
    std::vector<double> ts;
    std::vector<double> es;
    for (const json& e : replay.at("times")) ts.push_back(e.get<double>());
    for (const json& e : replay.at("errors")) es.push_back(e.get<double>());
    double p = kPInf;
    if (replay.contains("p") && replay.at("p").is_number()) p = replay.at("p").get<double>();
    const double lo = ts.empty() ? 1.0 : *std::min_element(ts.begin(), ts.end());
    const double hi = ts.empty() ? 1.0 : *std::max_element(ts.begin(), ts.end());
    json out;
    out[p_name(p)] = {{"none", fit_to_json(fit_rate(ts, es, lo, hi, RateCorrection::None, p))},
                      {"sqrt_log", fit_to_json(fit_rate(ts, es, lo, hi, RateCorrection::SqrtLog, p))}};
    write_text_file(out_dir + "/rates.json", out.dump(2) + "\n");
    std::cout << "replay fit written to " << out_dir << "/rates.json\n";
    return 0;
  }

  const Problem p = build_problem(config);
  const std::vector<double> window = get_vec(config, "rates", "window");
  if (window.size() != 2 || !(window[0] > 0.0) || !(window[0] < window[1])) {
    bad_field("rates.window", "expected [lo, hi] with 0 < lo < hi");
  }
  const std::vector<double> ps = parse_p_list(config);
  const Trajectory traj = run_problem(p);

  std::vector<NormReport> reports;
  for (const FieldState& s : traj.snapshots) {
    if (s.time > 0.0) reports.push_back(make_norm_report(s, p.riemann));
  }
  write_norms_csv(out_dir + "/norms.csv", reports);

  json fits;
  for (double pv : ps) {
    std::vector<double> ts;
    std::vector<double> es;
    for (const FieldState& s : traj.snapshots) {
      if (s.time < window[0] - 1e-12 || s.time > window[1] + 1e-12) continue;
      ts.push_back(s.time);
      es.push_back(error_to_rarefaction(s, p.riemann, pv));
    }
    fits[p_name(pv)] = {
        {"none", fit_to_json(fit_rate(ts, es, window[0], window[1], RateCorrection::None, pv))},
        {"sqrt_log", fit_to_json(fit_rate(ts, es, window[0], window[1], RateCorrection::SqrtLog, pv))}};
    std::cout << p_name(pv) << " exponent (sqrt-log corrected): "
              << format_short(fits[p_name(pv)]["sqrt_log"]["exponent"].get<double>()) << "\n";
  }
  json meta;
  meta["config"] = config;
  meta["fits"] = fits;
  write_text_file(out_dir + "/rates.json", meta.dump(2) + "\n");
  return 0;
}

namespace {

// Check names offered by cmd_verify, in report order.
const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {
      "comparison",          "monotonicity",        "conservation",
      "derivative_decay_p1", "derivative_decay_p2", "derivative_decay_pinf",
      "main_rate_p1",        "rate_exponent_p1",    "main_rate_p2",
      "rate_exponent_p2",    "main_rate_pinf",      "rate_exponent_pinf",
      "l1_log_bound",        "contraction",         "contraction_monotone",
      "kernel_symmetry",     "kato_identity",       "convexity",
      "conv_paths",          "cross_validation",    "reference_gradients"};
  return names;
}

bool selected(const std::string& name, const std::string& only) {
  return only.empty() || name == only || name.rfind(only, 0) == 0;
}

}  // namespace

int cmd_verify(const json& config, const std::string& out_dir, const std::string& only,
               Mutation mutation) {
  Problem p = build_problem(config, mutation);
  if (mutation != Mutation::None) {
    // Mutations are smoke tests of check power; keep the broken run short and
    // skip the asymptotic checks that need long windows. The horizon stops
    // before the downwind flux run overflows (it diverges near t = 3.8 on the
    // default grid) so its oscillations are sampled while still finite; if a
    // mutated run diverges anyway, the catch below turns that into a failed
    // stability check.
    p.solver.t_end = std::min(p.solver.t_end, 3.0);
    p.solver.snapshot_times.clear();
    for (double t : {0.5, 1.0, 2.0, 3.0}) {
      if (t <= p.solver.t_end) p.solver.snapshot_times.push_back(t);
    }
  }

  std::vector<std::string> names;
  for (const std::string& name : suite_names()) {
    if (mutation != Mutation::None) {
      const bool short_run_check = name == "comparison" || name == "monotonicity" ||
                                   name == "conservation" || name.rfind("derivative_decay", 0) == 0 ||
                                   name == "kernel_symmetry" || name == "kato_identity" ||
                                   name == "convexity";
      if (!short_run_check) continue;
    }
    if (selected(name, only)) names.push_back(name);
  }
  if (names.empty()) {
    std::string all;
    for (const std::string& n : suite_names()) all += " " + n;
    throw Error(ErrorCode::InvalidArgument, "--only matched no check; available:" + all);
  }
  auto wanted = [&](const std::string& prefix) {
    return std::any_of(names.begin(), names.end(),
                       [&](const std::string& n) { return n.rfind(prefix, 0) == 0; });
  };

  const bool need_pair = wanted("contraction");
  const bool need_main = need_pair || wanted("comparison") || wanted("monotonicity") ||
                         wanted("conservation") || wanted("derivative_decay") ||
                         wanted("main_rate") || wanted("rate_exponent") ||
                         wanted("l1_log_bound") || wanted("conv_paths") ||
                         wanted("cross_validation");

  NonlocalOp op = make_operator(p);

  // The contraction partner is the same problem with the ramp shifted right by
  // 1/2, so the initial L1 distance is exactly shift * (u_plus - u_minus).
  std::future<Trajectory> main_future;
  std::future<Trajectory> pair_future;
  if (need_main) {
    main_future = std::async(std::launch::async, [&] { return integrate(op, initial_state(p), p.solver); });
  }
  Problem q = p;
  if (need_pair) {
    if (q.profile.kind == ProfileKind::Custom) {
      throw Error(ErrorCode::InvalidArgument,
                  "contraction check needs an analytic profile to build its shifted partner");
    }
    q.profile.center += 0.5;
    pair_future = std::async(std::launch::async, [&] { return run_problem(q); });
  }
  Trajectory main_traj;
  Trajectory pair_traj;
  bool main_blew_up = false;
  std::string blow_up_note;
  if (need_main) {
    try {
      main_traj = main_future.get();
    } catch (const Error& e) {
      // A mutated run is allowed to explode; that is a detection, not a crash.
      if (mutation == Mutation::None || e.code() != ErrorCode::BlowUp) throw;
      main_blew_up = true;
      blow_up_note = e.what();
    }
  }
  if (need_pair) pair_traj = pair_future.get();

  const unsigned seed = static_cast<unsigned>(get_int(config, "checks", "seed"));
  const int draws = get_int(config, "checks", "draws");
  const std::vector<double> window = get_vec(config, "rates", "window");
  if (window.size() != 2 || !(window[0] > 0.0) || !(window[0] < window[1])) {
    bad_field("rates.window", "expected [lo, hi] with 0 < lo < hi");
  }
  const double win_lo = window[0];
  const double win_hi = std::min(window[1], p.solver.t_end);

  std::vector<CheckResult> results;
  auto emit = [&](const CheckResult& r) {
    if (std::find(names.begin(), names.end(), r.name) != names.end()) results.push_back(r);
  };

  if (main_blew_up) {
    results.push_back(make_check("stability", std::numeric_limits<double>::infinity(), 0.0, 0.0,
                                 "mutated run diverged: " + blow_up_note));
  } else if (need_main) {
    emit(check_comparison(main_traj));
    emit(check_monotonicity(main_traj));
    emit(check_conservation(main_traj));
    for (double pv : {1.0, 2.0, kPInf}) emit(check_derivative_decay(main_traj, pv));
    if (mutation == Mutation::None) {
      const FieldState& last =
          main_traj.snapshots.empty() ? main_traj.initial : main_traj.snapshots.back();
      if (wanted("main_rate") || wanted("rate_exponent")) {
        for (double pv : parse_p_list(config)) {
          for (const CheckResult& r : check_main_rate(main_traj, p.riemann, pv, win_lo, win_hi)) {
            emit(r);
          }
        }
      }
      if (wanted("l1_log_bound")) emit(check_l1_log_bound(main_traj, p.riemann, win_lo));
      if (wanted("conv_paths")) emit(check_conv_paths(op, last));
      if (wanted("cross_validation") && op.has_spec() &&
          op.spec().family == KernelFamily::Exponential && op.spec().param == 1.0) {
        // Evolved states carry an h-wide corner at any sonic node (the upwind
        // switch), which a derivative-based realization of L feels at first
        // order; probe the smooth closed-form reference instead. Both routes
        // are second order there; the tolerance contract is set at h = 0.05
        // and rescaled so the check stays meaningful on coarser grids.
        FieldState probe;
        probe.grid = p.grid;
        probe.u_minus = p.riemann.u_minus;
        probe.u_plus = p.riemann.u_plus;
        probe.time = 4.0;
        probe.values.resize(static_cast<size_t>(p.grid.n));
        for (int i = 0; i < p.grid.n; ++i) {
          probe.values[static_cast<size_t>(i)] = viscous_profile(p.riemann, p.grid.x(i), probe.time);
        }
        const double h_ratio = p.grid.h() / 0.05;
        const double tol = get_num(config, "checks", "crossval_tol") * std::max(1.0, h_ratio * h_ratio);
        emit(check_cross_validation(op, probe, tol));
      } else if (only == "cross_validation") {
        throw Error(ErrorCode::WrongKernel,
                    "cross_validation needs the exponential kernel with rate parameter 1");
      }
    }
    if (need_pair) {
      for (const CheckResult& r : check_contraction(main_traj, pair_traj)) emit(r);
    }
  }
  if (wanted("kernel_symmetry")) emit(check_kernel_symmetry(op.kernel()));
  if (wanted("kato_identity")) emit(check_kato_identity(op, seed, draws));
  if (wanted("convexity")) emit(check_convexity(op, seed + 1, draws));
  if (mutation == Mutation::None && wanted("reference_gradients")) {
    emit(check_reference_gradients(p.riemann, get_vec(config, "checks", "gradient_times")));
  }

  ensure_dir(out_dir);
  write_checks_csv(out_dir + "/checks.csv", results);
  std::cout << checks_summary(results);
  const bool all_passed =
      std::all_of(results.begin(), results.end(), [](const CheckResult& r) { return r.passed; });
  std::cout << (all_passed ? "all checks passed" : "some checks FAILED") << " (" << results.size()
            << " run)\n";
  return all_passed ? 0 : 1;
}

int cmd_eps_limit(const json& config, const std::string& out_dir) {
  const std::vector<double> eps = get_vec(config, "eps", "values");
  if (eps.size() < 3 || eps.back() != 0.0) {
    bad_field("eps.values", "expected a strictly decreasing list ending in 0 (the reference)");
  }
  for (size_t i = 0; i + 1 < eps.size(); ++i) {
    if (!(eps[i + 1] < eps[i])) bad_field("eps.values", "must be strictly decreasing");
  }
  const double t_eval = get_num(config, "eps", "t_eval");
  if (!(t_eval > 0.0)) bad_field("eps.t_eval", "must be > 0");
  const std::vector<double> window = get_vec(config, "eps", "window");
  if (window.size() != 2 || !(window[0] < window[1])) bad_field("eps.window", "expected [lo, hi]");

  // One grid for every viscosity, sized for the most diffusive run.
  json shared = config;
  shared["solver"]["epsilon"] = eps.front();
  shared["solver"]["t_end"] = t_eval;
  shared["solver"]["snapshots"] = json::array({t_eval});
  const Problem proto = build_problem(shared);

  std::vector<std::future<FieldState>> futures;
  for (double e : eps) {
    futures.push_back(std::async(std::launch::async, [&proto, e] {
      Problem pe = proto;
      pe.solver.epsilon = e;
      Trajectory traj = run_problem(pe);
      return traj.snapshots.back();
    }));
  }
  std::vector<FieldState> finals;
  for (auto& f : futures) finals.push_back(f.get());

  const FieldState& reference = finals.back();  // the eps = 0 run
  std::vector<double> dist;
  for (const FieldState& s : finals) {
    dist.push_back(l1_distance_window(s, reference, window[0], window[1]));
  }

  ensure_dir(out_dir);
  {
    std::string rows = "epsilon,l1_distance\n";
    for (size_t i = 0; i < eps.size(); ++i) {
      rows += format_full(eps[i]) + "," + format_full(dist[i]) + "\n";
    }
    write_text_file(out_dir + "/eps_limit.csv", rows);
  }
  const std::vector<CheckResult> checks = eps_limit_checks(eps, dist);
  write_checks_csv(out_dir + "/checks.csv", checks);
  std::cout << checks_summary(checks);
  const bool ok =
      std::all_of(checks.begin(), checks.end(), [](const CheckResult& r) { return r.passed; });
  return ok ? 0 : 1;
}

int cmd_cross_validate(const json& config, const std::string& out_dir) {
  const Problem p = build_problem(config);
  if (p.kernel.family != KernelFamily::Exponential || p.kernel.param != 1.0) {
    throw Error(ErrorCode::WrongKernel,
                "cross-validation needs the exponential kernel with rate parameter 1");
  }
  const double tol = get_num(config, "checks", "crossval_tol");
  NonlocalOp op = make_operator(p);
  const Trajectory traj = integrate(op, initial_state(p), p.solver);
  if (traj.snapshots.empty()) bad_field("solver.snapshots", "cross-validation needs snapshots");

  std::string rows = "time,rel_linf\n";
  double worst = 0.0;
  double worst_t = 0.0;
  for (const FieldState& s : traj.snapshots) {
    const CheckResult r = check_cross_validation(op, s, tol);
    rows += format_full(s.time) + "," + format_full(r.measured) + "\n";
    if (r.measured > worst) {
      worst = r.measured;
      worst_t = s.time;
    }
  }
  std::vector<CheckResult> checks;
  checks.push_back(make_check("cross_validation", worst, 0.0, tol,
                              "max over " + std::to_string(traj.snapshots.size()) +
                                  " snapshots of relative L-inf between convolution and "
                                  "elliptic-solve realizations; worst at t=" +
                                  format_short(worst_t)));
  checks.push_back(check_conv_paths(op, traj.snapshots.back()));

  ensure_dir(out_dir);
  write_text_file(out_dir + "/cross_validate.csv", rows);
  write_checks_csv(out_dir + "/checks.csv", checks);
  std::cout << checks_summary(checks);
  const bool ok =
      std::all_of(checks.begin(), checks.end(), [](const CheckResult& r) { return r.passed; });
  return ok ? 0 : 1;
}

}  // namespace nlcd
