#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "nlcd/field.hpp"
#include "nlcd/kernels.hpp"
#include "nlcd/nonlocal_operator.hpp"
#include "nlcd/references.hpp"
#include "nlcd/solver.hpp"
#include "nlcd/verification.hpp"

namespace nlcd {

using json = nlohmann::json;

// Test-only breakages wired through `--break`: a rotated (asymmetric) discrete
// kernel, a non-monotone dip stamped on the sampled data, a downwind
// non-conservative flux. Each must trip at least one named check.
enum class Mutation { None, Kernel, Profile, Flux };

Mutation parse_mutation(const std::string& name);

struct Problem {
  KernelSpec kernel;
  double kernel_tol = 1e-12;
  RiemannData riemann{-1.0, 1.0};
  InitialProfile profile;
  Grid1D grid;
  SolverConfig solver;
  Mutation mutation = Mutation::None;
};

// The complete default configuration; every user key must exist here.
json default_config();

// Parses a JSON config file; ConfigParse on unreadable or malformed input.
json load_config_file(const std::string& path);

// Applies one "dotted.path=value" override in place; the value is parsed as
// JSON when possible and kept as a string otherwise.
void apply_override(json& config, const std::string& assignment);

// Deep-merges user keys over the defaults; unknown keys are rejected so typos
// surface as ConfigParse instead of silently running the defaults.
json effective_config(const json& user);

// Validates and assembles the typed problem; all failures are ConfigParse
// naming the offending field. Grid mode "fan" sizes the domain as
// [u_minus t_end - margin, u_plus t_end + margin] snapped outward to spacing
// multiples, with margin = max(20, 7.5 sqrt(nu t_end)), nu = eps + m2/2,
// unless the config pins a positive margin.
Problem build_problem(const json& config, Mutation mutation = Mutation::None);

NonlocalOp make_operator(const Problem& prob);
FieldState initial_state(const Problem& prob);
Trajectory run_problem(const Problem& prob);

// Precedence: --out flag, then NLCD_OUT_DIR, then config output.dir.
std::string resolve_out_dir(const json& config, const std::string& cli_out);

// Subcommand bodies; each takes the effective config. Return value is the
// process exit status: 0 success / all checks passed, 1 check failures.
// Model and config errors propagate as Error for the entry point to report.
int cmd_run(const json& config, const std::string& out_dir);
int cmd_rates(const json& config, const std::string& out_dir);
int cmd_verify(const json& config, const std::string& out_dir, const std::string& only,
               Mutation mutation);
int cmd_eps_limit(const json& config, const std::string& out_dir);
int cmd_cross_validate(const json& config, const std::string& out_dir);

}  // namespace nlcd
