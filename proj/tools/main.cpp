#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nlcd/experiments.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "JSON config file (defaults when omitted)");
  cmd->add_option("--set", args.overrides, "dotted.path=value override, repeatable");
  cmd->add_option("--out", args.out_dir, "output directory (beats NLCD_OUT_DIR and config)");
}

nlcd::json resolve_config(const CommonArgs& args) {
  nlcd::json user = nlcd::json::object();
  if (!args.config_path.empty()) user = nlcd::load_config_file(args.config_path);
  for (const std::string& assignment : args.overrides) {
    nlcd::apply_override(user, assignment);
  }
  return nlcd::effective_config(user);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nonlocal convection-diffusion rarefaction simulator"};
  app.require_subcommand(1);

  CommonArgs run_args, rates_args, verify_args, eps_args, cross_args;
  std::string only, break_name;

  CLI::App* run = app.add_subcommand("run", "integrate and write snapshots");
  add_common(run, run_args);
  CLI::App* rates = app.add_subcommand("rates", "fit decay rates toward the rarefaction wave");
  add_common(rates, rates_args);
  CLI::App* verify = app.add_subcommand("verify", "run the property-check suite");
  add_common(verify, verify_args);
  verify->add_option("--only", only, "run checks whose name starts with this");
  verify->add_option("--break", break_name, "inject a defect: kernel, profile, or flux");
  CLI::App* eps = app.add_subcommand("eps-limit", "vanishing-viscosity study");
  add_common(eps, eps_args);
  CLI::App* cross = app.add_subcommand("cross-validate",
                                       "compare convolution and elliptic realizations of L");
  add_common(cross, cross_args);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      const nlcd::json config = resolve_config(run_args);
      return nlcd::cmd_run(config, nlcd::resolve_out_dir(config, run_args.out_dir));
    }
    if (rates->parsed()) {
      const nlcd::json config = resolve_config(rates_args);
      return nlcd::cmd_rates(config, nlcd::resolve_out_dir(config, rates_args.out_dir));
    }
    if (verify->parsed()) {
      const nlcd::json config = resolve_config(verify_args);
      return nlcd::cmd_verify(config, nlcd::resolve_out_dir(config, verify_args.out_dir), only,
                              nlcd::parse_mutation(break_name));
    }
    if (eps->parsed()) {
      const nlcd::json config = resolve_config(eps_args);
      return nlcd::cmd_eps_limit(config, nlcd::resolve_out_dir(config, eps_args.out_dir));
    }
    if (cross->parsed()) {
      const nlcd::json config = resolve_config(cross_args);
      return nlcd::cmd_cross_validate(config, nlcd::resolve_out_dir(config, cross_args.out_dir));
    }
  } catch (const nlcd::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
