#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>

#include "paoi/paoi.hpp"

namespace {

struct Flags {
  std::string config;
  std::string out = "out";
  paoi::Overrides overrides;
  std::string psi_mode, avg_mode, feed;
};

void add_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "JSON configuration file")->required();
  cmd->add_option("--out", f.out, "output directory")->capture_default_str();
  cmd->add_option("--seed", f.overrides.seed, "master seed");
  cmd->add_option("--z", f.overrides.z, "severity threshold z (seconds)");
  cmd->add_option("--ruin-level", f.overrides.ruin_level, "ruin level a (seconds)");
  cmd->add_option("--psi-mode", f.psi_mode, "severity interpretation")
      ->check(CLI::IsMember({"as-written", "survival"}));
  cmd->add_option("--avg-mode", f.avg_mode, "compute-queue average formula")
      ->check(CLI::IsMember({"as-written", "corrected"}));
  cmd->add_option("--feed", f.feed, "compute-queue arrivals")->check(CLI::IsMember({"tandem", "independent"}));
  cmd->add_option("--replications", f.overrides.replications, "independent replications");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Peak-AoI analytics, tandem-queue simulation and sweeps"};
  app.set_version_flag("--version", std::string(paoi::version));
  app.require_subcommand(1);

  Flags flags;
  std::map<std::string, int (*)(const paoi::Config&, const paoi::CommandContext&)> commands = {
      {"analytic", &paoi::cmd_analytic},
      {"simulate", &paoi::cmd_simulate},
      {"sweep", &paoi::cmd_sweep},
      {"validate", &paoi::cmd_validate}};
  const std::map<std::string, std::string> help = {
      {"analytic", "PDF/CDF/severity/average table for the configured (r, mu) points"},
      {"simulate", "tandem-queue simulation: samples, excursions and a summary"},
      {"sweep", "user-count or bandwidth sweep with analytic and simulated results"},
      {"validate", "oracle validation suite; exit status 2 on any failure"}};
  for (const auto& [name, _] : commands) add_flags(app.add_subcommand(name, help.at(name)), flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return paoi::exit_config_error;
  }

  try {
    if (!flags.psi_mode.empty()) flags.overrides.psi_mode = paoi::parse_psi_mode(flags.psi_mode, "--psi-mode");
    if (!flags.avg_mode.empty()) flags.overrides.avg_mode = paoi::parse_avg_mode(flags.avg_mode, "--avg-mode");
    if (!flags.feed.empty()) flags.overrides.feed = paoi::parse_feed(flags.feed, "--feed");
    paoi::Config config = paoi::load_config(flags.config);
    paoi::apply_overrides(config, flags.overrides);
    const paoi::CommandContext ctx{flags.config, flags.out, &std::cerr};
    for (const auto& [name, fn] : commands)
      if (app.got_subcommand(name)) return fn(config, ctx);
  } catch (const paoi::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return paoi::exit_config_error;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return paoi::exit_runtime_error;
  }
  return paoi::exit_runtime_error;
}
