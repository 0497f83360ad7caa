#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "dcsit/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"delayed-CSIT alignment schemes: tables, figure data, "
               "symbol-level simulation, verification sweeps"};
  app.require_subcommand(1);

  dcsit::CliOptions opt;
  std::string channel = "ic";

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--channel", channel, "ic or x")
        ->check(CLI::IsMember({"ic", "x"}));
    sub->add_option("--k", opt.k, "number of users K");
    sub->add_option("--k-max", opt.k_max, "upper end of the K range");
    sub->add_option("--m", opt.m, "phase order m");
    sub->add_option("--seeds", opt.seeds, "number of seeds");
    sub->add_option("--seed", opt.seed, "base seed");
    sub->add_option("--format", opt.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", opt.out, "output path (default stdout)");
  };

  add_common(app.add_subcommand("table", "achievable sum DoF tables"));
  add_common(app.add_subcommand("figure", "DoF versus K with the limit"));
  add_common(app.add_subcommand("simulate", "full symbol-level runs"));
  CLI::App* verify =
      app.add_subcommand("verify", "count, rank, and analytics sweeps");
  add_common(verify);
  verify->add_flag("--inject-duplicate-column", opt.inject_duplicate_column,
                   "fault-injection hook: duplicate one delivery column");
  add_common(app.add_subcommand("limits", "asymptotic limit values"));

  CLI11_PARSE(app, argc, argv);

  opt.command = app.get_subcommands().front()->get_name();
  opt.channel = channel == "x" ? dcsit::ChannelKind::x : dcsit::ChannelKind::ic;
  return dcsit::run_cli(opt, std::cout);
}
