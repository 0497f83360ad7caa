#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "dcsit/config.hpp"

namespace dcsit {

struct CliOptions {
  std::string command;  // table | figure | simulate | verify | limits
  ChannelKind channel = ChannelKind::ic;
  int k = 3;
  int k_max = 75;
  int m = 1;
  int seeds = 1;
  std::uint64_t seed = 1;
  std::string format;  // "" picks the subcommand default
  std::string out;     // "" writes to the given stream
  bool inject_duplicate_column = false;
  RunConfig run;
};

// Exit status: 0 all checks pass, 1 a check failed, 2 bad configuration.
int run_cli(const CliOptions& opt, std::ostream& os);

int cmd_table(const CliOptions& opt, std::ostream& os);
int cmd_figure(const CliOptions& opt, std::ostream& os);
int cmd_simulate(const CliOptions& opt, std::ostream& os);
int cmd_verify(const CliOptions& opt, std::ostream& os);
int cmd_limits(const CliOptions& opt, std::ostream& os);

}  // namespace dcsit
