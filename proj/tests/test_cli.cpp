#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "json.hpp"

#include "dcsit/cli.hpp"

using namespace dcsit;
using nlohmann::json;

namespace {

struct CmdResult {
  int status = -1;
  std::string out;
};

// Runs the installed binary; stderr is dropped so parse errors from the
// argument layer do not pollute the captured stream.
CmdResult run_cmd(const std::string& args) {
  const std::string cmd = std::string(DCSIT_CLI_PATH) + " " + args +
                          " 2>/dev/null";
  std::array<char, 4096> buf{};
  CmdResult res;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0) {
    res.out.append(buf.data(), n);
  }
  const int rc = pclose(p);
  res.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  return res;
}

CliOptions base_options(const std::string& command) {
  CliOptions opt;
  opt.command = command;
  return opt;
}

int count_lines(const std::string& s) {
  int lines = 0;
  for (char c : s) lines += c == '\n';
  return lines;
}

}  // namespace

TEST_CASE("table text lists both channels and the prior reference") {
  std::ostringstream os;
  CHECK(cmd_table(base_options("table"), os) == 0);
  const std::string out = os.str();
  CHECK(out.find("interference channel:") != std::string::npos);
  CHECK(out.find("  1, 36/31, 45/38, 1400/1171") != std::string::npos);
  CHECK(out.find("  decimal: 1.000000, 1.161290, 1.184211, 1.195559") !=
        std::string::npos);
  CHECK(out.find("X channel:") != std::string::npos);
  CHECK(out.find("  6/5, 9/7, 105/79, 1575/1163") != std::string::npos);
  CHECK(out.find("  decimal: 1.200000, 1.285714, 1.329114, 1.354256") !=
        std::string::npos);
  CHECK(out.find("X channel, prior reference:") != std::string::npos);
  CHECK(out.find("  6/5, 5/4, 14/11, 9/7") != std::string::npos);
}

TEST_CASE("table csv carries exact numerators and denominators") {
  CliOptions opt = base_options("table");
  opt.format = "csv";
  std::ostringstream os;
  CHECK(cmd_table(opt, os) == 0);
  std::istringstream is(os.str());
  std::string line;
  REQUIRE(std::getline(is, line));
  CHECK(line == "K,channel,m,dof_num,dof_den,dof_decimal");
  std::set<std::string> channels;
  int rows = 0;
  bool saw_k3_ic = false;
  while (std::getline(is, line)) {
    ++rows;
    const auto first = line.find(',');
    const auto second = line.find(',', first + 1);
    channels.insert(line.substr(first + 1, second - first - 1));
    if (line == "3,ic,1,36,31,1.161290") saw_k3_ic = true;
  }
  CHECK(rows == 12);
  CHECK(channels == std::set<std::string>{"ic", "x", "x-prior"});
  CHECK(saw_k3_ic);
}

TEST_CASE("table json mirrors the csv rows") {
  CliOptions opt = base_options("table");
  opt.format = "json";
  std::ostringstream os;
  CHECK(cmd_table(opt, os) == 0);
  const json j = json::parse(os.str());
  CHECK(j["command"] == "table");
  REQUIRE(j["rows"].size() == 12);
  CHECK(j["rows"][1]["K"] == 3);
  CHECK(j["rows"][1]["channel"] == "ic");
  CHECK(j["rows"][1]["dof"] == "36/31");
  CHECK(std::abs(j["rows"][1]["decimal"].get<double>() - 36.0 / 31.0) <=
        1e-15);
}

TEST_CASE("figure csv sweeps K strictly below the limit") {
  for (const bool ic : {true, false}) {
    CliOptions opt = base_options("figure");
    opt.channel = ic ? ChannelKind::ic : ChannelKind::x;
    std::ostringstream os;
    CHECK(cmd_figure(opt, os) == 0);
    std::istringstream is(os.str());
    std::string line;
    REQUIRE(std::getline(is, line));
    CHECK(line == "K,channel,dof_decimal,limit");
    int rows = 0;
    double prev = 0.0;
    while (std::getline(is, line)) {
      std::istringstream row(line);
      std::string k_s, ch, dof_s, lim_s;
      std::getline(row, k_s, ',');
      std::getline(row, ch, ',');
      std::getline(row, dof_s, ',');
      std::getline(row, lim_s, ',');
      CHECK(ch == (ic ? "ic" : "x"));
      CHECK(lim_s == (ic ? "1.266270" : "1.442695"));
      const double dof = std::stod(dof_s);
      CHECK(dof >= prev);
      CHECK(dof < std::stod(lim_s));
      prev = dof;
      ++rows;
    }
    // K runs from the scheme's smallest size through 75.
    CHECK(rows == (ic ? 73 : 74));
  }
}

TEST_CASE("figure refuses an empty range") {
  CliOptions opt = base_options("figure");
  opt.k_max = 2;  // below the interference minimum of 3
  std::ostringstream os;
  CHECK(cmd_figure(opt, os) == 2);
  const json j = json::parse(os.str());
  CHECK(j["error"] == "invalid range");
}

TEST_CASE("simulate reports schedule and per-seed outcomes as json") {
  CliOptions opt = base_options("simulate");
  opt.k = 3;
  opt.seeds = 2;
  opt.seed = 1;
  std::ostringstream os;
  CHECK(cmd_simulate(opt, os) == 0);
  const json j = json::parse(os.str());
  CHECK(j["command"] == "simulate");
  CHECK(j["channel"] == "ic");
  CHECK(j["K"] == 3);
  CHECK(j["all_pass"] == true);
  CHECK(j["schedule"]["rounds"] == json::array({3, 1}));
  CHECK(j["schedule"]["total_slots"] == 31);
  CHECK(j["schedule"]["total_data_symbols"] == 36);
  CHECK(j["schedule"]["dof_ratio"] == "36/31");
  REQUIRE(j["schedule"]["slot_budget"].size() == 4);
  CHECK(j["schedule"]["slot_budget"][0]["phase"] == "1");
  CHECK(j["schedule"]["slot_budget"][0]["slots"] == 15);
  CHECK(j["schedule"]["slot_budget"][3]["phase"] == "3-tdma");
  REQUIRE(j["runs"].size() == 2);
  for (int s = 0; s < 2; ++s) {
    CHECK(j["runs"][s]["pass"] == true);
    CHECK(j["runs"][s]["seed"] == 1 + s);
    CHECK(j["runs"][s]["recovered"] == 36);
    CHECK(j["runs"][s]["max_rel_err"].get<double>() < 1e-6);
  }
}

TEST_CASE("simulate is byte-identical across repeat invocations") {
  CliOptions opt = base_options("simulate");
  opt.channel = ChannelKind::x;
  opt.k = 3;
  opt.seeds = 1;
  std::ostringstream a, b;
  CHECK(cmd_simulate(opt, a) == 0);
  CHECK(cmd_simulate(opt, b) == 0);
  CHECK(a.str() == b.str());
  CHECK(a.str().size() > 0);
}

TEST_CASE("simulate guards bad sizes with exit code 2") {
  CliOptions opt = base_options("simulate");
  opt.k = 2;
  std::ostringstream os;
  CHECK(cmd_simulate(opt, os) == 2);
  json j = json::parse(os.str());
  CHECK(j["error"] == "IC scheme requires K >= 3");

  CliOptions cap = base_options("simulate");
  cap.channel = ChannelKind::x;
  cap.k = 6;
  std::ostringstream os2;
  CHECK(cmd_simulate(cap, os2) == 2);
  j = json::parse(os2.str());
  const std::string err = j["error"].get<std::string>();
  CHECK(err.rfind("simulation cap exceeded", 0) == 0);
}

TEST_CASE("verify defaults leave exactly the known boundary case red") {
  CliOptions opt = base_options("verify");
  std::ostringstream os;
  CHECK(cmd_verify(opt, os) == 1);
  const json j = json::parse(os.str());
  CHECK(j["command"] == "verify");
  CHECK(j["all_pass"] == false);
  REQUIRE(j["checks"].size() == 59);
  std::set<std::string> red;
  for (const auto& c : j["checks"]) {
    if (c["pass"] == false) {
      red.insert(c["name"].get<std::string>());
      CHECK(c["detail"] == "1/20 < 2/9 = 2/9");
    }
  }
  CHECK(red == std::set<std::string>{"bounds/phi/K=3"});
}

TEST_CASE("fault injection turns the opening-round rank check red") {
  CliOptions opt = base_options("verify");
  opt.inject_duplicate_column = true;
  std::ostringstream os;
  CHECK(cmd_verify(opt, os) == 1);
  const json j = json::parse(os.str());
  std::set<std::string> red;
  std::string rank_detail;
  for (const auto& c : j["checks"]) {
    if (c["pass"] == false) {
      red.insert(c["name"].get<std::string>());
      if (c["name"] == "rank/p/K=3") rank_detail = c["detail"];
    }
  }
  CHECK(red == std::set<std::string>{"bounds/phi/K=3", "rank/p/K=3"});
  CHECK(rank_detail.find("40/40 rank failures") != std::string::npos);
  const auto fp_at = rank_detail.find("fingerprint ");
  REQUIRE(fp_at != std::string::npos);
  const std::string fp = rank_detail.substr(fp_at + 12, 16);
  CHECK(fp.find_first_not_of("0123456789abcdef") == std::string::npos);
}

TEST_CASE("limits emits the four constants at full precision") {
  std::ostringstream os;
  CHECK(cmd_limits(base_options("limits"), os) == 0);
  const json j = json::parse(os.str());
  const double ln2 = std::log(2.0);
  CHECK(std::abs(j["ic"].get<double>() - 4.0 / (6.0 * ln2 - 1.0)) <= 1e-15);
  CHECK(std::abs(j["x"].get<double>() - 1.0 / ln2) <= 1e-15);
  CHECK(std::abs(j["psi"].get<double>() - (21.0 / 16.0 - 1.5 * ln2)) <=
        1e-15);
  CHECK(std::abs(j["phi"].get<double>() - (1.0 - ln2)) <= 1e-15);
}

TEST_CASE("run_cli routes commands and honours --out") {
  CliOptions opt = base_options("limits");
  std::ostringstream direct;
  CHECK(run_cli(opt, direct) == 0);

  const std::string path = "cli_out_test.json";
  opt.out = path;
  std::ostringstream sink;
  CHECK(run_cli(opt, sink) == 0);
  CHECK(sink.str().empty());
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream file;
  file << in.rdbuf();
  CHECK(file.str() == direct.str());
  in.close();
  std::remove(path.c_str());

  CliOptions bad = base_options("frobnicate");
  std::ostringstream os;
  CHECK(run_cli(bad, os) == 2);
  CHECK(json::parse(os.str())["error"] == "unknown command");
}

TEST_CASE("the installed binary wires the argument layer faithfully") {
  const CmdResult table = run_cmd("table --format csv");
  CHECK(table.status == 0);
  CHECK(table.out.rfind("K,channel,m,dof_num,dof_den,dof_decimal", 0) == 0);
  CHECK(count_lines(table.out) == 13);

  const CmdResult bad_k = run_cmd("simulate --channel ic --k 2");
  CHECK(bad_k.status == 2);
  CHECK(json::parse(bad_k.out)["error"] == "IC scheme requires K >= 3");

  const CmdResult fig = run_cmd("figure --channel x --k-max 10 --format csv");
  CHECK(fig.status == 0);
  CHECK(count_lines(fig.out) == 10);  // header + K = 2..10

  const CmdResult lim1 = run_cmd("limits");
  const CmdResult lim2 = run_cmd("limits");
  CHECK(lim1.status == 0);
  CHECK(lim1.out == lim2.out);

  const CmdResult nonsense = run_cmd("frobnicate");
  CHECK(nonsense.status != 0);

  const CmdResult sim = run_cmd("simulate --channel x --k 2 --seeds 1");
  CHECK(sim.status == 0);
  const json j = json::parse(sim.out);
  CHECK(j["all_pass"] == true);
  CHECK(j["schedule"]["dof_ratio"] == "6/5");
}
