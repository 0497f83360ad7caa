#include "dcsit/cli.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "dcsit/analytics.hpp"
#include "dcsit/ic_scheme.hpp"
#include "dcsit/report_json.hpp"
#include "dcsit/verify.hpp"
#include "dcsit/x_scheme.hpp"

namespace dcsit {

namespace {

std::string decimal6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

int emit_error(std::ostream& os, const std::string& what,
               const std::string& fmt) {
  if (fmt == "csv") {
    os << "error\n" << csv_field(what) << "\n";
  } else {
    Json j;
    j["error"] = what;
    os << dump_json(j);
  }
  return 2;
}

struct TableRow {
  int K;
  std::string channel;
  int m;
  Rational dof;
};

std::vector<TableRow> table_rows() {
  std::vector<TableRow> rows;
  for (int K = 2; K <= 5; ++K) {
    rows.push_back({K, "ic", 1, dof_ic_closed(K, 1)});
  }
  for (int K = 2; K <= 5; ++K) {
    rows.push_back({K, "x", 1, dof_x_closed(K, 1)});
  }
  for (int K = 2; K <= 5; ++K) {
    rows.push_back({K, "x-prior", 1, dof_x_prior(K)});
  }
  return rows;
}

std::string joined_fractions(const std::vector<TableRow>& rows,
                             const std::string& channel) {
  std::string line;
  for (const TableRow& r : rows) {
    if (r.channel != channel) continue;
    if (!line.empty()) line += ", ";
    line += fraction_string(r.dof);
  }
  return line;
}

std::string joined_decimals(const std::vector<TableRow>& rows,
                            const std::string& channel) {
  std::string line;
  for (const TableRow& r : rows) {
    if (r.channel != channel) continue;
    if (!line.empty()) line += ", ";
    line += decimal6(to_double(r.dof));
  }
  return line;
}

}  // namespace

int cmd_table(const CliOptions& opt, std::ostream& os) {
  const std::vector<TableRow> rows = table_rows();
  if (opt.format == "csv") {
    os << "K,channel,m,dof_num,dof_den,dof_decimal\n";
    for (const TableRow& r : rows) {
      os << r.K << "," << csv_field(r.channel) << "," << r.m << ","
         << r.dof.get_num().get_str() << "," << r.dof.get_den().get_str()
         << "," << decimal6(to_double(r.dof)) << "\n";
    }
    return 0;
  }
  if (opt.format == "json") {
    Json arr = Json::array();
    for (const TableRow& r : rows) {
      Json j;
      j["K"] = r.K;
      j["channel"] = r.channel;
      j["m"] = r.m;
      j["dof"] = fraction_string(r.dof);
      j["decimal"] = to_double(r.dof);
      arr.push_back(j);
    }
    Json root;
    root["command"] = "table";
    root["rows"] = arr;
    os << dump_json(root);
    return 0;
  }
  os << "Sum degrees of freedom at m = 1, K = 2..5\n\n";
  os << "interference channel:\n";
  os << "  " << joined_fractions(rows, "ic") << "\n";
  os << "  decimal: " << joined_decimals(rows, "ic") << "\n\n";
  os << "X channel:\n";
  os << "  " << joined_fractions(rows, "x") << "\n";
  os << "  decimal: " << joined_decimals(rows, "x") << "\n\n";
  os << "X channel, prior reference:\n";
  os << "  " << joined_fractions(rows, "x-prior") << "\n";
  os << "  decimal: " << joined_decimals(rows, "x-prior") << "\n";
  return 0;
}

int cmd_figure(const CliOptions& opt, std::ostream& os) {
  const bool ic = opt.channel == ChannelKind::ic;
  const int k_lo = ic ? 3 : 2;
  if (opt.k_max < k_lo) return emit_error(os, "invalid range", opt.format);
  const double lim = ic ? limits().ic : limits().x;
  if (opt.format == "json") {
    Json arr = Json::array();
    for (int K = k_lo; K <= opt.k_max; ++K) {
      const Rational dof = ic ? dof_ic_closed(K, 1) : dof_x_closed(K, 1);
      Json j;
      j["K"] = K;
      j["channel"] = kind_name(opt.channel);
      j["dof"] = fraction_string(dof);
      j["decimal"] = to_double(dof);
      j["limit"] = lim;
      arr.push_back(j);
    }
    Json root;
    root["command"] = "figure";
    root["rows"] = arr;
    os << dump_json(root);
    return 0;
  }
  os << "K,channel,dof_decimal,limit\n";
  for (int K = k_lo; K <= opt.k_max; ++K) {
    const Rational dof = ic ? dof_ic_closed(K, 1) : dof_x_closed(K, 1);
    os << K << "," << kind_name(opt.channel) << ","
       << decimal6(to_double(dof)) << "," << decimal6(lim) << "\n";
  }
  return 0;
}

int cmd_simulate(const CliOptions& opt, std::ostream& os) {
  const bool ic = opt.channel == ChannelKind::ic;
  Json root;
  root["command"] = "simulate";
  root["channel"] = kind_name(opt.channel);
  root["K"] = opt.k;
  try {
    if (ic) {
      root["schedule"] = json_of_schedule_ic(schedule_ic(opt.k));
    } else {
      root["schedule"] = json_of_schedule_x(schedule_x(opt.k));
    }
    Json runs = Json::array();
    bool all_pass = true;
    for (int s = 0; s < opt.seeds; ++s) {
      const std::uint64_t seed = opt.seed + static_cast<std::uint64_t>(s);
      const EndToEndReport rep = ic ? run_ic(opt.k, seed, opt.run)
                                    : run_x(opt.k, seed, opt.run);
      all_pass = all_pass && rep.pass;
      runs.push_back(json_of_report(rep));
    }
    root["runs"] = runs;
    root["all_pass"] = all_pass;
    os << dump_json(root);
    return all_pass ? 0 : 1;
  } catch (const std::exception& e) {
    return emit_error(os, e.what(), opt.format);
  }
}

int cmd_verify(const CliOptions& opt, std::ostream& os) {
  const std::vector<CheckResult> checks =
      verify_all(opt.seed, opt.inject_duplicate_column,
                 opt.k_max == 75 ? 5 : opt.k_max);
  bool all_pass = true;
  for (const CheckResult& c : checks) all_pass = all_pass && c.pass;
  if (opt.format == "csv") {
    os << "name,pass,detail\n";
    for (const CheckResult& c : checks) {
      os << csv_field(c.name) << "," << (c.pass ? "true" : "false") << ","
         << csv_field(c.detail) << "\n";
    }
  } else {
    Json root;
    root["command"] = "verify";
    root["checks"] = json_of_checks(checks);
    root["all_pass"] = all_pass;
    os << dump_json(root);
  }
  return all_pass ? 0 : 1;
}

int cmd_limits(const CliOptions&, std::ostream& os) {
  const LimitValues v = limits();
  Json root;
  root["command"] = "limits";
  root["ic"] = v.ic;
  root["x"] = v.x;
  root["psi"] = v.psi;
  root["phi"] = v.phi;
  os << dump_json(root);
  return 0;
}

int run_cli(const CliOptions& opt, std::ostream& os) {
  std::ofstream file;
  std::ostream* sink = &os;
  if (!opt.out.empty()) {
    file.open(opt.out);
    if (!file) return emit_error(os, "cannot open output path", opt.format);
    sink = &file;
  }
  if (opt.command == "table") return cmd_table(opt, *sink);
  if (opt.command == "figure") return cmd_figure(opt, *sink);
  if (opt.command == "simulate") return cmd_simulate(opt, *sink);
  if (opt.command == "verify") return cmd_verify(opt, *sink);
  if (opt.command == "limits") return cmd_limits(opt, *sink);
  return emit_error(os, "unknown command", opt.format);
}

}  // namespace dcsit
