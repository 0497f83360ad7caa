#include "dcsit/report_json.hpp"

namespace dcsit {

Json json_of_report(const EndToEndReport& rep) {
  Json j;
  j["channel"] = kind_name(rep.kind);
  j["K"] = rep.K;
  j["seed"] = rep.seed;
  j["pass"] = rep.pass;
  j["total_slots"] = rep.total_slots;
  j["data_symbols"] = rep.total_data_symbols;
  j["recovered"] = rep.recovered;
  j["max_rel_err"] = rep.max_rel_err;
  j["min_singular"] = rep.min_singular;
  j["systems_solved"] = rep.systems_solved;
  j["per_rx_max_err"] = rep.per_rx_max_err;
  if (!rep.detail.empty()) j["detail"] = rep.detail;
  return j;
}

namespace {

template <typename Schedule>
Json schedule_common(const Schedule& s) {
  Json j;
  j["K"] = s.K;
  j["rounds"] = s.reps;
  j["total_slots"] = s.total_slots;
  j["total_data_symbols"] = s.total_data_symbols;
  j["dof_ratio"] = fraction_string(s.ratio());
  Json budget = Json::array();
  for (const auto& [name, slots] : s.slot_budget) {
    Json row;
    row["phase"] = name;
    row["slots"] = slots;
    budget.push_back(row);
  }
  j["slot_budget"] = budget;
  return j;
}

}  // namespace

Json json_of_schedule_ic(const ScheduleIC& s) { return schedule_common(s); }

Json json_of_schedule_x(const ScheduleX& s) { return schedule_common(s); }

Json json_of_bounds(const BoundsReport& b) {
  Json j;
  j["K"] = b.K;
  if (b.has_psi) {
    Json p;
    p["lower"] = fraction_string(b.psi_lower);
    p["lower_rel"] = relation_name(b.psi_lower_rel);
    p["value"] = fraction_string(b.psi_value);
    p["upper_rel"] = relation_name(b.psi_upper_rel);
    p["upper"] = fraction_string(b.psi_upper);
    j["psi"] = p;
  }
  Json p;
  p["lower"] = fraction_string(b.phi_lower);
  p["lower_rel"] = relation_name(b.phi_lower_rel);
  p["value"] = fraction_string(b.phi_value);
  p["upper_rel"] = relation_name(b.phi_upper_rel);
  p["upper"] = fraction_string(b.phi_upper);
  j["phi"] = p;
  return j;
}

Json json_of_checks(const std::vector<CheckResult>& checks) {
  Json arr = Json::array();
  for (const CheckResult& c : checks) {
    Json j;
    j["name"] = c.name;
    j["pass"] = c.pass;
    j["detail"] = c.detail;
    arr.push_back(j);
  }
  return arr;
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace dcsit
