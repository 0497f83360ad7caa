#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "dcsit/analytics.hpp"
#include "dcsit/ic_scheme.hpp"
#include "dcsit/verify.hpp"
#include "dcsit/x_scheme.hpp"

namespace dcsit {

// ordered_json keeps insertion order so reruns are byte-identical.
using Json = nlohmann::ordered_json;

Json json_of_report(const EndToEndReport& rep);
Json json_of_schedule_ic(const ScheduleIC& s);
Json json_of_schedule_x(const ScheduleX& s);
Json json_of_bounds(const BoundsReport& b);
Json json_of_checks(const std::vector<CheckResult>& checks);

// dump(2) plus a trailing newline.
std::string dump_json(const Json& j);

}  // namespace dcsit
