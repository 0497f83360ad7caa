#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dcsit/config.hpp"
#include "dcsit/engine.hpp"
#include "dcsit/ic_scheme.hpp"
#include "dcsit/rational.hpp"

namespace dcsit {

struct ScheduleX {
  int K = 0;
  // reps[m-1] = rounds of phase m.
  std::vector<long long> reps;
  long long total_slots = 0;
  long long total_data_symbols = 0;
  std::vector<std::pair<std::string, long long>> slot_budget;

  Rational ratio() const { return rat(total_data_symbols, total_slots); }
};

ScheduleX schedule_x(int K);

RunState run_x_state(int K, std::uint64_t seed, const RunConfig& cfg);

EndToEndReport run_x(int K, std::uint64_t seed, const RunConfig& cfg,
                     std::vector<EquationBank>* banks_out = nullptr);

}  // namespace dcsit
