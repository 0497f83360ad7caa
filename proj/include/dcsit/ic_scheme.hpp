#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dcsit/config.hpp"
#include "dcsit/engine.hpp"
#include "dcsit/rational.hpp"
#include "dcsit/receiver.hpp"

namespace dcsit {

// Minimal integer round counts per phase so every pool drains exactly.
struct ScheduleIC {
  int K = 0;
  // reps[m-1] = rounds of phase m-I (reps[0] = opening-phase rounds).
  std::vector<long long> reps;
  long long total_slots = 0;
  long long total_data_symbols = 0;
  // (phase name, slots) in execution order.
  std::vector<std::pair<std::string, long long>> slot_budget;

  Rational ratio() const { return rat(total_data_symbols, total_slots); }
};

ScheduleIC schedule_ic(int K);

struct EndToEndReport {
  ChannelKind kind = ChannelKind::ic;
  int K = 0;
  std::uint64_t seed = 0;
  long long total_slots = 0;
  long long total_data_symbols = 0;
  bool pass = false;
  double max_rel_err = 0.0;
  double min_singular = 0.0;
  long long systems_solved = 0;
  long long recovered = 0;
  std::vector<double> per_rx_max_err;
  std::string detail;
};

// Runs every phase at the minimal schedule and leaves the transcript in the
// returned state. Throws when K < 3 or K exceeds cfg.sim_cap_k.
RunState run_ic_state(int K, std::uint64_t seed, const RunConfig& cfg);

EndToEndReport run_ic(int K, std::uint64_t seed, const RunConfig& cfg,
                      std::vector<EquationBank>* banks_out = nullptr);

}  // namespace dcsit
