#include "dcsit/ic_scheme.hpp"

#include <sstream>
#include <stdexcept>

#include "dcsit/analytics.hpp"

namespace dcsit {

namespace {

long long choose_ll(int n, int k) {
  return static_cast<long long>(binomial(n, k).get_num().get_si());
}

}  // namespace

ScheduleIC schedule_ic(int K) {
  if (K < 3) throw std::invalid_argument("IC scheme requires K >= 3");
  std::vector<Rational> chain;
  chain.emplace_back(1);
  chain.push_back(chain.back() * rat(K - 2, 2 * K - 3));
  for (int m = 2; m <= K - 2; ++m) {
    chain.push_back(chain.back() * rat(m - 1, 2 * (K - m) - 1));
  }

  ScheduleIC s;
  s.K = K;
  s.reps = smallest_integer_profile(chain);

  const long long r1 = s.reps[0];
  s.slot_budget.emplace_back("1", r1 * ((K - 1) * (K - 1) + 1));
  for (int m = 2; m <= K - 1; ++m) {
    if (m >= 3) {
      std::ostringstream os;
      os << m << "-II";
      s.slot_budget.emplace_back(os.str(),
                                 s.reps[static_cast<std::size_t>(m - 2)] *
                                     choose_ll(K, m));
    }
    std::ostringstream os;
    os << m << "-I";
    s.slot_budget.emplace_back(
        os.str(), s.reps[static_cast<std::size_t>(m - 1)] * m * (K - m + 1) *
                      choose_ll(K, m));
  }
  {
    std::ostringstream os;
    os << K << "-II";
    s.slot_budget.emplace_back(os.str(), s.reps[static_cast<std::size_t>(K - 2)]);
  }
  {
    std::ostringstream os;
    os << K << "-tdma";
    s.slot_budget.emplace_back(
        os.str(), s.reps[static_cast<std::size_t>(K - 2)] * K * (K - 2));
  }

  s.total_slots = 0;
  for (const auto& [name, slots] : s.slot_budget) s.total_slots += slots;
  s.total_data_symbols = r1 * K * (K - 1) * (K - 1);
  return s;
}

RunState run_ic_state(int K, std::uint64_t seed, const RunConfig& cfg) {
  const ScheduleIC sch = schedule_ic(K);
  if (K > cfg.sim_cap_k) {
    std::ostringstream os;
    os << "simulation cap exceeded; estimated slots = " << sch.total_slots;
    throw std::runtime_error(os.str());
  }

  RunState st(ChannelKind::ic, K, seed, cfg);
  for (long long r = 0; r < sch.reps[0]; ++r) phase1_ic(st);
  for (long long r = 0; r < sch.reps[1]; ++r) phase_mI_ic(st, 2);
  for (int m = 3; m <= K - 1; ++m) {
    phase_mII_ic(st, m);
    for (long long r = 0; r < sch.reps[static_cast<std::size_t>(m - 1)]; ++r) {
      phase_mI_ic(st, m);
    }
  }
  phase_mII_ic(st, K);
  phase_tdma(st);

  if (st.chan.current_slot() != sch.total_slots) {
    throw std::logic_error("slot accounting mismatch");
  }
  for (const auto& [key, dq] : st.pools) {
    if (!dq.empty()) throw std::logic_error("pool shape mismatch");
  }
  for (const auto& [mask, dq] : st.pending_sets) {
    if (!dq.empty()) throw std::logic_error("pool shape mismatch");
  }
  audit_causality(st);
  return st;
}

EndToEndReport run_ic(int K, std::uint64_t seed, const RunConfig& cfg,
                      std::vector<EquationBank>* banks_out) {
  const ScheduleIC sch = schedule_ic(K);
  const RunState st = run_ic_state(K, seed, cfg);
  const DecodeReport dec = decode_run(st, banks_out);

  EndToEndReport rep;
  rep.kind = ChannelKind::ic;
  rep.K = K;
  rep.seed = seed;
  rep.total_slots = sch.total_slots;
  rep.total_data_symbols = sch.total_data_symbols;
  rep.pass = dec.pass && dec.recovered == sch.total_data_symbols;
  rep.max_rel_err = dec.max_rel_err;
  rep.min_singular = dec.min_singular;
  rep.systems_solved = dec.systems_solved;
  rep.recovered = dec.recovered;
  rep.per_rx_max_err = dec.per_rx_max_err;
  rep.detail = dec.detail;
  if (rep.pass == false && rep.detail.empty()) {
    rep.detail = "recovered count short of schedule";
  }
  return rep;
}

}  // namespace dcsit
