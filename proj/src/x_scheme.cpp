#include "dcsit/x_scheme.hpp"

#include <sstream>
#include <stdexcept>

namespace dcsit {

namespace {

long long choose_ll(int n, int k) {
  return static_cast<long long>(binomial(n, k).get_num().get_si());
}

}  // namespace

ScheduleX schedule_x(int K) {
  if (K < 2) throw std::invalid_argument("X scheme requires K >= 2");
  std::vector<Rational> chain;
  chain.emplace_back(1);
  for (int m = 1; m <= K - 2; ++m) {
    chain.push_back(chain.back() * rat(m, 2 * (K - m) - 1));
  }

  ScheduleX s;
  s.K = K;
  s.reps = smallest_integer_profile(chain);

  for (int m = 1; m <= K - 1; ++m) {
    std::ostringstream os;
    os << m;
    s.slot_budget.emplace_back(
        os.str(), s.reps[static_cast<std::size_t>(m - 1)] * 2 * (K - m + 1) *
                      choose_ll(K, m));
  }
  {
    std::ostringstream os;
    os << K << "-tdma";
    s.slot_budget.emplace_back(
        os.str(), s.reps[static_cast<std::size_t>(K - 2)] * 2 * (K - 1));
  }

  s.total_slots = 0;
  for (const auto& [name, slots] : s.slot_budget) s.total_slots += slots;
  s.total_data_symbols = s.reps[0] * 2 * K * (2 * K - 1);
  return s;
}

RunState run_x_state(int K, std::uint64_t seed, const RunConfig& cfg) {
  const ScheduleX sch = schedule_x(K);
  if (K > cfg.sim_cap_k) {
    std::ostringstream os;
    os << "simulation cap exceeded; estimated slots = " << sch.total_slots;
    throw std::runtime_error(os.str());
  }

  RunState st(ChannelKind::x, K, seed, cfg);
  for (long long r = 0; r < sch.reps[0]; ++r) {
    for (int tx = 1; tx <= 2; ++tx) {
      for (int j = 1; j <= K; ++j) {
        seed_pool_with_fresh(st, mask_of({j}), tx, 2 * K - 1);
      }
    }
    phase_m_x(st, 1);
  }
  for (int m = 2; m <= K - 1; ++m) {
    for (long long r = 0; r < sch.reps[static_cast<std::size_t>(m - 1)]; ++r) {
      phase_m_x(st, m);
    }
  }
  phase_tdma(st);

  if (st.chan.current_slot() != sch.total_slots) {
    throw std::logic_error("slot accounting mismatch");
  }
  for (const auto& [key, dq] : st.pools) {
    if (!dq.empty()) throw std::logic_error("pool shape mismatch");
  }
  audit_causality(st);
  return st;
}

EndToEndReport run_x(int K, std::uint64_t seed, const RunConfig& cfg,
                     std::vector<EquationBank>* banks_out) {
  const ScheduleX sch = schedule_x(K);
  const RunState st = run_x_state(K, seed, cfg);
  const DecodeReport dec = decode_run(st, banks_out);

  EndToEndReport rep;
  rep.kind = ChannelKind::x;
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
