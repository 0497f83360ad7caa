#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "dcsit/channel.hpp"
#include "dcsit/config.hpp"
#include "dcsit/symbols.hpp"

namespace dcsit {

struct TrackedSymbol {
  SymbolSpec spec;
  LinearForm form;
  Complex value;                  // evaluated against the planted data once
  LComplex value_l;               // same evaluation at transmission precision
  int constructed_after_slot = 0; // latest slot this functional depends on
};

// One transmission block: tx i1 spends K-m+1 slots on combinations of K-m+1
// pooled order-m symbols for receiver set `set_mask`, while tx i2 rides along
// with combinations of K-m more from its own pool. After the block closes,
// each outside receiver j' fixes a projection that nulls the i2 part, and the
// resulting functional of the i1 pool becomes a new side symbol.
struct PairBlock {
  int m = 0;
  std::uint32_t set_mask = 0;
  int i1 = 0;
  int i2 = 0;
  int first_slot = 0;
  int n_slots = 0;
  std::vector<int> lead_syms;   // sent by i1
  std::vector<int> trail_syms;  // sent by i2
  CMatrix c_lead;               // n_slots x |lead|, one row per slot
  CMatrix c_trail;              // n_slots x |trail|
  LMatrix y;                    // n_rx x n_slots
  std::vector<int> outsiders;   // receivers outside set_mask, ascending
  std::vector<LVector> omega;   // per outsider, nulls that outsider's i2 view
  std::vector<int> side_syms;   // u[i1|set;{j'}], aligned with outsiders
};

// One higher-order construction: combinations of the side symbols that the
// members of `set_mask` hold about tx i1. The interference scheme combines m
// of them (owner i1 is a member and excluded) and adds one extra combination
// that rides a shared broadcast slot; the X scheme combines all m+1.
struct ComboBuild {
  int m = 0;  // phase that built it; mask_size(set_mask) == m+1
  std::uint32_t set_mask = 0;
  int i1 = 0;
  std::vector<int> members_j;    // contributing receivers, ascending
  std::vector<int> member_syms;  // aligned with members_j
  CMatrix alpha;
  std::vector<int> produced;     // pooled next-order symbols
  int one_m_sym = -1;            // interference only
};

// One slot in which each member of a set transmits one symbol simultaneously.
struct SimulRecord {
  std::uint32_t set_mask = 0;
  int slot = 0;
  std::vector<int> txs;
  std::vector<int> syms;  // aligned with txs
  LVector y;
};

// One single-transmitter broadcast slot.
struct TdmaRecord {
  int slot = 0;
  int tx = 0;
  int sym = -1;
  LVector y;
};

// One round of the opening phase of the interference scheme: all K
// transmitters blast combinations of their fresh blocks in every slot.
struct Phase1Round {
  int first_slot = 0;
  int n_slots = 0;                          // (K-1)^2 + 1
  std::vector<std::vector<int>> fresh;      // fresh[tx-1] tracked ids
  std::vector<CMatrix> c;                   // c[tx-1], n_slots x (K-1)^2
  LMatrix y;                                // n_rx x n_slots
  std::vector<std::vector<LVector>> omega;  // omega[j-1][i-1], empty at i == j
  // (projection owner j, nulled direction i, symbol owner i') -> symbol id
  std::map<std::tuple<int, int, int>, int> order2;
};

struct PhaseReport {
  std::string name;
  int m = 0;
  int first_slot = 0;
  int last_slot = 0;
  long long symbols_consumed = 0;
  long long next_order_generated = 0;
  long long one_m_generated = 0;
};

using SideIndex = std::map<std::tuple<std::uint32_t, int, int>, int>;

struct RunState {
  ChannelKind kind;
  int K;
  std::uint64_t seed;
  RunConfig cfg;

  FadingProcess chan;
  Rng coeff_rng;  // pre-shared combining coefficients
  Rng data_rng;   // planted ground data
  GroundRegistry reg;

  std::vector<TrackedSymbol> syms;
  std::map<std::pair<std::uint32_t, int>, std::deque<int>> pools;
  std::map<std::uint32_t, std::deque<std::vector<int>>> pending_sets;
  std::map<int, int> one_m_slot;  // one-per-transmitter symbol -> simul index

  std::vector<Phase1Round> p1_rounds;
  std::vector<PairBlock> blocks;
  std::vector<ComboBuild> combos;
  std::vector<SimulRecord> simul;
  std::vector<TdmaRecord> tdma;
  std::vector<PhaseReport> phases;

  RunState(ChannelKind kind, int K, std::uint64_t seed, RunConfig cfg = {});

  int n_tx() const { return kind == ChannelKind::ic ? K : 2; }

  // Registers a tracked symbol; the form must live inside the declared
  // transmitter's ground block. Built symbols pass the value their parents
  // combine to at transmission precision; the overload without it is for
  // fresh unit forms, whose planted value is exact either way.
  int new_symbol(SymbolSpec spec, LinearForm form, int horizon,
                 LComplex value_l);
  int new_symbol(SymbolSpec spec, LinearForm form, int horizon);

  CVector draw_coeff_vector(int n);
  CMatrix draw_coeff_matrix(int rows, int cols);  // row-major draw order

  void push_pool(std::uint32_t demand, int tx, int sym_id);
  std::vector<int> pop_pool(std::uint32_t demand, int tx, int count);
  long long pool_size(std::uint32_t demand, int tx) const;

 private:
  std::map<std::tuple<int, std::uint32_t, std::uint32_t>, std::int64_t> serials_;
};

// Plants `count` fresh data symbols for tx with the given demand set and
// pushes them on the matching pool. Used by the opening phase of the X run
// and by standalone per-phase sweeps.
std::vector<int> seed_pool_with_fresh(RunState& st, std::uint32_t demand,
                                      int tx, int count);

int run_pair_block(RunState& st, int m, std::uint32_t set_mask, int i1, int i2,
                   SideIndex* side_index);
int build_combo_ic(RunState& st, int m, std::uint32_t s_next, int i1,
                   const SideIndex& side_index);
int build_combo_x(RunState& st, int m, std::uint32_t s_next, int i1,
                  const SideIndex& side_index);

PhaseReport phase1_ic(RunState& st);
PhaseReport phase_mI_ic(RunState& st, int m);
PhaseReport phase_mII_ic(RunState& st, int m);
PhaseReport phase_m_x(RunState& st, int m);
// Drains every top-order pool one symbol per slot.
PhaseReport phase_tdma(RunState& st);

// Every transmitted symbol must have been constructible from strictly older
// channel knowledge than its first transmission slot. Throws on violation.
void audit_causality(const RunState& st);

}  // namespace dcsit
