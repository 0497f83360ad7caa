#include "dcsit/engine.hpp"

#include <algorithm>
#include <stdexcept>

namespace dcsit {

RunState::RunState(ChannelKind kind_, int K_, std::uint64_t seed_, RunConfig cfg_)
    : kind(kind_),
      K(K_),
      seed(seed_),
      cfg(cfg_),
      chan(K_, kind_ == ChannelKind::ic ? K_ : 2, seed_),
      coeff_rng(seed_, streams::kCoefficients),
      data_rng(seed_, streams::kData),
      reg(kind_ == ChannelKind::ic ? K_ : 2) {}

int RunState::new_symbol(SymbolSpec spec, LinearForm form, int horizon,
                         LComplex value_l) {
  if (form.owner() != spec.tx) {
    throw std::logic_error("cross-transmitter combination forbidden");
  }
  spec.serial = serials_[{spec.tx, spec.demand, spec.knowledge}]++;
  TrackedSymbol s;
  s.spec = spec;
  s.value_l = value_l;
  s.value = lower(value_l);
  s.form = std::move(form);
  s.constructed_after_slot = horizon;
  syms.push_back(std::move(s));
  return static_cast<int>(syms.size()) - 1;
}

int RunState::new_symbol(SymbolSpec spec, LinearForm form, int horizon) {
  const LComplex v = reg.evaluate_l(form);
  return new_symbol(std::move(spec), std::move(form), horizon, v);
}

CVector RunState::draw_coeff_vector(int n) {
  CVector v(n);
  for (int i = 0; i < n; ++i) v(i) = coeff_rng.cn01();
  return v;
}

CMatrix RunState::draw_coeff_matrix(int rows, int cols) {
  CMatrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) m(r, c) = coeff_rng.cn01();
  }
  return m;
}

void RunState::push_pool(std::uint32_t demand, int tx, int sym_id) {
  pools[{demand, tx}].push_back(sym_id);
}

std::vector<int> RunState::pop_pool(std::uint32_t demand, int tx, int count) {
  auto& q = pools[{demand, tx}];
  if (static_cast<int>(q.size()) < count) {
    throw std::runtime_error("pool shape mismatch");
  }
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int c = 0; c < count; ++c) {
    out.push_back(q.front());
    q.pop_front();
  }
  return out;
}

long long RunState::pool_size(std::uint32_t demand, int tx) const {
  auto it = pools.find({demand, tx});
  return it == pools.end() ? 0 : static_cast<long long>(it->second.size());
}

std::vector<int> seed_pool_with_fresh(RunState& st, std::uint32_t demand,
                                      int tx, int count) {
  std::vector<int> ids;
  ids.reserve(static_cast<std::size_t>(count));
  for (LinearForm& f : st.reg.fresh_block(tx, count, st.data_rng)) {
    SymbolSpec spec;
    spec.tx = tx;
    spec.demand = demand;
    const int id = st.new_symbol(spec, std::move(f), 0);
    st.push_pool(demand, tx, id);
    ids.push_back(id);
  }
  return ids;
}

namespace {

LComplex transmit_value(const RunState& st, const std::vector<int>& ids,
                        const CMatrix& c, int row) {
  LComplex x(0.0L);
  for (std::size_t s = 0; s < ids.size(); ++s) {
    x += lift(c(row, static_cast<Eigen::Index>(s))) * st.syms[ids[s]].value_l;
  }
  return x;
}

// Registering a symbol may grow st.syms and move every stored form, so form
// pointers must be collected after the previous registration, not before.
LinearForm combine_ids(const RunState& st, const std::vector<int>& ids,
                       const CVector& coeffs) {
  std::vector<const LinearForm*> forms;
  forms.reserve(ids.size());
  for (int id : ids) forms.push_back(&st.syms[id].form);
  return combine(forms, coeffs);
}

}  // namespace

int run_pair_block(RunState& st, int m, std::uint32_t set_mask, int i1, int i2,
                   SideIndex* side_index) {
  const int K = st.K;
  const int n_lead = K - m + 1;
  const int n_trail = K - m;
  if (m < 1 || m > K - 1 || mask_size(set_mask) != m || i1 == i2 ||
      i1 < 1 || i2 < 1 || i1 > st.n_tx() || i2 > st.n_tx()) {
    throw std::invalid_argument("index out of range");
  }

  PairBlock b;
  b.m = m;
  b.set_mask = set_mask;
  b.i1 = i1;
  b.i2 = i2;
  b.n_slots = n_lead;
  b.lead_syms = st.pop_pool(set_mask, i1, n_lead);
  b.trail_syms = st.pop_pool(set_mask, i2, n_trail);
  b.c_lead = st.draw_coeff_matrix(n_lead, n_lead);
  b.c_trail = st.draw_coeff_matrix(n_lead, n_trail);
  b.first_slot = st.chan.current_slot() + 1;
  b.y = LMatrix(K, n_lead);
  for (int t = 0; t < n_lead; ++t) {
    const CMatrix& h = st.chan.draw_slot();
    const LComplex x1 = transmit_value(st, b.lead_syms, b.c_lead, t);
    const LComplex x2 = transmit_value(st, b.trail_syms, b.c_trail, t);
    for (int j = 0; j < K; ++j) {
      b.y(j, t) = lift(h(j, i1 - 1)) * x1 + lift(h(j, i2 - 1)) * x2;
    }
  }

  // Constructions below only see slots strictly before `now`.
  const CsitView view = st.chan.csit_view(st.chan.current_slot() + 1);
  const int horizon = st.chan.current_slot();
  for (int j = 1; j <= K; ++j) {
    if (!mask_has(set_mask, j)) b.outsiders.push_back(j);
  }
  for (int j_out : b.outsiders) {
    LMatrix q(n_lead, n_trail);
    for (int t = 0; t < n_lead; ++t) {
      const LComplex h = lift(view.slot(b.first_slot + t)(j_out - 1, i2 - 1));
      for (int s = 0; s < n_trail; ++s) q(t, s) = h * lift(b.c_trail(t, s));
    }
    LVector w = left_null_vector_l(q, st.cfg.rank_rel_tol);
    CVector coef(n_lead);
    LComplex val(0.0L);
    for (int s = 0; s < n_lead; ++s) {
      LComplex acc(0.0L);
      for (int t = 0; t < n_lead; ++t) {
        acc += lift(view.slot(b.first_slot + t)(j_out - 1, i1 - 1)) *
               lift(b.c_lead(t, s)) * w(t);
      }
      coef(s) = lower(acc);
      val += acc * st.syms[b.lead_syms[static_cast<std::size_t>(s)]].value_l;
    }
    SymbolSpec spec;
    spec.tx = i1;
    spec.demand = set_mask;
    spec.knowledge = 1u << (j_out - 1);
    const int id =
        st.new_symbol(spec, combine_ids(st, b.lead_syms, coef), horizon, val);
    b.omega.push_back(std::move(w));
    b.side_syms.push_back(id);
    if (side_index != nullptr) {
      (*side_index)[{set_mask, i1, j_out}] = id;
    }
  }
  st.blocks.push_back(std::move(b));
  return static_cast<int>(st.blocks.size()) - 1;
}

namespace {

// Gathers the side symbols the members of s_next hold about i1 and combines
// them with fresh pre-shared rows. `include_i1` distinguishes the X variant
// (owner is a transmitter label, all members contribute) from the
// interference variant (owner is a member and sits out).
ComboBuild gather_combo(int m, std::uint32_t s_next, int i1,
                        const SideIndex& side_index, bool include_i1) {
  ComboBuild c;
  c.m = m;
  c.set_mask = s_next;
  c.i1 = i1;
  for (int j : mask_members(s_next)) {
    if (!include_i1 && j == i1) continue;
    c.members_j.push_back(j);
    const auto it = side_index.find({s_next & ~(1u << (j - 1)), i1, j});
    if (it == side_index.end()) {
      throw std::runtime_error("side information missing");
    }
    c.member_syms.push_back(it->second);
  }
  return c;
}

int combo_horizon(const RunState& st, const ComboBuild& c) {
  int h = 0;
  for (int id : c.member_syms) {
    h = std::max(h, st.syms[id].constructed_after_slot);
  }
  return h;
}

}  // namespace

namespace {

LComplex alpha_value(const RunState& st, const ComboBuild& c, int row) {
  LComplex v(0.0L);
  for (std::size_t pos = 0; pos < c.member_syms.size(); ++pos) {
    v += lift(c.alpha(row, static_cast<Eigen::Index>(pos))) *
         st.syms[c.member_syms[pos]].value_l;
  }
  return v;
}

}  // namespace

int build_combo_ic(RunState& st, int m, std::uint32_t s_next, int i1,
                   const SideIndex& side_index) {
  ComboBuild c = gather_combo(m, s_next, i1, side_index, false);
  c.alpha = st.draw_coeff_matrix(m, m);
  const int horizon = combo_horizon(st, c);

  for (int l = 0; l < m - 1; ++l) {
    SymbolSpec spec;
    spec.tx = i1;
    spec.demand = s_next;
    const int id = st.new_symbol(
        spec, combine_ids(st, c.member_syms, c.alpha.row(l).transpose()),
        horizon, alpha_value(st, c, l));
    st.push_pool(s_next, i1, id);
    c.produced.push_back(id);
  }
  SymbolSpec one;
  one.tx = i1;
  one.demand = 1u << (i1 - 1);
  one.knowledge = s_next & ~(1u << (i1 - 1));
  c.one_m_sym = st.new_symbol(
      one, combine_ids(st, c.member_syms, c.alpha.row(m - 1).transpose()),
      horizon, alpha_value(st, c, m - 1));
  st.combos.push_back(std::move(c));
  return static_cast<int>(st.combos.size()) - 1;
}

int build_combo_x(RunState& st, int m, std::uint32_t s_next, int i1,
                  const SideIndex& side_index) {
  ComboBuild c = gather_combo(m, s_next, i1, side_index, true);
  c.alpha = st.draw_coeff_matrix(m, m + 1);
  const int horizon = combo_horizon(st, c);

  for (int l = 0; l < m; ++l) {
    SymbolSpec spec;
    spec.tx = i1;
    spec.demand = s_next;
    const int id = st.new_symbol(
        spec, combine_ids(st, c.member_syms, c.alpha.row(l).transpose()),
        horizon, alpha_value(st, c, l));
    st.push_pool(s_next, i1, id);
    c.produced.push_back(id);
  }
  st.combos.push_back(std::move(c));
  return static_cast<int>(st.combos.size()) - 1;
}

PhaseReport phase1_ic(RunState& st) {
  if (st.kind != ChannelKind::ic) throw std::logic_error("wrong channel kind");
  const int K = st.K;
  if (K < 3) throw std::invalid_argument("IC scheme requires K >= 3");
  const int n = (K - 1) * (K - 1);

  Phase1Round r;
  r.first_slot = st.chan.current_slot() + 1;
  r.n_slots = n + 1;
  r.fresh.resize(static_cast<std::size_t>(K));
  r.c.resize(static_cast<std::size_t>(K));
  for (int tx = 1; tx <= K; ++tx) {
    auto forms = st.reg.fresh_block(tx, n, st.data_rng);
    for (LinearForm& f : forms) {
      SymbolSpec spec;
      spec.tx = tx;
      spec.demand = 1u << (tx - 1);
      r.fresh[tx - 1].push_back(st.new_symbol(spec, std::move(f), 0));
    }
    r.c[tx - 1] = st.draw_coeff_matrix(n + 1, n);
  }

  r.y = LMatrix(K, n + 1);
  for (int t = 0; t <= n; ++t) {
    const CMatrix& h = st.chan.draw_slot();
    for (int j = 0; j < K; ++j) {
      LComplex acc(0.0L);
      for (int i = 1; i <= K; ++i) {
        acc += lift(h(j, i - 1)) *
               transmit_value(st, r.fresh[i - 1], r.c[i - 1], t);
      }
      r.y(j, t) = acc;
    }
  }

  const CsitView view = st.chan.csit_view(st.chan.current_slot() + 1);
  const int horizon = st.chan.current_slot();
  r.omega.assign(static_cast<std::size_t>(K),
                 std::vector<LVector>(static_cast<std::size_t>(K)));
  for (int j = 1; j <= K; ++j) {
    for (int i = 1; i <= K; ++i) {
      if (i == j) continue;
      LMatrix q(n + 1, n);
      for (int t = 0; t <= n; ++t) {
        const LComplex h = lift(view.slot(r.first_slot + t)(j - 1, i - 1));
        for (int s = 0; s < n; ++s) q(t, s) = h * lift(r.c[i - 1](t, s));
      }
      r.omega[j - 1][i - 1] = left_null_vector_l(q, st.cfg.rank_rel_tol);
    }
  }

  // The projection of receiver j's round along omega_{j,i} kills tx i and
  // keeps tx j clean; every third transmitter i' leaks through as a fixed
  // functional of its own fresh block. Those leaks are the order-2 symbols:
  // known at j, useful to both i' and j.
  long long order2_count = 0;
  for (int j = 1; j <= K; ++j) {
    for (int i = 1; i <= K; ++i) {
      if (i == j) continue;
      const LVector& w = r.omega[j - 1][i - 1];
      for (int ip = 1; ip <= K; ++ip) {
        if (ip == j || ip == i) continue;
        CVector coef(n);
        LComplex val(0.0L);
        for (int s = 0; s < n; ++s) {
          LComplex acc(0.0L);
          for (int t = 0; t <= n; ++t) {
            acc += lift(view.slot(r.first_slot + t)(j - 1, ip - 1)) *
                   lift(r.c[ip - 1](t, s)) * w(t);
          }
          coef(s) = lower(acc);
          val += acc *
                 st.syms[r.fresh[ip - 1][static_cast<std::size_t>(s)]].value_l;
        }
        SymbolSpec spec;
        spec.tx = ip;
        spec.demand = (1u << (ip - 1)) | (1u << (j - 1));
        const int id =
            st.new_symbol(spec, combine_ids(st, r.fresh[ip - 1], coef),
                          horizon, val);
        st.push_pool(spec.demand, ip, id);
        r.order2[{j, i, ip}] = id;
        ++order2_count;
      }
    }
  }

  PhaseReport rep;
  rep.name = "1";
  rep.m = 1;
  rep.first_slot = r.first_slot;
  rep.last_slot = st.chan.current_slot();
  rep.symbols_consumed = static_cast<long long>(K) * n;
  rep.next_order_generated = order2_count;
  st.p1_rounds.push_back(std::move(r));
  st.phases.push_back(rep);
  return rep;
}

PhaseReport phase_mI_ic(RunState& st, int m) {
  if (st.kind != ChannelKind::ic) throw std::logic_error("wrong channel kind");
  const int K = st.K;
  if (m < 2 || m > K - 1) throw std::invalid_argument("index out of range");

  PhaseReport rep;
  rep.name = std::to_string(m) + "-I";
  rep.m = m;
  rep.first_slot = st.chan.current_slot() + 1;

  SideIndex side_index;
  for (std::uint32_t set : subsets_of_size(K, m)) {
    const std::vector<int> mem = mask_members(set);
    for (int idx = 0; idx < m; ++idx) {
      const int i1 = mem[static_cast<std::size_t>(idx)];
      const int i2 = mem[static_cast<std::size_t>((idx + 1) % m)];
      run_pair_block(st, m, set, i1, i2, &side_index);
      rep.symbols_consumed += 2 * (K - m) + 1;
    }
  }
  for (std::uint32_t s_next : subsets_of_size(K, m + 1)) {
    std::vector<int> one_set;
    for (int i1 : mask_members(s_next)) {
      const int ci = build_combo_ic(st, m, s_next, i1, side_index);
      rep.next_order_generated += m - 1;
      rep.one_m_generated += 1;
      one_set.push_back(st.combos[ci].one_m_sym);
    }
    st.pending_sets[s_next].push_back(std::move(one_set));
  }

  rep.last_slot = st.chan.current_slot();
  st.phases.push_back(rep);
  return rep;
}

PhaseReport phase_mII_ic(RunState& st, int m) {
  if (st.kind != ChannelKind::ic) throw std::logic_error("wrong channel kind");
  const int K = st.K;
  if (m < 3 || m > K) throw std::invalid_argument("index out of range");

  PhaseReport rep;
  rep.name = std::to_string(m) + "-II";
  rep.m = m;
  rep.first_slot = st.chan.current_slot() + 1;

  for (std::uint32_t set : subsets_of_size(K, m)) {
    auto it = st.pending_sets.find(set);
    if (it == st.pending_sets.end()) continue;
    auto& queue = it->second;
    while (!queue.empty()) {
      std::vector<int> ids = std::move(queue.front());
      queue.pop_front();
      const std::vector<int> mem = mask_members(set);
      if (ids.size() != mem.size()) {
        throw std::runtime_error("side information missing");
      }
      SimulRecord rec;
      rec.set_mask = set;
      rec.slot = st.chan.current_slot() + 1;
      const CMatrix& h = st.chan.draw_slot();
      rec.y = LVector::Zero(K);
      for (std::size_t p = 0; p < mem.size(); ++p) {
        const int tx = mem[p];
        const int id = ids[p];
        if (st.syms[id].spec.tx != tx) {
          throw std::runtime_error("side information missing");
        }
        rec.txs.push_back(tx);
        rec.syms.push_back(id);
        for (int j = 0; j < K; ++j) {
          rec.y(j) += lift(h(j, tx - 1)) * st.syms[id].value_l;
        }
      }
      const int rec_idx = static_cast<int>(st.simul.size());
      for (int id : rec.syms) st.one_m_slot[id] = rec_idx;
      st.simul.push_back(std::move(rec));
      rep.symbols_consumed += static_cast<long long>(mem.size());
    }
  }

  rep.last_slot = st.chan.current_slot();
  st.phases.push_back(rep);
  return rep;
}

PhaseReport phase_m_x(RunState& st, int m) {
  if (st.kind != ChannelKind::x) throw std::logic_error("wrong channel kind");
  const int K = st.K;
  if (m < 1 || m > K - 1) throw std::invalid_argument("index out of range");

  PhaseReport rep;
  rep.name = std::to_string(m);
  rep.m = m;
  rep.first_slot = st.chan.current_slot() + 1;

  SideIndex side_index;
  for (const auto& [i1, i2] : {std::pair{1, 2}, std::pair{2, 1}}) {
    for (std::uint32_t set : subsets_of_size(K, m)) {
      run_pair_block(st, m, set, i1, i2, &side_index);
      rep.symbols_consumed += 2 * (K - m) + 1;
    }
    for (std::uint32_t s_next : subsets_of_size(K, m + 1)) {
      build_combo_x(st, m, s_next, i1, side_index);
      rep.next_order_generated += m;
    }
  }

  rep.last_slot = st.chan.current_slot();
  st.phases.push_back(rep);
  return rep;
}

PhaseReport phase_tdma(RunState& st) {
  const int K = st.K;
  const std::uint32_t full = full_mask(K);

  PhaseReport rep;
  rep.name = std::to_string(K) + "-tdma";
  rep.m = K;
  rep.first_slot = st.chan.current_slot() + 1;

  for (int tx = 1; tx <= st.n_tx(); ++tx) {
    auto it = st.pools.find({full, tx});
    if (it == st.pools.end()) continue;
    auto& q = it->second;
    while (!q.empty()) {
      const int id = q.front();
      q.pop_front();
      TdmaRecord rec;
      rec.slot = st.chan.current_slot() + 1;
      rec.tx = tx;
      rec.sym = id;
      const CMatrix& h = st.chan.draw_slot();
      rec.y = LVector(K);
      for (int j = 0; j < K; ++j) {
        rec.y(j) = lift(h(j, tx - 1)) * st.syms[id].value_l;
      }
      st.tdma.push_back(std::move(rec));
      rep.symbols_consumed += 1;
    }
  }

  rep.last_slot = st.chan.current_slot();
  st.phases.push_back(rep);
  return rep;
}

void audit_causality(const RunState& st) {
  auto check = [&st](int sym_id, int slot) {
    if (st.syms[sym_id].constructed_after_slot >= slot) {
      throw std::logic_error("future CSIT requested");
    }
  };
  for (const PairBlock& b : st.blocks) {
    for (int id : b.lead_syms) check(id, b.first_slot);
    for (int id : b.trail_syms) check(id, b.first_slot);
  }
  for (const SimulRecord& rec : st.simul) {
    for (int id : rec.syms) check(id, rec.slot);
  }
  for (const TdmaRecord& rec : st.tdma) check(rec.sym, rec.slot);
  for (const Phase1Round& r : st.p1_rounds) {
    for (const auto& ids : r.fresh) {
      for (int id : ids) check(id, r.first_slot);
    }
  }
}

}  // namespace dcsit
