#include "dcsit/receiver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace dcsit {

void EquationBank::add_row(LinearForm form, Complex observed, std::string tag,
                           int slot) {
  rows_.push_back(EquationRow{std::move(form), observed, std::move(tag), slot});
}

void EquationBank::check_consistency(const GroundRegistry& reg,
                                     double tol) const {
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    const EquationRow& row = rows_[r];
    const Complex ev = reg.evaluate(row.form);
    const double denom = std::max(1.0, std::abs(ev));
    if (std::abs(row.observed - ev) > tol * denom) {
      std::ostringstream os;
      os << "bank inconsistent: rx=" << rx_ << " row=" << r
         << " tag=" << row.tag << " slot=" << row.slot
         << " delta=" << std::abs(row.observed - ev);
      throw std::runtime_error(os.str());
    }
  }
}

std::map<std::int32_t, Complex> decode(const EquationBank& bank,
                                       const std::vector<std::int32_t>& targets,
                                       double rel_tol) {
  const int n = static_cast<int>(targets.size());
  if (n == 0) throw std::invalid_argument("degenerate dimensions");
  if (static_cast<int>(bank.rows().size()) < n) {
    throw std::runtime_error("undecodable at tolerance: too few equations");
  }
  std::map<std::int32_t, int> col;
  for (int c = 0; c < n; ++c) col[targets[static_cast<std::size_t>(c)]] = c;
  CMatrix a = CMatrix::Zero(n, n);
  CVector rhs(n);
  for (int r = 0; r < n; ++r) {
    const EquationRow& row = bank.rows()[static_cast<std::size_t>(r)];
    for (const auto& [idx, cf] : row.form.terms()) {
      const auto it = col.find(idx);
      if (it == col.end()) throw std::runtime_error("wrong bank contents");
      a(r, it->second) = cf;
    }
    rhs(r) = row.observed;
  }
  CVector x;
  try {
    x = solve(a, rhs, rel_tol);
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(std::string("undecodable at tolerance: ") +
                             e.what());
  }
  std::map<std::int32_t, Complex> out;
  for (int c = 0; c < n; ++c) out[targets[static_cast<std::size_t>(c)]] = x(c);
  return out;
}

CMatrix build_p_matrix(const EquationBank& bank, int K) {
  const int n = (K - 1) * (K - 1);
  if (static_cast<int>(bank.rows().size()) != n) {
    throw std::invalid_argument("degenerate dimensions");
  }
  std::map<std::int32_t, int> coord;
  int owner = 0;
  for (const EquationRow& row : bank.rows()) {
    if (row.form.owner() < 1) throw std::runtime_error("wrong bank contents");
    if (owner == 0) owner = row.form.owner();
    if (owner != row.form.owner()) {
      throw std::runtime_error("wrong bank contents");
    }
    for (const auto& [idx, cf] : row.form.terms()) coord.emplace(idx, 0);
  }
  if (static_cast<int>(coord.size()) != n) {
    throw std::runtime_error("wrong bank contents");
  }
  int next = 0;
  for (auto& [idx, pos] : coord) pos = next++;
  CMatrix p = CMatrix::Zero(n, n);
  for (int e = 0; e < n; ++e) {
    for (const auto& [idx, cf] : bank.rows()[static_cast<std::size_t>(e)].form.terms()) {
      p(coord[idx], e) = cf;
    }
  }
  return p;
}

namespace {

// The decode cascade runs at the same extended precision the engine carries
// on the value plane. Errors compound by roughly the local condition number
// at every level of the cascade, so the double-precision floor is too high
// for the deepest schedules. Published matrix builders stay on double.
template <typename Mat>
Mat g_matrix_of(const RunState& st, const PairBlock& b, int rx) {
  using Sc = typename Mat::Scalar;
  if (!mask_has(b.set_mask, rx)) {
    throw std::invalid_argument("index out of range");
  }
  const int n_lead = static_cast<int>(b.lead_syms.size());
  const int n_trail = static_cast<int>(b.trail_syms.size());
  const int n = n_lead + n_trail;
  Mat g = Mat::Zero(n, n);
  for (int t = 0; t < b.n_slots; ++t) {
    const CMatrix& h = st.chan.slot(b.first_slot + t);
    const Sc h1 = Sc(h(rx - 1, b.i1 - 1));
    const Sc h2 = Sc(h(rx - 1, b.i2 - 1));
    for (int s = 0; s < n_lead; ++s) g(s, t) = h1 * Sc(b.c_lead(t, s));
    for (int s = 0; s < n_trail; ++s) {
      g(n_lead + s, t) = h2 * Sc(b.c_trail(t, s));
    }
  }
  for (std::size_t pos = 0; pos < b.outsiders.size(); ++pos) {
    const int jp = b.outsiders[pos];
    const LVector& w = b.omega[pos];
    for (int s = 0; s < n_lead; ++s) {
      Sc acc(0.0);
      for (int t = 0; t < b.n_slots; ++t) {
        acc += Sc(st.chan.slot(b.first_slot + t)(jp - 1, b.i1 - 1)) *
               Sc(b.c_lead(t, s)) * Sc(w(t));
      }
      g(s, n_lead + static_cast<int>(pos)) = acc;
    }
  }
  return g;
}

}  // namespace

CMatrix build_g_matrix(const RunState& st, const PairBlock& b, int rx) {
  return g_matrix_of<CMatrix>(st, b, rx);
}

namespace {

struct CascadeCtx {
  const RunState& st;
  ValueTableT<LComplex> vt;
  DecodeReport& rep;
  std::vector<EquationBank>* banks;

  CascadeCtx(const RunState& s, DecodeReport& r, std::vector<EquationBank>* b)
      : st(s), vt(s.syms.size(), s.K), rep(r), banks(b) {}

  void note(double sigma) {
    ++rep.systems_solved;
    rep.min_singular = std::min(rep.min_singular, sigma);
  }

  void bank_row(int rx, LinearForm form, Complex observed, const char* tag,
                int slot) {
    if (banks != nullptr) {
      (*banks)[static_cast<std::size_t>(rx - 1)].add_row(std::move(form),
                                                         observed, tag, slot);
    }
  }

  LVector solve_tracked(const LMatrix& a, const LVector& rhs) {
    Eigen::JacobiSVD<LMatrix> svd(a,
                                  Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& s = svd.singularValues();
    const LReal smax = s(0);
    const LReal smin = s(s.size() - 1);
    note(static_cast<double>(smin));
    if (smax == 0.0L ||
        smin <= static_cast<LReal>(st.cfg.rank_rel_tol) * smax) {
      CMatrix fp(a.rows(), a.cols());
      for (Eigen::Index c = 0; c < a.cols(); ++c) {
        for (Eigen::Index r = 0; r < a.rows(); ++r) fp(r, c) = lower(a(r, c));
      }
      throw std::runtime_error("singular system " + matrix_fingerprint(fp));
    }
    return svd.solve(rhs);
  }
};

void seed_side_values(CascadeCtx& cx) {
  for (const PairBlock& b : cx.st.blocks) {
    for (std::size_t pos = 0; pos < b.outsiders.size(); ++pos) {
      const int jp = b.outsiders[pos];
      LComplex v(0.0L);
      for (int t = 0; t < b.n_slots; ++t) {
        v += b.y(jp - 1, t) * b.omega[pos](t);
      }
      cx.vt.set(b.side_syms[pos], jp, v);
      // The null projection cancels the trailing transmitter, so the side
      // symbol's own form equals this combination of raw observations.
      cx.bank_row(jp, cx.st.syms[b.side_syms[pos]].form, lower(v), "side",
                  b.first_slot);
    }
  }
}

void decode_broadcast(CascadeCtx& cx) {
  const int K = cx.st.K;
  for (const TdmaRecord& rec : cx.st.tdma) {
    const CMatrix& h = cx.st.chan.slot(rec.slot);
    for (int j = 1; j <= K; ++j) {
      const Complex hj = h(j - 1, rec.tx - 1);
      cx.vt.set(rec.sym, j, rec.y(j - 1) / lift(hj));
      LinearForm f;
      f.add_scaled(cx.st.syms[rec.sym].form, hj);
      cx.bank_row(j, std::move(f), lower(rec.y(j - 1)), "bcast", rec.slot);
    }
  }
  for (const SimulRecord& rec : cx.st.simul) {
    const CMatrix& h = cx.st.chan.slot(rec.slot);
    for (int j = 1; j <= K; ++j) {
      LinearForm f;
      for (std::size_t p = 0; p < rec.syms.size(); ++p) {
        f.add_scaled(cx.st.syms[rec.syms[p]].form, h(j - 1, rec.txs[p] - 1));
      }
      cx.bank_row(j, std::move(f), lower(rec.y(j - 1)), "shared-slot",
                  rec.slot);
    }
  }
}

void solve_combo_members_ic(CascadeCtx& cx, const ComboBuild& c) {
  const int m = c.m;
  for (std::size_t pj = 0; pj < c.members_j.size(); ++pj) {
    const int j = c.members_j[pj];
    LMatrix a = LMatrix::Zero(m, m);
    LVector rhs(m);
    a(0, static_cast<int>(pj)) = LComplex(1.0L);
    rhs(0) = cx.vt.get(c.member_syms[pj], j);
    for (int l = 0; l < m - 1; ++l) {
      a.row(l + 1) = c.alpha.row(l).cast<LComplex>();
      rhs(l + 1) = cx.vt.get(c.produced[static_cast<std::size_t>(l)], j);
    }
    const LVector x = cx.solve_tracked(a, rhs);
    for (std::size_t pos = 0; pos < c.member_syms.size(); ++pos) {
      cx.vt.set(c.member_syms[pos], j, x(static_cast<Eigen::Index>(pos)));
    }
    LComplex one(0.0L);
    for (int pos = 0; pos < m; ++pos) one += lift(c.alpha(m - 1, pos)) * x(pos);
    cx.vt.set(c.one_m_sym, j, one);
  }
}

void solve_combo_owner_ic(CascadeCtx& cx, const ComboBuild& c) {
  const int m = c.m;
  const int i1 = c.i1;
  const auto it = cx.st.one_m_slot.find(c.one_m_sym);
  if (it == cx.st.one_m_slot.end()) {
    throw std::runtime_error("side information missing");
  }
  const SimulRecord& rec = cx.st.simul[static_cast<std::size_t>(it->second)];
  const CMatrix& h = cx.st.chan.slot(rec.slot);
  LComplex residual = rec.y(i1 - 1);
  LComplex h_own(0.0L);
  for (std::size_t p = 0; p < rec.syms.size(); ++p) {
    const LComplex hj = lift(h(i1 - 1, rec.txs[p] - 1));
    if (rec.syms[p] == c.one_m_sym) {
      h_own = hj;
    } else {
      residual -= hj * cx.vt.get(rec.syms[p], i1);
    }
  }
  const LComplex v_one = residual / h_own;
  cx.vt.set(c.one_m_sym, i1, v_one);

  LMatrix a(m, m);
  LVector rhs(m);
  for (int l = 0; l < m - 1; ++l) {
    a.row(l) = c.alpha.row(l).cast<LComplex>();
    rhs(l) = cx.vt.get(c.produced[static_cast<std::size_t>(l)], i1);
  }
  a.row(m - 1) = c.alpha.row(m - 1).cast<LComplex>();
  rhs(m - 1) = v_one;
  const LVector x = cx.solve_tracked(a, rhs);
  for (std::size_t pos = 0; pos < c.member_syms.size(); ++pos) {
    cx.vt.set(c.member_syms[pos], i1, x(static_cast<Eigen::Index>(pos)));
  }
}

void solve_combo_x(CascadeCtx& cx, const ComboBuild& c) {
  const int m = c.m;
  for (std::size_t pj = 0; pj < c.members_j.size(); ++pj) {
    const int j = c.members_j[pj];
    LMatrix a = LMatrix::Zero(m + 1, m + 1);
    LVector rhs(m + 1);
    a(0, static_cast<int>(pj)) = LComplex(1.0L);
    rhs(0) = cx.vt.get(c.member_syms[pj], j);
    for (int l = 0; l < m; ++l) {
      a.row(l + 1) = c.alpha.row(l).cast<LComplex>();
      rhs(l + 1) = cx.vt.get(c.produced[static_cast<std::size_t>(l)], j);
    }
    const LVector x = cx.solve_tracked(a, rhs);
    for (std::size_t pos = 0; pos < c.member_syms.size(); ++pos) {
      cx.vt.set(c.member_syms[pos], j, x(static_cast<Eigen::Index>(pos)));
    }
  }
}

void open_block(CascadeCtx& cx, const PairBlock& b) {
  const int n_lead = static_cast<int>(b.lead_syms.size());
  const int n = n_lead + static_cast<int>(b.trail_syms.size());
  for (int j : mask_members(b.set_mask)) {
    const LMatrix g = g_matrix_of<LMatrix>(cx.st, b, j);
    LVector rhs(n);
    for (int t = 0; t < b.n_slots; ++t) rhs(t) = b.y(j - 1, t);
    for (std::size_t pos = 0; pos < b.side_syms.size(); ++pos) {
      rhs(b.n_slots + static_cast<int>(pos)) =
          cx.vt.get(b.side_syms[pos], j);
    }
    const LVector x = cx.solve_tracked(g.transpose(), rhs);
    for (int s = 0; s < n_lead; ++s) {
      cx.vt.set(b.lead_syms[static_cast<std::size_t>(s)], j, x(s));
    }
    for (int s = n_lead; s < n; ++s) {
      cx.vt.set(b.trail_syms[static_cast<std::size_t>(s - n_lead)], j, x(s));
    }
    if (cx.banks != nullptr) {
      for (int t = 0; t < b.n_slots; ++t) {
        const CMatrix& h = cx.st.chan.slot(b.first_slot + t);
        LinearForm f;
        for (int s = 0; s < n_lead; ++s) {
          f.add_scaled(cx.st.syms[b.lead_syms[static_cast<std::size_t>(s)]].form,
                       h(j - 1, b.i1 - 1) * b.c_lead(t, s));
        }
        for (std::size_t s = 0; s < b.trail_syms.size(); ++s) {
          f.add_scaled(cx.st.syms[b.trail_syms[s]].form,
                       h(j - 1, b.i2 - 1) * b.c_trail(t, static_cast<Eigen::Index>(s)));
        }
        cx.bank_row(j, std::move(f), lower(b.y(j - 1, t)), "block",
                    b.first_slot + t);
      }
    }
  }
}

void decode_round(CascadeCtx& cx, const Phase1Round& r) {
  const int K = cx.st.K;
  const int n = (K - 1) * (K - 1);
  for (int j = 1; j <= K; ++j) {
    const auto& ids = r.fresh[static_cast<std::size_t>(j - 1)];
    std::vector<const LinearForm*> own_forms;
    own_forms.reserve(static_cast<std::size_t>(n));
    for (int id : ids) own_forms.push_back(&cx.st.syms[id].form);

    // Columns follow ascending ground coordinates of this round's fresh
    // block, matching the convention of the published equation-bank path.
    std::vector<std::int32_t> coords(static_cast<std::size_t>(n));
    std::map<std::int32_t, int> cmap;
    for (int s = 0; s < n; ++s) {
      const LinearForm& f = *own_forms[static_cast<std::size_t>(s)];
      if (f.terms().size() != 1) throw std::runtime_error("empty fresh block");
      coords[static_cast<std::size_t>(s)] = f.terms()[0].first;
      cmap.emplace(f.terms()[0].first, 0);
    }
    if (static_cast<int>(cmap.size()) != n) {
      throw std::runtime_error("wrong bank contents");
    }
    int next = 0;
    for (auto& [idx, pos] : cmap) pos = next++;

    LMatrix a = LMatrix::Zero(n, n);
    LVector rhs(n);
    int e = 0;
    std::vector<LComplex> accs(static_cast<std::size_t>(n));
    for (int i = 1; i <= K; ++i) {
      if (i == j) continue;
      const LVector& w = r.omega[static_cast<std::size_t>(j - 1)]
                                [static_cast<std::size_t>(i - 1)];
      LComplex raw(0.0L);
      for (int t = 0; t <= n; ++t) raw += r.y(j - 1, t) * w(t);
      LComplex proj = raw;
      for (int ip = 1; ip <= K; ++ip) {
        if (ip == j || ip == i) continue;
        proj -= cx.vt.get(r.order2.at({j, i, ip}), j);
      }
      for (int s = 0; s < n; ++s) {
        LComplex acc(0.0L);
        for (int t = 0; t <= n; ++t) {
          acc += lift(cx.st.chan.slot(r.first_slot + t)(j - 1, j - 1)) *
                 lift(r.c[static_cast<std::size_t>(j - 1)](t, s)) * w(t);
        }
        accs[static_cast<std::size_t>(s)] = acc;
        a(e, cmap[coords[static_cast<std::size_t>(s)]]) = acc;
      }
      rhs(e) = proj;
      ++e;
      if (cx.banks != nullptr) {
        // Unreduced identity: the projection equals its own-block functional
        // plus the nulled directions' second-order symbols, exactly.
        CVector coef(n);
        for (int s = 0; s < n; ++s) {
          coef(s) = lower(accs[static_cast<std::size_t>(s)]);
        }
        LinearForm full = combine(own_forms, coef);
        for (int ip = 1; ip <= K; ++ip) {
          if (ip == j || ip == i) continue;
          full.add_scaled(
              cx.st.syms[static_cast<std::size_t>(r.order2.at({j, i, ip}))].form,
              Complex(1.0, 0.0));
        }
        cx.bank_row(j, std::move(full), lower(raw), "p1-projection",
                    r.first_slot);
      }
    }
    for (int jp = 1; jp <= K; ++jp) {
      if (jp == j) continue;
      for (int i = 1; i <= K; ++i) {
        if (i == j || i == jp) continue;
        const int id = r.order2.at({jp, i, j});
        for (const auto& [idx, cf] :
             cx.st.syms[static_cast<std::size_t>(id)].form.terms()) {
          const auto itc = cmap.find(idx);
          if (itc == cmap.end()) {
            throw std::runtime_error("wrong bank contents");
          }
          a(e, itc->second) = lift(cf);
        }
        rhs(e) = cx.vt.get(id, j);
        ++e;
      }
    }

    const LVector x = cx.solve_tracked(a, rhs);
    for (int s = 0; s < n; ++s) {
      cx.vt.set(ids[static_cast<std::size_t>(s)], j,
                x(cmap[coords[static_cast<std::size_t>(s)]]));
    }
  }
}

}  // namespace

DecodeReport decode_run(const RunState& st,
                        std::vector<EquationBank>* banks_out) {
  const int K = st.K;
  DecodeReport rep;
  rep.min_singular = std::numeric_limits<double>::infinity();
  rep.per_rx_max_err.assign(static_cast<std::size_t>(K), 0.0);

  std::vector<EquationBank> local_banks;
  std::vector<EquationBank>* banks = nullptr;
  if (banks_out != nullptr) {
    banks_out->clear();
    banks = banks_out;
  } else if (st.cfg.check_banks) {
    banks = &local_banks;
  }
  if (banks != nullptr) {
    for (int j = 1; j <= K; ++j) banks->emplace_back(j);
  }

  CascadeCtx cx(st, rep, banks);
  try {
    seed_side_values(cx);
    decode_broadcast(cx);

    int max_m = 0;
    for (const ComboBuild& c : st.combos) max_m = std::max(max_m, c.m);
    const int min_m = st.kind == ChannelKind::ic ? 2 : 1;
    for (int m = max_m; m >= min_m; --m) {
      for (const ComboBuild& c : st.combos) {
        if (c.m != m) continue;
        if (st.kind == ChannelKind::ic) {
          solve_combo_members_ic(cx, c);
        } else {
          solve_combo_x(cx, c);
        }
      }
      if (st.kind == ChannelKind::ic) {
        for (const ComboBuild& c : st.combos) {
          if (c.m == m) solve_combo_owner_ic(cx, c);
        }
      }
      for (const PairBlock& b : st.blocks) {
        if (b.m == m) open_block(cx, b);
      }
    }

    for (const Phase1Round& r : st.p1_rounds) decode_round(cx, r);

    for (std::size_t id = 0; id < st.syms.size(); ++id) {
      const TrackedSymbol& s = st.syms[id];
      const double scale = std::max(1.0, std::abs(s.value));
      for (int j = 1; j <= K; ++j) {
        if (!cx.vt.knows(static_cast<int>(id), j)) continue;
        const double err = static_cast<double>(std::abs(
                               cx.vt.get(static_cast<int>(id), j) -
                               s.value_l)) /
                           scale;
        auto& worst = rep.per_order_max_err[s.spec.order_m()];
        worst = std::max(worst, err);
      }
    }

    for (std::size_t id = 0; id < st.syms.size(); ++id) {
      const TrackedSymbol& s = st.syms[id];
      if (s.spec.order_m() != 1 || s.spec.order_n() != 0) continue;
      if (s.form.terms().size() != 1 ||
          s.form.terms()[0].second != Complex(1.0, 0.0)) {
        continue;
      }
      const int j = mask_members(s.spec.demand)[0];
      if (!cx.vt.knows(static_cast<int>(id), j)) {
        if (rep.detail.empty()) {
          rep.detail = "not recovered: " + s.spec.label();
        }
        continue;
      }
      const double err =
          std::abs(lower(cx.vt.get(static_cast<int>(id), j)) - s.value) /
          std::abs(s.value);
      ++rep.recovered;
      rep.max_rel_err = std::max(rep.max_rel_err, err);
      auto& slot = rep.per_rx_max_err[static_cast<std::size_t>(j - 1)];
      slot = std::max(slot, err);
      if (err > st.cfg.recovery_tol && rep.detail.empty()) {
        std::ostringstream os;
        os << "recovery tolerance exceeded: " << s.spec.label()
           << " err=" << err;
        rep.detail = os.str();
      }
    }

    if (banks != nullptr && st.cfg.check_banks) {
      for (const EquationBank& b : *banks) {
        b.check_consistency(st.reg, st.cfg.bank_tol);
      }
    }
  } catch (const std::exception& e) {
    if (rep.detail.empty()) rep.detail = e.what();
  }

  rep.pass = rep.detail.empty();
  return rep;
}

}  // namespace dcsit
