#include "dcsit/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "dcsit/analytics.hpp"
#include "dcsit/ic_scheme.hpp"
#include "dcsit/linalg.hpp"
#include "dcsit/receiver.hpp"
#include "dcsit/x_scheme.hpp"

namespace dcsit {

namespace {

// Delivery-matrix row for one null projection of an opening-phase round:
// the projection folds the receiver's own-channel gains, the combining
// matrix, and the null vector into coefficients over that receiver's fresh
// block. Kept separate from the decoder's copy of the same computation so
// the two routes stay independent witnesses.
LinearForm p1_projection_form(const RunState& st, const Phase1Round& r, int j,
                              int i) {
  const int n = static_cast<int>(r.fresh[static_cast<std::size_t>(j - 1)].size());
  std::vector<const LinearForm*> own;
  own.reserve(static_cast<std::size_t>(n));
  for (int id : r.fresh[static_cast<std::size_t>(j - 1)]) {
    own.push_back(&st.syms[static_cast<std::size_t>(id)].form);
  }
  const LVector& w = r.omega[static_cast<std::size_t>(j - 1)]
                            [static_cast<std::size_t>(i - 1)];
  CVector coef(n);
  for (int s = 0; s < n; ++s) {
    Complex acc(0.0, 0.0);
    for (int t = 0; t < r.n_slots; ++t) {
      acc += st.chan.slot(r.first_slot + t)(j - 1, j - 1) *
             r.c[static_cast<std::size_t>(j - 1)](t, s) * lower(w(t));
    }
    coef(s) = acc;
  }
  return combine(own, coef);
}

EquationBank p1_oracle_bank(const RunState& st, const Phase1Round& r, int j,
                            CVector* rhs_out) {
  const int K = st.K;
  const int n = (K - 1) * (K - 1);
  EquationBank bank(j);
  CVector rhs(n);
  int e = 0;
  for (int i = 1; i <= K; ++i) {
    if (i == j) continue;
    const LVector& w = r.omega[static_cast<std::size_t>(j - 1)]
                              [static_cast<std::size_t>(i - 1)];
    LComplex proj_l(0.0L);
    for (int t = 0; t < r.n_slots; ++t) proj_l += r.y(j - 1, t) * w(t);
    Complex proj = lower(proj_l);
    for (int ip = 1; ip <= K; ++ip) {
      if (ip == j || ip == i) continue;
      proj -= st.syms[static_cast<std::size_t>(r.order2.at({j, i, ip}))].value;
    }
    bank.add_row(p1_projection_form(st, r, j, i), proj, "p1-projection",
                 r.first_slot);
    rhs(e++) = proj;
  }
  for (int jp = 1; jp <= K; ++jp) {
    if (jp == j) continue;
    for (int i = 1; i <= K; ++i) {
      if (i == j || i == jp) continue;
      const int id = r.order2.at({jp, i, j});
      const TrackedSymbol& s = st.syms[static_cast<std::size_t>(id)];
      bank.add_row(s.form, s.value, "p1-delivered", r.first_slot);
      rhs(e++) = s.value;
    }
  }
  if (rhs_out != nullptr) *rhs_out = rhs;
  return bank;
}

void oracle_open_block(const RunState& st, const PairBlock& b,
                       PhaseSweepResult& out) {
  const int n_lead = static_cast<int>(b.lead_syms.size());
  const int n = n_lead + static_cast<int>(b.trail_syms.size());
  for (std::size_t pos = 0; pos < b.outsiders.size(); ++pos) {
    const int jp = b.outsiders[pos];
    LComplex seeded(0.0L);
    for (int t = 0; t < b.n_slots; ++t) seeded += b.y(jp - 1, t) * b.omega[pos](t);
    const Complex truth = st.syms[static_cast<std::size_t>(b.side_syms[pos])].value;
    const double err =
        std::abs(lower(seeded) - truth) / std::max(1.0, std::abs(truth));
    out.max_rel_err = std::max(out.max_rel_err, err);
  }
  for (int j : mask_members(b.set_mask)) {
    CMatrix g;
    try {
      g = build_g_matrix(st, b, j);
      CVector rhs(n);
      for (int t = 0; t < b.n_slots; ++t) rhs(t) = lower(b.y(j - 1, t));
      for (std::size_t pos = 0; pos < b.side_syms.size(); ++pos) {
        rhs(b.n_slots + static_cast<int>(pos)) =
            st.syms[static_cast<std::size_t>(b.side_syms[pos])].value;
      }
      double sigma = 0.0;
      const CVector x = solve(g.transpose(), rhs, kRankRelTol, &sigma);
      out.min_singular = std::min(out.min_singular, sigma);
      for (int s = 0; s < n; ++s) {
        const int id = s < n_lead
                           ? b.lead_syms[static_cast<std::size_t>(s)]
                           : b.trail_syms[static_cast<std::size_t>(s - n_lead)];
        const Complex truth = st.syms[static_cast<std::size_t>(id)].value;
        const double err = std::abs(x(s) - truth) / std::abs(truth);
        out.max_rel_err = std::max(out.max_rel_err, err);
      }
    } catch (const std::runtime_error&) {
      ++out.rank_failures;
    }
  }
}

PhaseSweepResult finish_sweep(const RunState& st, const PhaseReport& rep,
                              ChannelKind kind, int K, int m) {
  PhaseSweepResult out;
  out.kind = kind;
  out.K = K;
  out.m = m;
  out.symbols_consumed = rep.symbols_consumed;
  out.slots = rep.last_slot - rep.first_slot + 1;
  out.next_order_generated = rep.next_order_generated;
  out.one_m_generated = rep.one_m_generated;
  out.min_singular = std::numeric_limits<double>::infinity();

  const PhaseCounts want = phase_counts(kind, K, m);
  out.counts_ok = out.symbols_consumed == want.n_consumed &&
                  out.slots == want.t_slots &&
                  out.next_order_generated == want.n_next &&
                  out.one_m_generated == want.n_one_m;

  if (kind == ChannelKind::ic && m == 1) {
    for (const Phase1Round& r : st.p1_rounds) {
      for (int j = 1; j <= K; ++j) {
        try {
          CVector rhs;
          const EquationBank bank = p1_oracle_bank(st, r, j, &rhs);
          const CMatrix p = build_p_matrix(bank, K);
          double sigma = 0.0;
          const CVector x = solve(p.transpose(), rhs, kRankRelTol, &sigma);
          out.min_singular = std::min(out.min_singular, sigma);
          const auto& ids = r.fresh[static_cast<std::size_t>(j - 1)];
          for (int s = 0; s < static_cast<int>(ids.size()); ++s) {
            const Complex truth =
                st.syms[static_cast<std::size_t>(ids[static_cast<std::size_t>(s)])].value;
            const double err = std::abs(x(s) - truth) / std::abs(truth);
            out.max_rel_err = std::max(out.max_rel_err, err);
          }
        } catch (const std::runtime_error&) {
          ++out.rank_failures;
        }
      }
    }
  } else {
    for (const PairBlock& b : st.blocks) oracle_open_block(st, b, out);
  }
  return out;
}

}  // namespace

PhaseSweepResult sweep_phase_ic(int K, int m, std::uint64_t seed) {
  if (K < 3 || m < 1 || m > K - 1) {
    throw std::invalid_argument("index out of range");
  }
  RunConfig cfg;
  RunState st(ChannelKind::ic, K, seed, cfg);
  PhaseReport rep;
  if (m == 1) {
    rep = phase1_ic(st);
  } else {
    for (std::uint32_t mask : subsets_of_size(K, m)) {
      for (int i : mask_members(mask)) {
        seed_pool_with_fresh(st, mask, i, 2 * (K - m) + 1);
      }
    }
    rep = phase_mI_ic(st, m);
  }
  return finish_sweep(st, rep, ChannelKind::ic, K, m);
}

PhaseSweepResult sweep_phase_x(int K, int m, std::uint64_t seed) {
  if (K < 2 || m < 1 || m > K - 1) {
    throw std::invalid_argument("index out of range");
  }
  RunConfig cfg;
  RunState st(ChannelKind::x, K, seed, cfg);
  for (std::uint32_t mask : subsets_of_size(K, m)) {
    for (int tx = 1; tx <= 2; ++tx) {
      seed_pool_with_fresh(st, mask, tx, 2 * (K - m) + 1);
    }
  }
  const PhaseReport rep = phase_m_x(st, m);
  return finish_sweep(st, rep, ChannelKind::x, K, m);
}

namespace {

// Criterion shared by every genericity sweep: smallest singular value must
// clear 1e-8 of the Frobenius norm.
void score_matrix(const CMatrix& m, GenericityResult& out) {
  const double sig = min_singular_value(m);
  out.min_singular = std::min(out.min_singular, sig);
  if (!(sig > 1e-8 * m.norm())) {
    ++out.failures;
    if (out.worst_fingerprint.empty()) {
      out.worst_fingerprint = matrix_fingerprint(m);
    }
  }
}

}  // namespace

GenericityResult sweep_p_genericity(int K, int trials, std::uint64_t seed,
                                    bool inject_duplicate_column) {
  GenericityResult out;
  out.trials = trials;
  out.min_singular = std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    RunConfig cfg;
    RunState st(ChannelKind::ic, K, seed + static_cast<std::uint64_t>(t), cfg);
    phase1_ic(st);
    const Phase1Round& r = st.p1_rounds.back();
    for (int j = 1; j <= K; ++j) {
      const EquationBank bank = p1_oracle_bank(st, r, j, nullptr);
      CMatrix p = build_p_matrix(bank, K);
      if (inject_duplicate_column && j == 1) p.col(1) = p.col(0);
      score_matrix(p, out);
    }
  }
  return out;
}

GenericityResult sweep_g_genericity(int K, int m, int trials,
                                    std::uint64_t seed) {
  if (K < 3 || m < 2 || m > K - 1) {
    throw std::invalid_argument("index out of range");
  }
  GenericityResult out;
  out.trials = trials;
  out.min_singular = std::numeric_limits<double>::infinity();
  const std::uint32_t mask = full_mask(m);
  for (int t = 0; t < trials; ++t) {
    RunConfig cfg;
    RunState st(ChannelKind::ic, K, seed + static_cast<std::uint64_t>(t), cfg);
    seed_pool_with_fresh(st, mask, 1, K - m + 1);
    seed_pool_with_fresh(st, mask, 2, K - m);
    SideIndex side;
    const int bi = run_pair_block(st, m, mask, 1, 2, &side);
    const PairBlock& b = st.blocks[static_cast<std::size_t>(bi)];
    for (int j : mask_members(mask)) {
      score_matrix(build_g_matrix(st, b, j), out);
    }
  }
  return out;
}

GenericityResult sweep_product_genericity(int trials, std::uint64_t seed) {
  GenericityResult out;
  out.trials = trials;
  out.min_singular = std::numeric_limits<double>::infinity();
  Rng rng(seed, 77);
  for (int t = 0; t < trials; ++t) {
    const int n = 2 + t % 11;
    CMatrix c(n + 1, n);
    for (int r = 0; r < n + 1; ++r) {
      for (int col = 0; col < n; ++col) c(r, col) = rng.cn01();
    }
    CMatrix q(n + 1, n);
    for (int r = 0; r < n + 1; ++r) q.row(r) = rng.cn01() * c.row(r);
    score_matrix(q, out);
  }
  return out;
}

GenericityResult sweep_bordered_genericity(int trials, std::uint64_t seed) {
  GenericityResult out;
  out.trials = trials;
  out.min_singular = std::numeric_limits<double>::infinity();
  Rng rng(seed, 78);
  for (int t = 0; t < trials; ++t) {
    const int n = 1 + t % 8;
    CMatrix b = CMatrix::Zero(n + 1, n + 1);
    for (int r = 0; r < n; ++r) {
      for (int col = 0; col < n; ++col) b(r, col) = rng.cn01();
    }
    for (int r = 0; r < n; ++r) b(r, n) = rng.cn01();
    for (int col = 0; col < n; ++col) b(n, col) = rng.cn01();
    score_matrix(b, out);
  }
  return out;
}

namespace {

std::string sweep_detail(const PhaseSweepResult& r) {
  std::ostringstream os;
  os << "consumed=" << r.symbols_consumed << " slots=" << r.slots
     << " next=" << r.next_order_generated << " one=" << r.one_m_generated
     << " rank_failures=" << r.rank_failures << " max_rel_err=" << r.max_rel_err;
  return os.str();
}

std::string rank_detail(const GenericityResult& r) {
  std::ostringstream os;
  os << r.failures << "/" << r.trials
     << " rank failures; min singular = " << r.min_singular;
  if (!r.worst_fingerprint.empty()) {
    os << "; fingerprint " << r.worst_fingerprint;
  }
  return os.str();
}

}  // namespace

std::vector<CheckResult> verify_all(std::uint64_t seed,
                                    bool inject_duplicate_column,
                                    int k_max_counts) {
  std::vector<CheckResult> out;
  const auto add = [&out](std::string name, bool pass, std::string detail) {
    out.push_back(CheckResult{std::move(name), pass, std::move(detail)});
  };
  const int k_counts = std::min(std::max(k_max_counts, 3), 8);

  for (int K = 3; K <= k_counts; ++K) {
    for (int m = 1; m <= K - 1; ++m) {
      const PhaseSweepResult r = sweep_phase_ic(K, m, seed);
      std::ostringstream name;
      name << "counts/ic/K=" << K << "/m=" << m;
      add(name.str(),
          r.counts_ok && r.rank_failures == 0 && r.max_rel_err < 1e-6,
          sweep_detail(r));
    }
  }
  for (int K = 2; K <= k_counts; ++K) {
    for (int m = 1; m <= K - 1; ++m) {
      const PhaseSweepResult r = sweep_phase_x(K, m, seed);
      std::ostringstream name;
      name << "counts/x/K=" << K << "/m=" << m;
      add(name.str(),
          r.counts_ok && r.rank_failures == 0 && r.max_rel_err < 1e-6,
          sweep_detail(r));
    }
  }

  for (int K = 3; K <= 8; ++K) {
    const ScheduleIC sch = schedule_ic(K);
    bool ok = true;
    std::ostringstream detail;
    for (int m = 1; m <= K - 2; ++m) {
      const PhaseCounts here = phase_counts(ChannelKind::ic, K, m);
      const PhaseCounts next = phase_counts(ChannelKind::ic, K, m + 1);
      if (sch.reps[static_cast<std::size_t>(m - 1)] * here.n_next !=
          sch.reps[static_cast<std::size_t>(m)] * next.n_consumed) {
        ok = false;
        detail << "pool balance broken at m=" << m << "; ";
      }
    }
    if (sch.ratio() != dof_ic_closed(K, 1)) {
      ok = false;
      detail << "ratio " << fraction_string(sch.ratio()) << " != dof "
             << fraction_string(dof_ic_closed(K, 1)) << "; ";
    }
    if (ok) {
      detail << "slots=" << sch.total_slots << " data="
             << sch.total_data_symbols << " ratio="
             << fraction_string(sch.ratio());
    }
    std::ostringstream name;
    name << "schedule/ic/K=" << K;
    add(name.str(), ok, detail.str());
  }
  for (int K = 2; K <= 8; ++K) {
    const ScheduleX sch = schedule_x(K);
    bool ok = true;
    std::ostringstream detail;
    for (int m = 1; m <= K - 2; ++m) {
      const PhaseCounts here = phase_counts(ChannelKind::x, K, m);
      const PhaseCounts next = phase_counts(ChannelKind::x, K, m + 1);
      if (sch.reps[static_cast<std::size_t>(m - 1)] * here.n_next !=
          sch.reps[static_cast<std::size_t>(m)] * next.n_consumed) {
        ok = false;
        detail << "pool balance broken at m=" << m << "; ";
      }
    }
    if (sch.ratio() != dof_x_closed(K, 1)) {
      ok = false;
      detail << "ratio " << fraction_string(sch.ratio()) << " != dof "
             << fraction_string(dof_x_closed(K, 1)) << "; ";
    }
    if (ok) {
      detail << "slots=" << sch.total_slots << " data="
             << sch.total_data_symbols << " ratio="
             << fraction_string(sch.ratio());
    }
    std::ostringstream name;
    name << "schedule/x/K=" << K;
    add(name.str(), ok, detail.str());
  }

  {
    bool ok = true;
    std::string detail = "all K <= 64, all m";
    for (int K = 2; K <= 64 && ok; ++K) {
      for (int m = 1; m <= K; ++m) {
        if (dof_ic_closed(K, m) != dof_ic_recursive(K, m)) {
          ok = false;
          std::ostringstream os;
          os << "mismatch at K=" << K << " m=" << m;
          detail = os.str();
          break;
        }
      }
    }
    add("dof/ic/closed=recursive", ok, detail);
  }
  {
    bool ok = true;
    std::string detail = "all K <= 64, all m";
    for (int K = 2; K <= 64 && ok; ++K) {
      for (int m = 1; m <= K; ++m) {
        if (dof_x_closed(K, m) != dof_x_recursive(K, m)) {
          ok = false;
          std::ostringstream os;
          os << "mismatch at K=" << K << " m=" << m;
          detail = os.str();
          break;
        }
      }
    }
    add("dof/x/closed=recursive", ok, detail);
  }
  {
    bool ok = true;
    std::string detail = "a-chain tail equals its series form for K <= 64";
    for (int K = 3; K <= 64; ++K) {
      if (a2_theorem(K) != a_series_sum(K, K - 2)) {
        std::ostringstream os;
        os << "mismatch at K=" << K;
        detail = os.str();
        ok = false;
        break;
      }
    }
    add("series/a-chain-tail", ok, detail);
  }

  for (int K = 2; K <= 10; ++K) {
    const BoundsReport b = bounds_check(K);
    if (b.has_psi) {
      const bool ok = b.psi_lower_rel == Relation::less &&
                      b.psi_upper_rel == Relation::less;
      std::ostringstream name, detail;
      name << "bounds/psi/K=" << K;
      detail << fraction_string(b.psi_lower) << " "
             << relation_name(b.psi_lower_rel) << " "
             << fraction_string(b.psi_value) << " "
             << relation_name(b.psi_upper_rel) << " "
             << fraction_string(b.psi_upper);
      add(name.str(), ok, detail.str());
    }
    const bool ok = b.phi_lower_rel == Relation::less &&
                    b.phi_upper_rel == Relation::less;
    std::ostringstream name, detail;
    name << "bounds/phi/K=" << K;
    detail << fraction_string(b.phi_lower) << " "
           << relation_name(b.phi_lower_rel) << " "
           << fraction_string(b.phi_value) << " "
           << relation_name(b.phi_upper_rel) << " "
           << fraction_string(b.phi_upper);
    add(name.str(), ok, detail.str());
  }

  {
    const LimitValues v = limits();
    const double ln2 = std::log(2.0);
    const double via_psi = 1.0 / (1.0 - (5.0 / 4.0 - 1.5 * ln2));
    const bool ok = std::abs(via_psi - v.ic) <= 1e-12 &&
                    std::abs(1.0 / ln2 - v.x) <= 1e-12;
    std::ostringstream detail;
    detail.precision(15);
    detail << "ic=" << v.ic << " x=" << v.x;
    add("limits/consistency", ok, detail.str());
  }

  {
    const GenericityResult r =
        sweep_p_genericity(3, 40, seed + 1000, inject_duplicate_column);
    add("rank/p/K=3", r.failures == 0, rank_detail(r));
  }
  {
    const GenericityResult r = sweep_p_genericity(4, 10, seed + 2000, false);
    add("rank/p/K=4", r.failures == 0, rank_detail(r));
  }
  {
    const GenericityResult r = sweep_g_genericity(4, 2, 40, seed + 3000);
    add("rank/g/K=4/m=2", r.failures == 0, rank_detail(r));
  }
  {
    const GenericityResult r = sweep_g_genericity(6, 3, 40, seed + 4000);
    add("rank/g/K=6/m=3", r.failures == 0, rank_detail(r));
  }
  {
    const GenericityResult r = sweep_product_genericity(300, seed + 5000);
    add("rank/diagonal-product", r.failures == 0, rank_detail(r));
  }
  {
    const GenericityResult r = sweep_bordered_genericity(300, seed + 6000);
    add("rank/bordered", r.failures == 0, rank_detail(r));
  }

  return out;
}

}  // namespace dcsit
