#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "dcsit/ic_scheme.hpp"
#include "dcsit/receiver.hpp"
#include "dcsit/verify.hpp"
#include "dcsit/x_scheme.hpp"

using namespace dcsit;

namespace {

// Bank of `n` random full-span equations over tx 1's first n ground symbols.
EquationBank random_bank(const GroundRegistry& reg, int n, Rng& rng) {
  EquationBank bank(1);
  for (int e = 0; e < n; ++e) {
    LinearForm f;
    for (int c = 0; c < n; ++c) {
      f.add_scaled(LinearForm::unit(1, c), rng.cn01());
    }
    const Complex truth = reg.evaluate(f);
    bank.add_row(std::move(f), truth, "test", e + 1);
  }
  return bank;
}

}  // namespace

TEST_CASE("decode solves a square bank back to the planted data") {
  GroundRegistry reg(1);
  Rng data(4, streams::kData);
  reg.fresh_block(1, 5, data);
  Rng rng(4, 9);
  const EquationBank bank = random_bank(reg, 5, rng);
  const std::vector<std::int32_t> targets{0, 1, 2, 3, 4};
  const auto got = decode(bank, targets);
  REQUIRE(got.size() == 5);
  for (std::int32_t i = 0; i < 5; ++i) {
    CHECK(std::abs(got.at(i) - reg.planted(i)) <= 1e-9);
  }
}

TEST_CASE("decode failure modes carry their reasons") {
  GroundRegistry reg(1);
  Rng data(8, streams::kData);
  reg.fresh_block(1, 3, data);
  Rng rng(8, 2);
  const std::vector<std::int32_t> targets{0, 1, 2};

  EquationBank thin(1);
  thin.add_row(LinearForm::unit(1, 0), reg.planted(0), "t", 1);
  CHECK_THROWS_WITH(decode(thin, targets),
                    "undecodable at tolerance: too few equations");

  // Two copies of one equation: singular at any tolerance.
  EquationBank dup(1);
  LinearForm f;
  for (int c = 0; c < 3; ++c) f.add_scaled(LinearForm::unit(1, c), rng.cn01());
  dup.add_row(f, reg.evaluate(f), "t", 1);
  dup.add_row(f, reg.evaluate(f), "t", 2);
  dup.add_row(LinearForm::unit(1, 2), reg.planted(2), "t", 3);
  try {
    decode(dup, targets);
    FAIL("expected a singular-system failure");
  } catch (const std::runtime_error& e) {
    const std::string what = e.what();
    CHECK(what.rfind("undecodable at tolerance: singular system", 0) == 0);
  }

  // A row reaching outside the target span is a contract violation.
  EquationBank wide(1);
  wide.add_row(LinearForm::unit(1, 0), reg.planted(0), "t", 1);
  wide.add_row(LinearForm::unit(1, 1), reg.planted(1), "t", 2);
  LinearForm outside;
  outside.add_scaled(LinearForm::unit(1, 2), Complex(1.0, 0.0));
  outside.add_scaled(LinearForm::unit(1, 3), Complex(1.0, 0.0));
  GroundRegistry reg4(1);
  Rng data4(8, streams::kData);
  reg4.fresh_block(1, 4, data4);
  wide.add_row(outside, reg4.evaluate(outside), "t", 3);
  CHECK_THROWS_WITH(decode(wide, targets), "wrong bank contents");

  CHECK_THROWS_WITH(decode(thin, {}), "degenerate dimensions");
}

TEST_CASE("bank consistency passes on truth and pinpoints corruption") {
  GroundRegistry reg(1);
  Rng data(12, streams::kData);
  reg.fresh_block(1, 4, data);
  Rng rng(12, 5);
  EquationBank bank = random_bank(reg, 4, rng);
  CHECK_NOTHROW(bank.check_consistency(reg, 1e-12));
  bank.add_row(LinearForm::unit(1, 0), reg.planted(0) + Complex(1e-6, 0.0),
               "corrupt", 9);
  try {
    bank.check_consistency(reg, 1e-10);
    FAIL("expected an inconsistency");
  } catch (const std::runtime_error& e) {
    const std::string what = e.what();
    CHECK(what.rfind("bank inconsistent:", 0) == 0);
    CHECK(what.find("tag=corrupt") != std::string::npos);
    CHECK(what.find("row=4") != std::string::npos);
    CHECK(what.find("slot=9") != std::string::npos);
  }
}

TEST_CASE("build_p_matrix lays equations out column by column") {
  GroundRegistry reg(1);
  Rng data(3, streams::kData);
  reg.fresh_block(1, 4, data);  // (K-1)^2 for K = 3
  Rng rng(3, 6);
  CMatrix coef(4, 4);
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) coef(r, c) = rng.cn01();
  }
  EquationBank bank(2);
  for (int e = 0; e < 4; ++e) {
    LinearForm f;
    for (int s = 0; s < 4; ++s) {
      f.add_scaled(LinearForm::unit(1, s), coef(s, e));
    }
    const Complex truth = reg.evaluate(f);
    bank.add_row(std::move(f), truth, "t", e + 1);
  }
  const CMatrix p = build_p_matrix(bank, 3);
  CHECK((p - coef).norm() == 0.0);

  EquationBank off(2);
  for (int e = 0; e < 3; ++e) {
    off.add_row(LinearForm::unit(1, e), reg.planted(e), "t", e);
  }
  CHECK_THROWS_WITH(build_p_matrix(off, 3), "degenerate dimensions");

  // Right count, wrong span: a repeated coordinate leaves the block short.
  EquationBank repeat(2);
  for (int e = 0; e < 4; ++e) {
    repeat.add_row(LinearForm::unit(1, e % 3), reg.planted(e % 3), "t", e);
  }
  CHECK_THROWS_WITH(build_p_matrix(repeat, 3), "wrong bank contents");

  GroundRegistry reg2(2);
  Rng data2(3, streams::kData);
  reg2.fresh_block(1, 3, data2);
  reg2.fresh_block(2, 1, data2);
  EquationBank mixed(2);
  for (int e = 0; e < 3; ++e) {
    mixed.add_row(LinearForm::unit(1, e), reg2.planted(e), "t", e);
  }
  mixed.add_row(LinearForm::unit(2, 3), reg2.planted(3), "t", 4);
  CHECK_THROWS_WITH(build_p_matrix(mixed, 3), "wrong bank contents");
}

TEST_CASE("build_g_matrix mirrors the block geometry") {
  RunState st(ChannelKind::ic, 6, 23);
  const std::uint32_t set = mask_of({1, 2, 3});
  seed_pool_with_fresh(st, set, 1, 4);
  seed_pool_with_fresh(st, set, 2, 3);
  SideIndex side;
  run_pair_block(st, 3, set, 1, 2, &side);
  REQUIRE(st.blocks.size() == 1);
  const PairBlock& b = st.blocks[0];
  REQUIRE(b.n_slots == 4);
  REQUIRE(b.outsiders.size() == 3);

  for (int rx : {1, 2, 3}) {
    const CMatrix g = build_g_matrix(st, b, rx);
    CAPTURE(rx);
    REQUIRE(g.rows() == 7);
    REQUIRE(g.cols() == 7);
    // Direct columns: channel gain times the slot's combining weights.
    for (int t = 0; t < 4; ++t) {
      const CMatrix& h = st.chan.slot(b.first_slot + t);
      for (int s = 0; s < 4; ++s) {
        CHECK(std::abs(g(s, t) - h(rx - 1, 0) * b.c_lead(t, s)) <= 1e-15);
      }
      for (int s = 0; s < 3; ++s) {
        CHECK(std::abs(g(4 + s, t) - h(rx - 1, 1) * b.c_trail(t, s)) <=
              1e-15);
      }
    }
    // Side columns never touch the trailing rows: that is what the null
    // projection guarantees.
    for (int c = 4; c < 7; ++c) {
      for (int s = 4; s < 7; ++s) CHECK(g(s, c) == Complex(0.0, 0.0));
    }
    CHECK(min_singular_value(g) > 1e-8 * g.norm());
    // Killing one column of independence makes it visibly singular.
    CMatrix broken = g;
    broken.col(6) = broken.col(5);
    CHECK(rank(broken) == 6);
  }
  CHECK_THROWS_WITH(build_g_matrix(st, b, 5), "index out of range");
}

TEST_CASE("value tables guard reads of unknown side information") {
  ValueTable vt(4, 3);
  CHECK_FALSE(vt.knows(2, 1));
  CHECK_THROWS_WITH(vt.get(2, 1), "side information missing");
  vt.set(2, 1, Complex(0.5, -1.0));
  CHECK(vt.knows(2, 1));
  CHECK(vt.get(2, 1) == Complex(0.5, -1.0));
  CHECK_FALSE(vt.knows(2, 2));
}

TEST_CASE("a full decode fills per-receiver banks with exact identities") {
  RunConfig cfg;
  const RunState st = run_ic_state(3, 6, cfg);
  std::vector<EquationBank> banks;
  const DecodeReport rep = decode_run(st, &banks);
  CHECK(rep.pass);
  CHECK(rep.detail.empty());
  CHECK(rep.recovered == 36);
  CHECK(rep.systems_solved > 0);
  CHECK(rep.min_singular > 0.0);
  REQUIRE(banks.size() == 3);
  std::set<std::string> tags;
  for (const EquationBank& b : banks) {
    CHECK(b.rows().size() > 0);
    CHECK_NOTHROW(b.check_consistency(st.reg, cfg.bank_tol));
    for (const EquationRow& r : b.rows()) tags.insert(r.tag);
  }
  CHECK(tags == std::set<std::string>{"bcast", "block", "p1-projection",
                                      "shared-slot", "side"});
  // Error keyed by demand-set size: all three levels present and tiny.
  REQUIRE(rep.per_order_max_err.count(1) == 1);
  REQUIRE(rep.per_order_max_err.count(2) == 1);
  REQUIRE(rep.per_order_max_err.count(3) == 1);
  for (const auto& [order, err] : rep.per_order_max_err) {
    CAPTURE(order);
    CHECK(err <= 1e-8);
  }
}

TEST_CASE("X decode banks skip the tags of phases the scheme lacks") {
  RunConfig cfg;
  const RunState st = run_x_state(2, 6, cfg);
  std::vector<EquationBank> banks;
  const DecodeReport rep = decode_run(st, &banks);
  CHECK(rep.pass);
  REQUIRE(banks.size() == 2);
  std::set<std::string> tags;
  for (const EquationBank& b : banks) {
    for (const EquationRow& r : b.rows()) tags.insert(r.tag);
  }
  CHECK(tags == std::set<std::string>{"bcast", "block", "side"});
}

TEST_CASE("a corrupted observation fails the decode loudly, not silently") {
  RunConfig cfg;
  RunState st = run_ic_state(3, 2, cfg);
  st.p1_rounds[0].y(0, 0) += LComplex(0.5L);
  const DecodeReport rep = decode_run(st);
  CHECK_FALSE(rep.pass);
  CHECK_FALSE(rep.detail.empty());
}

TEST_CASE("an absurd rank tolerance surfaces as a singular-system failure") {
  RunState st = run_ic_state(3, 2, RunConfig{});
  st.cfg.rank_rel_tol = 0.999;
  const DecodeReport rep = decode_run(st);
  CHECK_FALSE(rep.pass);
  CHECK(rep.detail.rfind("singular system", 0) == 0);
}

TEST_CASE("rank sweeps over live opening rounds stay generic") {
  const GenericityResult clean = sweep_p_genericity(3, 40, 77);
  CHECK(clean.trials == 40);
  CHECK(clean.failures == 0);
  CHECK(clean.min_singular > 0.0);
  CHECK(clean.worst_fingerprint.empty());

  const GenericityResult broken = sweep_p_genericity(3, 10, 77, true);
  CHECK(broken.failures == 10);
  CHECK(broken.worst_fingerprint.size() == 16);

  const GenericityResult g = sweep_g_genericity(6, 3, 25, 5);
  CHECK(g.trials == 25);
  CHECK(g.failures == 0);
}
