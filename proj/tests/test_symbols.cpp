#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cstdint>
#include <vector>

#include "dcsit/rational.hpp"
#include "dcsit/rng.hpp"
#include "dcsit/symbols.hpp"

using namespace dcsit;

TEST_CASE("mask helpers round-trip user sets") {
  CHECK(mask_of({1, 3}) == 0b101u);
  CHECK(mask_of({}) == 0u);
  CHECK(full_mask(0) == 0u);
  CHECK(full_mask(3) == 0b111u);
  CHECK(full_mask(32) == 0xFFFFFFFFu);
  CHECK(mask_size(0b1011u) == 3);
  CHECK(mask_has(0b1011u, 2));
  CHECK_FALSE(mask_has(0b1011u, 3));
  CHECK_FALSE(mask_has(0b1011u, 0));
  CHECK(mask_members(0b10101u) == std::vector<int>{1, 3, 5});
  CHECK(mask_label(0b10101u) == "{1,3,5}");
  CHECK(mask_label(0u) == "{}");
  CHECK_THROWS_WITH(mask_of({0}), "index out of range");
  CHECK_THROWS_WITH(mask_of({33}), "index out of range");
  CHECK_THROWS_WITH(full_mask(33), "index out of range");
}

TEST_CASE("subsets_of_size enumerates ascending and complete") {
  for (int k = 0; k <= 8; ++k) {
    for (int m = 0; m <= k; ++m) {
      const std::vector<std::uint32_t> subs = subsets_of_size(k, m);
      CAPTURE(k);
      CAPTURE(m);
      CHECK(static_cast<long>(subs.size()) ==
            binomial(k, m).get_num().get_si());
      CHECK(std::is_sorted(subs.begin(), subs.end()));
      CHECK(std::adjacent_find(subs.begin(), subs.end()) == subs.end());
      for (std::uint32_t s : subs) {
        CHECK(mask_size(s) == m);
        CHECK((s & ~full_mask(k)) == 0u);
      }
    }
  }
  CHECK(subsets_of_size(4, 2) ==
        std::vector<std::uint32_t>{0b0011, 0b0101, 0b0110, 0b1001, 0b1010,
                                   0b1100});
  CHECK_THROWS_WITH(subsets_of_size(3, 4), "index out of range");
  CHECK_THROWS_WITH(subsets_of_size(3, -1), "index out of range");
}

TEST_CASE("symbol specs expose order pair and readable labels") {
  SymbolSpec s;
  s.tx = 2;
  s.demand = mask_of({1, 3});
  s.knowledge = 0;
  s.serial = 7;
  CHECK(s.order_m() == 2);
  CHECK(s.order_n() == 0);
  CHECK(s.label() == "u[2|{1,3}]#7");
  s.knowledge = mask_of({4});
  CHECK(s.order_n() == 1);
  CHECK(s.label() == "u[2|{1,3};{4}]#7");
}

TEST_CASE("linear forms stay sorted and merge duplicate coordinates") {
  const LinearForm a = LinearForm::unit(1, 4);
  const LinearForm b = LinearForm::unit(1, 2);
  LinearForm f;
  f.add_scaled(a, Complex(2.0, 0.0));
  f.add_scaled(b, Complex(0.0, 1.0));
  f.add_scaled(a, Complex(1.0, 0.0));
  REQUIRE(f.terms().size() == 2);
  CHECK(f.owner() == 1);
  CHECK(f.terms()[0].first == 2);
  CHECK(f.terms()[0].second == Complex(0.0, 1.0));
  CHECK(f.terms()[1].first == 4);
  CHECK(f.terms()[1].second == Complex(3.0, 0.0));
  f.scale(Complex(2.0, 0.0));
  CHECK(f.terms()[1].second == Complex(6.0, 0.0));
  // Adding a zero-weight or empty form changes nothing, owner included.
  LinearForm g;
  g.add_scaled(LinearForm::unit(3, 9), Complex(0.0, 0.0));
  CHECK(g.empty());
  CHECK(g.owner() == 0);
}

TEST_CASE("mixing blocks demotes the owner and combine refuses it") {
  LinearForm mixed;
  mixed.add_scaled(LinearForm::unit(1, 0), Complex(1.0, 0.0));
  mixed.add_scaled(LinearForm::unit(2, 5), Complex(1.0, 0.0));
  CHECK(mixed.owner() == LinearForm::kMixed);

  const LinearForm f1 = LinearForm::unit(1, 0);
  const LinearForm f2 = LinearForm::unit(2, 5);
  CVector c(2);
  c << Complex(1.0, 0.0), Complex(1.0, 0.0);
  CHECK_THROWS_WITH(combine({&f1, &f2}, c),
                    "cross-transmitter combination forbidden");
  CHECK_THROWS_WITH(combine({&f1, &mixed}, c),
                    "cross-transmitter combination forbidden");
  CVector c1(1);
  c1 << Complex(1.0, 0.0);
  CHECK_THROWS_WITH(combine({&f1, &f2}, c1), "degenerate dimensions");
  CHECK_THROWS_WITH(combine({}, CVector(0)), "degenerate dimensions");
}

TEST_CASE("combine is the stated weighted sum") {
  Rng rng(6, 2);
  GroundRegistry reg(2);
  Rng data(6, streams::kData);
  const std::vector<LinearForm> block = reg.fresh_block(1, 5, data);
  std::vector<const LinearForm*> ptrs;
  for (const LinearForm& f : block) ptrs.push_back(&f);
  CVector c(5);
  for (int s = 0; s < 5; ++s) c(s) = rng.cn01();
  const LinearForm out = combine(ptrs, c);
  CHECK(out.owner() == 1);
  REQUIRE(out.terms().size() == 5);
  Complex expect(0.0, 0.0);
  for (int s = 0; s < 5; ++s) expect += c(s) * reg.planted(s);
  CHECK(std::abs(reg.evaluate(out) - expect) <= 1e-15);
}

TEST_CASE("ground registry plants per-transmitter blocks deterministically") {
  GroundRegistry reg(3);
  Rng data(99, streams::kData);
  const std::vector<LinearForm> b1 = reg.fresh_block(1, 4, data);
  const std::vector<LinearForm> b3 = reg.fresh_block(3, 2, data);
  CHECK(reg.size() == 6);
  CHECK(reg.n_tx() == 3);
  CHECK(reg.block_of(1) == std::vector<std::int32_t>{0, 1, 2, 3});
  CHECK(reg.block_of(2).empty());
  CHECK(reg.block_of(3) == std::vector<std::int32_t>{4, 5});
  for (std::int32_t i = 0; i < 4; ++i) CHECK(reg.tx_of(i) == 1);
  CHECK(reg.tx_of(4) == 3);
  // The same data stream replays the same planted values.
  Rng replay(99, streams::kData);
  for (std::int32_t i = 0; i < 6; ++i) {
    CHECK(reg.planted(i) == replay.cn01());
  }
  // Unit forms evaluate to their planted entry, in both precisions.
  for (int s = 0; s < 4; ++s) {
    CHECK(reg.evaluate(b1[s]) == reg.planted(s));
    CHECK(lower(reg.evaluate_l(b1[s])) == reg.planted(s));
  }
  CHECK(reg.evaluate(b3[1]) == reg.planted(5));
  CHECK(reg.evaluate(LinearForm()) == Complex(0.0, 0.0));

  CHECK_THROWS_WITH(reg.fresh_block(4, 1, data), "index out of range");
  CHECK_THROWS_WITH(reg.fresh_block(1, 0, data), "empty fresh block");
  CHECK_THROWS_WITH(reg.planted(6), "index out of range");
  CHECK_THROWS_WITH(reg.tx_of(-1), "index out of range");
  CHECK_THROWS_WITH(reg.block_of(0), "index out of range");
}

TEST_CASE("evaluate_l carries the sum at extended precision") {
  GroundRegistry reg(1);
  Rng data(5, streams::kData);
  const std::vector<LinearForm> block = reg.fresh_block(1, 64, data);
  LinearForm f;
  Rng rng(5, 11);
  for (const LinearForm& u : block) f.add_scaled(u, rng.cn01());
  const LComplex vl = reg.evaluate_l(f);
  // Reference accumulation in long double from the exact inputs.
  LComplex expect(0.0L);
  for (const auto& [idx, c] : f.terms()) {
    expect += lift(c) * lift(reg.planted(idx));
  }
  CHECK(std::abs(vl - expect) == 0.0L);
  CHECK(std::abs(lower(vl) - reg.evaluate(f)) <= 1e-13);
}
