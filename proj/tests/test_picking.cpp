#include <doctest.h>

#include "bobw/checkers.hpp"
#include "bobw/decomp.hpp"
#include "bobw/eating.hpp"
#include "bobw/picking.hpp"
#include "support.hpp"

using namespace bobw;
using namespace bobw::testing;

TEST_CASE("greedy execution") {
  const Instance inst = example_one();
  CHECK(run_picking_sequence(inst, {0, 1, 2, 0}).owners() == std::vector<int>{0, 1, 2, 0});
  const Instance solo({q(1)}, {Additive{row({1, 2, 3})}}, 3);
  CHECK(run_picking_sequence(solo, {0, 0, 0}).owners() == std::vector<int>{0, 0, 0});
  CHECK_THROWS(run_picking_sequence(inst, {0, 1}));
  CHECK_THROWS(run_picking_sequence(inst, {0, 1, 5, 0}));
  CHECK(parse_picking_sequence(" 0 1  2 0 ") == PickingSequence{0, 1, 2, 0});
  CHECK_THROWS(parse_picking_sequence("0 x"));
  CHECK_THROWS(parse_picking_sequence("0 -1"));
  CHECK(to_string(PickingSequence{2, 0}) == "2 0");
}

TEST_CASE("prefix condition") {
  const std::vector<Rational> half{q(1, 2), q(1, 2)};
  CHECK(prefix_wef_condition({0, 1, 0, 1, 0}, half, 1, 0).holds);
  const auto v = prefix_wef_condition({0, 0, 0, 0}, half, 0, 0);
  CHECK_FALSE(v.holds);
  CHECK(v.prefix == 1);
  CHECK(v.lhs == 0);
  CHECK(v.rhs == 2);
  CHECK(prefix_wef_condition({}, half, 0, 0).holds);
  CHECK_THROWS(prefix_wef_condition({0}, {q(1), q(0)}, 0, 0));
}

TEST_CASE("recursive balance") {
  CHECK(is_recursively_balanced({0, 1, 2, 0, 1, 2, 0}, 3));
  CHECK_FALSE(is_recursively_balanced({0, 0, 1}, 2));
  CHECK(is_recursively_balanced({0, 1, 1, 0}, 2));
}

TEST_CASE("stopping times on the worked example") {
  const Instance inst = example_one();
  const auto trace = dse(inst).trace;
  const auto support = example_one_support();
  const auto st = stopping_times(inst, trace, support[0]);
  std::vector<Rational> agent0;
  for (const auto& s : st)
    if (s.agent == 0) agent0.push_back(s.time);
  CHECK(agent0 == row({2, 4}));
  for (const auto& s : stopping_times(inst, trace, support[2]))
    if (s.agent == 2) CHECK(s.time == 2);
  for (const auto& y : support) {
    const auto pi = stopping_time_sequence(inst, trace, y);
    CHECK(run_picking_sequence(inst, pi) == y);
    CHECK(prefix_wef_condition(pi, inst.weights(), 1, 1).holds);
  }
  CHECK_THROWS_AS(stopping_times(inst, trace, IntegralAllocation(3, {0, 0, 0, 0})), std::invalid_argument);
}

TEST_CASE("property: stopping times are strictly increasing along preferences") {
  Gen gen(61);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = gen.integer(1, 4), m = gen.integer(1, 7);
    const Instance inst = gen.additive(n, m, gen.coin(0.3));
    const auto [x, trace] = dse(inst);
    const Lottery l = decompose(x, build_ug_bihierarchy(inst, x));
    for (const auto& e : l.support()) {
      const auto st = stopping_times(inst, trace, e.allocation);
      for (const auto& s : st) {
        CHECK(s.time > Rational(s.rank - 1) / inst.weight(s.agent));
        CHECK(s.time <= Rational(s.rank) / inst.weight(s.agent));
        for (const auto& o : st)
          if (o.agent == s.agent && o.rank < s.rank) CHECK(o.time < s.time);
      }
      const auto pi = stopping_time_sequence(inst, trace, e.allocation);
      CHECK(run_picking_sequence(inst, pi) == e.allocation);
      CHECK(prefix_wef_condition(pi, inst.weights(), 1, 1).holds);
    }
  }
}

TEST_CASE("property: prefix condition implies WEF(x,y) of the outcome, and its failure is exploitable") {
  Gen gen(62);
  const Rational grid[] = {q(0), q(1, 2), q(1)};
  int forward = 0, converse = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = gen.integer(2, 4), m = gen.integer(1, 8);
    const auto w = gen.weights(n, gen.coin(0.3));
    PickingSequence pi(m);
    for (auto& a : pi) a = gen.integer(0, n - 1);
    const Rational x = grid[gen.integer(0, 2)], y = grid[gen.integer(0, 2)];
    const auto verdict = prefix_wef_condition(pi, w, x, y);
    if (verdict.holds) {
      std::vector<Valuation> vals;
      for (int i = 0; i < n; ++i) vals.push_back(Additive{gen.values(m)});
      const Instance inst(w, vals, m, gen.permutation(m));
      CHECK(check_wef_xy(inst, run_picking_sequence(inst, pi), x, y).holds);
      ++forward;
    } else {
      const Instance adv = adversarial_instance(w, m, verdict.prefix);
      CHECK_FALSE(check_wef_xy(adv, run_picking_sequence(adv, pi), x, y).holds);
      ++converse;
    }
  }
  CHECK(forward > 100);
  CHECK(converse > 100);
}
