#include <doctest.h>

#include "bobw/checkers.hpp"
#include "bobw/eating.hpp"
#include "bobw/pipelines.hpp"
#include "support.hpp"

using namespace bobw;
using namespace bobw::testing;

namespace {

IntegralAllocation random_allocation(Gen& gen, int n, int m) {
  std::vector<int> owner(m);
  for (auto& o : owner) o = gen.integer(0, n - 1);
  return IntegralAllocation(n, owner);
}

Rational v(const Instance& inst, int i, const Bundle& b) { return value_of(inst.valuation(i), b); }

Bundle with(Bundle b, int g) {
  if (std::find(b.begin(), b.end(), g) == b.end()) b.push_back(g);
  std::sort(b.begin(), b.end());
  return b;
}

Bundle without(Bundle b, int g) {
  b.erase(std::remove(b.begin(), b.end(), g), b.end());
  return b;
}

bool brute_wef_xy(const Instance& inst, const IntegralAllocation& a, const Rational& x, const Rational& y) {
  const auto b = a.bundles();
  for (int i = 0; i < inst.agents(); ++i)
    for (int j = 0; j < inst.agents(); ++j) {
      if (i == j || b[j].empty()) continue;
      bool ok = false;
      for (int g : b[j]) {
        const Rational vg = v(inst, i, {g});
        if (inst.weight(j) * (v(inst, i, b[i]) + y * vg) >= inst.weight(i) * (v(inst, i, b[j]) - x * vg)) ok = true;
      }
      if (!ok) return false;
    }
  return true;
}

bool brute_wprop1(const Instance& inst, const IntegralAllocation& a) {
  const auto b = a.bundles();
  Bundle all;
  for (int g = 0; g < inst.goods(); ++g) all.push_back(g);
  for (int i = 0; i < inst.agents(); ++i) {
    const Rational target = inst.weight(i) * v(inst, i, all);
    bool ok = v(inst, i, b[i]) >= target;
    for (int g = 0; g < inst.goods() && !ok; ++g)
      if (a.owner(g) != i && v(inst, i, with(b[i], g)) >= target) ok = true;
    if (!ok) return false;
  }
  return true;
}

bool brute_wef11ml(const Instance& inst, const IntegralAllocation& a) {
  const auto b = a.bundles();
  const int m = inst.goods();
  for (int i = 0; i < inst.agents(); ++i)
    for (int j = 0; j < inst.agents(); ++j) {
      if (i == j) continue;
      bool ok = false;
      for (int gi = 0; gi < m && !ok; ++gi)
        for (int gj = 0; gj < m && !ok; ++gj)
          if (inst.weight(j) * v(inst, i, with(b[i], gi)) >= inst.weight(i) * v(inst, i, without(b[j], gj))) ok = true;
      if (!ok) return false;
    }
  return true;
}

bool brute_ef1(const Instance& inst, const IntegralAllocation& a) {
  const auto b = a.bundles();
  for (int i = 0; i < inst.agents(); ++i)
    for (int j = 0; j < inst.agents(); ++j) {
      if (i == j || b[j].empty()) continue;
      bool ok = false;
      for (int g : b[j])
        if (v(inst, i, b[i]) >= v(inst, i, without(b[j], g))) ok = true;
      if (!ok) return false;
    }
  return true;
}

RationalMatrix random_fractional(Gen& gen, int n, int m) {
  RationalMatrix x(n, m);
  for (int g = 0; g < m; ++g) {
    long total = 0;
    std::vector<long> raw(n);
    for (auto& r : raw) total += (r = gen.coin(0.3) ? 0 : gen.integer(1, 6));
    if (total == 0) raw[0] = total = 1;
    for (int i = 0; i < n; ++i) x(i, g) = Rational(raw[i], total);
  }
  return x;
}

}  // namespace

TEST_CASE("worked example allocations") {
  const Instance inst = example_one();
  const auto support = example_one_support();
  for (const auto& y : support) {
    CHECK(check_wef_xy(inst, y, 1, 1).holds);
    CHECK(check_wprop1(inst, y).holds);
  }
  const auto r = check_wef_xy(inst, support[3], 1, 0);
  CHECK_FALSE(r.holds);
  REQUIRE(r.witness);
  CHECK(r.witness->i == 2);
  CHECK(r.witness->lhs < r.witness->rhs);
  CHECK(check_wsd_ef(inst, example_one_dse()).holds);
  CHECK(check_exante_wef(inst, example_one_dse()).holds);
  CHECK(check_wprop_fractional(inst, example_one_dse()).holds);

  const Instance solo({q(1)}, {Additive{row({1, 2})}}, 2);
  CHECK(check_wef_xy(solo, IntegralAllocation(1, {0, 0}), 1, 1).holds);
  CHECK(check_wsd_ef(solo, to_matrix({{q(1), q(1)}})).holds);
  CHECK(check_wgf(solo, to_matrix({{q(1), q(1)}})).holds);
}

TEST_CASE("hand-built failures") {
  const Additive unit{row({1, 1, 1, 1})};
  const Instance two({q(1, 2), q(1, 2)}, {unit, unit}, 4);
  const IntegralAllocation starve(2, {1, 1, 1, 1});
  const auto p = check_wprop1(two, starve);
  CHECK_FALSE(p.holds);
  CHECK(p.witness->i == 0);
  CHECK(p.witness->lhs == 1);
  CHECK(p.witness->rhs == 2);

  const Instance m1({q(1, 2), q(1, 2)}, {Additive{row({3})}, Additive{row({5})}}, 1);
  CHECK(check_wprop1(m1, IntegralAllocation(2, {0})).holds);

  const Instance pair({q(1, 2), q(1, 2)}, {Additive{row({1, 1})}, Additive{row({1, 1})}}, 2);
  CHECK_FALSE(check_ef1_general(pair, IntegralAllocation(2, {1, 1})).holds);
  CHECK(check_ef1_general(pair, IntegralAllocation(2, {0, 1})).holds);

  const Instance ordered({q(1, 2), q(1, 2)}, {Additive{row({2, 1})}, Additive{row({2, 1})}}, 2);
  const auto sd = check_wsd_ef(ordered, to_matrix({{q(1), q(0)}, {q(0), q(1)}}));
  CHECK_FALSE(sd.holds);
  CHECK(sd.witness->i == 1);
  CHECK(check_wprop_fractional(ordered, to_matrix({{q(0), q(0)}, {q(1), q(1)}})).holds == false);

  const Instance general = general_valuations_instance();
  const IntegralAllocation all_first(2, {0, 0, 0, 0});
  const auto ml = check_wef_one_one_more_less(general, all_first);
  CHECK_FALSE(ml.holds);
  CHECK(ml.witness->i == 1);
  CHECK_THROWS(check_exante_wef(general, to_matrix({{q(1), q(1), q(1), q(1)}, {q(0), q(0), q(0), q(0)}})));
  CHECK_THROWS(check_wef_xy(general, all_first, q(1, 2), q(1, 2)));
}

TEST_CASE("multi-demand lottery expectations") {
  const Instance inst = multidemand_sd_instance();
  const auto r = check_exante_wef(inst, multidemand_sd_lottery());
  CHECK_FALSE(r.holds);
  const RationalMatrix e = expected_values(inst, multidemand_sd_lottery());
  CHECK(e(0, 0) == q(2, 3));
  CHECK(e(0, 1) == 1);
}

TEST_CASE("group fairness with heavy and light goods") {
  const Instance inst = heavy_light_instance();
  RationalMatrix x = to_matrix({{q(1, 2), q(0), q(0), q(0)}, {q(1, 2), q(0), q(0), q(0)}, {q(0), q(1), q(1), q(1)}});
  CHECK(check_wgf(inst, x).holds);
  x(2, 1) -= q(1, 100);
  x(0, 1) += q(1, 100);
  const auto r = check_wgf(inst, x);
  CHECK_FALSE(r.holds);
  const auto pair = group_improvement(inst, x, {1, 2}, {0, 2});
  CHECK(pair.improving);
  CHECK(pair.optimum > 0);

  const Instance two({q(1, 2), q(1, 2)}, {Additive{row({1, 1})}, Additive{row({3, 1})}}, 2);
  CHECK_FALSE(check_wgf(two, to_matrix({{q(1), q(1)}, {q(0), q(0)}})).holds);
}

TEST_CASE("property: checkers agree with brute-force oracles") {
  Gen gen(51);
  const Rational grid[] = {q(0), q(1, 2), q(1)};
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = gen.integer(1, 4), m = gen.integer(1, 6);
    const bool equal = gen.coin();
    const Instance inst = gen.additive(n, m, equal);
    const auto a = random_allocation(gen, n, m);
    const Rational x = grid[gen.integer(0, 2)], y = grid[gen.integer(0, 2)];
    const auto r = check_wef_xy(inst, a, x, y);
    CHECK(r.holds == brute_wef_xy(inst, a, x, y));
    if (!r.holds) CHECK(r.witness->lhs < r.witness->rhs);
    // Monotone in (x, y).
    if (r.holds) CHECK(check_wef_xy(inst, a, 1, 1).holds);
    CHECK(check_wprop1(inst, a).holds == brute_wprop1(inst, a));
    CHECK(check_wef_one_one_more_less(inst, a).holds == brute_wef11ml(inst, a));
    CHECK(check_ef1_general(inst, a).holds == brute_ef1(inst, a));
    if (equal) CHECK(check_wef_xy(inst, a, 1, 0).holds == brute_ef1(inst, a));
  }
}

TEST_CASE("property: ex-ante implications") {
  Gen gen(52);
  int sd_held = 0, wgf_held = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const int n = gen.integer(1, 3), m = gen.integer(1, 4);
    const Instance inst = gen.additive(n, m);
    const RationalMatrix x = trial % 2 ? random_fractional(gen, n, m) : dse(inst).x;
    if (check_wsd_ef(inst, x).holds) {
      ++sd_held;
      CHECK(check_exante_wef(inst, x).holds);
    }
    if (trial % 3 == 0 && check_wgf(inst, x).holds) {
      ++wgf_held;
      CHECK(check_exante_wef(inst, x).holds);
      CHECK(check_wprop_fractional(inst, x).holds);
    }
  }
  CHECK(sd_held > 100);
  CHECK(wgf_held > 0);
}

TEST_CASE("property: lottery and matrix forms of ex-ante WEF agree for additive agents") {
  Gen gen(53);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = gen.integer(1, 4), m = gen.integer(1, 5);
    const Instance inst = gen.additive(n, m);
    std::vector<LotteryEntry> entries;
    const int k = gen.integer(1, 3);
    for (int h = 0; h < k; ++h) entries.push_back({Rational(1, k), random_allocation(gen, n, m)});
    const Lottery l(entries);
    CHECK(check_exante_wef(inst, l).holds == check_exante_wef(inst, marginal_matrix(l)).holds);
  }
}

TEST_CASE("report lines") {
  FairnessReport ok{"wprop1", true, std::nullopt};
  CHECK(ok.line() == "wprop1 true");
  Witness w;
  w.i = 1;
  w.j = 0;
  w.lhs = q(1, 2);
  w.rhs = 1;
  FairnessReport bad{"wef(1,1)", false, w};
  CHECK(bad.line().rfind("wef(1,1) false witness i=1 j=0 lhs=1/2 rhs=1", 0) == 0);
}
