#include <doctest.h>

#include "bobw/decomp.hpp"
#include "bobw/pipelines.hpp"
#include "support.hpp"

using namespace bobw;
using namespace bobw::testing;

namespace {

void require_all_hold(const PipelineResult& r) {
  for (const auto& rep : r.reports) {
    INFO(rep.line());
    CHECK(rep.holds);
  }
}

}  // namespace

TEST_CASE("additive pipeline on the worked example") {
  const PipelineResult r = bobw_additive(example_one());
  CHECK(r.fractional == example_one_dse());
  CHECK(marginal_matrix(r.lottery) == r.fractional);
  require_all_hold(r);
  REQUIRE(r.trace);

  const Instance solo({q(1)}, {Additive{row({1, 2})}}, 2);
  const PipelineResult s = bobw_additive(solo);
  REQUIRE(s.lottery.size() == 1);
  CHECK(s.lottery.support()[0].allocation.owners() == std::vector<int>{0, 0});

  CHECK_THROWS(bobw_additive(multidemand_sd_instance()));
}

TEST_CASE("equal entitlements add EF1 and balanced replays") {
  Gen gen(81);
  for (int trial = 0; trial < 50; ++trial) {
    const PipelineResult r = bobw_additive(gen.additive(gen.integer(1, 4), gen.integer(1, 7), true));
    std::vector<std::string> notions;
    for (const auto& rep : r.reports) notions.push_back(rep.notion);
    CHECK(std::find(notions.begin(), notions.end(), "ef1") != notions.end());
    CHECK(std::find(notions.begin(), notions.end(), "rb-replay") != notions.end());
    require_all_hold(r);
  }
}

TEST_CASE("xos pipeline") {
  Gen gen(82);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = gen.integer(1, 3), m = gen.integer(1, 5);
    std::vector<Valuation> vals;
    for (int i = 0; i < n; ++i) {
      if (gen.coin(0.2)) {
        vals.push_back(Additive{gen.values(m)});
        continue;
      }
      Xos x;
      for (int c = gen.integer(1, 4); c > 0; --c) x.clauses.push_back(gen.values(m));
      vals.push_back(x);
    }
    const Instance inst(gen.weights(n), vals, m);
    const PipelineResult r = bobw_xos(inst);
    CHECK(marginal_matrix(r.lottery) == r.fractional);
    for (int i = 0; i < n; ++i) CHECK(r.fractional.row(i) == RationalMatrix::Constant(1, m, inst.weight(i)));
    require_all_hold(r);
  }
  CHECK_THROWS(bobw_xos(multidemand_sd_instance()));
}

TEST_CASE("multi-demand pipeline") {
  const PipelineResult unit = bobw_multidemand(multidemand_sd_instance());
  require_all_hold(unit);
  for (const auto& e : unit.lottery.support())
    for (const auto& b : e.allocation.bundles()) CHECK(b.size() == 1);

  // All-additive agents give the same lottery as the additive pipeline.
  Gen gen(83);
  const Instance inst = gen.additive(3, 5, true);
  const PipelineResult a = bobw_additive(inst), md = bobw_multidemand(inst);
  CHECK(a.fractional == md.fractional);
  require_all_hold(md);

  CHECK_THROWS(bobw_multidemand(example_one()));
}

TEST_CASE("cancelable pipeline") {
  const Rational third(1, 3);
  Oracle additive{std::vector<Rational>(8)};
  const auto vals = row({3, 1, 2});
  for (std::uint32_t mask = 0; mask < 8; ++mask)
    for (int g = 0; g < 3; ++g)
      if (mask >> g & 1) additive.table[mask] += vals[g];
  const Instance inst({third, third, third}, {additive, additive, Additive{row({1, 1, 1})}}, 3);
  const PipelineResult r = bobw_cancelable(inst);
  require_all_hold(r);
  CHECK(r.notes == std::vector<std::string>{"exante-ef unverified-by-design"});

  const Instance complements({q(1, 2), q(1, 2)}, {Oracle{row({0, 1, 1, 3, 1, 2, 2, 3})}, Additive{row({1, 1, 1})}}, 3);
  CHECK_THROWS(bobw_cancelable(complements));
}

TEST_CASE("allocation enumeration and the ex-ante LP") {
  const auto all = all_allocations(2, 3);
  REQUIRE(all.size() == 8);
  CHECK(all.front().owners() == std::vector<int>{0, 0, 0});
  CHECK(all[1].owners() == std::vector<int>{0, 0, 1});
  CHECK(all.back().owners() == std::vector<int>{1, 1, 1});
  const LinearProgram lp = exante_wef_lp(incompatibility_instance(q(1, 2)), all_allocations(2, 2));
  CHECK(lp.constraints() == 3);
  CHECK(lp.variables() == 4);
}

TEST_CASE("counterexample replays") {
  for (const auto& [x, y] : std::vector<std::pair<Rational, Rational>>{
           {q(0), q(0)}, {q(1), q(0)}, {q(0), q(1)}, {q(1, 2), q(1, 2)}, {q(9, 10), q(9, 10)}, {q(1), q(1)}}) {
    const ReplayResult r = replay_counterexample("wef-xy-incompatibility", {x, y, std::nullopt});
    INFO(to_string(x), " ", to_string(y));
    CHECK(r.certified);
  }
  CHECK(default_incompatibility_weight(q(1, 2), q(1, 2)) == q(3, 8));
  CHECK(replay_counterexample("wef-xy-incompatibility", {q(1, 2), q(1, 2), q(2, 5)}).certified);
  CHECK_THROWS(replay_counterexample("wef-xy-incompatibility", {q(1, 2), q(1, 2), q(1, 5)}));
  CHECK_THROWS(replay_counterexample("wef-xy-incompatibility", {q(3, 2), q(0), std::nullopt}));
  CHECK(replay_counterexample("general-valuations").certified);
  CHECK(replay_counterexample("groupfair-remark").certified);
  CHECK(replay_counterexample("multidemand-sd").certified);
  CHECK_THROWS(replay_counterexample("nope"));
}
