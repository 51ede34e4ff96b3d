#include <doctest.h>

#include "bobw/core.hpp"
#include "bobw/io.hpp"
#include "support.hpp"

using namespace bobw;
using namespace bobw::testing;

TEST_CASE("rational parsing is canonical") {
  CHECK(parse_rational("6/8") == q(3, 4));
  CHECK(to_string(parse_rational("6/8")) == "3/4");
  CHECK(to_string(parse_rational("-4/-8")) == "1/2");
  CHECK(parse_rational("0.9") == q(9, 10));
  CHECK(parse_rational("7") == 7);
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("abc"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational(""), std::invalid_argument);
  CHECK_THROWS(q(1) / q(0));
}

TEST_CASE("floor, ceil and approximation") {
  CHECK(floor(q(7, 2)) == 3);
  CHECK(ceil(q(7, 2)) == 4);
  CHECK(floor(q(-7, 2)) == -4);
  CHECK(ceil(q(-7, 2)) == -3);
  CHECK(floor(q(4)) == 4);
  CHECK(is_integral(q(6, 3)));
  CHECK(approximate(1.0 / 3.0, 1000) == q(1, 3));
  CHECK(approximate(0.999999999, 1000) == 1);
  CHECK(approximate(3.14159265358979, 1000) == q(355, 113));
}

TEST_CASE("value_of follows each valuation kind") {
  const Additive a{row({8, 8, 5, 2})};
  CHECK(value_of(a, std::vector<int>{0, 2}) == 13);
  CHECK(value_of(a, std::vector<int>{}) == 0);
  const MultiDemand md{2, row({4, 7, 6, 2})};
  CHECK(value_of(md, std::vector<int>{0, 1, 2}) == 13);
  CHECK(value_of(md, std::vector<int>{3}) == 2);
  const Xos x{{row({1, 0, 3}), row({2, 3, 0})}};
  CHECK(value_of(x, std::vector<int>{0, 1}) == 5);
  CHECK(value_of(x, std::vector<int>{2}) == 3);
  CHECK(value_of(x, std::vector<int>{0, 1, 2}) == 5);
  CHECK(additive_witness(x, 3) == row({2, 3, 0}));
  // Ties go to the first clause.
  CHECK(additive_witness(Xos{{row({1, 0, 3}), row({2, 2, 0})}}, 3) == row({1, 0, 3}));
}

TEST_CASE("preference orders on the worked example") {
  const Instance inst = example_one();
  CHECK(inst.preference(0) == std::vector<int>{0, 1, 2, 3});
  CHECK(inst.preference(2) == std::vector<int>{1, 2, 0, 3});
  const Instance ties({q(1)}, {Additive{row({1, 1, 1})}}, 3, {2, 0, 1});
  CHECK(ties.preference(0) == std::vector<int>{2, 0, 1});
}

TEST_CASE("property: preference order is invariant under positive rescaling") {
  Gen gen(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int m = gen.integer(1, 7);
    auto v = gen.values(m);
    const auto perm = gen.permutation(m);
    const Rational c(gen.integer(1, 9), gen.integer(1, 9));
    auto scaled = v;
    for (auto& x : scaled) x *= c;
    const Instance a({q(1)}, {Additive{v}}, m, perm);
    const Instance b({q(1)}, {Additive{scaled}}, m, perm);
    CHECK(a.preference(0) == b.preference(0));
  }
}

TEST_CASE("property: valuations are monotone and normalized") {
  Gen gen(12);
  for (int trial = 0; trial < 200; ++trial) {
    const int m = gen.integer(1, 6);
    std::vector<Valuation> kinds{Additive{gen.values(m)}, MultiDemand{gen.integer(1, 3), gen.values(m)},
                                 Xos{{gen.values(m), gen.values(m), gen.values(m)}}};
    for (const auto& v : kinds) {
      CHECK(value_of(v, std::vector<int>{}) == 0);
      Bundle a, b;
      for (int g = 0; g < m; ++g) {
        const bool in_b = gen.coin();
        if (in_b) b.push_back(g);
        if (in_b && gen.coin()) a.push_back(g);
      }
      CHECK(value_of(v, a) <= value_of(v, b));
    }
  }
}

TEST_CASE("instance validation") {
  CHECK_NOTHROW(Instance({q(1)}, {Additive{row({0})}}, 1));
  CHECK_THROWS_WITH_AS(Instance({q(1, 2), q(1, 4)}, {Additive{row({1})}, Additive{row({1})}}, 1),
                       "weights sum to 3/4", std::invalid_argument);
  CHECK_THROWS_AS(Instance({q(1)}, {Additive{row({-1})}}, 1), std::invalid_argument);
  CHECK_THROWS_AS(Instance({q(1)}, {Additive{row({1, 2})}}, 2, {0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(Instance({q(3, 2), q(-1, 2)}, {Additive{row({1})}, Additive{row({1})}}, 1),
                  std::invalid_argument);
  // v({0,1}) < v({0}) breaks monotonicity.
  CHECK_THROWS_AS(Instance({q(1)}, {Oracle{row({0, 2, 1, 1})}}, 2), std::invalid_argument);
  CHECK_THROWS_AS(Instance({q(1)}, {Oracle{row({1, 2, 2, 2})}}, 2), std::invalid_argument);
}

TEST_CASE("cancelable oracle tables") {
  // Additive tables are cancelable.
  Oracle additive{std::vector<Rational>(8)};
  const auto vals = row({3, 1, 2});
  for (std::uint32_t mask = 0; mask < 8; ++mask)
    for (int g = 0; g < 3; ++g)
      if (mask >> g & 1) additive.table[mask] += vals[g];
  CHECK(is_cancelable(additive));
  // Unit value on any nonempty set never meets the premise strictly.
  CHECK(is_cancelable(Oracle{row({0, 1, 1, 1})}));
  // Goods 0 and 1 complement: v({0,1}) > v({0,2}) while v({1}) = v({2}).
  CHECK_FALSE(is_cancelable(Oracle{row({0, 1, 1, 3, 1, 2, 2, 3})}));
}

TEST_CASE("allocations and lotteries") {
  const auto y = IntegralAllocation::from_bundles(4, {{0, 3}, {1}, {2}});
  CHECK(y.owners() == std::vector<int>{0, 1, 2, 0});
  CHECK_THROWS(IntegralAllocation::from_bundles(3, {{0, 1}, {1, 2}}));
  CHECK_THROWS(IntegralAllocation::from_bundles(3, {{0}, {1}}));
  CHECK(from_matrix(y.matrix<Rational>()) == y);

  const auto support = example_one_support();
  const Lottery lottery({{q(1, 6), support[0]}, {q(1, 6), support[1]}, {q(1, 3), support[2]}, {q(1, 3), support[3]}});
  CHECK(marginal_matrix(lottery) == example_one_dse());
  CHECK_THROWS(Lottery({{q(1, 2), support[0]}, {q(1, 3), support[1]}}));
  CHECK_THROWS(Lottery({{q(0), support[0]}, {q(1), support[1]}}));

  const Lottery one({{q(1), y}});
  CHECK(marginal_matrix(one) == y.matrix<Rational>());

  const IntegralAllocation a(2, {0, 1}), b(2, {1, 0});
  const RationalMatrix half = marginal_matrix(Lottery({{q(1, 2), a}, {q(1, 2), b}}));
  CHECK(half == to_matrix({{q(1, 2), q(1, 2)}, {q(1, 2), q(1, 2)}}));
}

TEST_CASE("property: marginal matrix columns sum to one") {
  Gen gen(13);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = gen.integer(1, 4), m = gen.integer(1, 5), k = gen.integer(1, 5);
    std::vector<LotteryEntry> entries;
    long total = 0;
    std::vector<long> raw;
    for (int h = 0; h < k; ++h) total += raw.emplace_back(gen.integer(1, 7));
    for (int h = 0; h < k; ++h) {
      std::vector<int> owner(m);
      for (auto& o : owner) o = gen.integer(0, n - 1);
      entries.push_back({Rational(raw[h], total), IntegralAllocation(n, owner)});
    }
    const RationalMatrix x = marginal_matrix(Lottery(entries));
    CHECK(is_complete(x));
    CHECK_NOTHROW(validate_fractional(x));
  }
}

TEST_CASE("instance documents") {
  const std::string doc = R"({
    "agents": 3, "goods": 4, "weights": ["1/2", "1/3", "1/6"],
    "valuations": [
      {"kind": "additive", "values": ["8", "8", "5", "2"]},
      {"kind": "additive", "values": [3, 5, 4, 1]},
      {"kind": "additive", "values": ["4", "7", "6", "2"]}
    ]})";
  const Instance inst = load_instance(doc);
  CHECK(inst.agents() == 3);
  CHECK(std::get<Additive>(inst.valuation(1)).values == row({3, 5, 4, 1}));
  CHECK(inst.good_order() == std::vector<int>{0, 1, 2, 3});

  const Instance back = instance_from_json(instance_to_json(inst));
  CHECK(back.weights() == inst.weights());
  CHECK(back.preference(2) == inst.preference(2));

  try {
    load_instance("{\n  \"agents\": 1,\n  \"goods\": ,\n}");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_WITH(load_instance(R"({"agents":2,"goods":1,"weights":["1/2","1/4"],
      "valuations":[{"kind":"additive","values":["1"]},{"kind":"additive","values":["1"]}]})"),
                    "weights sum to 3/4");
  CHECK_THROWS(load_instance(R"({"agents":1,"goods":1,"weights":["1"],"valuations":[{"kind":"magic"}]})"));

  const std::string mixed = R"({"agents":2,"goods":2,"weights":["1/2","1/2"],"good_order":[1,0],
    "valuations":[{"kind":"multidemand","k":1,"values":["1","1"]},
                  {"kind":"xos","clauses":[["1","0"],["0","2"]]}]})";
  const Instance m = load_instance(mixed);
  CHECK(kind_of(m.valuation(0)) == ValuationKind::multidemand);
  CHECK(m.preference(0) == std::vector<int>{1, 0});
}

TEST_CASE("lottery documents round-trip") {
  const auto support = example_one_support();
  const Lottery lottery({{q(1, 2), support[0]}, {q(1, 2), support[3]}});
  const Lottery back = lottery_from_json(lottery_to_json(lottery), 4);
  REQUIRE(back.size() == 2);
  CHECK(back.support()[1].allocation == support[3]);
  CHECK(back.support()[0].probability == q(1, 2));
}
