#include <doctest.h>

#include <optional>

#include "bobw/exact_lp.hpp"
#include "support.hpp"

using namespace bobw;
using namespace bobw::testing;

namespace {

RationalVector vec(std::initializer_list<long> xs) {
  RationalVector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index k = 0;
  for (long x : xs) v(k++) = x;
  return v;
}

// Two-variable oracle: enumerate intersections of every pair of boundary
// lines (constraints and the axes) and keep the best feasible one.
std::optional<Rational> vertex_optimum(const LinearProgram& lp) {
  std::vector<std::pair<RationalVector, Rational>> lines;
  for (Eigen::Index k = 0; k < lp.constraints(); ++k) lines.push_back({lp.a.row(k).transpose(), lp.b(k)});
  lines.push_back({vec({1, 0}), 0});
  lines.push_back({vec({0, 1}), 0});
  std::optional<Rational> best;
  for (std::size_t p = 0; p < lines.size(); ++p)
    for (std::size_t r = p + 1; r < lines.size(); ++r) {
      const auto& [a1, b1] = lines[p];
      const auto& [a2, b2] = lines[r];
      const Rational det = a1(0) * a2(1) - a1(1) * a2(0);
      if (det == 0) continue;
      RationalVector x(2);
      x(0) = (b1 * a2(1) - a1(1) * b2) / det;
      x(1) = (a1(0) * b2 - b1 * a2(0)) / det;
      if (!is_feasible_point(lp, x)) continue;
      const Rational obj = lp.c.dot(x);
      if (!best || (lp.sense == Sense::minimize ? obj < *best : obj > *best)) best = obj;
    }
  return best;
}

}  // namespace

TEST_CASE("small textbook problems") {
  // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 -> 36 at (2, 6)
  LinearProgram lp(2);
  lp.sense = Sense::maximize;
  lp.c = vec({3, 5});
  lp.add(vec({1, 0}), Relation::le, 4);
  lp.add(vec({0, 2}), Relation::le, 12);
  lp.add(vec({3, 2}), Relation::le, 18);
  const auto r = solve_lp(lp);
  REQUIRE(r.status == LpStatus::optimal);
  CHECK(r.objective == 36);
  CHECK(r.x == vec({2, 6}));

  LinearProgram bad(2);
  bad.add(vec({1, 1}), Relation::le, 1);
  bad.add(vec({1, 1}), Relation::ge, 2);
  const auto rb = solve_lp(bad);
  REQUIRE(rb.status == LpStatus::infeasible);
  CHECK(verify_farkas(bad, rb.farkas));

  LinearProgram open(2);
  open.sense = Sense::maximize;
  open.c = vec({1, 0});
  open.add(vec({1, -1}), Relation::le, 1);
  CHECK(solve_lp(open).status == LpStatus::unbounded);
}

TEST_CASE("equalities, negative right-hand sides and redundancy") {
  LinearProgram lp(3);
  lp.c = vec({1, 2, 3});
  lp.add(vec({1, 1, 1}), Relation::eq, 1);
  lp.add(vec({2, 2, 2}), Relation::eq, 2);  // redundant copy
  lp.add(vec({-1, 0, 0}), Relation::le, q(-1, 3));
  const auto r = solve_lp(lp);
  REQUIRE(r.status == LpStatus::optimal);
  CHECK(r.objective == 1);
  CHECK(is_feasible_point(lp, r.x));

  LinearProgram empty(0);
  empty.add(RationalVector(0), Relation::eq, 1);
  const auto re = solve_lp(empty);
  REQUIRE(re.status == LpStatus::infeasible);
  CHECK(verify_farkas(empty, re.farkas));
}

TEST_CASE("farkas verification rejects bogus multipliers") {
  LinearProgram lp(1);
  lp.add(vec({1}), Relation::ge, 2);
  lp.add(vec({1}), Relation::le, 1);
  CHECK(verify_farkas(lp, vec({-1, 1})));
  CHECK_FALSE(verify_farkas(lp, vec({1, -1})));
  CHECK_FALSE(verify_farkas(lp, vec({0, 0})));
}

TEST_CASE("property: simplex agrees with vertex enumeration in the plane") {
  Gen gen(21);
  int infeasible = 0;
  for (int trial = 0; trial < 400; ++trial) {
    LinearProgram lp(2);
    lp.sense = gen.coin() ? Sense::minimize : Sense::maximize;
    lp.c = vec({gen.integer(-5, 5), gen.integer(-5, 5)});
    lp.add(vec({1, 0}), Relation::le, 10);
    lp.add(vec({0, 1}), Relation::le, 10);
    const int k = gen.integer(1, 4);
    for (int r = 0; r < k; ++r) {
      const auto rel = static_cast<Relation>(gen.integer(0, 2));
      lp.add(vec({gen.integer(-4, 4), gen.integer(-4, 4)}), rel, gen.integer(-6, 12));
    }
    const auto oracle = vertex_optimum(lp);
    const auto r = solve_lp(lp);
    if (!oracle) {
      ++infeasible;
      REQUIRE(r.status == LpStatus::infeasible);
      CHECK(verify_farkas(lp, r.farkas));
    } else {
      REQUIRE(r.status == LpStatus::optimal);
      CHECK(r.objective == *oracle);
      CHECK(is_feasible_point(lp, r.x));
    }
  }
  CHECK(infeasible > 10);
}
