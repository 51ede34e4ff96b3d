#include "bobw/decomp.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

#include "bobw/flow.hpp"

namespace bobw {

namespace {

struct Forest {
  std::vector<int> parent;      // per set, -1 for the root
  std::vector<int> cell_owner;  // smallest set containing the cell, -1 for the root
};

// Parent of a set is the first strictly later set (by size, then index) that
// contains it; laminarity makes that the minimal superset.
Forest build_forest(const std::vector<Constraint>& family, int cells) {
  const int k = static_cast<int>(family.size());
  std::vector<int> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return family[a].cells.size() < family[b].cells.size();
  });
  std::vector<std::vector<char>> member(k, std::vector<char>(cells, 0));
  for (int s = 0; s < k; ++s)
    for (int c : family[s].cells) member[s][c] = 1;

  Forest f{std::vector<int>(k, -1), std::vector<int>(cells, -1)};
  for (int p = 0; p < k; ++p) {
    const int a = order[p];
    if (family[a].cells.empty()) continue;
    for (int q = p + 1; q < k; ++q)
      if (member[order[q]][family[a].cells.front()]) {
        f.parent[a] = order[q];
        break;
      }
  }
  for (int c = 0; c < cells; ++c)
    for (int p = 0; p < k; ++p)
      if (member[order[p]][c]) {
        f.cell_owner[c] = order[p];
        break;
      }
  return f;
}

void check_laminar(const std::vector<Constraint>& family, int cells, const char* name) {
  std::vector<std::vector<char>> member(family.size(), std::vector<char>(cells, 0));
  for (std::size_t s = 0; s < family.size(); ++s) {
    const auto& cs = family[s].cells;
    if (!std::is_sorted(cs.begin(), cs.end()) || std::adjacent_find(cs.begin(), cs.end()) != cs.end())
      throw std::invalid_argument(std::string(name) + " set " + std::to_string(s) +
                                  " is not a sorted list of distinct cells");
    for (int c : cs) {
      if (c < 0 || c >= cells)
        throw std::invalid_argument(std::string(name) + " set " + std::to_string(s) +
                                    " has a cell out of range");
      member[s][c] = 1;
    }
    if (family[s].lower > family[s].upper)
      throw std::invalid_argument(std::string(name) + " set " + std::to_string(s) +
                                  " has lower quota above upper quota");
  }
  for (std::size_t a = 0; a < family.size(); ++a)
    for (std::size_t b = a + 1; b < family.size(); ++b) {
      std::size_t common = 0;
      for (int c : family[a].cells) common += member[b][c];
      if (common != 0 && common != family[a].cells.size() && common != family[b].cells.size())
        throw std::invalid_argument(std::string(name) + " is not laminar: sets " +
                                    std::to_string(a) + " and " + std::to_string(b) + " cross");
    }
}

std::int64_t clamp_quota(const Integer& q, std::int64_t cells) {
  if (q < 0) return 0;
  if (q > cells) return cells;
  return to_int64(q);
}

std::string set_name(const Bihierarchy& h, int family, int index) {
  const auto& c = (family == 1 ? h.family_one : h.family_two)[index];
  return "F" + std::to_string(family) + "[" + std::to_string(index) + "]" +
         (c.label.empty() ? "" : " " + c.label);
}

FeasibilityVerdict first_violation(const RationalMatrix& x, const Bihierarchy& h) {
  FeasibilityVerdict v;
  for (int family = 1; family <= 2; ++family) {
    const auto& sets = family == 1 ? h.family_one : h.family_two;
    for (std::size_t s = 0; s < sets.size(); ++s) {
      const Rational sum = constraint_sum(sets[s], x, h.goods);
      if (sum < Rational(sets[s].lower) || sum > Rational(sets[s].upper)) {
        v.feasible = false;
        v.family = family;
        v.index = static_cast<int>(s);
        v.sum = sum;
        return v;
      }
    }
  }
  return v;
}

}  // namespace

void validate_bihierarchy(const Bihierarchy& h) {
  if (h.agents < 1 || h.goods < 1) throw std::invalid_argument("bihierarchy needs agents and goods");
  check_laminar(h.family_one, h.cells(), "family one");
  check_laminar(h.family_two, h.cells(), "family two");
  if (!h.cell_order.empty()) {
    std::vector<int> sorted = h.cell_order;
    std::sort(sorted.begin(), sorted.end());
    for (int c = 0; c < h.cells(); ++c)
      if (static_cast<int>(sorted.size()) != h.cells() || sorted[c] != c)
        throw std::invalid_argument("cell_order is not a permutation of the cells");
  }
}

Bihierarchy build_ug_bihierarchy(const Instance& instance, const FractionalAllocation& x) {
  const int n = instance.agents(), m = instance.goods();
  if (x.rows() != n || x.cols() != m) throw std::invalid_argument("X has the wrong shape");
  validate_fractional(x);

  Bihierarchy h;
  h.agents = n;
  h.goods = m;
  auto add = [&](std::vector<Constraint>& family, std::vector<int> cells, std::string label) {
    std::sort(cells.begin(), cells.end());
    Constraint c{std::move(cells), 0, 0, std::move(label)};
    const Rational sum = constraint_sum(c, x, m);
    c.lower = floor(sum);
    c.upper = ceil(sum);
    family.push_back(std::move(c));
  };

  for (int g = 0; g < m; ++g) {
    std::vector<int> cells;
    for (int i = 0; i < n; ++i) cells.push_back(h.cell(i, g));
    add(h.family_one, cells, "column g" + std::to_string(g));
  }
  for (int i = 0; i < n; ++i) {
    const auto& pref = instance.preference(i);
    std::vector<int> prefix;
    for (int k = 0; k < m; ++k) {
      prefix.push_back(h.cell(i, pref[k]));
      add(h.family_two, prefix, "prefix agent " + std::to_string(i) + " top " + std::to_string(k + 1));
    }
    for (int g = 0; g < m; ++g)
      add(h.family_two, {h.cell(i, g)}, "cell agent " + std::to_string(i) + " g" + std::to_string(g));
    for (int g : pref) h.cell_order.push_back(h.cell(i, g));
  }
  return h;
}

Rational constraint_sum(const Constraint& c, const RationalMatrix& x, int goods) {
  Rational sum = 0;
  for (int cell : c.cells) sum += x(cell / goods, cell % goods);
  return sum;
}

std::string FeasibilityVerdict::describe(const Bihierarchy& h) const {
  if (feasible) return "feasible";
  const auto& c = (family == 1 ? h.family_one : h.family_two)[index];
  return set_name(h, family, index) + ": sum " + to_string(sum) + " outside [" + c.lower.str() +
         ", " + c.upper.str() + "]";
}

FeasibilityVerdict check_feasible(const IntegralAllocation& y, const Bihierarchy& h) {
  if (y.agents() != h.agents || y.goods() != h.goods)
    throw std::invalid_argument("allocation shape does not match the bihierarchy");
  return first_violation(y.matrix<Rational>(), h);
}

FeasibilityVerdict check_feasible(const RationalMatrix& x, const Bihierarchy& h) {
  if (x.rows() != h.agents || x.cols() != h.goods)
    throw std::invalid_argument("matrix shape does not match the bihierarchy");
  return first_violation(x, h);
}

IntegralPoint integral_point(const Bihierarchy& h, const std::vector<bool>& support_mask) {
  if (static_cast<int>(support_mask.size()) != h.cells())
    throw std::invalid_argument("support mask has the wrong length");
  std::vector<std::int64_t> lower(h.cells(), 0), upper(h.cells(), 0);
  for (int c = 0; c < h.cells(); ++c) upper[c] = support_mask[c] ? 1 : 0;
  return integral_point(h, lower, upper);
}

IntegralPoint integral_point(const Bihierarchy& h, const std::vector<std::int64_t>& cell_lower,
                             const std::vector<std::int64_t>& cell_upper) {
  validate_bihierarchy(h);
  const int cells = h.cells();
  if (static_cast<int>(cell_lower.size()) != cells || static_cast<int>(cell_upper.size()) != cells)
    throw std::invalid_argument("cell bounds have the wrong length");

  const Forest one = build_forest(h.family_one, cells);
  const Forest two = build_forest(h.family_two, cells);
  const int k1 = static_cast<int>(h.family_one.size());
  const int k2 = static_cast<int>(h.family_two.size());
  // Node 0 is the root of family one, node 1 the root of family two.
  auto node1 = [&](int s) { return s < 0 ? 0 : 2 + s; };
  auto node2 = [&](int s) { return s < 0 ? 1 : 2 + k1 + s; };

  Circulation circ(2 + k1 + k2);
  for (int s = 0; s < k1; ++s)
    circ.add_arc(node1(one.parent[s]), node1(s), clamp_quota(h.family_one[s].lower, cells),
                 clamp_quota(h.family_one[s].upper, cells));

  std::vector<int> order = h.cell_order;
  if (order.empty()) {
    order.resize(cells);
    std::iota(order.begin(), order.end(), 0);
  }
  std::vector<int> cell_arc(cells, -1);
  for (int c : order) {
    if (cell_lower[c] > cell_upper[c]) {
      // Contradictory cell bounds: report the cell itself.
      HoffmanCertificate cert;
      cert.nodes = {"cell " + std::to_string(c)};
      cert.lower_in = cell_lower[c];
      cert.upper_out = cell_upper[c];
      return {std::nullopt, cert};
    }
    cell_arc[c] = circ.add_arc(node1(one.cell_owner[c]), node2(two.cell_owner[c]), cell_lower[c],
                               cell_upper[c]);
  }
  for (int s = 0; s < k2; ++s)
    circ.add_arc(node2(s), node2(two.parent[s]), clamp_quota(h.family_two[s].lower, cells),
                 clamp_quota(h.family_two[s].upper, cells));
  circ.add_arc(1, 0, 0, cells);

  const auto result = circ.solve();
  if (!result.flows) {
    HoffmanCertificate cert;
    for (int v : result.cut->nodes) {
      if (v == 0)
        cert.nodes.push_back("root of family one");
      else if (v == 1)
        cert.nodes.push_back("root of family two");
      else if (v < 2 + k1)
        cert.nodes.push_back(set_name(h, 1, v - 2));
      else
        cert.nodes.push_back(set_name(h, 2, v - 2 - k1));
    }
    cert.lower_in = result.cut->lower_in;
    cert.upper_out = result.cut->upper_out;
    return {std::nullopt, cert};
  }
  RationalMatrix y = RationalMatrix::Zero(h.agents, h.goods);
  for (int c = 0; c < cells; ++c) y(c / h.goods, c % h.goods) = (*result.flows)[cell_arc[c]];
  return {y, std::nullopt};
}

Lottery decompose(const FractionalAllocation& x, const Bihierarchy& h) {
  validate_bihierarchy(h);
  if (x.rows() != h.agents || x.cols() != h.goods)
    throw std::invalid_argument("X shape does not match the bihierarchy");
  validate_fractional(x);
  if (const auto v = check_feasible(x, h); !v.feasible)
    throw std::invalid_argument("X is infeasible under the quotas: " + v.describe(h));

  const int cells = h.cells();
  RationalMatrix residual = x;
  Rational remaining = 1;
  std::vector<LotteryEntry> entries;
  std::map<std::vector<int>, std::size_t> seen;
  auto record = [&](const Rational& p, const RationalMatrix& y) {
    IntegralAllocation a = from_matrix(y);
    if (const auto it = seen.find(a.owners()); it != seen.end()) {
      entries[it->second].probability += p;
      return;
    }
    seen.emplace(a.owners(), entries.size());
    entries.push_back({p, std::move(a)});
  };

  Bihierarchy tight = h;
  for (;;) {
    bool integral = true;
    for (int c = 0; c < cells && integral; ++c) integral = is_integral(residual(c / h.goods, c % h.goods));
    if (integral) {
      record(remaining, residual);
      break;
    }

    // Quotas of the residual: floor/ceil of its sums, so every step's Y keeps
    // within the original quotas.
    std::vector<Rational> sums1, sums2;
    for (auto* fam : {&tight.family_one, &tight.family_two}) {
      auto& sums = fam == &tight.family_one ? sums1 : sums2;
      for (auto& c : *fam) {
        sums.push_back(constraint_sum(c, residual, h.goods));
        c.lower = floor(sums.back());
        c.upper = ceil(sums.back());
      }
    }
    std::vector<std::int64_t> lo(cells), up(cells);
    for (int c = 0; c < cells; ++c) {
      const Rational& v = residual(c / h.goods, c % h.goods);
      lo[c] = to_int64(floor(v));
      up[c] = to_int64(ceil(v));
    }
    const auto point = integral_point(tight, lo, up);
    if (!point.y) throw std::logic_error("no integral point inside a nonempty bihierarchy polytope");
    const RationalMatrix& y = *point.y;

    // Largest step keeping every fractional sum within its floor/ceil band.
    Rational lambda = 1;
    auto limit = [&](const Rational& s, const Rational& ys) {
      if (is_integral(s)) return;
      const Rational f(floor(s));
      lambda = std::min(lambda, ys > f ? Rational(s - f) : Rational(f + 1 - s));
    };
    for (std::size_t s = 0; s < sums1.size(); ++s)
      limit(sums1[s], constraint_sum(tight.family_one[s], y, h.goods));
    for (std::size_t s = 0; s < sums2.size(); ++s)
      limit(sums2[s], constraint_sum(tight.family_two[s], y, h.goods));
    for (int c = 0; c < cells; ++c)
      limit(residual(c / h.goods, c % h.goods), y(c / h.goods, c % h.goods));

    record(lambda * remaining, y);
    residual = (residual - lambda * y) / (1 - lambda);
    remaining *= 1 - lambda;
  }

  Lottery lottery(std::move(entries));
  if (marginal_matrix(lottery) != x) throw std::logic_error("decomposition does not reproduce X");
  return lottery;
}

void write_constraints(std::ostream& os, const Bihierarchy& h, const RationalMatrix& x) {
  for (int family = 1; family <= 2; ++family) {
    const auto& sets = family == 1 ? h.family_one : h.family_two;
    for (std::size_t s = 0; s < sets.size(); ++s)
      os << set_name(h, family, static_cast<int>(s)) << " " << sets[s].lower.str() << " "
         << sets[s].upper.str() << " " << to_string(constraint_sum(sets[s], x, h.goods)) << "\n";
  }
}

}  // namespace bobw
