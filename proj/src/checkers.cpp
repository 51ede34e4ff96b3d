#include "bobw/checkers.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "bobw/exact_lp.hpp"

namespace bobw {

namespace {

Bundle with(Bundle b, int g) {
  if (std::find(b.begin(), b.end(), g) == b.end()) {
    b.push_back(g);
    std::sort(b.begin(), b.end());
  }
  return b;
}

Bundle without(Bundle b, int g) {
  b.erase(std::remove(b.begin(), b.end(), g), b.end());
  return b;
}

Bundle all_goods(int m) {
  Bundle b(m);
  for (int g = 0; g < m; ++g) b[g] = g;
  return b;
}

FairnessReport fail(std::string notion, Witness w) {
  return FairnessReport{std::move(notion), false, std::move(w)};
}

void require_additive(const Instance& instance, const char* notion) {
  if (!instance.all_of_kind(ValuationKind::additive))
    throw std::invalid_argument(std::string(notion) + " needs additive valuations");
}

std::string group_string(const std::vector<int>& g) {
  std::string s = "{";
  for (std::size_t k = 0; k < g.size(); ++k) s += (k ? "," : "") + std::to_string(g[k]);
  return s + "}";
}

}  // namespace

std::string FairnessReport::line() const {
  std::ostringstream os;
  os << notion << " " << (holds ? "true" : "false");
  if (witness) {
    const Witness& w = *witness;
    os << " witness";
    if (w.support >= 0) os << " support=" << w.support;
    if (w.i >= 0) os << " i=" << w.i;
    if (w.j >= 0) os << " j=" << w.j;
    if (w.g >= 0) os << " g=" << w.g;
    if (w.g2 >= 0) os << " g2=" << w.g2;
    if (!w.group_s.empty()) os << " S=" << group_string(w.group_s);
    if (!w.group_t.empty()) os << " T=" << group_string(w.group_t);
    os << " lhs=" << to_string(w.lhs) << " rhs=" << to_string(w.rhs);
    if (!w.detail.empty()) os << " (" << w.detail << ")";
  }
  return os.str();
}

FairnessReport check_wef_xy(const Instance& instance, const IntegralAllocation& a,
                            const Rational& x, const Rational& y) {
  if (x < 0 || x > 1 || y < 0 || y > 1) throw std::invalid_argument("x and y must lie in [0, 1]");
  const std::string notion = "wef(" + to_string(x) + "," + to_string(y) + ")";
  const bool additive = instance.all_of_kind(ValuationKind::additive);
  if (!additive && !((x == 0 || x == 1) && (y == 0 || y == 1)))
    throw std::invalid_argument("WEF(x,y) with fractional x or y needs additive valuations");

  const int n = instance.agents();
  const auto bundles = a.bundles();
  for (int i = 0; i < n; ++i) {
    const Valuation& v = instance.valuation(i);
    const Rational own = value_of(v, bundles[i]);
    for (int j = 0; j < n; ++j) {
      if (i == j || bundles[j].empty()) continue;
      const Rational& wi = instance.weight(i);
      const Rational& wj = instance.weight(j);
      Witness best;
      bool ok = false;
      if (additive) {
        // Both sides improve with v_i(g), so i's favourite good in A_j decides.
        int g = bundles[j].front();
        for (int h : bundles[j])
          if (single_value(v, h) > single_value(v, g)) g = h;
        const Rational vg = single_value(v, g);
        best.g = g;
        best.lhs = wj * (own + y * vg);
        best.rhs = wi * (value_of(v, bundles[j]) - x * vg);
        ok = best.lhs >= best.rhs;
      } else {
        for (int g : bundles[j]) {
          const Rational lhs = wj * (y == 1 ? value_of(v, with(bundles[i], g)) : own);
          const Rational rhs = wi * value_of(v, x == 1 ? without(bundles[j], g) : bundles[j]);
          if (best.g < 0 || lhs - rhs > best.lhs - best.rhs) {
            best.g = g;
            best.lhs = lhs;
            best.rhs = rhs;
          }
          if (lhs >= rhs) {
            ok = true;
            break;
          }
        }
      }
      if (!ok) {
        best.i = i;
        best.j = j;
        return fail(notion, best);
      }
    }
  }
  return {notion, true, std::nullopt};
}

FairnessReport check_wprop1(const Instance& instance, const IntegralAllocation& a,
                            const Rational& relative_slack) {
  const int m = instance.goods();
  const Bundle everything = all_goods(m);
  const auto bundles = a.bundles();
  for (int i = 0; i < instance.agents(); ++i) {
    const Valuation& v = instance.valuation(i);
    const Rational total = value_of(v, everything);
    const Rational target = instance.weight(i) * total;
    const Rational slack = relative_slack * total;
    const Rational own = value_of(v, bundles[i]);
    if (own + slack >= target) continue;
    Witness w;
    w.i = i;
    w.lhs = own + slack;
    w.rhs = target;
    bool ok = false;
    for (int g = 0; g < m && !ok; ++g) {
      if (a.owner(g) == i) continue;
      const Rational lhs = value_of(v, with(bundles[i], g)) + slack;
      if (w.g < 0 || lhs > w.lhs) {
        w.g = g;
        w.lhs = lhs;
      }
      ok = lhs >= target;
    }
    if (!ok) return fail("wprop1", w);
  }
  return {"wprop1", true, std::nullopt};
}

FairnessReport check_wef_one_one_more_less(const Instance& instance, const IntegralAllocation& a,
                                           const Rational& relative_slack) {
  const int n = instance.agents(), m = instance.goods();
  const Bundle everything = all_goods(m);
  const auto bundles = a.bundles();
  for (int i = 0; i < n; ++i) {
    const Valuation& v = instance.valuation(i);
    const Rational slack = relative_slack * value_of(v, everything);
    // Best single addition to A_i, over all of G.
    int add = -1;
    Rational more = value_of(v, bundles[i]);
    for (int g = 0; g < m; ++g) {
      if (a.owner(g) == i) continue;
      const Rational val = value_of(v, with(bundles[i], g));
      if (add < 0 || val > more) {
        add = g;
        more = val;
      }
    }
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      int remove = -1;
      Rational less = value_of(v, bundles[j]);
      for (int g : bundles[j]) {
        const Rational val = value_of(v, without(bundles[j], g));
        if (remove < 0 || val < less) {
          remove = g;
          less = val;
        }
      }
      const Rational lhs = instance.weight(j) * (more + slack);
      const Rational rhs = instance.weight(i) * less;
      if (lhs < rhs) {
        Witness w;
        w.i = i;
        w.j = j;
        w.g = add;
        w.g2 = remove;
        w.lhs = lhs;
        w.rhs = rhs;
        return fail("wef11ml", w);
      }
    }
  }
  return {"wef11ml", true, std::nullopt};
}

FairnessReport check_ef1_general(const Instance& instance, const IntegralAllocation& a) {
  const int n = instance.agents();
  const auto bundles = a.bundles();
  for (int i = 0; i < n; ++i) {
    const Valuation& v = instance.valuation(i);
    const Rational own = value_of(v, bundles[i]);
    for (int j = 0; j < n; ++j) {
      if (i == j || bundles[j].empty()) continue;
      Witness w;
      bool ok = false;
      for (int g : bundles[j]) {
        const Rational rest = value_of(v, without(bundles[j], g));
        if (w.g < 0 || rest < w.rhs) {
          w.g = g;
          w.rhs = rest;
        }
        if (own >= rest) {
          ok = true;
          break;
        }
      }
      if (!ok) {
        w.i = i;
        w.j = j;
        w.lhs = own;
        return fail("ef1", w);
      }
    }
  }
  return {"ef1", true, std::nullopt};
}

namespace {

FairnessReport exante_from_expectations(const Instance& instance, const RationalMatrix& u) {
  const int n = instance.agents();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const Rational lhs = instance.weight(j) * u(i, i);
      const Rational rhs = instance.weight(i) * u(i, j);
      if (lhs < rhs) {
        Witness w;
        w.i = i;
        w.j = j;
        w.lhs = lhs;
        w.rhs = rhs;
        w.detail = "E[v_i(A_i)]=" + to_string(u(i, i)) + " E[v_i(A_j)]=" + to_string(u(i, j));
        return fail("exante-wef", w);
      }
    }
  return {"exante-wef", true, std::nullopt};
}

}  // namespace

FairnessReport check_exante_wef(const Instance& instance, const FractionalAllocation& x) {
  if (!instance.all_of_kind(ValuationKind::additive))
    throw std::invalid_argument(
        "ex-ante WEF from a matrix needs additive valuations; pass the lottery instead");
  return exante_from_expectations(instance, cross_utilities(instance.additive_values(), x));
}

FairnessReport check_exante_wef(const Instance& instance, const Lottery& lottery) {
  return exante_from_expectations(instance, expected_values(instance, lottery));
}

FairnessReport check_wsd_ef(const Instance& instance, const FractionalAllocation& x) {
  const int n = instance.agents(), m = instance.goods();
  for (int i = 0; i < n; ++i) {
    const auto& pref = instance.preference(i);
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      Rational own = 0, other = 0;
      for (int k = 0; k < m; ++k) {
        own += x(i, pref[k]);
        other += x(j, pref[k]);
        const Rational lhs = instance.weight(j) * own;
        const Rational rhs = instance.weight(i) * other;
        if (lhs < rhs) {
          Witness w;
          w.i = i;
          w.j = j;
          w.g = pref[k];
          w.lhs = lhs;
          w.rhs = rhs;
          w.detail = "prefix of length " + std::to_string(k + 1);
          return fail("wsd-ef", w);
        }
      }
    }
  }
  return {"wsd-ef", true, std::nullopt};
}

FairnessReport check_wprop_fractional(const Instance& instance, const FractionalAllocation& x) {
  const int m = instance.goods();
  for (int i = 0; i < instance.agents(); ++i) {
    const Valuation& v = instance.valuation(i);
    const auto kind = kind_of(v);
    if (kind != ValuationKind::additive && kind != ValuationKind::xos)
      throw std::invalid_argument("fractional WPROP needs additive or XOS valuations");
    const auto f = additive_witness(v, m);
    Rational own = 0, total = 0;
    for (int g = 0; g < m; ++g) {
      own += x(i, g) * f[g];
      total += f[g];
    }
    const Rational rhs = instance.weight(i) * total;
    if (own < rhs) {
      Witness w;
      w.i = i;
      w.lhs = own;
      w.rhs = rhs;
      return fail("wprop", w);
    }
  }
  return {"wprop", true, std::nullopt};
}

GroupImprovement group_improvement(const Instance& instance, const FractionalAllocation& x,
                                   const std::vector<int>& s, const std::vector<int>& t) {
  require_additive(instance, "WGF");
  const int m = instance.goods();
  const RationalMatrix values = instance.additive_values();
  Rational ws = 0, wt = 0;
  for (int i : s) ws += instance.weight(i);
  for (int j : t) wt += instance.weight(j);

  // Pool of T's holdings; goods with nothing in the pool get no variables.
  std::vector<int> pool_goods;
  std::vector<Rational> pool;
  for (int g = 0; g < m; ++g) {
    Rational sum = 0;
    for (int j : t) sum += x(j, g);
    if (sum > 0) {
      pool_goods.push_back(g);
      pool.push_back(sum);
    }
  }
  const int k = static_cast<int>(pool_goods.size());
  const int vars = static_cast<int>(s.size()) * k;
  auto var = [&](int a, int b) { return a * k + b; };

  LinearProgram lp(vars);
  lp.sense = Sense::maximize;
  for (int b = 0; b < k; ++b) {
    RationalVector row = RationalVector::Zero(vars);
    for (std::size_t a = 0; a < s.size(); ++a) row(var(a, b)) = 1;
    lp.add(row, Relation::eq, pool[b]);
  }
  Rational baseline = 0;
  for (std::size_t a = 0; a < s.size(); ++a) {
    const int i = s[a];
    RationalVector row = RationalVector::Zero(vars);
    for (int b = 0; b < k; ++b) row(var(a, b)) = ws * values(i, pool_goods[b]);
    Rational held = 0;
    for (int g = 0; g < m; ++g) held += values(i, g) * x(i, g);
    const Rational floor_value = wt * held;
    baseline += floor_value;
    lp.add(row, Relation::ge, floor_value);
    lp.c += row;
  }

  GroupImprovement out;
  const LpResult r = solve_lp(lp);
  if (r.status != LpStatus::optimal) {
    // T's pool cannot give every member of S its w_T-scaled share.
    out.optimum = 0;
    return out;
  }
  out.optimum = r.objective - baseline;
  out.improving = out.optimum > 0;
  if (out.improving) {
    out.reallocation = RationalMatrix::Zero(static_cast<Eigen::Index>(s.size()), m);
    for (std::size_t a = 0; a < s.size(); ++a)
      for (int b = 0; b < k; ++b) out.reallocation(a, pool_goods[b]) = r.x(var(a, b));
  }
  return out;
}

FairnessReport check_wgf(const Instance& instance, const FractionalAllocation& x) {
  require_additive(instance, "WGF");
  const int n = instance.agents();
  if (n > kMaxWgfAgents)
    throw std::invalid_argument("WGF check enumerates subsets; at most " +
                                std::to_string(kMaxWgfAgents) + " agents");
  auto members = [n](unsigned mask) {
    std::vector<int> out;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) out.push_back(i);
    return out;
  };
  for (unsigned sm = 1; sm < (1u << n); ++sm)
    for (unsigned tm = 1; tm < (1u << n); ++tm) {
      const auto s = members(sm), t = members(tm);
      const auto imp = group_improvement(instance, x, s, t);
      if (imp.improving) {
        Witness w;
        w.group_s = s;
        w.group_t = t;
        w.lhs = 0;
        w.rhs = imp.optimum;
        w.detail = "S can reallocate T's holdings with total weighted gain " + to_string(imp.optimum);
        return fail("wgf", w);
      }
    }
  return {"wgf", true, std::nullopt};
}

}  // namespace bobw
