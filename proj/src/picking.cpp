#include "bobw/picking.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace bobw {

PickingSequence parse_picking_sequence(const std::string& text) {
  std::istringstream in(text);
  PickingSequence pi;
  std::string token;
  while (in >> token) {
    std::size_t used = 0;
    int agent = -1;
    try {
      agent = std::stoi(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size() || agent < 0)
      throw std::invalid_argument("bad agent index '" + token + "' in picking sequence");
    pi.push_back(agent);
  }
  return pi;
}

std::string to_string(const PickingSequence& pi) {
  std::string s;
  for (std::size_t k = 0; k < pi.size(); ++k) s += (k ? " " : "") + std::to_string(pi[k]);
  return s;
}

IntegralAllocation run_picking_sequence(const Instance& instance, const PickingSequence& pi) {
  const int n = instance.agents(), m = instance.goods();
  if (static_cast<int>(pi.size()) != m)
    throw std::invalid_argument("picking sequence has " + std::to_string(pi.size()) +
                                " entries for " + std::to_string(m) + " goods");
  std::vector<int> owner(m, -1);
  std::vector<std::size_t> cursor(n, 0);
  for (int agent : pi) {
    if (agent < 0 || agent >= n) throw std::invalid_argument("picking sequence names agent " + std::to_string(agent));
    const auto& pref = instance.preference(agent);
    while (owner[pref[cursor[agent]]] != -1) ++cursor[agent];
    owner[pref[cursor[agent]]] = agent;
  }
  return IntegralAllocation(n, std::move(owner));
}

PrefixVerdict prefix_wef_condition(const PickingSequence& pi, const std::vector<Rational>& weights,
                                   const Rational& x, const Rational& y) {
  const int n = static_cast<int>(weights.size());
  for (const auto& w : weights)
    if (w <= 0) throw std::invalid_argument("weights must be positive");
  std::vector<int> t(n, 0);
  PrefixVerdict v;
  for (std::size_t len = 1; len <= pi.size(); ++len) {
    const int picker = pi[len - 1];
    if (picker < 0 || picker >= n) throw std::invalid_argument("picking sequence names agent " + std::to_string(picker));
    ++t[picker];
    // Only pairs with j = picker can become newly violated.
    const int j = picker;
    for (int i = 0; i < n; ++i) {
      if (i == j) continue;
      const Rational lhs = (t[i] + y) / weights[i];
      const Rational rhs = (t[j] - x) / weights[j];
      if (lhs < rhs) {
        v.holds = false;
        v.prefix = static_cast<int>(len);
        v.i = i;
        v.j = j;
        v.lhs = lhs;
        v.rhs = rhs;
        return v;
      }
    }
  }
  return v;
}

bool is_recursively_balanced(const PickingSequence& pi, int agents) {
  std::vector<int> t(agents, 0);
  for (int a : pi) {
    if (a < 0 || a >= agents) return false;
    ++t[a];
    const auto [lo, hi] = std::minmax_element(t.begin(), t.end());
    if (*hi - *lo > 1) return false;
  }
  return true;
}

Instance adversarial_instance(const std::vector<Rational>& weights, int goods, int prefix) {
  std::vector<Rational> values(goods, Rational(0));
  for (int g = 0; g < prefix && g < goods; ++g) values[g] = 1;
  std::vector<Valuation> vals(weights.size(), Additive{values});
  return Instance(weights, std::move(vals), goods);
}

std::vector<StoppingTime> stopping_times(const Instance& instance, const EatingTrace& trace,
                                         const IntegralAllocation& y) {
  const int n = instance.agents(), m = instance.goods();
  if (y.agents() != n || y.goods() != m) throw std::invalid_argument("infeasible Y: wrong shape");
  std::vector<StoppingTime> out;
  for (int i = 0; i < n; ++i) {
    const Rational& w = instance.weight(i);
    const Rational share = w * m;
    int count = 0;
    for (int g : instance.preference(i)) {
      if (y.owner(g) != i) continue;
      ++count;
      const Rational cap = Rational(count) / w;
      const Rational s = std::min(trace.finish_time.at(g), cap);
      if (s <= Rational(count - 1) / w)
        throw std::invalid_argument("infeasible Y: stopping time " + to_string(s) + " of good " +
                                    std::to_string(g) + " is not above " +
                                    to_string(Rational(count - 1) / w));
      out.push_back({i, g, count, s});
    }
    if (Rational(count) < Rational(floor(share)) || Rational(count) > Rational(ceil(share)))
      throw std::invalid_argument("infeasible Y: agent " + std::to_string(i) + " holds " +
                                  std::to_string(count) + " goods, outside floor/ceil of " +
                                  to_string(share));
  }
  return out;
}

PickingSequence stopping_time_sequence(const Instance& instance, const EatingTrace& trace,
                                       const IntegralAllocation& y) {
  auto times = stopping_times(instance, trace, y);
  std::sort(times.begin(), times.end(), [&](const StoppingTime& a, const StoppingTime& b) {
    if (a.time != b.time) return a.time < b.time;
    return instance.order_rank(a.good) < instance.order_rank(b.good);
  });
  PickingSequence pi;
  pi.reserve(times.size());
  for (const auto& s : times) pi.push_back(s.agent);
  return pi;
}

}  // namespace bobw
