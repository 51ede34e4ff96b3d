#include "bobw/eating.hpp"

#include <stdexcept>

namespace bobw {

DseResult dse(const Instance& instance) {
  const int n = instance.agents();
  const int m = instance.goods();

  DseResult out;
  out.x = FractionalAllocation::Zero(n, m);
  EatingTrace& trace = out.trace;
  trace.finish_time.assign(m, Rational(0));
  trace.segments.assign(n, {});
  for (int i = 0; i < n; ++i) trace.preference.push_back(instance.preference(i));

  std::vector<Rational> supply(m, Rational(1));
  std::vector<bool> finished(m, false);
  std::vector<std::size_t> cursor(n, 0);  // position in each agent's preference
  Rational now = 0;
  int remaining = m;

  while (remaining > 0) {
    // Current target of each agent and total speed on each good.
    std::vector<int> target(n);
    std::vector<Rational> speed(m, Rational(0));
    for (int i = 0; i < n; ++i) {
      const auto& pref = trace.preference[i];
      while (finished[pref[cursor[i]]]) ++cursor[i];
      target[i] = pref[cursor[i]];
      speed[target[i]] += instance.weight(i);
    }

    Rational step = -1;
    for (int g = 0; g < m; ++g) {
      if (finished[g] || speed[g] == 0) continue;
      const Rational d = supply[g] / speed[g];
      if (step < 0 || d < step) step = d;
    }

    const Rational next = now + step;
    for (int i = 0; i < n; ++i) {
      const int g = target[i];
      out.x(i, g) += instance.weight(i) * step;
      auto& segs = trace.segments[i];
      if (!segs.empty() && segs.back().good == g && segs.back().end == now)
        segs.back().end = next;
      else
        segs.push_back({g, now, next});
    }

    FinishEvent event{next, {}};
    for (int g = 0; g < m; ++g) {
      if (finished[g] || speed[g] == 0) continue;
      supply[g] -= speed[g] * step;
      if (supply[g] == 0) {
        finished[g] = true;
        trace.finish_time[g] = next;
        event.goods.push_back(g);
        --remaining;
      }
    }
    trace.events.push_back(std::move(event));
    now = next;
  }
  trace.end_time = now;
  return out;
}

std::vector<int> eaten(const EatingTrace& trace, int agent, const Rational& t) {
  if (agent < 0 || agent >= static_cast<int>(trace.segments.size()))
    throw std::out_of_range("agent index out of range");
  if (t < 0 || t > trace.end_time)
    throw std::out_of_range("time " + to_string(t) + " outside [0, " + to_string(trace.end_time) + "]");
  const auto& pref = trace.preference[agent];
  if (t == trace.end_time) return pref;
  int current = -1;
  for (const auto& s : trace.segments[agent])
    if (s.start <= t && t < s.end) {
      current = s.good;
      break;
    }
  std::vector<int> prefix;
  for (int g : pref) {
    if (g == current) break;
    prefix.push_back(g);
  }
  return prefix;
}

void write_trace(std::ostream& os, const EatingTrace& trace) {
  for (const auto& e : trace.events) {
    os << "t=" << to_string(e.time) << " finished={";
    for (std::size_t k = 0; k < e.goods.size(); ++k) os << (k ? "," : "") << e.goods[k];
    os << "}\n";
  }
  for (std::size_t i = 0; i < trace.segments.size(); ++i) {
    os << "agent " << i << ":";
    for (const auto& s : trace.segments[i])
      os << " g" << s.good << "[" << to_string(s.start) << "," << to_string(s.end) << ")";
    os << "\n";
  }
}

}  // namespace bobw
