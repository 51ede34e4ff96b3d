#pragma once

#include <ostream>
#include <vector>

#include "bobw/core.hpp"

namespace bobw {

struct Segment {
  int good;
  Rational start;
  Rational end;
};

/// All goods whose supply ran out at `time`.
struct FinishEvent {
  Rational time;
  std::vector<int> goods;
};

struct EatingTrace {
  std::vector<Rational> finish_time;          // per good
  std::vector<std::vector<Segment>> segments;  // per agent, in time order
  std::vector<FinishEvent> events;
  std::vector<std::vector<int>> preference;    // per agent, copied from the instance
  Rational end_time;                           // equals m
};

struct DseResult {
  FractionalAllocation x;
  EatingTrace trace;
};

/// Every agent eats its favourite unfinished good at speed w_i until all
/// goods are gone. Event driven over exact finish times.
DseResult dse(const Instance& instance);

/// Prefix of the agent's preference order eaten by time t: everything before
/// the good it eats right after t (all of G at t = end_time). Goods finishing
/// exactly at t are included.
std::vector<int> eaten(const EatingTrace& trace, int agent, const Rational& t);

/// `t=<p/q> finished={...}` lines followed by a per-agent segment table.
void write_trace(std::ostream& os, const EatingTrace& trace);

}  // namespace bobw
