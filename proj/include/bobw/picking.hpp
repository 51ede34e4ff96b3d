#pragma once

#include <string>
#include <vector>

#include "bobw/core.hpp"
#include "bobw/eating.hpp"

namespace bobw {

/// Agent index per pick; length m.
using PickingSequence = std::vector<int>;

PickingSequence parse_picking_sequence(const std::string& text);
std::string to_string(const PickingSequence& pi);

/// Each agent in turn takes its most preferred available good.
IntegralAllocation run_picking_sequence(const Instance& instance, const PickingSequence& pi);

struct PrefixVerdict {
  bool holds = true;
  int prefix = -1;  // length of the first violating prefix
  int i = -1;
  int j = -1;
  Rational lhs;     // (t_i + y) / w_i
  Rational rhs;     // (t_j - x) / w_j
};

/// (t_i + y)/w_i >= (t_j - x)/w_j for every prefix and ordered pair.
PrefixVerdict prefix_wef_condition(const PickingSequence& pi, const std::vector<Rational>& weights,
                                   const Rational& x, const Rational& y);

bool is_recursively_balanced(const PickingSequence& pi, int agents);

/// Instance on which a prefix violation turns into a WEF(x,y) violation:
/// goods 0..prefix-1 are worth 1 to everyone, the rest 0. With the identity
/// tie-break the first `prefix` picks take exactly those goods.
Instance adversarial_instance(const std::vector<Rational>& weights, int goods, int prefix);

struct StoppingTime {
  int agent;
  int good;
  int rank;  // k: position of the good within the agent's bundle, 1-based
  Rational time;
};

/// s(g) = min(t(g), k / w_i) for the k-th preferred good of every bundle.
/// Throws std::invalid_argument ("infeasible Y") when a bundle breaks the
/// cardinality bounds or a stopping time falls outside ((k-1)/w_i, k/w_i].
std::vector<StoppingTime> stopping_times(const Instance& instance, const EatingTrace& trace,
                                         const IntegralAllocation& y);

/// Owners of the goods sorted by ascending (stopping time, good_order rank).
PickingSequence stopping_time_sequence(const Instance& instance, const EatingTrace& trace,
                                       const IntegralAllocation& y);

}  // namespace bobw
