#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bobw/core.hpp"

namespace bobw {

struct Witness {
  int i = -1;
  int j = -1;
  int g = -1;
  int g2 = -1;       // second good where the notion has two (WEF11 more/less)
  Rational lhs;
  Rational rhs;
  int support = -1;  // index of the failing support allocation, if any
  std::vector<int> group_s, group_t;
  std::string detail;
};

/// Verdict for one notion. Failing reports always carry a witness whose
/// inequality lhs >= rhs is violated; passing reports may carry one for
/// existential notions.
struct FairnessReport {
  std::string notion;
  bool holds = true;
  std::optional<Witness> witness;

  /// `<notion> <holds> [witness i=.. j=.. g=.. lhs=p/q rhs=p/q]`
  std::string line() const;
};

/// For additive valuations: every i, j has g in A_j with
/// w_j (v_i(A_i) + y v_i(g)) >= w_i (v_i(A_j) - x v_i(g)); empty A_j passes.
/// Other valuations are accepted only for x, y in {0, 1}, using
/// w_j v_i(A_i + g) >= w_i v_i(A_j - g) with the same g on both sides.
FairnessReport check_wef_xy(const Instance& instance, const IntegralAllocation& a,
                            const Rational& x, const Rational& y);

/// relative_slack s loosens every comparison by s * v_i(G) in i's utility.
FairnessReport check_wprop1(const Instance& instance, const IntegralAllocation& a,
                            const Rational& relative_slack = 0);
FairnessReport check_wef_one_one_more_less(const Instance& instance, const IntegralAllocation& a,
                                           const Rational& relative_slack = 0);

/// Unweighted EF1 from bundle evaluations only.
FairnessReport check_ef1_general(const Instance& instance, const IntegralAllocation& a);

/// Matrix form: additive valuations only.
FairnessReport check_exante_wef(const Instance& instance, const FractionalAllocation& x);
/// Lottery form: exact expectations over the support, any valuation.
FairnessReport check_exante_wef(const Instance& instance, const Lottery& lottery);

/// Every prefix of every agent's (tie-broken) preference order.
FairnessReport check_wsd_ef(const Instance& instance, const FractionalAllocation& x);

/// Additive: linear value; XOS: value under the additive witness clause.
FairnessReport check_wprop_fractional(const Instance& instance, const FractionalAllocation& x);

inline constexpr int kMaxWgfAgents = 6;

struct GroupImprovement {
  bool improving = false;
  Rational optimum;              // max total weighted gain; > 0 iff improving
  RationalMatrix reallocation;   // |S| x m, rows in S order, when improving
};

/// Decides whether S can reallocate the union of T's holdings so that
/// w_S v_i(X'_i) >= w_T v_i(X_i) for all i in S with one strict.
GroupImprovement group_improvement(const Instance& instance, const FractionalAllocation& x,
                                   const std::vector<int>& s, const std::vector<int>& t);

/// All nonempty S, T; additive valuations, n <= kMaxWgfAgents.
FairnessReport check_wgf(const Instance& instance, const FractionalAllocation& x);

/// Runs `check` on every support allocation and returns the first failure,
/// tagging its witness with the support index.
template <class Check>
FairnessReport check_every_support(const Lottery& lottery, Check&& check) {
  FairnessReport combined;
  for (std::size_t h = 0; h < lottery.size(); ++h) {
    FairnessReport r = check(lottery.support()[h].allocation);
    combined.notion = r.notion;
    if (!r.holds) {
      if (!r.witness) r.witness.emplace();
      r.witness->support = static_cast<int>(h);
      return r;
    }
  }
  return combined;
}

}  // namespace bobw
