#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bobw/checkers.hpp"
#include "bobw/core.hpp"
#include "bobw/eating.hpp"
#include "bobw/exact_lp.hpp"
#include "bobw/groupfair.hpp"

namespace bobw {

struct PipelineResult {
  std::string name;
  FractionalAllocation fractional;
  Lottery lottery;
  /// Exactly the guarantees the pipeline promises: ex-ante notions on the
  /// fractional allocation or lottery, ex-post notions over every support.
  std::vector<FairnessReport> reports;
  std::vector<std::string> notes;
  std::optional<EatingTrace> trace;
  std::optional<Vector<double>> prices;

  bool all_hold() const;
};

/// Eating, utility-guarantee bihierarchy, decomposition. Reports wsd-ef,
/// exante-wef, wef(1,1), wprop1 and the stopping-time replay; with equal
/// entitlements also ef1 and recursive balance of the replay sequences.
PipelineResult bobw_additive(const Instance& instance);

/// Uniform x_ig = w_i decomposed along each agent's additive witness order.
/// Reports wprop on X and wprop1 (true XOS values) over the support.
PipelineResult bobw_xos(const Instance& instance);

/// Equal entitlements, additive or multi-demand agents. Reports ex-ante EF
/// over the produced lottery and ef1 over its support.
PipelineResult bobw_multidemand(const Instance& instance);

/// Equal entitlements, cancelable valuations (oracle tables are validated).
/// Reports wsd-ef, ef1 and the recursively balanced replay; ex-ante EF is
/// listed in notes as not verified.
PipelineResult bobw_cancelable(const Instance& instance);

/// Weighted-Nash route: reports wgf (n <= kMaxWgfAgents), ce, wprop1 and
/// wef11ml over the support (slack 1e-4 v_i(G) unless X is exact).
PipelineResult bobw_groupfair(const Instance& instance, const MwnOptions& options = {});

/// Every complete allocation of m goods to n agents, owner vectors in
/// lexicographic order.
std::vector<IntegralAllocation> all_allocations(int agents, int goods);

/// Variables: one probability per allocation. Constraints: probabilities sum
/// to 1 and the induced lottery is ex-ante WEF for every ordered pair.
LinearProgram exante_wef_lp(const Instance& instance, const std::vector<IntegralAllocation>& allocations);

struct ReplayParams {
  Rational x = 1;
  Rational y = 1;
  std::optional<Rational> w1;
};

struct ReplayResult {
  std::string name;
  bool certified = false;
  std::vector<std::string> transcript;
};

/// Names: wef-xy-incompatibility, general-valuations, groupfair-remark,
/// multidemand-sd. Throws std::invalid_argument for unknown names or bad
/// parameters.
ReplayResult replay_counterexample(const std::string& name, const ReplayParams& params = {});

/// Default w_1 for wef-xy-incompatibility: the midpoint of (y/(2+y-x), 1/2),
/// or 1/4 when x + y = 2 (no impossibility; the replay then expects a
/// feasible lottery).
Rational default_incompatibility_weight(const Rational& x, const Rational& y);

/// The two-agent, two-unit-good instance with weights (w1, 1 - w1).
Instance incompatibility_instance(const Rational& w1);
/// Weights 2/3, 1/3; agent 0 values every nonempty bundle at 1, agent 1 counts goods.
Instance general_valuations_instance();
/// Three equal agents; heavy good 0 worth 6, 6, 0; light goods 1..3 worth 1 to all.
Instance heavy_light_instance();
/// Three equal unit-demand agents, three goods of value 1.
Instance multidemand_sd_instance();
/// The three-allocation lottery with marginal all 1/3 that is not ex-ante EF.
Lottery multidemand_sd_lottery();

}  // namespace bobw
