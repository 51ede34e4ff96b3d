#include "bobw/pipelines.hpp"

#include <stdexcept>

#include "bobw/decomp.hpp"
#include "bobw/picking.hpp"

namespace bobw {

namespace {

struct Decomposed {
  DseResult dse;
  Lottery lottery;
};

Decomposed eat_and_decompose(const Instance& instance) {
  DseResult d = dse(instance);
  Lottery lottery = decompose(d.x, build_ug_bihierarchy(instance, d.x));
  return {std::move(d), std::move(lottery)};
}

// Every support allocation replays from its stopping-time sequence, which
// satisfies the WEF(1,1) prefix condition (and is recursively balanced when
// `balanced` is requested).
FairnessReport replay_report(const Instance& instance, const EatingTrace& trace,
                             const Lottery& lottery, bool balanced) {
  const std::string notion = balanced ? "rb-replay" : "picking-replay";
  for (std::size_t h = 0; h < lottery.size(); ++h) {
    const auto& y = lottery.support()[h].allocation;
    const PickingSequence pi = stopping_time_sequence(instance, trace, y);
    std::string problem;
    if (!(run_picking_sequence(instance, pi) == y))
      problem = "sequence " + to_string(pi) + " does not reproduce the allocation";
    else if (!prefix_wef_condition(pi, instance.weights(), 1, 1).holds)
      problem = "sequence " + to_string(pi) + " violates the WEF(1,1) prefix condition";
    else if (balanced && !is_recursively_balanced(pi, instance.agents()))
      problem = "sequence " + to_string(pi) + " is not recursively balanced";
    if (!problem.empty()) {
      Witness w;
      w.support = static_cast<int>(h);
      w.lhs = 0;
      w.rhs = 1;
      w.detail = problem;
      return {notion, false, w};
    }
  }
  return {notion, true, std::nullopt};
}

void require_equal(const Instance& instance, const char* pipeline) {
  if (!instance.equal_entitlements())
    throw std::invalid_argument(std::string(pipeline) + " needs equal entitlements");
}

}  // namespace

bool PipelineResult::all_hold() const {
  for (const auto& r : reports)
    if (!r.holds) return false;
  return true;
}

PipelineResult bobw_additive(const Instance& instance) {
  if (!instance.all_of_kind(ValuationKind::additive))
    throw std::invalid_argument("bobw needs additive valuations");
  auto [d, lottery] = eat_and_decompose(instance);
  PipelineResult r{"bobw", d.x, lottery, {}, {}, d.trace, std::nullopt};
  r.reports.push_back(check_wsd_ef(instance, d.x));
  r.reports.push_back(check_exante_wef(instance, d.x));
  r.reports.push_back(check_every_support(
      lottery, [&](const IntegralAllocation& y) { return check_wef_xy(instance, y, 1, 1); }));
  r.reports.push_back(check_every_support(
      lottery, [&](const IntegralAllocation& y) { return check_wprop1(instance, y); }));
  const bool equal = instance.equal_entitlements();
  if (equal) {
    auto ef1 = check_every_support(
        lottery, [&](const IntegralAllocation& y) { return check_wef_xy(instance, y, 1, 0); });
    ef1.notion = "ef1";
    r.reports.push_back(ef1);
  }
  r.reports.push_back(replay_report(instance, d.trace, lottery, equal));
  return r;
}

PipelineResult bobw_xos(const Instance& instance) {
  const int n = instance.agents(), m = instance.goods();
  std::vector<Valuation> witnesses;
  for (int i = 0; i < n; ++i) {
    const auto kind = kind_of(instance.valuation(i));
    if (kind != ValuationKind::xos && kind != ValuationKind::additive)
      throw std::invalid_argument("xos pipeline needs XOS (or additive) valuations");
    witnesses.push_back(Additive{additive_witness(instance.valuation(i), m)});
  }
  // Preference prefixes come from the additive witnesses f_i.
  const Instance derived(instance.weights(), witnesses, m, instance.good_order());
  FractionalAllocation x(n, m);
  for (int i = 0; i < n; ++i) x.row(i).setConstant(instance.weight(i));
  Lottery lottery = decompose(x, build_ug_bihierarchy(derived, x));

  PipelineResult r{"xos", x, lottery, {}, {}, std::nullopt, std::nullopt};
  r.reports.push_back(check_wprop_fractional(instance, x));
  r.reports.push_back(check_every_support(
      lottery, [&](const IntegralAllocation& y) { return check_wprop1(instance, y); }));
  return r;
}

PipelineResult bobw_multidemand(const Instance& instance) {
  require_equal(instance, "multidemand pipeline");
  for (const auto& v : instance.valuations()) {
    const auto kind = kind_of(v);
    if (kind != ValuationKind::additive && kind != ValuationKind::multidemand)
      throw std::invalid_argument("multidemand pipeline needs additive or multi-demand valuations");
  }
  auto [d, lottery] = eat_and_decompose(instance);
  PipelineResult r{"multidemand", d.x, lottery, {}, {}, d.trace, std::nullopt};
  r.reports.push_back(check_exante_wef(instance, lottery));
  r.reports.push_back(check_every_support(
      lottery, [&](const IntegralAllocation& y) { return check_ef1_general(instance, y); }));
  return r;
}

PipelineResult bobw_cancelable(const Instance& instance) {
  require_equal(instance, "cancelable pipeline");
  for (int i = 0; i < instance.agents(); ++i)
    if (const auto* o = std::get_if<Oracle>(&instance.valuation(i)); o && !is_cancelable(*o))
      throw std::invalid_argument("agent " + std::to_string(i) + " is not cancelable");
  auto [d, lottery] = eat_and_decompose(instance);
  PipelineResult r{"cancelable", d.x, lottery, {}, {}, d.trace, std::nullopt};
  r.reports.push_back(check_wsd_ef(instance, d.x));
  r.reports.push_back(check_every_support(
      lottery, [&](const IntegralAllocation& y) { return check_ef1_general(instance, y); }));
  r.reports.push_back(replay_report(instance, d.trace, lottery, true));
  r.notes.push_back("exante-ef unverified-by-design");
  return r;
}

PipelineResult bobw_groupfair(const Instance& instance, const MwnOptions& options) {
  GroupfairResult g = groupfair_lottery(instance, options);
  PipelineResult r{"groupfair", g.fractional, g.lottery, {}, {}, std::nullopt, g.mwn.prices};
  if (instance.agents() <= kMaxWgfAgents)
    r.reports.push_back(check_wgf(instance, g.fractional));
  else
    r.notes.push_back("wgf skipped: more than " + std::to_string(kMaxWgfAgents) + " agents");
  r.reports.push_back(verify_ce(instance, to_double(g.fractional), g.mwn.prices, 1e-6));
  const Rational slack = g.exact ? Rational(0) : Rational(1, 10000);
  if (!g.exact) r.notes.push_back("X rationalized from the dynamics; ex-post checks use slack 1/10000");
  r.reports.push_back(check_every_support(
      g.lottery, [&](const IntegralAllocation& y) { return check_wprop1(instance, y, slack); }));
  r.reports.push_back(check_every_support(g.lottery, [&](const IntegralAllocation& y) {
    return check_wef_one_one_more_less(instance, y, slack);
  }));
  return r;
}

std::vector<IntegralAllocation> all_allocations(int agents, int goods) {
  std::vector<IntegralAllocation> out;
  std::vector<int> owner(goods, 0);
  for (;;) {
    out.emplace_back(agents, owner);
    int g = goods - 1;
    while (g >= 0 && owner[g] == agents - 1) owner[g--] = 0;
    if (g < 0) break;
    ++owner[g];
  }
  return out;
}

LinearProgram exante_wef_lp(const Instance& instance, const std::vector<IntegralAllocation>& allocations) {
  const int n = instance.agents();
  const auto k = static_cast<Eigen::Index>(allocations.size());
  LinearProgram lp(k);
  lp.add(RationalVector::Ones(k), Relation::eq, 1);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      RationalVector row(k);
      for (Eigen::Index h = 0; h < k; ++h) {
        const auto bundles = allocations[h].bundles();
        const Valuation& v = instance.valuation(i);
        row(h) = instance.weight(j) * value_of(v, bundles[i]) - instance.weight(i) * value_of(v, bundles[j]);
      }
      lp.add(row, Relation::ge, 0);
    }
  return lp;
}

Rational default_incompatibility_weight(const Rational& x, const Rational& y) {
  if (x + y == 2) return Rational(1, 4);
  const Rational lo = y / (2 + y - x);
  return (lo + Rational(1, 2)) / 2;
}

Instance incompatibility_instance(const Rational& w1) {
  std::vector<Valuation> v(2, Additive{{1, 1}});
  return Instance({w1, 1 - w1}, v, 2);
}

Instance general_valuations_instance() {
  Oracle one{std::vector<Rational>(16, Rational(1))};
  one.table[0] = 0;
  return Instance({Rational(2, 3), Rational(1, 3)}, {one, Additive{{1, 1, 1, 1}}}, 4);
}

Instance heavy_light_instance() {
  const Additive heavy_lover{{6, 1, 1, 1}};
  const Additive light_only{{0, 1, 1, 1}};
  const Rational third(1, 3);
  return Instance({third, third, third}, {heavy_lover, heavy_lover, light_only}, 4);
}

Instance multidemand_sd_instance() {
  const MultiDemand unit{1, {1, 1, 1}};
  const Rational third(1, 3);
  return Instance({third, third, third}, {unit, unit, unit}, 3);
}

Lottery multidemand_sd_lottery() {
  const Rational third(1, 3);
  return Lottery({{third, IntegralAllocation::from_bundles(3, {{0, 1}, {2}, {}})},
                  {third, IntegralAllocation::from_bundles(3, {{2}, {0}, {1}})},
                  {third, IntegralAllocation::from_bundles(3, {{}, {1}, {0, 2}})}});
}

namespace {

std::string owners_string(const IntegralAllocation& a) {
  std::string s = "(";
  const auto b = a.bundles();
  for (std::size_t i = 0; i < b.size(); ++i) {
    s += i ? "|" : "";
    for (std::size_t k = 0; k < b[i].size(); ++k) s += (k ? "," : "") + std::to_string(b[i][k]);
  }
  return s + ")";
}

std::string farkas_string(const RationalVector& y) {
  std::string s = "[";
  for (Eigen::Index k = 0; k < y.size(); ++k) s += (k ? " " : "") + to_string(y(k));
  return s + "]";
}

// Exists a distribution over `allowed` meeting `lp`'s constraints? Records the
// verdict and, when infeasible, a re-verified Farkas certificate.
bool infeasible_with_certificate(const LinearProgram& lp, ReplayResult& out, const std::string& what) {
  const LpResult r = solve_lp(lp);
  if (r.status == LpStatus::infeasible) {
    const bool ok = verify_farkas(lp, r.farkas);
    out.transcript.push_back(what + ": infeasible; Farkas multipliers " + farkas_string(r.farkas) +
                             (ok ? " (verified)" : " (FAILED verification)"));
    return ok;
  }
  std::string point;
  if (r.status == LpStatus::optimal) point = " e.g. probabilities " + farkas_string(r.x);
  out.transcript.push_back(what + ": feasible" + point);
  return false;
}

ReplayResult replay_incompatibility(const ReplayParams& p) {
  if (p.x < 0 || p.x > 1 || p.y < 0 || p.y > 1)
    throw std::invalid_argument("x and y must lie in [0, 1]");
  ReplayResult out{"wef-xy-incompatibility", false, {}};
  const bool sanity = p.x + p.y == 2;
  const Rational lo = p.y / (2 + p.y - p.x);
  Rational w1 = p.w1 ? *p.w1 : default_incompatibility_weight(p.x, p.y);
  if (w1 <= 0 || w1 >= 1) throw std::invalid_argument("w1 must lie in (0, 1)");
  if (!sanity && (w1 <= lo || w1 >= Rational(1, 2)))
    throw std::invalid_argument("w1 must lie in (" + to_string(lo) + ", 1/2)");

  const Instance instance = incompatibility_instance(w1);
  out.transcript.push_back("x=" + to_string(p.x) + " y=" + to_string(p.y) + " w=(" + to_string(w1) +
                           ", " + to_string(1 - w1) + ")" +
                           (sanity ? " [x+y=2: no impossibility, expecting a feasible lottery]"
                                   : " interval (" + to_string(lo) + ", 1/2)"));
  std::vector<IntegralAllocation> allowed;
  for (const auto& a : all_allocations(2, 2)) {
    const bool ok = check_wef_xy(instance, a, p.x, p.y).holds;
    out.transcript.push_back("allocation " + owners_string(a) + (ok ? " is" : " is not") + " WEF(x,y)");
    if (ok) allowed.push_back(a);
  }
  const LinearProgram lp = exante_wef_lp(instance, allowed);
  if (sanity) {
    const LpResult r = solve_lp(lp);
    out.certified = r.status == LpStatus::optimal && is_feasible_point(lp, r.x);
    out.transcript.push_back(std::string("ex-ante WEF lottery over WEF(x,y) allocations: ") +
                             (out.certified ? "feasible, probabilities " + farkas_string(r.x) : "infeasible"));
    return out;
  }
  out.certified = infeasible_with_certificate(lp, out, "ex-ante WEF lottery over WEF(x,y) allocations");
  return out;
}

ReplayResult replay_general() {
  ReplayResult out{"general-valuations", false, {}};
  const Instance instance = general_valuations_instance();
  const auto all = all_allocations(2, 4);

  // min p_4 over ex-ante WEF distributions.
  LinearProgram lp = exante_wef_lp(instance, all);
  int full = -1;
  for (std::size_t h = 0; h < all.size(); ++h)
    if (all[h].bundle(0).size() == 4) full = static_cast<int>(h);
  lp.c(full) = 1;
  const LpResult r = solve_lp(lp);
  const bool bound = r.status == LpStatus::optimal && r.objective == Rational(1, 2);
  out.transcript.push_back("min P[agent 0 gets all goods] over ex-ante WEF lotteries = " +
                           (r.status == LpStatus::optimal ? to_string(r.objective) : std::string("n/a")));

  const auto& everything = all[full];
  const auto wprop1 = check_wprop1(instance, everything);
  const auto wef11 = check_wef_xy(instance, everything, 1, 1);
  const auto wef11ml = check_wef_one_one_more_less(instance, everything);
  out.transcript.push_back("all goods to agent 0: " + wprop1.line());
  out.transcript.push_back("all goods to agent 0: " + wef11.line());
  out.transcript.push_back("all goods to agent 0: " + wef11ml.line());
  const bool expost_fail = !wprop1.holds && wprop1.witness->i == 1 && !wef11.holds && wef11.witness->i == 1 &&
                           !wef11ml.holds;

  std::vector<IntegralAllocation> prop_ok, wef_ok;
  for (const auto& a : all) {
    if (check_wprop1(instance, a).holds) prop_ok.push_back(a);
    if (check_wef_xy(instance, a, 1, 1).holds) wef_ok.push_back(a);
  }
  const bool c1 = infeasible_with_certificate(exante_wef_lp(instance, prop_ok), out,
                                              "ex-ante WEF lottery over WPROP1 allocations");
  const bool c2 = infeasible_with_certificate(exante_wef_lp(instance, wef_ok), out,
                                              "ex-ante WEF lottery over WEF(1,1) allocations");
  out.certified = bound && expost_fail && c1 && c2;
  return out;
}

ReplayResult replay_heavy_light(const ReplayParams& p) {
  if (p.x < 0 || p.x > 1 || p.y < 0 || p.y > 1)
    throw std::invalid_argument("x and y must lie in [0, 1]");
  ReplayResult out{"groupfair-remark", false, {}};
  const Instance instance = heavy_light_instance();
  const MwnResult mwn = max_weighted_nash(instance);
  if (!mwn.exact) {
    out.transcript.push_back("no exact weighted Nash allocation found");
    return out;
  }
  const RationalMatrix& x = *mwn.exact;
  std::string row;
  for (int i = 0; i < 3; ++i) {
    row = "X row " + std::to_string(i) + ":";
    for (int g = 0; g < 4; ++g) row += " " + to_string(x(i, g));
    out.transcript.push_back(row);
  }
  const auto wgf = check_wgf(instance, x);
  out.transcript.push_back("exact X: " + wgf.line());

  RationalMatrix moved = x;
  const Rational eps(1, 100);
  moved(2, 1) -= eps;
  moved(0, 1) += eps;
  const auto pair = group_improvement(instance, moved, {1, 2}, {0, 2});
  out.transcript.push_back("light good 1 shifted by 1/100 to agent 0: S={1,2} T={0,2} gain " +
                           to_string(pair.optimum));

  std::vector<IntegralAllocation> allowed;
  for (const auto& a : all_allocations(3, 4))
    if (check_wef_xy(instance, a, p.x, p.y).holds) allowed.push_back(a);
  // Distribution over WEF(x,y) allocations with marginal exactly X.
  const auto k = static_cast<Eigen::Index>(allowed.size());
  LinearProgram lp(k);
  lp.add(RationalVector::Ones(k), Relation::eq, 1);
  for (int i = 0; i < 3; ++i)
    for (int g = 0; g < 4; ++g) {
      RationalVector r(k);
      for (Eigen::Index h = 0; h < k; ++h) r(h) = allowed[h].owner(g) == i ? 1 : 0;
      lp.add(r, Relation::eq, x(i, g));
    }
  const bool lp_ok = infeasible_with_certificate(
      lp, out, "lottery over WEF(" + to_string(p.x) + "," + to_string(p.y) + ") allocations with marginal X");
  out.certified = wgf.holds && pair.improving && lp_ok;
  return out;
}

ReplayResult replay_multidemand() {
  ReplayResult out{"multidemand-sd", false, {}};
  const Instance instance = multidemand_sd_instance();
  const DseResult d = dse(instance);
  const Lottery hand = multidemand_sd_lottery();
  const bool same = marginal_matrix(hand) == d.x;
  out.transcript.push_back(std::string("hand-built lottery marginal ") + (same ? "equals" : "differs from") +
                           " the eating allocation (all 1/3)");
  const RationalMatrix e = expected_values(instance, hand);
  const auto bad = check_exante_wef(instance, hand);
  out.transcript.push_back("hand-built lottery: E[v_0(A_0)]=" + to_string(e(0, 0)) +
                           " E[v_0(A_1)]=" + to_string(e(0, 1)) + "; " + bad.line());
  const Lottery ug = decompose(d.x, build_ug_bihierarchy(instance, d.x));
  const auto good = check_exante_wef(instance, ug);
  out.transcript.push_back("utility-guarantee lottery: " + good.line());

  // Worst envy E[v_0(A_0) - v_0(A_1)] over all lotteries with marginal X.
  const auto all = all_allocations(3, 3);
  const auto k = static_cast<Eigen::Index>(all.size());
  LinearProgram lp(k);
  lp.add(RationalVector::Ones(k), Relation::eq, 1);
  for (int i = 0; i < 3; ++i)
    for (int g = 0; g < 3; ++g) {
      RationalVector r(k);
      for (Eigen::Index h = 0; h < k; ++h) r(h) = all[h].owner(g) == i ? 1 : 0;
      lp.add(r, Relation::eq, d.x(i, g));
    }
  for (Eigen::Index h = 0; h < k; ++h) {
    const auto b = all[h].bundles();
    lp.c(h) = value_of(instance.valuation(0), b[0]) - value_of(instance.valuation(0), b[1]);
  }
  const LpResult r = solve_lp(lp);
  if (r.status == LpStatus::optimal)
    out.transcript.push_back("min E[v_0(A_0) - v_0(A_1)] over lotteries with marginal X = " + to_string(r.objective));
  out.certified = same && !bad.holds && e(0, 0) == Rational(2, 3) && e(0, 1) == 1 && good.holds;
  return out;
}

}  // namespace

ReplayResult replay_counterexample(const std::string& name, const ReplayParams& params) {
  if (name == "wef-xy-incompatibility") return replay_incompatibility(params);
  if (name == "general-valuations") return replay_general();
  if (name == "groupfair-remark") return replay_heavy_light(params);
  if (name == "multidemand-sd") return replay_multidemand();
  throw std::invalid_argument("unknown counterexample '" + name + "'");
}

}  // namespace bobw
