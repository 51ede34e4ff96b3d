#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "bobw/checkers.hpp"
#include "bobw/decomp.hpp"
#include "bobw/io.hpp"
#include "bobw/picking.hpp"
#include "bobw/pipelines.hpp"

using namespace bobw;

namespace {

// 0: every promised guarantee verified; 1: some check failed; 2: bad input.
constexpr int kFailed = 1;
constexpr int kBadInput = 2;

Json report_json(const FairnessReport& r) {
  Json j;
  j["notion"] = r.notion;
  j["holds"] = r.holds;
  j["line"] = r.line();
  return j;
}

int print_reports(const std::vector<FairnessReport>& reports) {
  bool ok = true;
  for (const auto& r : reports) {
    std::cout << r.line() << "\n";
    ok = ok && r.holds;
  }
  return ok ? 0 : kFailed;
}

int run_solve(const std::string& mode, const std::string& path, bool trace, bool verbose,
              const std::string& out) {
  const Instance instance = load_instance_file(path);
  auto pipeline = [&]() -> PipelineResult {
    if (mode == "bobw") return bobw_additive(instance);
    if (mode == "xos") return bobw_xos(instance);
    if (mode == "multidemand") return bobw_multidemand(instance);
    if (mode == "cancelable") return bobw_cancelable(instance);
    MwnOptions opts;
    if (verbose)
      opts.progress = [](long it, double obj, double gap) {
        std::fprintf(stderr, "iter %ld objective %.12g gap %.3e\n", it, obj, gap);
      };
    return bobw_groupfair(instance, opts);
  };
  const PipelineResult result = pipeline();

  if (trace && result.trace) write_trace(std::cout, *result.trace);
  if (verbose) {
    std::cerr << "support size " << result.lottery.size() << "\n";
    write_constraints(std::cerr, build_ug_bihierarchy(instance, result.fractional), result.fractional);
  }

  Json doc = lottery_to_json(result.lottery);
  doc["pipeline"] = result.name;
  doc["fractional"] = matrix_to_json(result.fractional);
  if (result.trace) {
    Json times = Json::array();
    for (const auto& t : result.trace->finish_time) times.push_back(rational_to_json(t));
    doc["finish_times"] = times;
  }
  if (result.prices) {
    Json prices = Json::array();
    for (Eigen::Index g = 0; g < result.prices->size(); ++g) prices.push_back((*result.prices)(g));
    doc["prices"] = prices;
  }
  Json reports = Json::array();
  for (const auto& r : result.reports) reports.push_back(report_json(r));
  doc["reports"] = reports;
  doc["notes"] = result.notes;

  if (out.empty()) {
    std::cout << doc.dump(2) << "\n";
  } else {
    std::ofstream f(out);
    if (!f) throw std::runtime_error("cannot write " + out);
    f << doc.dump(2) << "\n";
  }
  for (const auto& note : result.notes) std::cerr << "note: " << note << "\n";
  return print_reports(result.reports);
}

std::vector<std::string> split_notions(const std::string& list) {
  std::vector<std::string> out;
  std::stringstream in(list);
  std::string item;
  while (std::getline(in, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

int run_verify(const std::string& instance_path, const std::string& lottery_path, const std::string& notions) {
  const Instance instance = load_instance_file(instance_path);
  const Lottery lottery = load_lottery_file(lottery_path, instance.goods());
  if (lottery.agents() != instance.agents())
    throw std::invalid_argument("lottery has " + std::to_string(lottery.agents()) + " agents, instance " +
                                std::to_string(instance.agents()));
  const FractionalAllocation x = marginal_matrix(lottery);
  std::vector<FairnessReport> reports;
  auto expost = [&](auto check) { return check_every_support(lottery, check); };
  auto wef = [&](Rational a, Rational b, const char* tag) {
    auto r = expost([&](const IntegralAllocation& y) { return check_wef_xy(instance, y, a, b); });
    r.notion = tag;
    return r;
  };
  for (const auto& n : split_notions(notions)) {
    if (n == "wef11") reports.push_back(wef(1, 1, "wef11"));
    else if (n == "wef1") reports.push_back(wef(1, 0, "wef1"));
    else if (n == "wwef1") reports.push_back(wef(0, 1, "wwef1"));
    else if (n == "wef") reports.push_back(wef(0, 0, "wef"));
    else if (n == "wprop1")
      reports.push_back(expost([&](const IntegralAllocation& y) { return check_wprop1(instance, y); }));
    else if (n == "wef11ml")
      reports.push_back(
          expost([&](const IntegralAllocation& y) { return check_wef_one_one_more_less(instance, y); }));
    else if (n == "ef1")
      reports.push_back(expost([&](const IntegralAllocation& y) { return check_ef1_general(instance, y); }));
    else if (n == "exante-wef") reports.push_back(check_exante_wef(instance, lottery));
    else if (n == "wsd-ef") reports.push_back(check_wsd_ef(instance, x));
    else if (n == "wprop") reports.push_back(check_wprop_fractional(instance, x));
    else if (n == "wgf") reports.push_back(check_wgf(instance, x));
    else throw std::invalid_argument("unknown notion '" + n + "'");
  }
  return print_reports(reports);
}

int run_verify_sequence(const std::string& instance_path, const std::string& pi_text, const std::string& x,
                        const std::string& y) {
  const Instance instance = load_instance_file(instance_path);
  const PickingSequence pi = parse_picking_sequence(pi_text);
  const Rational rx = parse_rational(x), ry = parse_rational(y);
  const IntegralAllocation a = run_picking_sequence(instance, pi);
  const auto bundles = a.bundles();
  for (int i = 0; i < instance.agents(); ++i) std::cout << "agent " << i << ": " << bundle_to_json(bundles[i]).dump() << "\n";
  const PrefixVerdict v = prefix_wef_condition(pi, instance.weights(), rx, ry);
  if (v.holds)
    std::cout << "prefix-condition true\n";
  else
    std::cout << "prefix-condition false prefix=" << v.prefix << " i=" << v.i << " j=" << v.j
              << " lhs=" << to_string(v.lhs) << " rhs=" << to_string(v.rhs) << "\n";
  std::cout << "recursively-balanced " << (is_recursively_balanced(pi, instance.agents()) ? "true" : "false")
            << "\n";
  const auto report = check_wef_xy(instance, a, rx, ry);
  std::cout << report.line() << "\n";
  return report.holds ? 0 : kFailed;
}

int run_replay(const std::string& name, const std::string& x, const std::string& y, const std::string& w1) {
  ReplayParams p;
  p.x = parse_rational(x);
  p.y = parse_rational(y);
  if (!w1.empty()) p.w1 = parse_rational(w1);
  const ReplayResult r = replay_counterexample(name, p);
  for (const auto& line : r.transcript) std::cout << line << "\n";
  std::cout << r.name << (r.certified ? " certified" : " NOT certified") << "\n";
  return r.certified ? 0 : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lotteries over indivisible goods with entitlements"};
  app.require_subcommand(1);

  std::string mode, instance_path, lottery_path, out, notions = "wef11,wprop1", pi, x = "1", y = "1", w1, name;
  bool trace = false, verbose = false;

  auto* solve = app.add_subcommand("solve", "compute a lottery and verify its guarantees");
  solve->add_option("mode", mode, "pipeline")
      ->required()
      ->check(CLI::IsMember({"bobw", "groupfair", "xos", "multidemand", "cancelable"}));
  solve->add_option("instance", instance_path, "instance file")->required();
  solve->add_flag("--trace", trace, "print the eating trace");
  solve->add_flag("--verbose", verbose, "solver diagnostics and constraint dump on stderr");
  solve->add_option("--out", out, "write the lottery JSON here instead of stdout");

  auto* verify = app.add_subcommand("verify", "check fairness notions of a lottery");
  verify->add_option("instance", instance_path)->required();
  verify->add_option("lottery", lottery_path)->required();
  verify->add_option("--notions", notions,
                     "comma list of wef11,wef1,wwef1,wef,wprop1,wef11ml,ef1,exante-wef,wsd-ef,wprop,wgf");

  auto* seq = app.add_subcommand("verify-sequence", "run a picking sequence and test the prefix condition");
  seq->add_option("instance", instance_path)->required();
  seq->add_option("pi", pi, "whitespace-separated agent indices")->required();
  seq->add_option("--x", x);
  seq->add_option("--y", y);

  auto* replay = app.add_subcommand("replay", "replay a counterexample with exact LPs");
  replay->add_option("name", name)
      ->required()
      ->check(CLI::IsMember({"wef-xy-incompatibility", "general-valuations", "groupfair-remark", "multidemand-sd"}));
  replay->add_option("--x", x);
  replay->add_option("--y", y);
  replay->add_option("--w1", w1, "override w_1 for wef-xy-incompatibility");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kBadInput;
  }

  try {
    if (*solve) return run_solve(mode, instance_path, trace, verbose, out);
    if (*verify) return run_verify(instance_path, lottery_path, notions);
    if (*seq) return run_verify_sequence(instance_path, pi, x, y);
    return run_replay(name, x, y, w1);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return kBadInput;
}
