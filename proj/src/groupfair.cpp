#include "bobw/groupfair.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "bobw/decomp.hpp"
#include "bobw/exact_lp.hpp"

namespace bobw {

namespace {

using Cells = std::vector<std::pair<int, int>>;

// Exact equilibrium whose spending is confined to `edges`: b_ig >= 0 on the
// edges, prices p_g, and beta_i = 1 / (max bang per buck of i). An exact
// Fisher equilibrium maximizes weighted Nash welfare.
std::optional<std::pair<RationalMatrix, RationalVector>> equilibrium_on(
    const Instance& instance, const RationalMatrix& v, const std::vector<int>& goods,
    const Cells& edges) {
  const int n = instance.agents();
  const int k = static_cast<int>(edges.size());
  const int gcount = static_cast<int>(goods.size());
  const int vars = k + gcount + n;
  std::vector<int> good_slot(instance.goods(), -1);
  for (int s = 0; s < gcount; ++s) good_slot[goods[s]] = s;
  auto b_var = [](int e) { return e; };
  auto p_var = [&](int g) { return k + good_slot[g]; };
  auto beta_var = [&](int i) { return k + gcount + i; };

  LinearProgram lp(vars);
  std::set<std::pair<int, int>> on_edge(edges.begin(), edges.end());
  for (int i = 0; i < n; ++i)
    for (int g : goods) {
      if (v(i, g) == 0) continue;
      RationalVector row = RationalVector::Zero(vars);
      row(p_var(g)) = 1;
      row(beta_var(i)) = -v(i, g);
      lp.add(row, on_edge.count({i, g}) ? Relation::eq : Relation::ge, 0);
    }
  for (int i = 0; i < n; ++i) {
    RationalVector row = RationalVector::Zero(vars);
    for (int e = 0; e < k; ++e)
      if (edges[e].first == i) row(b_var(e)) = 1;
    lp.add(row, Relation::eq, instance.weight(i));
  }
  for (int g : goods) {
    RationalVector row = RationalVector::Zero(vars);
    for (int e = 0; e < k; ++e)
      if (edges[e].second == g) row(b_var(e)) = 1;
    row(p_var(g)) = -1;
    lp.add(row, Relation::eq, 0);
  }
  const LpResult r = solve_lp(lp);
  if (r.status != LpStatus::optimal) return std::nullopt;

  RationalMatrix x = RationalMatrix::Zero(n, instance.goods());
  RationalVector p = RationalVector::Zero(instance.goods());
  for (int g : goods) {
    p(g) = r.x(p_var(g));
    if (p(g) == 0) return std::nullopt;
  }
  for (int e = 0; e < k; ++e) {
    const auto [i, g] = edges[e];
    x(i, g) = r.x(b_var(e)) / p(g);
  }
  return std::make_pair(x, p);
}

double objective_of(const Instance& instance, const Matrix<double>& v, const Matrix<double>& x) {
  double obj = 0;
  for (int i = 0; i < instance.agents(); ++i)
    obj += to_double(instance.weight(i)) * std::log(v.row(i).dot(x.row(i)));
  return obj;
}

}  // namespace

MwnResult max_weighted_nash(const Instance& instance, const MwnOptions& options) {
  const int n = instance.agents(), m = instance.goods();
  const RationalMatrix vr = instance.additive_values();
  const Matrix<double> v = to_double(vr);
  Vector<double> w(n);
  for (int i = 0; i < n; ++i) w(i) = to_double(instance.weight(i));

  for (int i = 0; i < n; ++i)
    if (v.row(i).maxCoeff() <= 0)
      throw std::invalid_argument("agent " + std::to_string(i) + " values every good at 0");

  MwnResult out;
  std::vector<int> valued;
  for (int g = 0; g < m; ++g) {
    if (v.col(g).maxCoeff() > 0)
      valued.push_back(g);
    else
      out.unvalued_goods.push_back(g);
  }

  // Bids start proportional to values.
  Matrix<double> b = Matrix<double>::Zero(n, m);
  for (int i = 0; i < n; ++i) {
    const double total = v.row(i).sum();
    for (int g : valued) b(i, g) = w(i) * v(i, g) / total;
  }

  Matrix<double> x = Matrix<double>::Zero(n, m);
  Vector<double> p = Vector<double>::Zero(m);
  Vector<double> u(n);
  double constant = 0;
  for (int i = 0; i < n; ++i) constant += w(i) * (std::log(w(i)) - 1);

  long iter = 0;
  for (;; ++iter) {
    p = b.colwise().sum().transpose();
    for (int g : valued) x.col(g) = b.col(g) / p(g);
    u = v.cwiseProduct(x).rowwise().sum();

    double primal = 0, dual = p.sum() + constant;
    for (int i = 0; i < n; ++i) {
      primal += w(i) * std::log(u(i));
      double alpha = 0;
      for (int g : valued) alpha = std::max(alpha, v(i, g) / p(g));
      dual += w(i) * std::log(alpha);
    }
    out.gap = dual - primal;
    out.objective = primal;
    if (options.progress && options.progress_every > 0 && iter % options.progress_every == 0)
      options.progress(iter, primal, out.gap);
    if (out.gap <= options.gap_tolerance || iter >= options.max_iterations) break;

    for (int i = 0; i < n; ++i)
      for (int g : valued) b(i, g) = w(i) * v(i, g) * x(i, g) / u(i);
  }
  out.iterations = iter;
  for (int g : out.unvalued_goods) x(0, g) = 1;
  out.allocation = x;
  out.prices = p;
  for (int g : out.unvalued_goods) out.prices(g) = 0;

  if (!options.polish) return out;

  // Candidate spending graphs: near-MBB edges at the current prices for a
  // range of tolerances, then the iterate's own support at several cutoffs.
  std::vector<Cells> candidates;
  auto push = [&](Cells c) {
    if (!c.empty() && std::find(candidates.begin(), candidates.end(), c) == candidates.end())
      candidates.push_back(std::move(c));
  };
  for (double delta = 1e-3; delta >= 1e-12; delta /= 10) {
    Cells c;
    for (int i = 0; i < n; ++i) {
      double alpha = 0;
      for (int g : valued) alpha = std::max(alpha, v(i, g) / p(g));
      for (int g : valued)
        if (v(i, g) > 0 && v(i, g) / p(g) >= alpha * (1 - delta)) c.emplace_back(i, g);
    }
    push(std::move(c));
  }
  for (double cut = 1e-2; cut >= 1e-10; cut /= 10) {
    Cells c;
    for (int i = 0; i < n; ++i)
      for (int g : valued)
        if (v(i, g) > 0 && x(i, g) > cut) c.emplace_back(i, g);
    push(std::move(c));
  }

  for (const auto& edges : candidates) {
    auto eq = equilibrium_on(instance, vr, valued, edges);
    if (!eq) continue;
    RationalMatrix exact = eq->first;
    for (int g : out.unvalued_goods) exact(0, g) = 1;
    out.exact = exact;
    out.exact_prices = eq->second;
    out.allocation = to_double(exact);
    out.prices = to_double(Matrix<Rational>(eq->second));
    out.objective = objective_of(instance, v, out.allocation);
    break;
  }
  return out;
}

FairnessReport verify_ce(const Instance& instance, const Matrix<double>& x, const Vector<double>& p,
                         double tol) {
  const int n = instance.agents(), m = instance.goods();
  const Matrix<double> v = values_as<double>(instance);
  auto fail = [](int i, int g, double lhs, double rhs, std::string detail) {
    Witness w;
    w.i = i;
    w.g = g;
    w.lhs = Rational(lhs);
    w.rhs = Rational(rhs);
    w.detail = std::move(detail);
    return FairnessReport{"ce", false, w};
  };
  for (int g = 0; g < m; ++g) {
    const bool valued = v.col(g).maxCoeff() > 0;
    if (valued != (p(g) > tol))
      return fail(-1, g, p(g), tol, valued ? "valued good without a positive price"
                                           : "unvalued good with a positive price");
  }
  for (int i = 0; i < n; ++i) {
    double alpha = 0;
    for (int g = 0; g < m; ++g)
      if (v(i, g) > 0) alpha = std::max(alpha, v(i, g) / p(g));
    for (int g = 0; g < m; ++g) {
      if (x(i, g) <= tol || v.col(g).maxCoeff() <= 0) continue;
      const double bang = v(i, g) / p(g);
      if (bang < alpha * (1 - tol))
        return fail(i, g, bang, alpha, "held good is not maximum bang per buck");
    }
    const double spent = x.row(i).dot(p);
    const double budget = to_double(instance.weight(i));
    if (std::abs(spent - budget) > tol) return fail(i, -1, spent, budget, "spending differs from budget");
  }
  return {"ce", true, std::nullopt};
}

FairnessReport mwn_gradient_inequality_check(const Instance& instance, const Matrix<double>& x,
                                             double tol) {
  const int n = instance.agents(), m = instance.goods();
  const Matrix<double> v = values_as<double>(instance);
  const Vector<double> u = v.cwiseProduct(x).rowwise().sum();
  const double inf = std::numeric_limits<double>::infinity();
  auto marginal = [&](int i, int g) {
    const double wv = to_double(instance.weight(i)) * v(i, g);
    if (u(i) > 0) return wv / u(i);
    return wv > 0 ? inf : 0.0;
  };
  for (int j = 0; j < n; ++j)
    for (int g = 0; g < m; ++g) {
      if (x(j, g) <= tol) continue;
      const double lhs = marginal(j, g);
      for (int i = 0; i < n; ++i) {
        if (i == j) continue;
        const double rhs = marginal(i, g);
        if (std::isinf(rhs) ? !std::isinf(lhs) : lhs < rhs - tol * std::max(1.0, std::abs(rhs))) {
          Witness w;
          w.i = i;
          w.j = j;
          w.g = g;
          w.lhs = Rational(lhs);
          w.rhs = std::isinf(rhs) ? Rational(0) : Rational(rhs);
          w.detail = std::isinf(rhs) ? "agent i has zero utility" : "w_j v_j(g)/u_j below w_i v_i(g)/u_i";
          return FairnessReport{"mwn-gradient", false, w};
        }
      }
    }
  return {"mwn-gradient", true, std::nullopt};
}

RationalMatrix rationalize(const Matrix<double>& x, std::int64_t max_denominator) {
  RationalMatrix r(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index g = 0; g < x.cols(); ++g)
      r(i, g) = approximate(std::clamp(x(i, g), 0.0, 1.0), max_denominator);
  for (Eigen::Index g = 0; g < x.cols(); ++g) {
    Eigen::Index top = 0;
    for (Eigen::Index i = 1; i < x.rows(); ++i)
      if (r(i, g) > r(top, g)) top = i;
    Rational others = 0;
    for (Eigen::Index i = 0; i < x.rows(); ++i)
      if (i != top) others += r(i, g);
    r(top, g) = 1 - others;
    if (r(top, g) < 0) throw std::logic_error("rationalization produced a negative entry");
  }
  return r;
}

GroupfairResult groupfair_lottery(const Instance& instance, const MwnOptions& options) {
  MwnResult mwn = max_weighted_nash(instance, options);
  const bool exact = mwn.exact.has_value();
  RationalMatrix x = exact ? *mwn.exact : rationalize(mwn.allocation);
  const Bihierarchy h = build_ug_bihierarchy(instance, x);
  Lottery lottery = decompose(x, h);
  return GroupfairResult{std::move(mwn), std::move(x), exact, std::move(lottery)};
}

}  // namespace bobw
