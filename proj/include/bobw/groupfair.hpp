#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "bobw/checkers.hpp"
#include "bobw/core.hpp"

namespace bobw {

struct MwnOptions {
  double gap_tolerance = 1e-9;
  long max_iterations = 1'000'000;
  /// Snap the dynamics' iterate to an exact market equilibrium (see
  /// max_weighted_nash). Disable to inspect the raw dynamics.
  bool polish = true;
  /// Called every `progress_every` iterations with (iteration, objective, gap).
  std::function<void(long, double, double)> progress;
  long progress_every = 1000;
};

struct MwnResult {
  Matrix<double> allocation;
  Vector<double> prices;
  /// Exact equilibrium allocation and prices when polishing succeeded.
  std::optional<RationalMatrix> exact;
  std::optional<RationalVector> exact_prices;
  long iterations = 0;
  double gap = 0;        // duality gap of the last dynamics iterate
  double objective = 0;  // sum_i w_i ln v_i(X_i) of the returned allocation
  std::vector<int> unvalued_goods;  // valued by nobody; given to agent 0
};

/// Weighted Nash welfare maximizer via proportional-response dynamics on the
/// Fisher market with budgets w_i, run to the duality-gap tolerance. When
/// polishing, the near-optimal prices suggest the max-bang-per-buck edges; an
/// exact LP over those edges then yields an exact equilibrium, which is the
/// exact optimum. Throws std::invalid_argument for non-additive valuations or
/// an agent that values nothing.
MwnResult max_weighted_nash(const Instance& instance, const MwnOptions& options = {});

template <class Scalar>
Matrix<Scalar> values_as(const Instance& instance) {
  const RationalMatrix v = instance.additive_values();
  if constexpr (std::is_same_v<Scalar, Rational>)
    return v;
  else
    return to_double(v).template cast<Scalar>();
}

/// p_g = sum_i x_ig w_i v_i(g) / v_i(X_i).
template <class Scalar>
Vector<Scalar> ce_prices(const Instance& instance, const Matrix<Scalar>& x) {
  const Matrix<Scalar> v = values_as<Scalar>(instance);
  const Vector<Scalar> u = (v.cwiseProduct(x)).rowwise().sum();
  Vector<Scalar> p = Vector<Scalar>::Zero(instance.goods());
  for (int i = 0; i < instance.agents(); ++i) {
    if (u(i) == Scalar(0))
      throw std::invalid_argument("agent " + std::to_string(i) + " has zero utility");
    const Scalar scale = Scalar(instance.weight(i)) / u(i);
    p += (x.row(i).cwiseProduct(v.row(i)) * scale).transpose();
  }
  return p;
}

/// The three equilibrium conditions at tolerance tol: prices positive exactly
/// on valued goods; held goods (x_ig > tol) maximize bang per buck within
/// relative tol; spending P(X_i) within tol of w_i.
FairnessReport verify_ce(const Instance& instance, const Matrix<double>& x, const Vector<double>& p,
                         double tol);

/// w_j v_j(g)/v_j(X_j) >= w_i v_i(g)/v_i(X_i) (relative tol) for every i, j
/// and every g with x_jg > tol.
FairnessReport mwn_gradient_inequality_check(const Instance& instance, const Matrix<double>& x,
                                             double tol);

/// Entry-wise best rational approximation (denominator <= max_denominator),
/// then each column's largest entry absorbs the rounding so columns sum to 1.
RationalMatrix rationalize(const Matrix<double>& x, std::int64_t max_denominator = 1'000'000);

struct GroupfairResult {
  MwnResult mwn;
  RationalMatrix fractional;  // exact equilibrium, or the rationalized iterate
  bool exact = false;
  Lottery lottery;
};

/// MWN, exact (or rationalized) X, utility-guarantee bihierarchy, decomposition.
GroupfairResult groupfair_lottery(const Instance& instance, const MwnOptions& options = {});

}  // namespace bobw
