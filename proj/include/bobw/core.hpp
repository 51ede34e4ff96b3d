#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "bobw/rational.hpp"

namespace bobw {

/// Sorted list of good indices.
using Bundle = std::vector<int>;

/// Oracle tables are indexed by subset bitmask, so they stop being practical
/// beyond this many goods.
inline constexpr int kMaxOracleGoods = 20;
/// Cancelability is validated by exhaustive (S, T, g) enumeration up to here.
inline constexpr int kMaxCancelableGoods = 10;

struct Additive {
  std::vector<Rational> values;
};

/// Value of a bundle is the sum of its k most valuable goods.
struct MultiDemand {
  int k = 1;
  std::vector<Rational> values;
};

/// Pointwise maximum of additive clauses.
struct Xos {
  std::vector<std::vector<Rational>> clauses;
};

/// Explicit table: table[mask] is the value of the bundle encoded by mask.
struct Oracle {
  std::vector<Rational> table;
};

using Valuation = std::variant<Additive, MultiDemand, Xos, Oracle>;

enum class ValuationKind { additive, multidemand, xos, oracle };

ValuationKind kind_of(const Valuation& v);
std::string_view kind_name(ValuationKind kind);

/// Checks the valuation is well formed for m goods: matching sizes, nonnegative
/// entries, and for oracles v(empty) = 0 plus monotonicity.
void validate_valuation(const Valuation& v, int goods);

Rational value_of(const Valuation& v, std::span<const int> bundle);
Rational single_value(const Valuation& v, int good);

/// The additive function f with f(G) = v(G): for XOS the clause with the
/// largest total (first on ties); for additive the values themselves.
std::vector<Rational> additive_witness(const Valuation& v, int goods);

/// Exhaustive check of v(S+g) > v(T+g) => v(S) > v(T) over all disjoint-from-g
/// S, T. Requires an oracle table with at most kMaxCancelableGoods goods.
bool is_cancelable(const Oracle& oracle);

std::uint32_t bundle_mask(std::span<const int> bundle);
Bundle mask_bundle(std::uint32_t mask, int goods);

class Instance {
 public:
  /// Validates every invariant: n, m >= 1; weights positive and summing to
  /// exactly 1; valuations well formed; good_order a permutation (identity if
  /// empty). Throws std::invalid_argument.
  Instance(std::vector<Rational> weights, std::vector<Valuation> valuations, int goods,
           std::vector<int> good_order = {});

  int agents() const { return static_cast<int>(weights_.size()); }
  int goods() const { return goods_; }

  const std::vector<Rational>& weights() const { return weights_; }
  const Rational& weight(int agent) const { return weights_.at(agent); }
  const Valuation& valuation(int agent) const { return valuations_.at(agent); }
  const std::vector<Valuation>& valuations() const { return valuations_; }

  const std::vector<int>& good_order() const { return good_order_; }
  /// Position of g in good_order; smaller ranks win ties.
  int order_rank(int good) const { return rank_.at(good); }

  /// Cached preference_order of the agent.
  const std::vector<int>& preference(int agent) const { return preference_.at(agent); }

  bool all_of_kind(ValuationKind kind) const;
  bool equal_entitlements() const;

  /// n x m single-good values; throws unless every valuation is additive.
  RationalMatrix additive_values() const;

 private:
  int goods_;
  std::vector<Rational> weights_;
  std::vector<Valuation> valuations_;
  std::vector<int> good_order_;
  std::vector<int> rank_;
  std::vector<std::vector<int>> preference_;
};

/// Goods sorted by non-increasing single-good value, ties broken by the
/// instance's good_order.
std::vector<int> preference_order(const Valuation& v, const Instance& instance);

/// Complete deterministic allocation stored as the owner of every good, which
/// makes bundles disjoint and covering by construction.
class IntegralAllocation {
 public:
  IntegralAllocation(int agents, std::vector<int> owner);
  static IntegralAllocation from_bundles(int goods, const std::vector<Bundle>& bundles);

  int agents() const { return agents_; }
  int goods() const { return static_cast<int>(owner_.size()); }
  int owner(int good) const { return owner_.at(good); }
  const std::vector<int>& owners() const { return owner_; }
  Bundle bundle(int agent) const;
  std::vector<Bundle> bundles() const;

  template <class Scalar>
  Matrix<Scalar> matrix() const {
    Matrix<Scalar> y = Matrix<Scalar>::Zero(agents_, goods());
    for (int g = 0; g < goods(); ++g) y(owner_[g], g) = Scalar(1);
    return y;
  }

  friend bool operator==(const IntegralAllocation&, const IntegralAllocation&) = default;

 private:
  int agents_;
  std::vector<int> owner_;
};

IntegralAllocation from_matrix(const RationalMatrix& y);

struct LotteryEntry {
  Rational probability;
  IntegralAllocation allocation;
};

class Lottery {
 public:
  /// Probabilities must be strictly positive and sum to exactly 1, and all
  /// allocations must share the same shape.
  explicit Lottery(std::vector<LotteryEntry> support);

  const std::vector<LotteryEntry>& support() const { return support_; }
  std::size_t size() const { return support_.size(); }
  int agents() const { return support_.front().allocation.agents(); }
  int goods() const { return support_.front().allocation.goods(); }

 private:
  std::vector<LotteryEntry> support_;
};

/// Fractional allocations are plain rational matrices with unit column sums.
using FractionalAllocation = RationalMatrix;

/// Throws std::invalid_argument unless entries lie in [0,1] and every column
/// sums to exactly 1.
void validate_fractional(const FractionalAllocation& x);
bool is_complete(const FractionalAllocation& x);

FractionalAllocation marginal_matrix(const Lottery& lottery);

/// cross(i, j) = v_i(X_j) for additive value rows `values` (n x m).
template <class Scalar>
Matrix<Scalar> cross_utilities(const Matrix<Scalar>& values, const Matrix<Scalar>& x) {
  return values * x.transpose();
}

/// expected(i, j) = E[v_i(bundle_j)] over the lottery, exact for every
/// valuation kind.
RationalMatrix expected_values(const Instance& instance, const Lottery& lottery);

}  // namespace bobw
