#include "bobw/core.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace bobw {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_good(int good, int goods) {
  if (good < 0 || good >= goods)
    throw std::out_of_range("good index " + std::to_string(good) + " outside [0, " +
                            std::to_string(goods) + ")");
}

void check_nonnegative(const std::vector<Rational>& values, int goods, const char* what) {
  if (static_cast<int>(values.size()) != goods)
    throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(goods) +
                                " values, got " + std::to_string(values.size()));
  for (std::size_t g = 0; g < values.size(); ++g)
    if (values[g] < 0)
      throw std::invalid_argument(std::string(what) + ": negative value " +
                                  to_string(values[g]) + " for good " + std::to_string(g));
}

int oracle_goods(const Oracle& o) {
  const auto size = o.table.size();
  if (size == 0 || !std::has_single_bit(size))
    throw std::invalid_argument("oracle table size must be a power of two");
  return std::countr_zero(size);
}

}  // namespace

ValuationKind kind_of(const Valuation& v) {
  return std::visit(overloaded{[](const Additive&) { return ValuationKind::additive; },
                               [](const MultiDemand&) { return ValuationKind::multidemand; },
                               [](const Xos&) { return ValuationKind::xos; },
                               [](const Oracle&) { return ValuationKind::oracle; }},
                    v);
}

std::string_view kind_name(ValuationKind kind) {
  switch (kind) {
    case ValuationKind::additive: return "additive";
    case ValuationKind::multidemand: return "multidemand";
    case ValuationKind::xos: return "xos";
    case ValuationKind::oracle: return "oracle";
  }
  return "unknown";
}

void validate_valuation(const Valuation& v, int goods) {
  std::visit(overloaded{
                 [&](const Additive& a) { check_nonnegative(a.values, goods, "additive"); },
                 [&](const MultiDemand& d) {
                   if (d.k < 1) throw std::invalid_argument("multidemand: k must be positive");
                   check_nonnegative(d.values, goods, "multidemand");
                 },
                 [&](const Xos& x) {
                   if (x.clauses.empty()) throw std::invalid_argument("xos: no clauses");
                   for (const auto& clause : x.clauses) check_nonnegative(clause, goods, "xos clause");
                 },
                 [&](const Oracle& o) {
                   if (goods > kMaxOracleGoods)
                     throw std::invalid_argument("oracle: at most " +
                                                 std::to_string(kMaxOracleGoods) + " goods");
                   if (oracle_goods(o) != goods)
                     throw std::invalid_argument("oracle: table must have 2^" +
                                                 std::to_string(goods) + " entries");
                   if (o.table[0] != 0) throw std::invalid_argument("oracle: v(empty) must be 0");
                   // Monotone iff adding any single good never decreases the value.
                   const std::uint32_t full = std::uint32_t{1} << goods;
                   for (std::uint32_t mask = 0; mask < full; ++mask) {
                     if (o.table[mask] < 0)
                       throw std::invalid_argument("oracle: negative value at mask " +
                                                   std::to_string(mask));
                     for (int g = 0; g < goods; ++g) {
                       const std::uint32_t bit = std::uint32_t{1} << g;
                       if (!(mask & bit) && o.table[mask | bit] < o.table[mask])
                         throw std::invalid_argument("oracle: not monotone at mask " +
                                                     std::to_string(mask) + " + good " +
                                                     std::to_string(g));
                     }
                   }
                 }},
             v);
}

std::uint32_t bundle_mask(std::span<const int> bundle) {
  std::uint32_t mask = 0;
  for (int g : bundle) {
    if (g < 0 || g >= 32) throw std::out_of_range("good index outside oracle range");
    mask |= std::uint32_t{1} << g;
  }
  return mask;
}

Bundle mask_bundle(std::uint32_t mask, int goods) {
  Bundle b;
  for (int g = 0; g < goods; ++g)
    if (mask & (std::uint32_t{1} << g)) b.push_back(g);
  return b;
}

Rational value_of(const Valuation& v, std::span<const int> bundle) {
  return std::visit(
      overloaded{
          [&](const Additive& a) {
            Rational sum = 0;
            for (int g : bundle) {
              check_good(g, static_cast<int>(a.values.size()));
              sum += a.values[g];
            }
            return sum;
          },
          [&](const MultiDemand& d) {
            std::vector<Rational> vals;
            vals.reserve(bundle.size());
            for (int g : bundle) {
              check_good(g, static_cast<int>(d.values.size()));
              vals.push_back(d.values[g]);
            }
            const auto take = std::min<std::size_t>(vals.size(), static_cast<std::size_t>(d.k));
            std::partial_sort(vals.begin(), vals.begin() + take, vals.end(), std::greater<>{});
            return std::accumulate(vals.begin(), vals.begin() + take, Rational(0));
          },
          [&](const Xos& x) {
            Rational best = 0;
            for (const auto& clause : x.clauses) {
              Rational sum = 0;
              for (int g : bundle) {
                check_good(g, static_cast<int>(clause.size()));
                sum += clause[g];
              }
              best = std::max(best, sum);
            }
            return best;
          },
          [&](const Oracle& o) {
            const std::uint32_t mask = bundle_mask(bundle);
            if (mask >= o.table.size())
              throw std::out_of_range("bundle outside the oracle table");
            return o.table[mask];
          }},
      v);
}

Rational single_value(const Valuation& v, int good) {
  const int single[1] = {good};
  return value_of(v, single);
}

std::vector<Rational> additive_witness(const Valuation& v, int goods) {
  if (const auto* a = std::get_if<Additive>(&v)) return a->values;
  const auto* x = std::get_if<Xos>(&v);
  if (!x) throw std::invalid_argument("additive witness needs an additive or XOS valuation");
  std::size_t best = 0;
  Rational best_total = -1;
  for (std::size_t c = 0; c < x->clauses.size(); ++c) {
    const Rational total =
        std::accumulate(x->clauses[c].begin(), x->clauses[c].end(), Rational(0));
    if (total > best_total) {
      best_total = total;
      best = c;
    }
  }
  if (static_cast<int>(x->clauses[best].size()) != goods)
    throw std::invalid_argument("XOS clause length does not match the good count");
  return x->clauses[best];
}

bool is_cancelable(const Oracle& oracle) {
  const int goods = oracle_goods(oracle);
  if (goods > kMaxCancelableGoods)
    throw std::invalid_argument("cancelability check limited to " +
                                std::to_string(kMaxCancelableGoods) + " goods");
  const std::uint32_t full = std::uint32_t{1} << goods;
  const auto& v = oracle.table;
  for (int g = 0; g < goods; ++g) {
    const std::uint32_t bit = std::uint32_t{1} << g;
    for (std::uint32_t s = 0; s < full; ++s) {
      if (s & bit) continue;
      for (std::uint32_t t = 0; t < full; ++t) {
        if (t & bit) continue;
        if (v[s | bit] > v[t | bit] && !(v[s] > v[t])) return false;
      }
    }
  }
  return true;
}

Instance::Instance(std::vector<Rational> weights, std::vector<Valuation> valuations, int goods,
                   std::vector<int> good_order)
    : goods_(goods),
      weights_(std::move(weights)),
      valuations_(std::move(valuations)),
      good_order_(std::move(good_order)) {
  if (weights_.empty()) throw std::invalid_argument("instance needs at least one agent");
  if (goods_ < 1) throw std::invalid_argument("instance needs at least one good");
  if (valuations_.size() != weights_.size())
    throw std::invalid_argument("expected " + std::to_string(weights_.size()) +
                                " valuations, got " + std::to_string(valuations_.size()));
  Rational total = 0;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (weights_[i] <= 0)
      throw std::invalid_argument("weight of agent " + std::to_string(i) + " is not positive");
    total += weights_[i];
  }
  if (total != 1) throw std::invalid_argument("weights sum to " + to_string(total));
  for (std::size_t i = 0; i < valuations_.size(); ++i) {
    try {
      validate_valuation(valuations_[i], goods_);
    } catch (const std::exception& e) {
      throw std::invalid_argument("agent " + std::to_string(i) + ": " + e.what());
    }
  }

  if (good_order_.empty()) {
    good_order_.resize(goods_);
    std::iota(good_order_.begin(), good_order_.end(), 0);
  }
  if (static_cast<int>(good_order_.size()) != goods_)
    throw std::invalid_argument("good_order must list every good once");
  rank_.assign(goods_, -1);
  for (int pos = 0; pos < goods_; ++pos) {
    const int g = good_order_[pos];
    if (g < 0 || g >= goods_ || rank_[g] != -1)
      throw std::invalid_argument("good_order is not a permutation of 0..m-1");
    rank_[g] = pos;
  }

  preference_.reserve(valuations_.size());
  for (const auto& v : valuations_) preference_.push_back(preference_order(v, *this));
}

bool Instance::all_of_kind(ValuationKind kind) const {
  return std::all_of(valuations_.begin(), valuations_.end(),
                     [kind](const Valuation& v) { return kind_of(v) == kind; });
}

bool Instance::equal_entitlements() const {
  const Rational share(1, agents());
  return std::all_of(weights_.begin(), weights_.end(),
                     [&](const Rational& w) { return w == share; });
}

RationalMatrix Instance::additive_values() const {
  RationalMatrix values(agents(), goods_);
  for (int i = 0; i < agents(); ++i) {
    const auto* a = std::get_if<Additive>(&valuations_[i]);
    if (!a)
      throw std::invalid_argument("agent " + std::to_string(i) + " has a " +
                                  std::string(kind_name(kind_of(valuations_[i]))) +
                                  " valuation; additive required");
    for (int g = 0; g < goods_; ++g) values(i, g) = a->values[g];
  }
  return values;
}

std::vector<int> preference_order(const Valuation& v, const Instance& instance) {
  const int m = instance.goods();
  std::vector<Rational> single(m);
  for (int g = 0; g < m; ++g) single[g] = single_value(v, g);
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (single[a] != single[b]) return single[a] > single[b];
    return instance.order_rank(a) < instance.order_rank(b);
  });
  return order;
}

IntegralAllocation::IntegralAllocation(int agents, std::vector<int> owner)
    : agents_(agents), owner_(std::move(owner)) {
  if (agents_ < 1) throw std::invalid_argument("allocation needs at least one agent");
  for (std::size_t g = 0; g < owner_.size(); ++g)
    if (owner_[g] < 0 || owner_[g] >= agents_)
      throw std::invalid_argument("good " + std::to_string(g) + " has invalid owner " +
                                  std::to_string(owner_[g]));
}

IntegralAllocation IntegralAllocation::from_bundles(int goods, const std::vector<Bundle>& bundles) {
  std::vector<int> owner(goods, -1);
  for (std::size_t i = 0; i < bundles.size(); ++i)
    for (int g : bundles[i]) {
      check_good(g, goods);
      if (owner[g] != -1)
        throw std::invalid_argument("good " + std::to_string(g) + " appears in two bundles");
      owner[g] = static_cast<int>(i);
    }
  for (int g = 0; g < goods; ++g)
    if (owner[g] == -1)
      throw std::invalid_argument("good " + std::to_string(g) + " is not allocated");
  return IntegralAllocation(static_cast<int>(bundles.size()), std::move(owner));
}

Bundle IntegralAllocation::bundle(int agent) const {
  Bundle b;
  for (int g = 0; g < goods(); ++g)
    if (owner_[g] == agent) b.push_back(g);
  return b;
}

std::vector<Bundle> IntegralAllocation::bundles() const {
  std::vector<Bundle> out(agents_);
  for (int g = 0; g < goods(); ++g) out[owner_[g]].push_back(g);
  return out;
}

IntegralAllocation from_matrix(const RationalMatrix& y) {
  std::vector<int> owner(y.cols(), -1);
  for (Eigen::Index g = 0; g < y.cols(); ++g) {
    for (Eigen::Index i = 0; i < y.rows(); ++i) {
      if (y(i, g) == 1) {
        if (owner[g] != -1) throw std::invalid_argument("column with two ones");
        owner[g] = static_cast<int>(i);
      } else if (y(i, g) != 0) {
        throw std::invalid_argument("matrix is not 0/1");
      }
    }
    if (owner[g] == -1) throw std::invalid_argument("column without a one");
  }
  return IntegralAllocation(static_cast<int>(y.rows()), std::move(owner));
}

Lottery::Lottery(std::vector<LotteryEntry> support) : support_(std::move(support)) {
  if (support_.empty()) throw std::invalid_argument("lottery support is empty");
  Rational total = 0;
  for (const auto& entry : support_) {
    if (entry.probability <= 0)
      throw std::invalid_argument("lottery probability " + to_string(entry.probability) +
                                  " is not positive");
    if (entry.allocation.agents() != agents() || entry.allocation.goods() != goods())
      throw std::invalid_argument("lottery allocations differ in shape");
    total += entry.probability;
  }
  if (total != 1) throw std::invalid_argument("lottery probabilities sum to " + to_string(total));
}

void validate_fractional(const FractionalAllocation& x) {
  for (Eigen::Index g = 0; g < x.cols(); ++g) {
    Rational column = 0;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      if (x(i, g) < 0 || x(i, g) > 1)
        throw std::invalid_argument("entry (" + std::to_string(i) + ", " + std::to_string(g) +
                                    ") = " + to_string(x(i, g)) + " outside [0, 1]");
      column += x(i, g);
    }
    if (column != 1)
      throw std::invalid_argument("column " + std::to_string(g) + " sums to " +
                                  to_string(column));
  }
}

bool is_complete(const FractionalAllocation& x) {
  try {
    validate_fractional(x);
    return true;
  } catch (const std::invalid_argument&) {
    return false;
  }
}

FractionalAllocation marginal_matrix(const Lottery& lottery) {
  FractionalAllocation x = FractionalAllocation::Zero(lottery.agents(), lottery.goods());
  for (const auto& entry : lottery.support())
    for (int g = 0; g < lottery.goods(); ++g) x(entry.allocation.owner(g), g) += entry.probability;
  return x;
}

RationalMatrix expected_values(const Instance& instance, const Lottery& lottery) {
  const int n = instance.agents();
  RationalMatrix expected = RationalMatrix::Zero(n, n);
  for (const auto& entry : lottery.support()) {
    const auto bundles = entry.allocation.bundles();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        expected(i, j) += entry.probability * value_of(instance.valuation(i), bundles[j]);
  }
  return expected;
}

}  // namespace bobw
