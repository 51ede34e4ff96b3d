#pragma once

#include <random>
#include <vector>

#include "bobw/core.hpp"

namespace bobw::testing {

inline Rational q(long p, long d = 1) { return Rational(p, d); }

inline std::vector<Rational> row(std::initializer_list<long> xs) {
  std::vector<Rational> out;
  for (long x : xs) out.emplace_back(x);
  return out;
}

// Three agents, four goods, weights 1/2, 1/3, 1/6.
inline Instance example_one() {
  return Instance({q(1, 2), q(1, 3), q(1, 6)},
                  {Additive{row({8, 8, 5, 2})}, Additive{row({3, 5, 4, 1})}, Additive{row({4, 7, 6, 2})}}, 4);
}

inline RationalMatrix example_one_dse() {
  RationalMatrix x(3, 4);
  x << q(1), q(0), q(1, 2), q(1, 2),
       q(0), q(2, 3), q(1, 3), q(1, 3),
       q(0), q(1, 3), q(1, 6), q(1, 6);
  return x;
}

// The four allocations of the worked decomposition, as owner vectors.
inline std::vector<IntegralAllocation> example_one_support() {
  return {IntegralAllocation(3, {0, 1, 2, 0}), IntegralAllocation(3, {0, 1, 0, 2}),
          IntegralAllocation(3, {0, 2, 1, 0}), IntegralAllocation(3, {0, 1, 0, 1})};
}

inline RationalMatrix to_matrix(std::initializer_list<std::initializer_list<Rational>> rows) {
  RationalMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index r = 0;
  for (const auto& rr : rows) {
    Eigen::Index c = 0;
    for (const auto& v : rr) m(r, c++) = v;
    ++r;
  }
  return m;
}

class Gen {
 public:
  explicit Gen(unsigned seed) : rng_(seed) {}

  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }
  std::mt19937& engine() { return rng_; }

  // Positive weights summing to exactly 1 with small denominators.
  std::vector<Rational> weights(int n, bool equal = false) {
    std::vector<Rational> w;
    if (equal) return std::vector<Rational>(n, Rational(1, n));
    long total = 0;
    std::vector<long> raw;
    for (int i = 0; i < n; ++i) total += raw.emplace_back(integer(1, 9));
    for (long r : raw) w.emplace_back(r, total);
    return w;
  }

  std::vector<Rational> values(int m, int hi = 10, double zero_p = 0.15) {
    std::vector<Rational> v;
    for (int g = 0; g < m; ++g) v.emplace_back(coin(zero_p) ? 0 : integer(1, hi));
    return v;
  }

  std::vector<int> permutation(int m) {
    std::vector<int> p(m);
    for (int g = 0; g < m; ++g) p[g] = g;
    std::shuffle(p.begin(), p.end(), rng_);
    return p;
  }

  Instance additive(int n, int m, bool equal = false, int hi = 10) {
    std::vector<Valuation> vals;
    for (int i = 0; i < n; ++i) vals.push_back(Additive{values(m, hi)});
    return Instance(weights(n, equal), vals, m, permutation(m));
  }

 private:
  std::mt19937 rng_;
};

}  // namespace bobw::testing
