#include "bobw/exact_lp.hpp"

#include <stdexcept>

namespace bobw {

void LinearProgram::add(const RationalVector& row, Relation rel, const Rational& rhs) {
  if (row.size() != a.cols()) throw std::invalid_argument("constraint row has wrong length");
  a.conservativeResize(a.rows() + 1, Eigen::NoChange);
  a.row(a.rows() - 1) = row.transpose();
  b.conservativeResize(b.size() + 1);
  b(b.size() - 1) = rhs;
  relations.push_back(rel);
}

namespace {

using Tableau = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Rows 0..m-1 are constraints, row m is the reduced-cost row; the last column
// holds the right-hand side (and minus the objective value in row m).
class Simplex {
 public:
  Simplex(Tableau t, std::vector<int> basis, int m) : t_(std::move(t)), basis_(std::move(basis)), m_(m) {}

  Tableau& t() { return t_; }
  std::vector<int>& basis() { return basis_; }
  int rhs() const { return static_cast<int>(t_.cols()) - 1; }
  int pivots() const { return pivots_; }

  void pivot(int r, int c) {
    ++pivots_;
    const Rational inv = Rational(1) / t_(r, c);
    std::vector<int> nz;
    for (int j = 0; j < t_.cols(); ++j) {
      if (t_(r, j) == 0) continue;
      t_(r, j) *= inv;
      nz.push_back(j);
    }
    for (int i = 0; i < t_.rows(); ++i) {
      if (i == r || t_(i, c) == 0) continue;
      const Rational f = t_(i, c);
      for (int j : nz) t_(i, j) -= f * t_(r, j);
    }
    basis_[r] = c;
  }

  // Bland's rule on columns [0, limit). Returns false when unbounded.
  bool optimize(int limit) {
    for (;;) {
      int enter = -1;
      for (int j = 0; j < limit; ++j)
        if (t_(m_, j) < 0) {
          enter = j;
          break;
        }
      if (enter < 0) return true;
      int leave = -1;
      Rational best;
      for (int i = 0; i < m_; ++i) {
        if (basis_[i] < 0 || t_(i, enter) <= 0) continue;
        const Rational ratio = t_(i, rhs()) / t_(i, enter);
        if (leave < 0 || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
  }

 private:
  Tableau t_;
  std::vector<int> basis_;
  int m_;
  int pivots_ = 0;
};

}  // namespace

LpResult solve_lp(const LinearProgram& lp) {
  const int m = static_cast<int>(lp.constraints());
  const int n = static_cast<int>(lp.variables());
  if (static_cast<int>(lp.b.size()) != m || static_cast<int>(lp.relations.size()) != m ||
      lp.c.size() != n)
    throw std::invalid_argument("linear program dimensions disagree");

  // Flip rows so every right-hand side is nonnegative.
  std::vector<Relation> rel(lp.relations);
  std::vector<bool> flipped(m, false);
  for (int k = 0; k < m; ++k)
    if (lp.b(k) < 0) {
      flipped[k] = true;
      if (rel[k] == Relation::le)
        rel[k] = Relation::ge;
      else if (rel[k] == Relation::ge)
        rel[k] = Relation::le;
    }

  int slack_count = 0, artificial_count = 0;
  for (auto r : rel) {
    if (r != Relation::eq) ++slack_count;
    if (r != Relation::le) ++artificial_count;
  }
  const int first_artificial = n + slack_count;
  const int cols = first_artificial + artificial_count;

  Tableau t = Tableau::Zero(m + 1, cols + 1);
  std::vector<int> basis(m, -1);
  std::vector<int> initial(m, -1);  // column that started basic in each row
  int next_slack = n, next_artificial = first_artificial;
  for (int k = 0; k < m; ++k) {
    const Rational sign = flipped[k] ? -1 : 1;
    for (int j = 0; j < n; ++j) t(k, j) = sign * lp.a(k, j);
    t(k, cols) = sign * lp.b(k);
    if (rel[k] == Relation::le) {
      t(k, next_slack) = 1;
      initial[k] = next_slack++;
    } else {
      if (rel[k] == Relation::ge) t(k, next_slack++) = -1;
      t(k, next_artificial) = 1;
      initial[k] = next_artificial++;
    }
    basis[k] = initial[k];
  }

  // Phase one: minimize the sum of artificials.
  for (int k = 0; k < m; ++k)
    if (initial[k] >= first_artificial)
      for (int j = 0; j <= cols; ++j)
        if (j < first_artificial || j == cols) t(m, j) -= t(k, j);

  Simplex simplex(std::move(t), std::move(basis), m);
  simplex.optimize(cols);
  Tableau& tab = simplex.t();

  LpResult result;
  if (tab(m, cols) != 0) {
    // Phase-one duals: pi_k = c_init - d_init for the column basic at start.
    result.status = LpStatus::infeasible;
    result.farkas = RationalVector(m);
    for (int k = 0; k < m; ++k) {
      const int j = initial[k];
      const Rational cost = j >= first_artificial ? Rational(1) : Rational(0);
      const Rational pi = cost - tab(m, j);
      result.farkas(k) = flipped[k] ? pi : Rational(-pi);
    }
    result.pivots = simplex.pivots();
    return result;
  }

  // Drive zero-level artificials out of the basis; rows where that is
  // impossible are redundant and get disabled.
  auto& bas = simplex.basis();
  for (int k = 0; k < m; ++k) {
    if (bas[k] < first_artificial) continue;
    int col = -1;
    for (int j = 0; j < first_artificial; ++j)
      if (tab(k, j) != 0) {
        col = j;
        break;
      }
    if (col >= 0) {
      simplex.pivot(k, col);
    } else {
      tab.row(k).setZero();
      bas[k] = -1;
    }
  }

  // Phase two.
  const Rational sense = lp.sense == Sense::maximize ? -1 : 1;
  tab.row(m).setZero();
  for (int j = 0; j < n; ++j) tab(m, j) = sense * lp.c(j);
  for (int k = 0; k < m; ++k) {
    if (bas[k] < 0 || bas[k] >= n) continue;
    const Rational cb = sense * lp.c(bas[k]);
    if (cb == 0) continue;
    for (int j = 0; j <= cols; ++j)
      if (j < first_artificial || j == cols) tab(m, j) -= cb * tab(k, j);
  }
  const bool bounded = simplex.optimize(first_artificial);
  result.pivots = simplex.pivots();
  if (!bounded) {
    result.status = LpStatus::unbounded;
    return result;
  }
  result.status = LpStatus::optimal;
  result.x = RationalVector::Zero(n);
  for (int k = 0; k < m; ++k)
    if (bas[k] >= 0 && bas[k] < n) result.x(bas[k]) = tab(k, cols);
  result.objective = lp.c.dot(result.x);
  return result;
}

bool verify_farkas(const LinearProgram& lp, const RationalVector& y) {
  if (y.size() != lp.constraints()) return false;
  for (Eigen::Index k = 0; k < y.size(); ++k) {
    if (lp.relations[k] == Relation::le && y(k) < 0) return false;
    if (lp.relations[k] == Relation::ge && y(k) > 0) return false;
  }
  const RationalVector ya = lp.a.transpose() * y;
  for (Eigen::Index j = 0; j < ya.size(); ++j)
    if (ya(j) < 0) return false;
  return y.dot(lp.b) < 0;
}

bool is_feasible_point(const LinearProgram& lp, const RationalVector& x) {
  if (x.size() != lp.variables()) return false;
  for (Eigen::Index j = 0; j < x.size(); ++j)
    if (x(j) < 0) return false;
  const RationalVector ax = lp.a * x;
  for (Eigen::Index k = 0; k < ax.size(); ++k) {
    switch (lp.relations[k]) {
      case Relation::le: if (ax(k) > lp.b(k)) return false; break;
      case Relation::ge: if (ax(k) < lp.b(k)) return false; break;
      case Relation::eq: if (ax(k) != lp.b(k)) return false; break;
    }
  }
  return true;
}

}  // namespace bobw
