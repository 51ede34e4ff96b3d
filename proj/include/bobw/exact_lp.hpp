#pragma once

#include <vector>

#include "bobw/rational.hpp"

namespace bobw {

enum class Relation { le, ge, eq };
enum class Sense { minimize, maximize };

/// optimize c.x subject to a.row(k) x (relation k) b(k), x >= 0.
struct LinearProgram {
  RationalMatrix a;
  RationalVector b;
  std::vector<Relation> relations;
  RationalVector c;
  Sense sense = Sense::minimize;

  LinearProgram() = default;
  explicit LinearProgram(Eigen::Index variables) : a(0, variables), c(RationalVector::Zero(variables)) {}

  Eigen::Index variables() const { return a.cols(); }
  Eigen::Index constraints() const { return a.rows(); }

  /// Appends one constraint row; `row` must have variables() entries.
  void add(const RationalVector& row, Relation rel, const Rational& rhs);
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  RationalVector x;   // optimal point when status == optimal
  Rational objective;  // in the caller's sense
  /// Farkas multipliers when infeasible: y^T a >= 0 componentwise, y^T b < 0,
  /// y_k >= 0 on <= rows, y_k <= 0 on >= rows, free on equalities.
  RationalVector farkas;
  int pivots = 0;
};

/// Two-phase dense tableau simplex over exact rationals with Bland's rule, so
/// it terminates on degenerate problems.
LpResult solve_lp(const LinearProgram& lp);

/// Independent check that y certifies infeasibility of lp.
bool verify_farkas(const LinearProgram& lp, const RationalVector& y);

/// True iff x >= 0 satisfies every constraint exactly.
bool is_feasible_point(const LinearProgram& lp, const RationalVector& x);

}  // namespace bobw
