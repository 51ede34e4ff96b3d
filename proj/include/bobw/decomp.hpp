#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "bobw/core.hpp"

namespace bobw {

/// Cells are (agent, good) pairs encoded as agent * goods + good.
struct Constraint {
  std::vector<int> cells;  // sorted
  Integer lower;
  Integer upper;
  std::string label;
};

struct Bihierarchy {
  int agents = 0;
  int goods = 0;
  std::vector<Constraint> family_one;
  std::vector<Constraint> family_two;
  /// Order in which cells are offered to the flow, for reproducible output.
  /// Empty means row-major.
  std::vector<int> cell_order;

  int cell(int agent, int good) const { return agent * goods + good; }
  int cells() const { return agents * goods; }
};

/// Throws std::invalid_argument if a family is not laminar, a cell is out of
/// range, or some lower > upper.
void validate_bihierarchy(const Bihierarchy& h);

/// Columns C_g in the first family; every agent's preference prefixes and all
/// singleton cells in the second; quotas are floor/ceil of the sums in X.
Bihierarchy build_ug_bihierarchy(const Instance& instance, const FractionalAllocation& x);

/// Sum of matrix entries over a constraint's cells.
Rational constraint_sum(const Constraint& c, const RationalMatrix& x, int goods);

struct FeasibilityVerdict {
  bool feasible = true;
  int family = 0;  // 1 or 2 for the first violated constraint
  int index = -1;
  Rational sum;
  std::string describe(const Bihierarchy& h) const;
};

FeasibilityVerdict check_feasible(const IntegralAllocation& y, const Bihierarchy& h);
/// Same test for any matrix, e.g. a fractional allocation against its quotas.
FeasibilityVerdict check_feasible(const RationalMatrix& x, const Bihierarchy& h);

struct HoffmanCertificate {
  std::vector<std::string> nodes;  // the node set R
  std::int64_t lower_in = 0;       // forced flow into R
  std::int64_t upper_out = 0;      // capacity out of R, smaller than lower_in
};

struct IntegralPoint {
  std::optional<RationalMatrix> y;  // 0/1 matrix when feasible
  std::optional<HoffmanCertificate> certificate;
};

/// Integral y with 0 <= y <= 1, zero outside the mask, within all quotas.
IntegralPoint integral_point(const Bihierarchy& h, const std::vector<bool>& support_mask);

/// Same, with explicit per-cell bounds (row-major vectors of length cells()).
IntegralPoint integral_point(const Bihierarchy& h, const std::vector<std::int64_t>& cell_lower,
                             const std::vector<std::int64_t>& cell_upper);

/// Lottery over complete allocations, feasible under H's quotas, whose
/// marginal is exactly X. Throws std::invalid_argument if X violates a quota
/// or H is malformed.
Lottery decompose(const FractionalAllocation& x, const Bihierarchy& h);

/// One line per constraint: `<family> <label> lower upper achieved`.
void write_constraints(std::ostream& os, const Bihierarchy& h, const RationalMatrix& x);

}  // namespace bobw
