#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace bobw {

/// Dinic max-flow on integer capacities.
class MaxFlow {
 public:
  explicit MaxFlow(int nodes);

  int nodes() const { return static_cast<int>(adj_.size()); }
  /// Returns the arc id; its flow can be read back with flow().
  int add_arc(int from, int to, std::int64_t capacity);
  std::int64_t run(int source, int sink);
  std::int64_t flow(int arc) const;
  /// Nodes reachable from source in the residual graph after run().
  std::vector<bool> reachable(int source) const;

 private:
  struct Arc {
    int to;
    std::int64_t cap;
  };
  bool bfs(int s, int t);
  std::int64_t dfs(int u, int t, std::int64_t pushed);

  std::vector<Arc> arcs_;  // arc 2k is forward, 2k+1 its reverse
  std::vector<std::vector<int>> adj_;
  std::vector<std::int64_t> original_;
  std::vector<int> level_, next_;
};

/// Lower/upper bounded circulation. A feasible circulation exists iff every
/// node set R has sum of lower bounds entering R <= sum of capacities leaving R
/// (Hoffman); on failure the violating R is reported.
class Circulation {
 public:
  explicit Circulation(int nodes) : nodes_(nodes) {}

  int add_arc(int from, int to, std::int64_t lower, std::int64_t upper);

  struct Cut {
    std::vector<int> nodes;
    std::int64_t lower_in = 0;
    std::int64_t upper_out = 0;
  };

  /// Arc flows of a feasible circulation, or the violated cut.
  struct Result {
    std::optional<std::vector<std::int64_t>> flows;
    std::optional<Cut> cut;
  };
  Result solve() const;

 private:
  struct Arc {
    int from, to;
    std::int64_t lower, upper;
  };
  int nodes_;
  std::vector<Arc> arcs_;
};

}  // namespace bobw
