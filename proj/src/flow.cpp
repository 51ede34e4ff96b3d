#include "bobw/flow.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <stdexcept>

namespace bobw {

MaxFlow::MaxFlow(int nodes) : adj_(nodes) {}

int MaxFlow::add_arc(int from, int to, std::int64_t capacity) {
  if (capacity < 0) throw std::invalid_argument("negative capacity");
  const int id = static_cast<int>(arcs_.size()) / 2;
  adj_.at(from).push_back(static_cast<int>(arcs_.size()));
  arcs_.push_back({to, capacity});
  adj_.at(to).push_back(static_cast<int>(arcs_.size()));
  arcs_.push_back({from, 0});
  original_.push_back(capacity);
  return id;
}

bool MaxFlow::bfs(int s, int t) {
  level_.assign(adj_.size(), -1);
  level_[s] = 0;
  std::queue<int> q;
  q.push(s);
  while (!q.empty()) {
    const int u = q.front();
    q.pop();
    for (int e : adj_[u])
      if (arcs_[e].cap > 0 && level_[arcs_[e].to] < 0) {
        level_[arcs_[e].to] = level_[u] + 1;
        q.push(arcs_[e].to);
      }
  }
  return level_[t] >= 0;
}

std::int64_t MaxFlow::dfs(int u, int t, std::int64_t pushed) {
  if (u == t) return pushed;
  for (int& k = next_[u]; k < static_cast<int>(adj_[u].size()); ++k) {
    const int e = adj_[u][k];
    Arc& arc = arcs_[e];
    if (arc.cap <= 0 || level_[arc.to] != level_[u] + 1) continue;
    const std::int64_t got = dfs(arc.to, t, std::min(pushed, arc.cap));
    if (got > 0) {
      arc.cap -= got;
      arcs_[e ^ 1].cap += got;
      return got;
    }
  }
  return 0;
}

std::int64_t MaxFlow::run(int source, int sink) {
  std::int64_t total = 0;
  while (bfs(source, sink)) {
    next_.assign(adj_.size(), 0);
    while (const std::int64_t f = dfs(source, sink, std::numeric_limits<std::int64_t>::max()))
      total += f;
  }
  return total;
}

std::int64_t MaxFlow::flow(int arc) const { return original_.at(arc) - arcs_.at(2 * arc).cap; }

std::vector<bool> MaxFlow::reachable(int source) const {
  std::vector<bool> seen(adj_.size(), false);
  std::vector<int> stack{source};
  seen[source] = true;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int e : adj_[u])
      if (arcs_[e].cap > 0 && !seen[arcs_[e].to]) {
        seen[arcs_[e].to] = true;
        stack.push_back(arcs_[e].to);
      }
  }
  return seen;
}

int Circulation::add_arc(int from, int to, std::int64_t lower, std::int64_t upper) {
  if (from < 0 || from >= nodes_ || to < 0 || to >= nodes_)
    throw std::out_of_range("circulation arc endpoint out of range");
  if (lower < 0 || lower > upper) throw std::invalid_argument("circulation arc needs 0 <= lower <= upper");
  arcs_.push_back({from, to, lower, upper});
  return static_cast<int>(arcs_.size()) - 1;
}

Circulation::Result Circulation::solve() const {
  const int s = nodes_, t = nodes_ + 1;
  MaxFlow net(nodes_ + 2);
  std::vector<std::int64_t> excess(nodes_, 0);
  std::vector<int> ids;
  ids.reserve(arcs_.size());
  for (const auto& a : arcs_) {
    ids.push_back(net.add_arc(a.from, a.to, a.upper - a.lower));
    excess[a.to] += a.lower;
    excess[a.from] -= a.lower;
  }
  std::int64_t demand = 0;
  for (int v = 0; v < nodes_; ++v) {
    if (excess[v] > 0) {
      net.add_arc(s, v, excess[v]);
      demand += excess[v];
    } else if (excess[v] < 0) {
      net.add_arc(v, t, -excess[v]);
    }
  }

  Result result;
  if (net.run(s, t) == demand) {
    std::vector<std::int64_t> flows;
    flows.reserve(arcs_.size());
    for (std::size_t k = 0; k < arcs_.size(); ++k) flows.push_back(arcs_[k].lower + net.flow(ids[k]));
    result.flows = std::move(flows);
    return result;
  }

  const auto seen = net.reachable(s);
  Cut cut;
  for (int v = 0; v < nodes_; ++v)
    if (seen[v]) cut.nodes.push_back(v);
  for (const auto& a : arcs_) {
    const bool from_in = seen[a.from], to_in = seen[a.to];
    if (!from_in && to_in) cut.lower_in += a.lower;
    if (from_in && !to_in) cut.upper_out += a.upper;
  }
  result.cut = cut;
  return result;
}

}  // namespace bobw
