#pragma once

#include <cstddef>
#include <limits>
#include <queue>
#include <vector>

namespace ceei {

/// Dinic max-flow over any ordered field or integer type. Used with
/// std::int64_t for bipartite allocation problems and with Rational for
/// exact equilibrium money flows.
template <class Cap>
class MaxFlow {
 public:
  explicit MaxFlow(std::size_t nodes) : adjacency_(nodes) {}

  /// Returns the id of the forward edge.
  std::size_t add_edge(std::size_t from, std::size_t to, Cap capacity) {
    const std::size_t id = edges_.size();
    edges_.push_back({to, capacity, Cap(0)});
    adjacency_[from].push_back(id);
    edges_.push_back({from, Cap(0), Cap(0)});
    adjacency_[to].push_back(id + 1);
    return id;
  }

  void set_capacity(std::size_t edge, Cap capacity) { edges_[edge].capacity = capacity; }

  /// Clears all flow, keeping capacities.
  void reset() {
    for (auto& e : edges_) e.flow = Cap(0);
  }

  const Cap& flow(std::size_t edge) const { return edges_[edge].flow; }

  /// Augments the current flow to a maximum one and returns its total value
  /// (including flow already present on source edges).
  Cap run(std::size_t source, std::size_t sink) {
    while (build_levels(source, sink)) {
      next_.assign(adjacency_.size(), 0);
      while (true) {
        Cap pushed = push(source, sink, Cap(-1));
        if (pushed == Cap(0)) break;
      }
    }
    Cap total(0);
    for (std::size_t id : adjacency_[source]) {
      if (id % 2 == 0) total += edges_[id].flow;
      else total -= edges_[id ^ 1].flow;
    }
    return total;
  }

 private:
  struct Edge {
    std::size_t to;
    Cap capacity;
    Cap flow;
  };

  Cap residual(std::size_t id) const { return edges_[id].capacity - edges_[id].flow; }

  bool build_levels(std::size_t source, std::size_t sink) {
    level_.assign(adjacency_.size(), -1);
    std::queue<std::size_t> frontier;
    level_[source] = 0;
    frontier.push(source);
    while (!frontier.empty()) {
      const std::size_t v = frontier.front();
      frontier.pop();
      for (std::size_t id : adjacency_[v]) {
        const std::size_t w = edges_[id].to;
        if (level_[w] < 0 && residual(id) > Cap(0)) {
          level_[w] = level_[v] + 1;
          frontier.push(w);
        }
      }
    }
    return level_[sink] >= 0;
  }

  // limit < 0 means unbounded.
  Cap push(std::size_t v, std::size_t sink, Cap limit) {
    if (v == sink) return limit;
    for (; next_[v] < adjacency_[v].size(); ++next_[v]) {
      const std::size_t id = adjacency_[v][next_[v]];
      const std::size_t w = edges_[id].to;
      const Cap room = residual(id);
      if (level_[w] != level_[v] + 1 || !(room > Cap(0))) continue;
      const Cap bound = (limit < Cap(0) || room < limit) ? room : limit;
      Cap pushed = push(w, sink, bound);
      if (pushed > Cap(0)) {
        edges_[id].flow += pushed;
        edges_[id ^ 1].flow -= pushed;
        return pushed;
      }
    }
    return Cap(0);
  }

  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> adjacency_;
  std::vector<int> level_;
  std::vector<std::size_t> next_;
};

}  // namespace ceei
