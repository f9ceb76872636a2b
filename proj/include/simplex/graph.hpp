#pragma once

#include "simplex/sparse.hpp"

#include <utility>
#include <vector>

namespace simplex {

/// Undirected simple graph. Construction normalizes each edge to
/// (min, max), removes duplicates, and rejects self-loops and
/// out-of-range endpoints.
class Graph {
  public:
    Graph() = default;
    Graph(index_t num_nodes, std::vector<std::pair<index_t, index_t>> edges);

    index_t num_nodes() const { return num_nodes_; }
    const std::vector<std::pair<index_t, index_t>>& edges() const { return edges_; }

    /// Sorted neighbor lists, one per node.
    std::vector<std::vector<index_t>> adjacency() const;

  private:
    index_t num_nodes_ = 0;
    std::vector<std::pair<index_t, index_t>> edges_;  // u < v, sorted, unique
};

}  // namespace simplex
