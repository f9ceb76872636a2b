#include "simplex/graph.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace simplex {

Graph::Graph(index_t num_nodes, std::vector<std::pair<index_t, index_t>> edges)
    : num_nodes_(num_nodes) {
    if (num_nodes < 0) {
        throw std::invalid_argument("Graph: negative node count");
    }
    for (auto& [u, v] : edges) {
        if (u == v) {
            throw std::invalid_argument("Graph: self-loop at node " + std::to_string(u));
        }
        if (u < 0 || v < 0 || u >= num_nodes || v >= num_nodes) {
            throw std::invalid_argument("Graph: edge (" + std::to_string(u) + "," + std::to_string(v) + ") out of range for " + std::to_string(num_nodes) + " nodes");
        }
        if (u > v) {
            std::swap(u, v);
        }
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    edges_ = std::move(edges);
}

std::vector<std::vector<index_t>> Graph::adjacency() const {
    std::vector<std::vector<index_t>> adj(static_cast<std::size_t>(num_nodes_));
    for (const auto& [u, v] : edges_) {
        adj[static_cast<std::size_t>(u)].push_back(v);
        adj[static_cast<std::size_t>(v)].push_back(u);
    }
    for (auto& list : adj) {
        std::sort(list.begin(), list.end());
    }
    return adj;
}

}  // namespace simplex
