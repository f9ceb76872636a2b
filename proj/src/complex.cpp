#include "simplex/complex.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>
#include <string>

namespace simplex {

namespace {

bool adjacent(const std::vector<std::vector<index_t>>& adj, index_t u, index_t v) {
    const auto& list = adj[static_cast<std::size_t>(u)];
    return std::binary_search(list.begin(), list.end(), v);
}

index_t find_simplex(const std::vector<Simplex>& list, const Simplex& s) {
    const auto it = std::lower_bound(list.begin(), list.end(), s);
    if (it == list.end() || *it != s) {
        return -1;
    }
    return static_cast<index_t>(it - list.begin());
}

}  // namespace

SparseMatrix boundary_from_lists(const std::vector<Simplex>& faces, const std::vector<Simplex>& cells) {
    std::vector<Triplet> entries;
    entries.reserve(cells.size() * (cells.empty() ? 0 : cells[0].size()));
    for (std::size_t j = 0; j < cells.size(); ++j) {
        const Simplex& cell = cells[j];
        Simplex face(cell.size() - 1);
        double sign = 1.0;
        for (std::size_t m = 0; m < cell.size(); ++m) {
            std::size_t w = 0;
            for (std::size_t q = 0; q < cell.size(); ++q) {
                if (q != m) {
                    face[w++] = cell[q];
                }
            }
            const index_t i = find_simplex(faces, face);
            if (i < 0) {
                throw std::logic_error("boundary_from_lists: missing face of a cell");
            }
            entries.push_back({i, static_cast<index_t>(j), sign});
            sign = -sign;
        }
    }
    return SparseMatrix(static_cast<index_t>(faces.size()), static_cast<index_t>(cells.size()), std::move(entries));
}

SimplicialComplex build_complex(const Graph& g, int max_dim) {
    if (max_dim < 0) {
        throw std::invalid_argument("build_complex: negative dimension");
    }
    const index_t n0 = g.num_nodes();
    const bool clamp = max_dim > static_cast<int>(n0) - 1;
    int k_cap = clamp ? std::max<int>(0, static_cast<int>(n0) - 1) : max_dim;

    SimplicialComplex c;
    const auto adj = g.adjacency();

    c.simplices.resize(static_cast<std::size_t>(k_cap) + 1);
    for (index_t v = 0; v < n0; ++v) {
        c.simplices[0].push_back({v});
    }
    if (k_cap >= 1) {
        for (const auto& [u, v] : g.edges()) {
            c.simplices[1].push_back({u, v});
        }
    }
    for (int k = 2; k <= k_cap; ++k) {
        const auto& lower = c.simplices[static_cast<std::size_t>(k) - 1];
        auto& level = c.simplices[static_cast<std::size_t>(k)];
        for (const Simplex& s : lower) {
            const index_t last = s.back();
            for (const index_t u : adj[static_cast<std::size_t>(last)]) {
                if (u <= last) {
                    continue;
                }
                bool clique = true;
                for (std::size_t q = 0; q + 1 < s.size(); ++q) {
                    if (!adjacent(adj, s[q], u)) {
                        clique = false;
                        break;
                    }
                }
                if (clique) {
                    Simplex bigger = s;
                    bigger.push_back(u);
                    level.push_back(std::move(bigger));
                }
            }
        }
        if (clamp && level.empty()) {
            k_cap = k - 1;
            c.simplices.resize(static_cast<std::size_t>(k_cap) + 1);
            break;
        }
    }
    if (clamp) {
        while (k_cap > 0 && c.simplices[static_cast<std::size_t>(k_cap)].empty()) {
            --k_cap;
            c.simplices.resize(static_cast<std::size_t>(k_cap) + 1);
        }
    }
    c.max_dim = k_cap;

    c.boundary.resize(static_cast<std::size_t>(k_cap) + 1);
    for (int k = 1; k <= k_cap; ++k) {
        c.boundary[static_cast<std::size_t>(k)] = boundary_from_lists(c.simplices[static_cast<std::size_t>(k) - 1], c.simplices[static_cast<std::size_t>(k)]);
    }
    return c;
}

const SparseMatrix& boundary_operator(const SimplicialComplex& c, int k) {
    if (k < 1 || k > c.max_dim) {
        throw std::out_of_range("boundary_operator: dimension " + std::to_string(k) + " not in [1, " + std::to_string(c.max_dim) + "]");
    }
    return c.boundary[static_cast<std::size_t>(k)];
}

SparseMatrix hodge_laplacian_matrix(const SimplicialComplex& c, int k) {
    if (k < 0 || k > c.max_dim) {
        throw std::out_of_range("hodge_laplacian_matrix: dimension " + std::to_string(k) + " not in [0, " + std::to_string(c.max_dim) + "]");
    }
    const index_t n = c.num_simplices(k);
    SparseMatrix lap(n, n);
    if (k + 1 <= c.max_dim) {
        const SparseMatrix& up = c.boundary[static_cast<std::size_t>(k) + 1];
        lap = add(lap, spgemm(up, up.transpose()));
    }
    if (k >= 1) {
        const SparseMatrix& down = c.boundary[static_cast<std::size_t>(k)];
        lap = add(lap, spgemm(down.transpose(), down));
    }
    return lap;
}

std::vector<index_t> hop_neighborhood(const SimplicialComplex& c, int k, index_t seed, int radius) {
    const index_t n = c.num_simplices(k);
    if (seed < 0 || seed >= n) {
        throw std::out_of_range("hop_neighborhood: seed " + std::to_string(seed) + " out of range");
    }
    const SparseMatrix lap = hodge_laplacian_matrix(c, k);

    std::vector<int> dist(static_cast<std::size_t>(n), -1);
    std::queue<index_t> frontier;
    dist[static_cast<std::size_t>(seed)] = 0;
    frontier.push(seed);
    while (!frontier.empty()) {
        const index_t v = frontier.front();
        frontier.pop();
        if (dist[static_cast<std::size_t>(v)] >= radius) {
            continue;
        }
        for (index_t p = lap.row_ptr()[static_cast<std::size_t>(v)]; p < lap.row_ptr()[static_cast<std::size_t>(v) + 1]; ++p) {
            const index_t u = lap.col_idx()[static_cast<std::size_t>(p)];
            if (u != v && dist[static_cast<std::size_t>(u)] < 0) {
                dist[static_cast<std::size_t>(u)] = dist[static_cast<std::size_t>(v)] + 1;
                frontier.push(u);
            }
        }
    }
    std::vector<index_t> out;
    for (index_t v = 0; v < n; ++v) {
        if (dist[static_cast<std::size_t>(v)] >= 0) {
            out.push_back(v);
        }
    }
    return out;
}

}  // namespace simplex
