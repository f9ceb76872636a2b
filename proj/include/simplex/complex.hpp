#pragma once

#include "simplex/graph.hpp"
#include "simplex/sparse.hpp"

#include <vector>

namespace simplex {

/// One k-simplex as its strictly ascending vertex tuple.
using Simplex = std::vector<index_t>;

/// Clique complex of a graph up to dimension K.
///
/// simplices[k] lists all (k+1)-cliques in lexicographic order;
/// boundary[k] (k >= 1) is the signed incidence of (k-1)-faces in
/// k-simplices. Each simplex is oriented by ascending vertex index and
/// the face dropping the m-th vertex carries sign (-1)^m, which makes
/// consecutive boundary operators compose to zero. Immutable once built.
struct SimplicialComplex {
    int max_dim = 0;
    std::vector<std::vector<Simplex>> simplices;  // [0..max_dim]
    std::vector<SparseMatrix> boundary;           // [1..max_dim]; [0] unused

    index_t num_simplices(int k) const {
        if (k < 0 || k > max_dim) {
            return 0;
        }
        return static_cast<index_t>(simplices[static_cast<std::size_t>(k)].size());
    }
};

/// Clique-lift a graph up to dimension max_dim. A request beyond
/// num_nodes - 1 is clamped to the largest dimension holding a simplex.
SimplicialComplex build_complex(const Graph& g, int max_dim);

/// Signed boundary operator for dimension k (1 <= k <= max_dim).
const SparseMatrix& boundary_operator(const SimplicialComplex& c, int k);

/// Canonical signed boundary matrix between two consecutive simplex
/// lists (rows: faces, cols: simplices). Both lists must be sorted.
SparseMatrix boundary_from_lists(const std::vector<Simplex>& faces, const std::vector<Simplex>& cells);

/// n_k x n_k Hodge-Laplacian matrix of dimension k: the Gram matrix of
/// the (k+1)-boundary plus the Gram matrix of the k-coboundary.
SparseMatrix hodge_laplacian_matrix(const SimplicialComplex& c, int k);

/// All k-simplices reachable from `seed` within `radius` steps of the
/// adjacency induced by the off-diagonal pattern of the k-th
/// Hodge-Laplacian. Returned sorted ascending.
std::vector<index_t> hop_neighborhood(const SimplicialComplex& c, int k, index_t seed, int radius);

}  // namespace simplex
