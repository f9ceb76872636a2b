#pragma once

#include "simplex/complex.hpp"
#include "simplex/projection.hpp"
#include "simplex/sparse.hpp"

#include <utility>
#include <vector>

namespace simplex {

/// Query/key weights and self-vs-cross mixing factors for one attention
/// pooling layer over a pair of simplex dimensions (k1 < k2).
struct AttentionParams {
    Dense query_k1;  // d x d_k
    Dense key_k1;
    Dense query_k2;
    Dense key_k2;
    double alpha_k1 = 0.5;
    double alpha_k2 = 0.5;
};

/// Per-simplex attention scores in (0, 1]: diagonal of the row-softmax
/// of the combined self/cross score matrix.
struct AttentionWeights {
    Vector values;
};

/// Partition of the nodes into contiguously numbered clusters.
struct NodeClustering {
    std::vector<index_t> cluster_of;
    index_t num_clusters = 0;
};

/// Output of one downsampling step: binary assignment matrices S_k
/// (coarse x original, one per dimension) and the coarsened complex.
struct CoarseningResult {
    std::vector<SparseMatrix> assignment;
    SimplicialComplex coarse;
};

/// Diagonal of the row-softmax of a square score matrix.
Vector row_softmax_diag(const Dense& scores);

/// Combined self/cross attention scores for both dimensions of a pair.
/// `down` maps k2-signals to k1, `up` the reverse.
std::pair<AttentionWeights, AttentionWeights> attention_weights(
    const Signal& x_k1, const Signal& x_k2,
    const ProjectionOperator& down, const ProjectionOperator& up,
    const AttentionParams& params);

/// One level of deterministic greedy edge matching on the 1-skeleton:
/// repeatedly take the lowest-index unmatched node and merge it with
/// the unmatched neighbor maximizing 1/deg(u) + 1/deg(v), ties to the
/// lowest neighbor index. Unmatched leftovers become singletons.
NodeClustering cluster_nodes(const SimplicialComplex& c);

/// Contract the complex along a node clustering. Simplices whose image
/// degenerates (two vertices in one cluster) are removed; duplicate
/// images are merged keeping the lexicographically first original.
/// Degeneracy and duplication are detected on the columns of
/// S_{k-1} * boundary_k; the coarse boundary operators are rebuilt in
/// the canonical ascending-vertex orientation.
CoarseningResult downsample(const SimplicialComplex& c, const NodeClustering& nc);

/// Attention-weighted average of the features of each coarse simplex's
/// preimage. Signals of simplices with no coarse image are dropped.
Signal pool_signal(const Signal& x, const AttentionWeights& a, const SparseMatrix& s);

std::vector<Signal> pool_signals(const std::vector<Signal>& x, const std::vector<AttentionWeights>& a, const std::vector<SparseMatrix>& s);

}  // namespace simplex
