#pragma once

#include "simplex/complex.hpp"
#include "simplex/sparse.hpp"

#include <utility>

namespace simplex {

/// Non-negative operator mapping signals on from_dim-simplices to
/// to_dim-simplices. Single steps are unsigned incidence matrices;
/// chains are their ordered products, so entries count incidence paths.
struct ProjectionOperator {
    int from_dim = 0;
    int to_dim = 0;
    SparseMatrix matrix;  // n_{to_dim} x n_{from_dim}
};

/// Map k-simplex signals to (k-1)-simplex signals (unsigned incidence).
ProjectionOperator project_down(const SimplicialComplex& c, int k);

/// Map (k-1)-simplex signals to k-simplex signals; transpose of the
/// corresponding down operator.
ProjectionOperator project_up(const SimplicialComplex& c, int k);

/// Ordered product of single-step operators between two distinct
/// dimensions; the downward and upward chains between the same pair of
/// dimensions are transposes of each other.
ProjectionOperator project_chain(const SimplicialComplex& c, int from_dim, int to_dim);

/// Weights of one multi-simplicial interaction layer. For each of the
/// two participating dimensions: a 2d x d matrix applied to the
/// concatenation (own signal, projected signal) and a d x d output mix.
struct MSIWeights {
    Dense concat_k1;  // 2d x d
    Dense mix_k1;     // d x d
    Dense concat_k2;
    Dense mix_k2;
};

/// Fuse signals across two simplex dimensions (k1 < k2):
///   out_k1 = ReLU((x_k1 | down x_k2) concat_k1) mix_k1
/// and symmetrically for k2 with the upward projection.
std::pair<Signal, Signal> msi_forward(const Signal& x_k1, const Signal& x_k2,
                                      const ProjectionOperator& down, const ProjectionOperator& up,
                                      const MSIWeights& w);

}  // namespace simplex
