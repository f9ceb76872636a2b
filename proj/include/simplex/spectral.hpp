#pragma once

#include "simplex/complex.hpp"
#include "simplex/sparse.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace simplex {

/// Symmetric positive semidefinite Hodge-Laplacian operator on the
/// k-simplices of a complex.
struct HLOperator {
    int k = 0;
    SparseMatrix matrix;

    index_t size() const { return matrix.rows(); }
};

/// Partial or complete eigensystem of an HLOperator: ascending
/// eigenvalues with orthonormal, deterministically signed eigenvectors
/// as columns.
struct EigenSystem {
    Vector eigenvalues;
    Dense eigenvectors;

    bool complete() const { return eigenvectors.rows() == eigenvectors.cols(); }
};

/// Laguerre expansion coefficients of one spectral filter layer:
/// theta[p] is the d_in x d_out coefficient matrix of the degree-p term.
struct FilterBank {
    int k = 0;
    std::vector<Dense> theta;

    int order() const { return static_cast<int>(theta.size()); }
    index_t in_channels() const { return theta.empty() ? 0 : theta[0].rows(); }
    index_t out_channels() const { return theta.empty() ? 0 : theta[0].cols(); }
};

HLOperator hodge_laplacian(const SimplicialComplex& c, int k);

/// Lowest `count` eigenpairs (all when nullopt). Oversized requests are
/// clamped with a warning on stderr. Dense solver; intended for
/// operators up to a few thousand simplices.
EigenSystem eigensystem(const HLOperator& op, std::optional<index_t> count = std::nullopt);

/// Laguerre polynomial values T_p(lambda) for p = 0..order-1, one row
/// per lambda, via the three-term recurrence
///   T_0 = 1,  T_1 = 1 - x,  (p+1) T_{p+1} = (2p+1-x) T_p - p T_{p-1}.
Dense laguerre_eval(int order, const std::vector<double>& lambdas);

/// Exact spectral filter: transform to the eigenbasis, scale each
/// coefficient by spectrum_fn(lambda), transform back. Requires the
/// complete eigensystem.
Signal filter_exact(const EigenSystem& es, const std::function<double(double)>& spectrum_fn, const Signal& x);

/// Polynomial filter application using the Laguerre recurrence directly
/// on signal blocks; the polynomial of the operator is never formed.
/// `spectrum_scale` optionally divides the operator's spectrum first
/// (1.0 applies the recurrence to the raw operator).
Signal filter_poly(const HLOperator& op, const FilterBank& fb, const Signal& x, double spectrum_scale = 1.0);

}  // namespace simplex
