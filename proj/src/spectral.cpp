#include "simplex/spectral.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <iostream>
#include <stdexcept>
#include <string>

namespace simplex {

HLOperator hodge_laplacian(const SimplicialComplex& c, int k) {
    return HLOperator{k, hodge_laplacian_matrix(c, k)};
}

EigenSystem eigensystem(const HLOperator& op, std::optional<index_t> count) {
    const index_t n = op.size();
    index_t wanted = count.value_or(n);
    if (wanted > n) {
        std::cerr << "eigensystem: requested " << wanted << " pairs, clamping to " << n << "\n";
        wanted = n;
    }
    if (wanted < 0) {
        throw std::invalid_argument("eigensystem: negative count");
    }
    if (n == 0) {
        return EigenSystem{Vector(0), Dense(0, 0)};
    }

    Eigen::SelfAdjointEigenSolver<Dense> solver(op.matrix.to_dense());
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("eigensystem: dense solver failed");
    }

    EigenSystem es;
    es.eigenvalues = solver.eigenvalues().head(wanted);
    es.eigenvectors = solver.eigenvectors().leftCols(wanted);

    // Deterministic sign: first significantly nonzero component positive.
    for (index_t j = 0; j < es.eigenvectors.cols(); ++j) {
        for (index_t i = 0; i < es.eigenvectors.rows(); ++i) {
            const double v = es.eigenvectors(i, j);
            if (std::fabs(v) > 1e-10) {
                if (v < 0.0) {
                    es.eigenvectors.col(j) = -es.eigenvectors.col(j);
                }
                break;
            }
        }
    }
    return es;
}

Dense laguerre_eval(int order, const std::vector<double>& lambdas) {
    if (order < 1) {
        throw std::invalid_argument("laguerre_eval: order must be >= 1");
    }
    const index_t n = static_cast<index_t>(lambdas.size());
    Dense out(n, order);
    for (index_t i = 0; i < n; ++i) {
        const double x = lambdas[static_cast<std::size_t>(i)];
        out(i, 0) = 1.0;
        if (order > 1) {
            out(i, 1) = 1.0 - x;
        }
        for (int p = 1; p + 1 < order; ++p) {
            out(i, p + 1) = ((2.0 * p + 1.0 - x) * out(i, p) - p * out(i, p - 1)) / (p + 1.0);
        }
    }
    return out;
}

Signal filter_exact(const EigenSystem& es, const std::function<double(double)>& spectrum_fn, const Signal& x) {
    if (!es.complete()) {
        throw std::invalid_argument("filter_exact: eigensystem is incomplete (" + std::to_string(es.eigenvectors.cols()) + " of " + std::to_string(es.eigenvectors.rows()) + " pairs)");
    }
    if (x.rows() != es.eigenvectors.rows()) {
        throw std::invalid_argument("filter_exact: signal has " + std::to_string(x.rows()) + " rows, operator has " + std::to_string(es.eigenvectors.rows()));
    }
    Vector h(es.eigenvalues.size());
    for (index_t j = 0; j < h.size(); ++j) {
        h(j) = spectrum_fn(es.eigenvalues(j));
    }
    return es.eigenvectors * (h.asDiagonal() * (es.eigenvectors.transpose() * x));
}

Signal filter_poly(const HLOperator& op, const FilterBank& fb, const Signal& x, double spectrum_scale) {
    if (fb.k != op.k) {
        throw std::invalid_argument("filter_poly: filter bank is for dimension " + std::to_string(fb.k) + ", operator for " + std::to_string(op.k));
    }
    if (fb.order() < 1) {
        throw std::invalid_argument("filter_poly: empty filter bank");
    }
    if (x.rows() != op.size()) {
        throw std::invalid_argument("filter_poly: signal has " + std::to_string(x.rows()) + " rows, operator has " + std::to_string(op.size()));
    }
    if (x.cols() != fb.in_channels()) {
        throw std::invalid_argument("filter_poly: signal has " + std::to_string(x.cols()) + " channels, filter bank expects " + std::to_string(fb.in_channels()));
    }
    if (!(spectrum_scale > 0.0)) {
        throw std::invalid_argument("filter_poly: spectrum_scale must be positive");
    }
    if (op.size() == 0) {
        return Signal(0, fb.out_channels());
    }

    const double inv_scale = 1.0 / spectrum_scale;
    const int order = fb.order();

    Signal prev = x;  // degree-0 term of the recurrence applied to x
    Signal out = prev * fb.theta[0];
    if (order == 1) {
        return out;
    }
    Signal cur = x - inv_scale * spmm(op.matrix, x);
    out += cur * fb.theta[1];
    for (int p = 1; p + 1 < order; ++p) {
        Signal next = ((2.0 * p + 1.0) * cur - inv_scale * spmm(op.matrix, cur) - static_cast<double>(p) * prev) / (p + 1.0);
        out += next * fb.theta[static_cast<std::size_t>(p) + 1];
        prev = std::move(cur);
        cur = std::move(next);
    }
    return out;
}

}  // namespace simplex
