#include "simplex/projection.hpp"

#include <stdexcept>
#include <string>

namespace simplex {

ProjectionOperator project_down(const SimplicialComplex& c, int k) {
    if (k < 1 || k > c.max_dim) {
        throw std::out_of_range("project_down: dimension " + std::to_string(k) + " not in [1, " + std::to_string(c.max_dim) + "]");
    }
    return {k, k - 1, c.boundary[static_cast<std::size_t>(k)].abs_entries()};
}

ProjectionOperator project_up(const SimplicialComplex& c, int k) {
    if (k < 1 || k > c.max_dim) {
        throw std::out_of_range("project_up: dimension " + std::to_string(k) + " not in [1, " + std::to_string(c.max_dim) + "]");
    }
    return {k - 1, k, c.boundary[static_cast<std::size_t>(k)].abs_entries().transpose()};
}

ProjectionOperator project_chain(const SimplicialComplex& c, int from_dim, int to_dim) {
    if (from_dim == to_dim) {
        throw std::invalid_argument("project_chain: dimensions must differ");
    }
    if (from_dim < 0 || from_dim > c.max_dim || to_dim < 0 || to_dim > c.max_dim) {
        throw std::out_of_range("project_chain: dimensions (" + std::to_string(from_dim) + " -> " + std::to_string(to_dim) + ") not in [0, " + std::to_string(c.max_dim) + "]");
    }
    SparseMatrix chain;
    if (from_dim > to_dim) {
        chain = project_down(c, to_dim + 1).matrix;
        for (int k = to_dim + 2; k <= from_dim; ++k) {
            chain = spgemm(chain, project_down(c, k).matrix);
        }
    } else {
        chain = project_up(c, to_dim).matrix;
        for (int k = to_dim - 1; k > from_dim; --k) {
            chain = spgemm(chain, project_up(c, k).matrix);
        }
    }
    return {from_dim, to_dim, std::move(chain)};
}

std::pair<Signal, Signal> msi_forward(const Signal& x_k1, const Signal& x_k2,
                                      const ProjectionOperator& down, const ProjectionOperator& up,
                                      const MSIWeights& w) {
    const index_t d = x_k1.cols();
    if (x_k2.cols() != d) {
        throw std::invalid_argument("msi_forward: feature widths differ (" + std::to_string(d) + " vs " + std::to_string(x_k2.cols()) + ")");
    }
    if (down.matrix.rows() != x_k1.rows() || down.matrix.cols() != x_k2.rows() || up.matrix.rows() != x_k2.rows() || up.matrix.cols() != x_k1.rows()) {
        throw std::invalid_argument("msi_forward: projection operators do not match signal sizes");
    }
    if (w.concat_k1.rows() != 2 * d || w.concat_k1.cols() != d || w.mix_k1.rows() != d || w.mix_k1.cols() != d || w.concat_k2.rows() != 2 * d || w.concat_k2.cols() != d || w.mix_k2.rows() != d || w.mix_k2.cols() != d) {
        throw std::invalid_argument("msi_forward: weight shapes do not match feature width " + std::to_string(d));
    }

    auto fuse = [d](const Signal& own, const Signal& projected, const Dense& concat_w, const Dense& mix_w) {
        Signal cat(own.rows(), 2 * d);
        cat.leftCols(d) = own;
        cat.rightCols(d) = projected;
        Signal hidden = (cat * concat_w).cwiseMax(0.0);
        return Signal(hidden * mix_w);
    };

    Signal out_k1 = fuse(x_k1, spmm(down.matrix, x_k2), w.concat_k1, w.mix_k1);
    Signal out_k2 = fuse(x_k2, spmm(up.matrix, x_k1), w.concat_k2, w.mix_k2);
    return {std::move(out_k1), std::move(out_k2)};
}

}  // namespace simplex
