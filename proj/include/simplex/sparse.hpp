#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace simplex {

using index_t = std::int64_t;

/// Dense row-major feature block attached to one simplex dimension
/// (n_k rows, one column per feature channel).
using Dense = Eigen::MatrixXd;
using Signal = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct Triplet {
    index_t row = 0;
    index_t col = 0;
    double value = 0.0;
};

/// Signed sparse matrix in canonical compressed-row form.
///
/// Built from COO triplets; finalization sums duplicate coordinates,
/// drops exact zeros, and sorts entries row-major so that equality is
/// structural. Instances are immutable after construction and safe to
/// share across threads.
class SparseMatrix {
  public:
    SparseMatrix() = default;
    SparseMatrix(index_t rows, index_t cols) : rows_(rows), cols_(cols), row_ptr_(static_cast<std::size_t>(rows) + 1, 0) {}
    SparseMatrix(index_t rows, index_t cols, std::vector<Triplet> entries);

    static SparseMatrix identity(index_t n);

    index_t rows() const { return rows_; }
    index_t cols() const { return cols_; }
    index_t nnz() const { return static_cast<index_t>(values_.size()); }

    const std::vector<index_t>& row_ptr() const { return row_ptr_; }
    const std::vector<index_t>& col_idx() const { return col_idx_; }
    const std::vector<double>& values() const { return values_; }

    /// Stored value at (i, j), or 0 when the coordinate is not stored.
    double value_at(index_t i, index_t j) const;

    /// Canonical triplet list (row-major order).
    std::vector<Triplet> entries() const;

    SparseMatrix transpose() const;
    SparseMatrix abs_entries() const;

    Dense to_dense() const;

    bool operator==(const SparseMatrix& other) const = default;

  private:
    index_t rows_ = 0;
    index_t cols_ = 0;
    std::vector<index_t> row_ptr_ = {0};
    std::vector<index_t> col_idx_;
    std::vector<double> values_;
};

/// Sparse-dense product a * b.
Dense spmm(const SparseMatrix& a, const Dense& b);

/// Sparse-sparse product in canonical form; cancellation zeros are dropped.
SparseMatrix spgemm(const SparseMatrix& a, const SparseMatrix& b);

SparseMatrix transpose(const SparseMatrix& a);
SparseMatrix abs_entries(const SparseMatrix& a);

/// Entrywise sum, assembled by re-finalizing the combined triplet lists.
SparseMatrix add(const SparseMatrix& a, const SparseMatrix& b);

/// COO text format: header `rows cols nnz`, then one `row col value`
/// line per entry in row-major order, values with 17 significant digits.
void write_coo(std::ostream& os, const SparseMatrix& a);

/// Number of worker threads for row-parallel kernels. Defaults to the
/// hardware count, capped by the SIMPLEX_THREADS environment variable.
int thread_count();

}  // namespace simplex
