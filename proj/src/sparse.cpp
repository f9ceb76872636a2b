#include "simplex/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>

namespace simplex {

namespace {

[[noreturn]] void throw_shape(const char* op, index_t ar, index_t ac, index_t br, index_t bc) {
    throw std::invalid_argument(std::string(op) + ": dimension mismatch (" + std::to_string(ar) + "x" + std::to_string(ac) + " vs " + std::to_string(br) + "x" + std::to_string(bc) + ")");
}

}  // namespace

SparseMatrix::SparseMatrix(index_t rows, index_t cols, std::vector<Triplet> entries)
    : rows_(rows), cols_(cols) {
    if (rows < 0 || cols < 0) {
        throw std::invalid_argument("SparseMatrix: negative dimensions");
    }
    for (const Triplet& t : entries) {
        if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols) {
            throw std::invalid_argument("SparseMatrix: entry (" + std::to_string(t.row) + "," + std::to_string(t.col) + ") out of range for " + std::to_string(rows) + "x" + std::to_string(cols));
        }
    }
    std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });

    row_ptr_.assign(static_cast<std::size_t>(rows) + 1, 0);
    col_idx_.reserve(entries.size());
    values_.reserve(entries.size());
    std::size_t i = 0;
    while (i < entries.size()) {
        const index_t r = entries[i].row;
        const index_t c = entries[i].col;
        double sum = 0.0;
        while (i < entries.size() && entries[i].row == r && entries[i].col == c) {
            sum += entries[i].value;
            ++i;
        }
        if (sum != 0.0) {  // exact cancellation test; +/-1 products cancel exactly
            col_idx_.push_back(c);
            values_.push_back(sum);
            ++row_ptr_[static_cast<std::size_t>(r) + 1];
        }
    }
    for (std::size_t r = 0; r < static_cast<std::size_t>(rows); ++r) {
        row_ptr_[r + 1] += row_ptr_[r];
    }
}

SparseMatrix SparseMatrix::identity(index_t n) {
    std::vector<Triplet> entries;
    entries.reserve(static_cast<std::size_t>(n));
    for (index_t i = 0; i < n; ++i) {
        entries.push_back({i, i, 1.0});
    }
    return SparseMatrix(n, n, std::move(entries));
}

double SparseMatrix::value_at(index_t i, index_t j) const {
    if (i < 0 || i >= rows_ || j < 0 || j >= cols_) {
        throw std::out_of_range("SparseMatrix::value_at: index out of range");
    }
    const auto begin = col_idx_.begin() + row_ptr_[static_cast<std::size_t>(i)];
    const auto end = col_idx_.begin() + row_ptr_[static_cast<std::size_t>(i) + 1];
    const auto it = std::lower_bound(begin, end, j);
    if (it == end || *it != j) {
        return 0.0;
    }
    return values_[static_cast<std::size_t>(it - col_idx_.begin())];
}

std::vector<Triplet> SparseMatrix::entries() const {
    std::vector<Triplet> out;
    out.reserve(values_.size());
    for (index_t r = 0; r < rows_; ++r) {
        for (index_t p = row_ptr_[static_cast<std::size_t>(r)]; p < row_ptr_[static_cast<std::size_t>(r) + 1]; ++p) {
            out.push_back({r, col_idx_[static_cast<std::size_t>(p)], values_[static_cast<std::size_t>(p)]});
        }
    }
    return out;
}

SparseMatrix SparseMatrix::transpose() const {
    std::vector<Triplet> flipped;
    flipped.reserve(values_.size());
    for (const Triplet& t : entries()) {
        flipped.push_back({t.col, t.row, t.value});
    }
    return SparseMatrix(cols_, rows_, std::move(flipped));
}

SparseMatrix SparseMatrix::abs_entries() const {
    SparseMatrix out = *this;
    for (double& v : out.values_) {
        v = std::fabs(v);
    }
    return out;
}

Dense SparseMatrix::to_dense() const {
    Dense out = Dense::Zero(rows_, cols_);
    for (const Triplet& t : entries()) {
        out(t.row, t.col) = t.value;
    }
    return out;
}

Dense spmm(const SparseMatrix& a, const Dense& b) {
    if (a.cols() != b.rows()) {
        throw_shape("spmm", a.rows(), a.cols(), b.rows(), b.cols());
    }
    Dense out = Dense::Zero(a.rows(), b.cols());
    const auto& row_ptr = a.row_ptr();
    const auto& col_idx = a.col_idx();
    const auto& values = a.values();

    auto run_rows = [&](index_t r0, index_t r1) {
        for (index_t r = r0; r < r1; ++r) {
            for (index_t p = row_ptr[static_cast<std::size_t>(r)]; p < row_ptr[static_cast<std::size_t>(r) + 1]; ++p) {
                out.row(r) += values[static_cast<std::size_t>(p)] * b.row(col_idx[static_cast<std::size_t>(p)]);
            }
        }
    };

    // Row partitioning keeps each output element's summation order fixed,
    // so results do not depend on the schedule.
    const int threads = thread_count();
    if (threads > 1 && a.rows() >= 4096) {
        std::vector<std::thread> pool;
        const index_t chunk = (a.rows() + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            const index_t r0 = t * chunk;
            const index_t r1 = std::min(a.rows(), r0 + chunk);
            if (r0 < r1) {
                pool.emplace_back(run_rows, r0, r1);
            }
        }
        for (auto& th : pool) {
            th.join();
        }
    } else {
        run_rows(0, a.rows());
    }
    return out;
}

SparseMatrix spgemm(const SparseMatrix& a, const SparseMatrix& b) {
    if (a.cols() != b.rows()) {
        throw_shape("spgemm", a.rows(), a.cols(), b.rows(), b.cols());
    }
    std::vector<Triplet> entries;
    std::vector<double> accum(static_cast<std::size_t>(b.cols()), 0.0);
    std::vector<char> touched(static_cast<std::size_t>(b.cols()), 0);
    std::vector<index_t> active;
    for (index_t r = 0; r < a.rows(); ++r) {
        active.clear();
        for (index_t pa = a.row_ptr()[static_cast<std::size_t>(r)]; pa < a.row_ptr()[static_cast<std::size_t>(r) + 1]; ++pa) {
            const index_t k = a.col_idx()[static_cast<std::size_t>(pa)];
            const double va = a.values()[static_cast<std::size_t>(pa)];
            for (index_t pb = b.row_ptr()[static_cast<std::size_t>(k)]; pb < b.row_ptr()[static_cast<std::size_t>(k) + 1]; ++pb) {
                const index_t c = b.col_idx()[static_cast<std::size_t>(pb)];
                if (!touched[static_cast<std::size_t>(c)]) {
                    touched[static_cast<std::size_t>(c)] = 1;
                    active.push_back(c);
                }
                accum[static_cast<std::size_t>(c)] += va * b.values()[static_cast<std::size_t>(pb)];
            }
        }
        std::sort(active.begin(), active.end());
        for (index_t c : active) {
            const double v = accum[static_cast<std::size_t>(c)];
            accum[static_cast<std::size_t>(c)] = 0.0;
            touched[static_cast<std::size_t>(c)] = 0;
            if (v != 0.0) {
                entries.push_back({r, c, v});
            }
        }
    }
    return SparseMatrix(a.rows(), b.cols(), std::move(entries));
}

SparseMatrix transpose(const SparseMatrix& a) {
    return a.transpose();
}

SparseMatrix abs_entries(const SparseMatrix& a) {
    return a.abs_entries();
}

SparseMatrix add(const SparseMatrix& a, const SparseMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw_shape("add", a.rows(), a.cols(), b.rows(), b.cols());
    }
    std::vector<Triplet> entries = a.entries();
    std::vector<Triplet> more = b.entries();
    entries.insert(entries.end(), more.begin(), more.end());
    return SparseMatrix(a.rows(), a.cols(), std::move(entries));
}

void write_coo(std::ostream& os, const SparseMatrix& a) {
    os << a.rows() << ' ' << a.cols() << ' ' << a.nnz() << '\n';
    char buf[64];
    for (const Triplet& t : a.entries()) {
        std::snprintf(buf, sizeof(buf), "%.17g", t.value);
        os << t.row << ' ' << t.col << ' ' << buf << '\n';
    }
}

int thread_count() {
    static const int count = [] {
        int n = static_cast<int>(std::thread::hardware_concurrency());
        if (n < 1) {
            n = 1;
        }
        if (const char* env = std::getenv("SIMPLEX_THREADS")) {
            char* end = nullptr;
            const long cap = std::strtol(env, &end, 10);
            if (end != env && cap >= 1 && cap < 1024) {
                n = std::min(n, static_cast<int>(cap));
            }
        }
        return n;
    }();
    return count;
}

}  // namespace simplex
