#pragma once

#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "spmorse/numeric.hpp"

namespace spm {

// Exact matrix over Int or Rat. Storage is dense up to 64x64 and row-sparse
// above; the switch is a representation detail, entry access is total within
// bounds either way.
template <typename T>
class BasicMat {
public:
    static constexpr int kSparseThreshold = 64;

    BasicMat() : rows_(0), cols_(0), sparse_(false) {}

    BasicMat(int rows, int cols)
        : rows_(rows), cols_(cols), sparse_(rows > kSparseThreshold || cols > kSparseThreshold)
    {
        if (rows < 0 || cols < 0)
            throw std::invalid_argument("negative matrix dimension");
        if (sparse_)
            sparse_rows_.resize(rows);
        else
            dense_.assign(static_cast<size_t>(rows) * cols, T(0));
    }

    static BasicMat identity(int n)
    {
        BasicMat m(n, n);
        for (int i = 0; i < n; ++i)
            m.set(i, i, T(1));
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool is_sparse() const { return sparse_; }

    const T& at(int r, int c) const
    {
        check_bounds(r, c);
        if (!sparse_)
            return dense_[static_cast<size_t>(r) * cols_ + c];
        auto it = sparse_rows_[r].find(c);
        return it == sparse_rows_[r].end() ? zero_ : it->second;
    }

    void set(int r, int c, T v)
    {
        check_bounds(r, c);
        if (!sparse_) {
            dense_[static_cast<size_t>(r) * cols_ + c] = std::move(v);
        } else if (v == 0) {
            sparse_rows_[r].erase(c);
        } else {
            sparse_rows_[r][c] = std::move(v);
        }
    }

    // Calls fn(col, value) for the nonzero entries of a row, ascending col.
    void for_row(int r, const std::function<void(int, const T&)>& fn) const
    {
        if (!sparse_) {
            for (int c = 0; c < cols_; ++c) {
                const T& v = dense_[static_cast<size_t>(r) * cols_ + c];
                if (v != 0)
                    fn(c, v);
            }
        } else {
            for (const auto& [c, v] : sparse_rows_[r])
                fn(c, v);
        }
    }

    std::vector<std::pair<int, T>> row_entries(int r) const
    {
        std::vector<std::pair<int, T>> out;
        for_row(r, [&](int c, const T& v) { out.emplace_back(c, v); });
        return out;
    }

    void swap_rows(int i, int j)
    {
        if (i == j)
            return;
        if (!sparse_) {
            for (int c = 0; c < cols_; ++c)
                std::swap(dense_[static_cast<size_t>(i) * cols_ + c],
                          dense_[static_cast<size_t>(j) * cols_ + c]);
        } else {
            std::swap(sparse_rows_[i], sparse_rows_[j]);
        }
    }

    void swap_cols(int i, int j)
    {
        if (i == j)
            return;
        for (int r = 0; r < rows_; ++r) {
            T a = at(r, i), b = at(r, j);
            set(r, i, std::move(b));
            set(r, j, std::move(a));
        }
    }

    void scale_row(int r, const T& s)
    {
        if (!sparse_) {
            for (int c = 0; c < cols_; ++c)
                dense_[static_cast<size_t>(r) * cols_ + c] *= s;
        } else if (s == 0) {
            sparse_rows_[r].clear();
        } else {
            for (auto& [c, v] : sparse_rows_[r])
                v *= s;
        }
    }

    void scale_col(int c, const T& s)
    {
        for (int r = 0; r < rows_; ++r) {
            T v = at(r, c);
            if (v != 0)
                set(r, c, v * s);
        }
    }

    // row[dst] += t * row[src]
    void add_row_multiple(int dst, int src, const T& t)
    {
        if (t == 0)
            return;
        if (!sparse_) {
            for (int c = 0; c < cols_; ++c)
                dense_[static_cast<size_t>(dst) * cols_ + c] +=
                    t * dense_[static_cast<size_t>(src) * cols_ + c];
        } else {
            for (const auto& [c, v] : sparse_rows_[src]) {
                auto it = sparse_rows_[dst].find(c);
                if (it == sparse_rows_[dst].end()) {
                    sparse_rows_[dst][c] = t * v;
                } else {
                    it->second += t * v;
                    if (it->second == 0)
                        sparse_rows_[dst].erase(it);
                }
            }
        }
    }

    // col[dst] += t * col[src]
    void add_col_multiple(int dst, int src, const T& t)
    {
        if (t == 0)
            return;
        for (int r = 0; r < rows_; ++r) {
            const T& v = at(r, src);
            if (v != 0)
                set(r, dst, at(r, dst) + t * v);
        }
    }

    BasicMat transposed() const
    {
        BasicMat out(cols_, rows_);
        for (int r = 0; r < rows_; ++r)
            for_row(r, [&](int c, const T& v) { out.set(c, r, v); });
        return out;
    }

    BasicMat operator*(const BasicMat& o) const
    {
        if (cols_ != o.rows_)
            throw std::invalid_argument("matrix product shape mismatch");
        BasicMat out(rows_, o.cols_);
        for (int r = 0; r < rows_; ++r) {
            for_row(r, [&](int k, const T& v) {
                o.for_row(k, [&](int c, const T& w) { out.set(r, c, out.at(r, c) + v * w); });
            });
        }
        return out;
    }

    std::vector<T> apply(const std::vector<T>& x) const
    {
        if (static_cast<int>(x.size()) != cols_)
            throw std::invalid_argument("matrix-vector shape mismatch");
        std::vector<T> out(rows_, T(0));
        for (int r = 0; r < rows_; ++r)
            for_row(r, [&](int c, const T& v) { out[r] += v * x[c]; });
        return out;
    }

    bool operator==(const BasicMat& o) const
    {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            return false;
        for (int r = 0; r < rows_; ++r)
            for (int c = 0; c < cols_; ++c)
                if (at(r, c) != o.at(r, c))
                    return false;
        return true;
    }

    bool is_zero() const
    {
        for (int r = 0; r < rows_; ++r)
            if (!row_entries(r).empty())
                return false;
        return true;
    }

    int nonzero_count() const
    {
        int n = 0;
        for (int r = 0; r < rows_; ++r)
            for_row(r, [&](int, const T&) { ++n; });
        return n;
    }

private:
    void check_bounds(int r, int c) const
    {
        if (r < 0 || r >= rows_ || c < 0 || c >= cols_)
            throw std::out_of_range("matrix index out of range");
    }

    int rows_, cols_;
    bool sparse_;
    std::vector<T> dense_;
    std::vector<std::map<int, T>> sparse_rows_;
    inline static const T zero_{0};
};

using IntMat = BasicMat<Int>;
using RatMat = BasicMat<Rat>;

inline RatMat to_rational(const IntMat& m)
{
    RatMat out(m.rows(), m.cols());
    for (int r = 0; r < m.rows(); ++r)
        m.for_row(r, [&](int c, const Int& v) { out.set(r, c, Rat(v)); });
    return out;
}

// Columns of a matrix as vectors and back; most lattice code passes bases
// around as column lists.
inline IntMat columns_to_mat(int rows, const std::vector<IntVec>& cols)
{
    IntMat m(rows, static_cast<int>(cols.size()));
    for (int c = 0; c < static_cast<int>(cols.size()); ++c) {
        if (static_cast<int>(cols[c].size()) != rows)
            throw std::invalid_argument("column length mismatch");
        for (int r = 0; r < rows; ++r)
            if (cols[c][r] != 0)
                m.set(r, c, cols[c][r]);
    }
    return m;
}

inline std::vector<IntVec> mat_to_columns(const IntMat& m)
{
    std::vector<IntVec> cols(m.cols(), IntVec(m.rows(), Int(0)));
    for (int r = 0; r < m.rows(); ++r)
        m.for_row(r, [&](int c, const Int& v) { cols[c][r] = v; });
    return cols;
}

}  // namespace spm
