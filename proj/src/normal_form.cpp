#include "spmorse/normal_form.hpp"

#include <algorithm>

namespace spm {

namespace {

// Smallest nonzero |entry| in column c among rows [from, rows); -1 if none.
int pick_pivot_row(const IntMat& h, int c, int from)
{
    int best = -1;
    Int best_abs;
    for (int r = from; r < h.rows(); ++r) {
        const Int& v = h.at(r, c);
        if (v == 0)
            continue;
        Int a = abs(v);
        if (best < 0 || a < best_abs) {
            best = r;
            best_abs = a;
        }
    }
    return best;
}

}  // namespace

HnfResult hnf(const IntMat& m)
{
    IntMat h = m;
    IntMat u = IntMat::identity(m.rows());
    int pivot_row = 0;
    for (int c = 0; c < h.cols() && pivot_row < h.rows(); ++c) {
        // Euclid down the column until a single nonzero entry remains.
        for (;;) {
            int r = pick_pivot_row(h, c, pivot_row);
            if (r < 0)
                break;
            h.swap_rows(pivot_row, r);
            u.swap_rows(pivot_row, r);
            bool clean = true;
            const Int p = h.at(pivot_row, c);
            for (int j = pivot_row + 1; j < h.rows(); ++j) {
                const Int& v = h.at(j, c);
                if (v == 0)
                    continue;
                Int q = fdiv(v, p);
                h.add_row_multiple(j, pivot_row, -q);
                u.add_row_multiple(j, pivot_row, -q);
                if (h.at(j, c) != 0)
                    clean = false;
            }
            if (clean)
                break;
        }
        if (h.at(pivot_row, c) == 0)
            continue;
        if (h.at(pivot_row, c) < 0) {
            h.scale_row(pivot_row, Int(-1));
            u.scale_row(pivot_row, Int(-1));
        }
        const Int p = h.at(pivot_row, c);
        for (int j = 0; j < pivot_row; ++j) {
            Int q = fdiv(h.at(j, c), p);
            if (q != 0) {
                h.add_row_multiple(j, pivot_row, -q);
                u.add_row_multiple(j, pivot_row, -q);
            }
        }
        ++pivot_row;
    }
    return {std::move(h), std::move(u)};
}

SnfResult snf(const IntMat& m)
{
    IntMat a = m;
    IntMat left = IntMat::identity(m.rows());
    IntMat right = IntMat::identity(m.cols());
    const int n = std::min(m.rows(), m.cols());

    for (int t = 0; t < n; ++t) {
        for (;;) {
            // Global pivot: smallest nonzero |entry| in the trailing block.
            int pr = -1, pc = -1;
            Int best;
            for (int r = t; r < a.rows(); ++r) {
                a.for_row(r, [&](int c, const Int& v) {
                    if (c < t)
                        return;
                    Int av = abs(v);
                    if (pr < 0 || av < best) {
                        pr = r;
                        pc = c;
                        best = av;
                    }
                });
            }
            if (pr < 0)
                goto done;  // trailing block is zero
            a.swap_rows(t, pr);
            left.swap_rows(t, pr);
            a.swap_cols(t, pc);
            right.swap_cols(t, pc);

            bool dirty = false;
            const Int p = a.at(t, t);
            for (int r = t + 1; r < a.rows(); ++r) {
                const Int& v = a.at(r, t);
                if (v == 0)
                    continue;
                Int q = fdiv(v, p);
                a.add_row_multiple(r, t, -q);
                left.add_row_multiple(r, t, -q);
                if (a.at(r, t) != 0)
                    dirty = true;
            }
            for (int c = t + 1; c < a.cols(); ++c) {
                const Int& v = a.at(t, c);
                if (v == 0)
                    continue;
                Int q = fdiv(v, p);
                a.add_col_multiple(c, t, -q);
                right.add_col_multiple(c, t, -q);
                if (a.at(t, c) != 0)
                    dirty = true;
            }
            if (dirty)
                continue;

            // Divisibility fix: pull a bad row up and restart this step.
            bool fixed = true;
            for (int r = t + 1; r < a.rows() && fixed; ++r) {
                bool bad = false;
                a.for_row(r, [&](int c, const Int& v) {
                    if (c > t && v % p != 0)
                        bad = true;
                });
                if (bad) {
                    a.add_row_multiple(t, r, Int(1));
                    left.add_row_multiple(t, r, Int(1));
                    fixed = false;
                }
            }
            if (fixed)
                break;
        }
        if (a.at(t, t) < 0) {
            a.scale_row(t, Int(-1));
            left.scale_row(t, Int(-1));
        }
    }
done:
    std::vector<Int> factors(n, Int(0));
    for (int t = 0; t < n; ++t)
        factors[t] = a.at(t, t);
    return {std::move(factors), std::move(left), std::move(right)};
}

IntMat kernel_int(const IntMat& m)
{
    // Row-HNF the transpose; rows of u mapping to zero rows of h span the
    // kernel lattice, which is automatically saturated.
    HnfResult r = hnf(m.transposed());
    std::vector<int> zero_rows;
    for (int i = 0; i < r.h.rows(); ++i)
        if (r.h.row_entries(i).empty())
            zero_rows.push_back(i);

    IntMat gens(static_cast<int>(zero_rows.size()), r.u.cols());
    for (int i = 0; i < static_cast<int>(zero_rows.size()); ++i)
        r.u.for_row(zero_rows[i], [&](int c, const Int& v) { gens.set(i, c, v); });
    IntMat canon = hnf(gens).h;
    // Drop trailing zero rows (there are none for a basis, but be safe).
    int nz = 0;
    for (int i = 0; i < canon.rows(); ++i)
        if (!canon.row_entries(i).empty())
            nz = i + 1;
    IntMat out(m.cols(), nz);
    for (int i = 0; i < nz; ++i)
        canon.for_row(i, [&](int c, const Int& v) { out.set(c, i, v); });
    return out;
}

IntMat saturate(const IntMat& columns)
{
    if (columns.cols() == 0)
        return IntMat(columns.rows(), 0);
    IntMat orth = kernel_int(columns.transposed());
    return kernel_int(orth.transposed());
}

Int det(const IntMat& m)
{
    if (m.rows() != m.cols())
        throw std::invalid_argument("det: matrix not square");
    const int n = m.rows();
    if (n == 0)
        return Int(1);
    // Bareiss fraction-free elimination.
    std::vector<IntVec> a(n, IntVec(n));
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            a[r][c] = m.at(r, c);
    Int prev(1);
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (a[k][k] == 0) {
            int swap = -1;
            for (int r = k + 1; r < n; ++r)
                if (a[r][k] != 0) {
                    swap = r;
                    break;
                }
            if (swap < 0)
                return Int(0);
            std::swap(a[k], a[swap]);
            sign = -sign;
        }
        for (int r = k + 1; r < n; ++r) {
            for (int c = k + 1; c < n; ++c) {
                a[r][c] = (a[r][c] * a[k][k] - a[r][k] * a[k][c]) / prev;
            }
            a[r][k] = 0;
        }
        prev = a[k][k];
    }
    return sign > 0 ? a[n - 1][n - 1] : -a[n - 1][n - 1];
}

IntMat inverse_unimodular(const IntMat& u)
{
    if (u.rows() != u.cols())
        throw std::invalid_argument("inverse_unimodular: matrix not square");
    HnfResult r = hnf(u);
    if (!(r.h == IntMat::identity(u.rows())))
        throw PreconditionError("inverse_unimodular: input is not unimodular");
    return r.u;
}

std::vector<int> rref(RatMat& m)
{
    std::vector<int> pivots;
    int row = 0;
    for (int c = 0; c < m.cols() && row < m.rows(); ++c) {
        int pr = -1;
        for (int r = row; r < m.rows(); ++r)
            if (m.at(r, c) != 0) {
                pr = r;
                break;
            }
        if (pr < 0)
            continue;
        m.swap_rows(row, pr);
        Rat inv = 1 / m.at(row, c);
        m.scale_row(row, inv);
        for (int r = 0; r < m.rows(); ++r) {
            if (r == row)
                continue;
            const Rat& v = m.at(r, c);
            if (v != 0)
                m.add_row_multiple(r, row, -v);
        }
        pivots.push_back(c);
        ++row;
    }
    return pivots;
}

int rational_rank(const RatMat& m)
{
    RatMat copy = m;
    return static_cast<int>(rref(copy).size());
}

RatMat rational_kernel(const RatMat& m)
{
    RatMat e = m;
    std::vector<int> pivots = rref(e);
    std::vector<bool> is_pivot(m.cols(), false);
    for (int c : pivots)
        is_pivot[c] = true;

    std::vector<int> free_cols;
    for (int c = 0; c < m.cols(); ++c)
        if (!is_pivot[c])
            free_cols.push_back(c);

    RatMat out(m.cols(), static_cast<int>(free_cols.size()));
    for (int k = 0; k < static_cast<int>(free_cols.size()); ++k) {
        int fc = free_cols[k];
        out.set(fc, k, Rat(1));
        for (int i = 0; i < static_cast<int>(pivots.size()); ++i)
            out.set(pivots[i], k, -e.at(i, fc));
    }
    return out;
}

SparseVec sparse_scaled(const SparseVec& v, const Rat& s)
{
    SparseVec out;
    if (s == 0)
        return out;
    for (const auto& [i, x] : v)
        out[i] = x * s;
    return out;
}

void sparse_axpy(SparseVec& dst, const Rat& s, const SparseVec& src)
{
    if (s == 0)
        return;
    for (const auto& [i, x] : src) {
        auto it = dst.find(i);
        if (it == dst.end()) {
            dst[i] = s * x;
        } else {
            it->second += s * x;
            if (it->second == 0)
                dst.erase(it);
        }
    }
}

namespace {

// Reduce vec against echelon rows in pivot order; multipliers applied to comb.
SparseVec reduce_against(const std::vector<SparseVec>& rows, const std::vector<int>& pivots,
                         const std::vector<SparseVec>& coeffs, const SparseVec& vec,
                         SparseVec* comb)
{
    SparseVec r = vec;
    for (size_t k = 0; k < rows.size(); ++k) {
        auto it = r.find(pivots[k]);
        if (it == r.end())
            continue;
        Rat mu = it->second;  // echelon pivots are normalized to 1
        sparse_axpy(r, -mu, rows[k]);
        if (comb)
            sparse_axpy(*comb, mu, coeffs[k]);
    }
    return r;
}

}  // namespace

bool RowSpan::add(const SparseVec& vec)
{
    const int idx = added_++;
    SparseVec reduction;
    SparseVec r = reduce_against(rows_, pivots_, coeffs_, vec, &reduction);
    if (r.empty())
        return false;
    // r = vec - sum(mu_k rows_k), so its generator expansion is
    // e_idx - reduction.
    SparseVec coeff;
    coeff[idx] = Rat(1);
    sparse_axpy(coeff, Rat(-1), reduction);
    int pivot = r.begin()->first;
    Rat inv = 1 / r.begin()->second;
    SparseVec row = sparse_scaled(r, inv);
    coeff = sparse_scaled(coeff, inv);
    size_t pos = 0;
    while (pos < pivots_.size() && pivots_[pos] < pivot)
        ++pos;
    rows_.insert(rows_.begin() + pos, std::move(row));
    coeffs_.insert(coeffs_.begin() + pos, std::move(coeff));
    pivots_.insert(pivots_.begin() + pos, pivot);
    return true;
}

std::optional<SparseVec> RowSpan::express(const SparseVec& vec) const
{
    SparseVec comb;
    SparseVec r = reduce_against(rows_, pivots_, coeffs_, vec, &comb);
    if (!r.empty())
        return std::nullopt;
    return comb;
}

bool RowSpan::contains(const SparseVec& vec) const
{
    return reduce_against(rows_, pivots_, coeffs_, vec, nullptr).empty();
}

std::optional<RatVec> solve_exact(const RatMat& a, const RatVec& b)
{
    if (static_cast<int>(b.size()) != a.rows())
        throw std::invalid_argument("solve_exact: rhs length mismatch");
    RatMat aug(a.rows(), a.cols() + 1);
    for (int r = 0; r < a.rows(); ++r) {
        a.for_row(r, [&](int c, const Rat& v) { aug.set(r, c, v); });
        if (b[r] != 0)
            aug.set(r, a.cols(), b[r]);
    }
    std::vector<int> pivots = rref(aug);
    if (!pivots.empty() && pivots.back() == a.cols())
        return std::nullopt;  // inconsistent
    RatVec x(a.cols(), Rat(0));
    for (int i = 0; i < static_cast<int>(pivots.size()); ++i)
        x[pivots[i]] = aug.at(i, a.cols());
    return x;
}

}  // namespace spm
