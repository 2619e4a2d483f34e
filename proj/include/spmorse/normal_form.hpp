#pragma once

#include <optional>
#include <vector>

#include "spmorse/matrix.hpp"

namespace spm {

struct HnfResult {
    IntMat h;  // row Hermite normal form
    IntMat u;  // unimodular, h = u * m
};

// Row-style HNF: pivots positive, entries above a pivot reduced into
// [0, pivot). Idempotent on its own output.
HnfResult hnf(const IntMat& m);

struct SnfResult {
    std::vector<Int> factors;  // length min(rows, cols), d1 | d2 | ..., zeros last
    IntMat left;               // unimodular
    IntMat right;              // unimodular; left * m * right = diag(factors)
};

SnfResult snf(const IntMat& m);

// Basis (as columns) of {x in Z^n : m x = 0}; saturated and canonical.
IntMat kernel_int(const IntMat& m);

// Basis (as columns) of the smallest summand S(A) containing the column span:
// S(A) = {x | exists n != 0 with n x in <A>}. Canonical via HNF.
IntMat saturate(const IntMat& columns);

// |det| via fraction-free (Bareiss) elimination; square input.
Int det(const IntMat& m);

// Exact inverse of a unimodular integer matrix.
IntMat inverse_unimodular(const IntMat& u);

int rational_rank(const RatMat& m);

// Basis (as columns) of the rational kernel, canonical (from RREF free columns).
RatMat rational_kernel(const RatMat& m);

// One exact solution of a x = b (free variables set to 0), or nullopt when the
// system is inconsistent. Shape mismatch is reported as a distinct error.
std::optional<RatVec> solve_exact(const RatMat& a, const RatVec& b);

// Reduced row echelon form (pivots 1, pivot columns cleared). Returns pivot
// column indices.
std::vector<int> rref(RatMat& m);

using SparseVec = std::map<int, Rat>;  // index -> nonzero rational coordinate

SparseVec sparse_scaled(const SparseVec& v, const Rat& s);
void sparse_axpy(SparseVec& dst, const Rat& s, const SparseVec& src);  // dst += s*src

// Incremental row space in echelon form with expansion over the original
// generators; the workhorse for span and membership questions on sparse
// rational vectors.
class RowSpan {
public:
    // Returns true when vec enlarged the span.
    bool add(const SparseVec& vec);
    int rank() const { return static_cast<int>(rows_.size()); }
    // Coefficients over the added generators (in insertion order, only the
    // independent ones carry weight); nullopt when vec is outside the span.
    std::optional<SparseVec> express(const SparseVec& vec) const;
    bool contains(const SparseVec& vec) const;

private:
    std::vector<SparseVec> rows_;    // echelon rows, pivots ascending
    std::vector<SparseVec> coeffs_;  // rows_ as combinations of the generators
    std::vector<int> pivots_;
    int added_ = 0;
};

}  // namespace spm
