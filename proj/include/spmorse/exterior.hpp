#pragma once

#include <array>
#include <memory>

#include "spmorse/symplectic.hpp"

namespace spm {

// Rational subspace of Q^{ambient} kept in reduced row echelon form; the
// canonical carrier for wedge coordinates.
class SubspaceBasis {
public:
    SubspaceBasis() : ambient_(0) {}

    static SubspaceBasis from_vectors(int ambient, const std::vector<RatVec>& gens);
    static SubspaceBasis full(int ambient);

    int ambient() const { return ambient_; }
    int dim() const { return static_cast<int>(pivots_.size()); }
    const RatMat& rows() const { return rows_; }
    const std::vector<int>& pivots() const { return pivots_; }
    RatVec row(int i) const;

    // Coordinates of an ambient vector over the basis; nullopt outside.
    std::optional<RatVec> coordinates(const RatVec& v) const;
    bool contains_vector(const RatVec& v) const { return coordinates(v).has_value(); }
    bool contains(const SubspaceBasis& other) const;

    bool operator==(const SubspaceBasis& o) const
    {
        return ambient_ == o.ambient_ && rows_ == o.rows_;
    }

    std::string digest() const;

private:
    int ambient_;
    RatMat rows_;  // dim x ambient, RREF
    std::vector<int> pivots_;
};

using SubspacePtr = std::shared_ptr<const SubspaceBasis>;

RatVec to_rat_vec(const LatticeVector& v);

// Basis of {h : <h, v> = 0 for all v in vs} over Q inside Q^{2g}, echelonized.
SubspaceBasis orth_complement(const VecList& vs, int g);

// Sorted index triples over a subspace basis: the canonical coordinate
// system for its third wedge power.
std::vector<std::array<int, 3>> wedge3_basis(const SubspaceBasis& s);

// Lexicographically sorted index triples over a carrier dimension, with rank
// lookups in both directions.
struct Wedge3Index {
    explicit Wedge3Index(int dim);
    int dim;
    int count;  // C(dim, 3)
    int rank(int i, int j, int k) const;
    std::array<int, 3> unrank(int r) const;
    std::vector<std::array<int, 3>> all() const;
};

// Element of Lambda^3 of a carrier subspace, sparse coordinates over the
// sorted triple basis.
struct Wedge3Element {
    SubspacePtr carrier;
    SparseVec coords;  // triple rank -> coefficient

    bool is_zero() const { return coords.empty(); }
    Wedge3Element& operator+=(const Wedge3Element& o);
    Wedge3Element operator*(const Rat& s) const;
    bool operator==(const Wedge3Element& o) const;
};

// u ^ v ^ w as an element of Lambda^3(carrier); vectors given in ambient
// coordinates and must lie in the carrier.
Wedge3Element wedge(const SubspacePtr& carrier, const RatVec& u, const RatVec& v, const RatVec& w);
Wedge3Element wedge(const SubspacePtr& carrier, const LatticeVector& u, const LatticeVector& v,
                    const LatticeVector& w);

// Injective linear rewrite Lambda^3(carrier) -> Lambda^3(target) induced by a
// subspace inclusion; identity when the carriers coincide.
Wedge3Element rewrite(const Wedge3Element& e, const SubspacePtr& target);

// A formal wedge of three ambient vectors, materializable in any carrier that
// contains them.
struct WedgeTriple {
    RatVec v0, v1, v2;
};

// The four-part decomposition of Lambda^3<w, b^i>^perp with respect to
// w_1..w_4 and dual vectors u_1..u_4:
//   Lambda^3<w,w1>^perp  (+)  u1 ^ Lambda^2<w,w2>^perp
//   (+)  u1 ^ u2 ^ <w,w3>^perp  (+)  <u1 ^ u2 ^ u3>.
struct Decomposition {
    SubspacePtr big;  // Lambda^3 <w, b^i>^perp
    std::array<std::vector<WedgeTriple>, 4> pieces;
    std::array<std::vector<Wedge3Element>, 4> summands;  // materialized in big

    int total_dim() const;
};

// bi: the extra orthogonality vectors (empty for i = 1, {b_1} for i = 2).
// Preconditions checked: <w_i, u_j> = delta_ij, u_j orthogonal to every
// vertex of w and to bi, w_j orthogonal to w.
Decomposition decompose(const VecList& w, const std::array<LatticeVector, 4>& ws,
                        const std::array<LatticeVector, 4>& us, const VecList& bi);

// Complements R(w_2), R(w_3), R(w_4) with C(w_j) (+) R(w_j) =
// Lambda^3<w, w_j, b^i>^perp. parts[j][m] is the m-th piece of R(w_j)
// (nonempty only for m < j), the one whose basis vectors extend into the
// {w_m, w_j} direction; R(w_1) = 0.
struct RestDecomposition {
    std::array<std::array<std::vector<WedgeTriple>, 4>, 4> parts;

    std::vector<WedgeTriple> rest_of(int j) const
    {
        std::vector<WedgeTriple> out;
        for (const auto& piece : parts[j])
            out.insert(out.end(), piece.begin(), piece.end());
        return out;
    }
};
RestDecomposition decompose_rest(const VecList& w, const std::array<LatticeVector, 4>& ws,
                                 const std::array<LatticeVector, 4>& us, const VecList& bi);

std::vector<Wedge3Element> materialize(const std::vector<WedgeTriple>& triples,
                                       const SubspacePtr& carrier);

}  // namespace spm
