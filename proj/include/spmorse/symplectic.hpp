#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spmorse/normal_form.hpp"

namespace spm {

// Vector in H(g) = Z^{2g} with the standard symplectic basis, coordinates
// ordered (a1, b1, a2, b2, ..., ag, bg).
class LatticeVector {
public:
    LatticeVector() : g_(0) {}
    LatticeVector(int g, IntVec coords);

    static LatticeVector zero(int g) { return LatticeVector(g, IntVec(2 * g, Int(0))); }
    static LatticeVector basis_a(int g, int j);  // a_j, 1-based
    static LatticeVector basis_b(int g, int j);  // b_j, 1-based

    int genus() const { return g_; }
    int dim() const { return 2 * g_; }
    const IntVec& coords() const { return coords_; }
    const Int& operator[](int idx) const { return coords_[idx]; }
    Int& operator[](int idx) { return coords_[idx]; }

    const Int& a_coeff(int j) const { return coords_[2 * (j - 1)]; }
    const Int& b_coeff(int j) const { return coords_[2 * j - 1]; }

    bool is_zero() const;
    Int content() const;  // gcd of coordinates (0 for the zero vector)

    LatticeVector operator+(const LatticeVector& o) const;
    LatticeVector operator-(const LatticeVector& o) const;
    LatticeVector operator-() const;
    LatticeVector operator*(const Int& s) const;
    LatticeVector& operator+=(const LatticeVector& o);
    LatticeVector& operator-=(const LatticeVector& o);

    bool operator==(const LatticeVector& o) const { return g_ == o.g_ && coords_ == o.coords_; }
    bool operator!=(const LatticeVector& o) const { return !(*this == o); }
    // Lexicographic on the coordinate tuple; the total vertex order used for
    // ordered complexes.
    bool operator<(const LatticeVector& o) const;

    std::string str() const;  // e.g. "a1+2*b3"

private:
    int g_;
    IntVec coords_;
};

using VecList = std::vector<LatticeVector>;

Int form(const LatticeVector& u, const LatticeVector& v);

// rank_a(x, j) = <x, b_j>, rank_b(x, j) = -<x, a_j>; the a_j / b_j coefficient.
Int rank_a(const LatticeVector& x, int j);
Int rank_b(const LatticeVector& x, int j);

// Zero the (a_1, b_1), ..., (a_{m-1}, b_{m-1}) coordinate pairs, projecting
// onto H_m = <a_m, b_m, ..., a_g, b_g>.
LatticeVector pr_block(const LatticeVector& v, int m);
inline LatticeVector pr2(const LatticeVector& v) { return pr_block(v, 2); }

// Standard basis of H_m as lattice vectors.
VecList block_basis(int g, int m);

IntMat coords_matrix(const VecList& vs);        // 2g x n, columns = vectors
VecList columns_to_vectors(int g, const IntMat& m);

// gcd of a tuple: |det| of the coordinates in a basis of the smallest summand
// containing the tuple; 0 when linearly dependent, 1 for the empty tuple.
Int gcd_tuple(const VecList& vs);
Int gcd2(const VecList& vs);
Int gcd_tuple_cat(std::initializer_list<const VecList*> parts);

bool is_isotropic(const VecList& vs);

// Bases (S, D, T) of a symplectic splitting H = (S + D) + T.
struct SplittingData {
    VecList s_basis, d_basis, t_basis;

    // Throws ConstructionError naming the first violated condition:
    // <s_i, d_j> = delta_ij, S and D isotropic, T orthogonal to S + D,
    // concatenation a Z-basis of H.
    void verify() const;
};

// Dual summand per the inductive existence proof, with a deterministic choice
// at every step. Preconditions: tuple gcd 1, n <= g, span isotropic.
SplittingData dual_summand(const VecList& vs);

enum class ExtendMode {
    Enlarge,       // clause (ii): dual of S2 = <vs, ws> with S+D inside S2+D2
    InComplement,  // clause (iii): dual summand of ws inside T
};

SplittingData extend_dual(const SplittingData& base, const VecList& ws, ExtendMode mode);

// Clause (iv): outer splitting (S1, D1, T1), inner dual D2 of S2 inside T1;
// returns splitting for (inner.s, ws) whose dual D3 lies in T1 with
// S2 + D2 contained in S1 + D1 + S3 + D3.
SplittingData extend_dual_nested(const SplittingData& outer, const SplittingData& inner,
                                 const VecList& ws);

// Duals without the isotropy requirement on the span of vs: integral
// u_1..u_n with <v_i, u_j> = delta_ij and D = <u_j> isotropic, plus a basis
// of the complement T of span(vs) + D inside the ambient lattice.
struct PairingDual {
    VecList d_basis;
    VecList t_basis;
};
PairingDual pairing_dual(const VecList& ambient_basis, const VecList& vs);

// u in D(delta) with <a1 + t*b1 + u, v> = 0 for every vertex v of delta.
// Solved as a linear system over the dual basis; requires gcd2(delta) != 0.
LatticeVector compensate(const VecList& delta, const Int& t);

// One division step: reduced = v - q*pivot with |<reduced, y>| < |<pivot, y>|.
// The rank functional is w -> <w, y_dual>. Quotient recentred to minimise the
// remainder's absolute value, ties toward the smaller q.
std::pair<Int, LatticeVector> divide_reduce(const LatticeVector& v, const LatticeVector& pivot,
                                            const LatticeVector& y_dual);

// pr(h) = h - <h, y> x; requires <x, y> = 1 and h orthogonal to x.
LatticeVector projection_move(const LatticeVector& h, const LatticeVector& x,
                              const LatticeVector& y);

// Product of word_length symplectic transvections chosen by a seeded PRNG;
// preserves the form exactly and is reproducible per seed.
IntMat random_symplectic(int g, std::uint64_t seed, int word_length);

IntMat form_matrix(int g);
bool is_symplectic_matrix(int g, const IntMat& m);
LatticeVector apply_matrix(const IntMat& m, const LatticeVector& v);

// --- lattice helpers shared by the complex machinery ---

// Basis of {x in lattice : <v, x> = 0 for all v in constraints}; the ambient
// lattice is given by a basis (defaults to all of H when empty and g > 0).
VecList orthogonal_sublattice(int g, const VecList& constraints, const VecList& ambient_basis = {});

// Integral solution of <constraints[i], x> = rhs[i] inside the span of
// ambient_basis, size-reduced; nullopt when no integral solution exists.
std::optional<LatticeVector> solve_pairing(int g, const VecList& constraints, const IntVec& rhs,
                                           const VecList& ambient_basis = {});

// Hyperbolic pairs (e_i, f_i) with <e_i, f_j> = delta_ij spanning the lattice;
// requires the restricted form to be unimodular on it.
std::vector<std::pair<LatticeVector, LatticeVector>> symplectic_gram_schmidt(int g,
                                                                             const VecList& basis);

// x minus its (S + D)-components, for dual bases with <s_i, d_j> = delta_ij
// and D isotropic (S arbitrary); lands in the form-complement of S + D.
LatticeVector project_to_complement(const LatticeVector& x, const VecList& s_basis,
                                    const VecList& d_basis);

// Membership of v in the Z-span of basis.
bool in_span_int(const VecList& basis, const LatticeVector& v);
// Membership of v in the Q-span of basis.
bool in_span_rat(const VecList& basis, const LatticeVector& v);

}  // namespace spm
