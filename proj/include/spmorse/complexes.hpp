#pragma once

#include <limits>
#include <map>
#include <set>

#include "spmorse/symplectic.hpp"

namespace spm {

// Ordered tuple of lattice vectors; dimension = size - 1, the empty simplex
// has dimension -1. Validity against a complex is a predicate, never stored.
using Simplex = VecList;

// Distinguished vertices A_j and their dual seeds B_j. For i = 2 the vertices
// live in the ambient H(g) with rk^{a1} = 1.
LatticeVector seed_vertex(int g, int i, int j);  // A_1 = a_1; a_j resp. a_1 + a_j
LatticeVector seed_dual(int g, int i, int j);    // B_1 = b_1 resp. b_1 - b_2 - b_3 - b_4

constexpr int level_infinity = std::numeric_limits<int>::max();

enum class Family { L, La1, LOrdered, Filtration, GoodGcd, B1RankT, MComplex, NComplex };

// Tagged description of one of the complexes: the base families, the
// filtration stages, and the link subcomplexes cut out by gcd / rank / dual
// summand conditions.
struct ComplexSpec {
    Family family = Family::L;
    int g = 1;   // ambient genus of all vertices
    int i = 1;   // which ordered complex / filtration (1 or 2)
    int level = 0;
    int n_dist = 4;  // distinguished-set size used by F_infinity
    Simplex delta, delta2, delta3;
    VecList dual1, dual2;  // chosen dual summand bases D(delta), D(delta2)
    std::optional<Int> t;  // b1-rank constraint; defaulted from the delta when absent
    VecList vertex_subspace;   // when nonempty: vertices restricted to this span
    VecList orth_constraints;  // vertices must pair to zero with these

    static ComplexSpec lambda(int g);
    static ComplexSpec lambda_a1(int g);
    static ComplexSpec ordered(int g, int i);
    static ComplexSpec filtration(int g, int i, int level, int n_dist = 4);
    static ComplexSpec good_gcd(int g, Simplex delta);
    static ComplexSpec b1_rank(int g, Simplex delta, std::optional<Int> t = std::nullopt);
    static ComplexSpec m_complex(int g, Simplex d1, Simplex d2, Simplex d3, VecList dual1,
                                 VecList dual2, std::optional<Int> t = std::nullopt);
    static ComplexSpec n_complex(int g, Simplex delta, VecList dual,
                                 std::optional<Int> t = std::nullopt);
};

struct CheckResult {
    bool ok = true;
    std::string diagnostic;  // names the first failed condition
};

CheckResult is_simplex(const ComplexSpec& spec, const Simplex& s);

// t as dictated by the bad-simplex setup: 0 when gcd2(delta) = 1, else the
// b1-rank of the first vertex.
Int default_rank_t(const Simplex& delta);

Simplex join(const Simplex& v, const Simplex& w);

// Finite face-closed collection of simplices over an explicit vertex list,
// stored as ascending index tuples.
struct FiniteComplex {
    int g = 1;
    int i = 1;
    int box = 0;
    VecList vertices;
    std::set<std::vector<int>> simplices;  // nonempty ascending tuples
    bool complete = true;                  // false when a resource cap was hit

    int max_dim() const;
    bool contains(const std::vector<int>& tuple) const { return simplices.count(tuple) > 0; }
    bool closed_under_faces() const;
    std::vector<std::vector<int>> simplices_of_dim(int d) const;
    Simplex realize(const std::vector<int>& tuple) const;
    int vertex_index(const LatticeVector& v) const;  // -1 if absent
};

std::vector<Simplex> link_of(const ComplexSpec& spec, const Simplex& v, const FiniteComplex& pool);

// Enumerate all simplices of Lambda^i(g) with vertex coordinates in [-N, N],
// up to max_dim, lexicographic vertex order. Caps flag the result as partial
// rather than failing.
FiniteComplex enumerate_truncation(int g, int i, int box, int max_dim, int max_vertices = 0,
                                   int max_simplices_per_dim = 0);

// Filtration level of a vertex or simplex: the largest k with membership in
// F^i_k, level_infinity for the distinguished range, -1 for non-members.
int filtration_level(const LatticeVector& v, int i, int n_dist = 4);
int filtration_level(const Simplex& s, int i, int n_dist = 4);

// w* for an s-simplex w in F^i_k \ F^i_{k+1}: a simplex in F^i_{k+1} of size
// g - 3 + i - s (capped at k = 5 by the distinguished set) with w_j = A_j for
// j <= k-1, joinable with w inside F^i_k, and link-compatible. The empty
// simplex is allowed when g_hint supplies the ambient genus; it receives the
// full-size star with no orthogonality constraints beyond isotropy.
Simplex assign_wstar(const Simplex& w, int i, int k, int n_dist = 6, int g_hint = 0);

// The dependency of a gcd2 = 0 simplex: coprime coefficients with
// sum(c_i v_i) = s a1 + t b1, normalized to s = 1.
struct DegenerateRelation {
    IntVec coeffs;
    Int s, t;
};
DegenerateRelation degenerate_relation(const Simplex& delta);

enum class PathVariant { Lsmh, CsmhK2, CsmhK1, CsmhK0 };

// Constructive connectivity: a short path v1 -> ... -> v2 such that every
// consecutive pair joined with x is a simplex of the constrained complex
// (vertices orthogonal to the z constraints, in filtration level k+1, pair
// joined with x in level k). Failures report the construction stage.
VecList connect_path(const LatticeVector& x, const VecList& z_constraints, int k,
                     const LatticeVector& v1, const LatticeVector& v2, PathVariant variant,
                     int n_dist = 6);

enum class BadMode { RankR, B1NotT, GcdDrop, Gcd2Zero, MComplexBad };

struct BadParams {
    LatticeVector y_functional;  // RankR: rank is <., y>
    Int r_value;                 // RankR threshold R
    Int t;                       // B1NotT
    Simplex delta;               // MComplexBad context
    VecList dual1, dual23;       // MComplexBad dual summand bases
};

// The mode-indexed "regular bad" predicates of the sphere-filling arguments,
// evaluated on the image simplex.
bool regular_bad(const Simplex& image, BadMode mode, const BadParams& params);

// Simplicial map from an abstract complex (integer vertex ids) into a target
// complex spec; the id order fixes the tuple ordering of image simplices.
struct SimplicialMapRecord {
    std::set<std::vector<int>> simplices;  // nonempty ascending id tuples, face-closed
    std::map<int, LatticeVector> assignment;
    std::vector<int> vertex_order;  // priority list of ids
    ComplexSpec target;

    CheckResult validate() const;  // every simplex maps to a valid target simplex
    Simplex image_of(const std::vector<int>& tuple) const;
};

// Replace the star of sigma by ball * boundary(sigma), gluing phi along
// link(sigma); boundary_glue maps the ball's boundary ids onto source ids.
SimplicialMapRecord link_move(const SimplicialMapRecord& f, const std::vector<int>& sigma,
                              const SimplicialMapRecord& phi,
                              const std::map<int, int>& boundary_glue);

// All faces (including the empty tuple? no: nonempty proper subsets).
std::vector<std::vector<int>> proper_faces(const std::vector<int>& tuple);

}  // namespace spm
