#pragma once

#include "spmorse/complexes.hpp"
#include "spmorse/exterior.hpp"
#include "spmorse/morse.hpp"

namespace spm {

// Which of the two chain complexes is being built, and where its vectors
// live. For i = 2 the lattice is H(surface_genus + 1).
struct E1Config {
    int i = 1;
    int genus = 0;    // ambient genus of all lattice vectors
    int n_dist = 6;   // distinguished-set size used by the field construction

    int surface_genus() const { return i == 1 ? genus : genus - 1; }
    VecList bi() const;  // {} for i = 1, {b_1} for i = 2
};

// Lambda^3<w, b^i>^perp, the coefficient system of the simplex w.
SubspacePtr e1_carrier(const E1Config& cfg, const Simplex& w);

// A finitely supported element of one E^1 chain group: simplex tuples with a
// wedge coefficient in that simplex's carrier. Tuples are ordered (the
// multicomplex convention); the assembled truncation uses ascending ones.
struct E1Element {
    E1Config cfg;
    std::map<Simplex, Wedge3Element> parts;

    bool is_zero() const;
    void add(const Simplex& w, const Wedge3Element& v, const Rat& scale = Rat(1));
};

// The differential: d(v, w) = sum_j (-1)^j (i_j v, face_j w).
E1Element e1_d(const E1Element& e);

// Vertex-wise and coefficient-wise action of a symplectic matrix; for i = 2
// the matrix must stabilize b_1.
E1Element e1_act(const E1Config& cfg, const IntMat& m, const E1Element& e);

bool e1_equal(const E1Element& a, const E1Element& b);

// Assembled finite truncation: per degree p the direct sum over the
// truncation's (p-1)-simplices (the empty simplex carries degree 0), with the
// canonical sorted-triple basis per summand.
struct E1Truncation {
    struct Summand {
        std::vector<int> tuple;  // ascending vertex indices; empty at degree 0
        SubspacePtr carrier;
        int offset = 0;
        int dim = 0;
    };

    E1Config cfg;
    FiniteComplex truncation;
    std::vector<std::vector<Summand>> summands;  // by degree
    BasedChainComplex complex;

    int degree_count() const { return static_cast<int>(summands.size()); }
    const Summand* find_summand(int degree, const std::vector<int>& tuple) const;
};

// max_degree: highest chain degree to assemble (simplices of dimension
// max_degree - 1 are used). Verifies d o d = 0 exactly.
E1Truncation build_e1(const E1Config& cfg, const FiniteComplex& truncation, int max_degree);

// Construction-closed truncation around the seeds and the given extra
// vertices: x* closures, the 1-simplices the degree-0/1 field demands, and
// (with_deg2) the 2-simplices of the distinguished and star-rest passes.
FiniteComplex construction_closure(const E1Config& cfg, const VecList& extra_vertices,
                                   bool with_deg2);

// One edge of a path-carried basis element: z rides from the {x, from}
// summand into {x, to} through the 2-simplex {x, from, to}.
struct CarryStep {
    WedgeTriple z;
    LatticeVector from, to;
    std::string lemma;
};

// The full carry plan for spanning the {x, xp} summand in degree 2. Pure:
// computing the plan makes no truncation demands itself.
std::vector<CarryStep> plan_deg2_carry(const E1Config& cfg, const LatticeVector& x,
                                       const LatticeVector& xp);

// The simplices (face-closed) the plan demands from a truncation.
std::vector<Simplex> deg2_carry_demands(const E1Config& cfg, const LatticeVector& x,
                                        const LatticeVector& xp);

// Rebuild a finite complex with extra simplices over the enlarged vertex set.
FiniteComplex extend_complex(const FiniteComplex& fc, const std::vector<Simplex>& extra);

// One matched pair of the discrete vector field, in the canonical coordinates
// of its two summands, plus the provenance of the choice.
struct FieldPair {
    int degree;
    std::vector<int> low_tuple;
    SparseVec low;
    std::vector<int> high_tuple;
    SparseVec high;
    std::string lemma;
    int stage = 0;
};

struct SummandStatus {
    std::string status;  // "certified" | "unconstructed" | "failed"
    std::string reason;
    int stage = 0;
};

struct FieldConstruction {
    std::vector<FieldPair> pairs;
    std::map<std::pair<int, std::vector<int>>, SummandStatus> status;
};

// Degrees 0 and 1: the seed decomposition on the empty simplex, the rest
// decomposition on the distinguished vertices, and the x*-decompositions on
// every other vertex. Missing truncation simplices mark the affected summand
// unconstructed rather than failing the build.
FieldConstruction build_field_deg01(const E1Truncation& t);

// Degree 2: the filtration-descending induction over the 1-simplex summands
// (the distinguished start, the rest pass over x*, and the path-carried
// bases), recording the filtration stage of every admitted vector.
void extend_field_deg2(const E1Truncation& t, FieldConstruction& field);

struct CertificateEntry {
    int degree;
    std::vector<int> tuple;
    std::string status;
    std::string reason;
    int stage = 0;
    int max_path_len = -1;
    bool cycle = false;
};

struct Certificate {
    bool matching_ok = false;
    std::vector<std::string> issues;
    std::vector<CertificateEntry> entries;
    int max_path_len = 0;
    bool any_cycle = false;
    bool cap_hit = false;
    bool exactness_checked = false;
    bool exactness_value = false;
};

// The based complex in the constructed field basis (certified summands use
// their construction basis completed canonically) plus the matching indices.
std::pair<BasedChainComplex, Matching> field_to_based(const E1Truncation& t,
                                                      const FieldConstruction& f);

Certificate certify(const E1Truncation& t, const FieldConstruction& f, int step_cap = 64);

}  // namespace spm
