#pragma once

#include <string>
#include <vector>

#include "spmorse/normal_form.hpp"

namespace spm {

// Chain complex over Q with a chosen labelled basis in every degree and
// sparse differentials d_n : C_n -> C_{n-1}.
struct BasedChainComplex {
    std::vector<std::vector<std::string>> labels;  // labels[n] names the degree-n basis
    std::vector<RatMat> diffs;  // diffs[n] is dim(n-1) x dim(n); diffs[0] is empty

    int top_degree() const { return static_cast<int>(labels.size()) - 1; }
    int dim(int n) const
    {
        return (n < 0 || n > top_degree()) ? 0 : static_cast<int>(labels[n].size());
    }
    // d o d = 0, exactly; throws on violation.
    void check_d_squared() const;
};

// Pair (b_n^j, b_{n+1}^j'): low = redundant, high = collapsible.
struct MatchPair {
    int degree;      // degree of the redundant vector
    int low_index;   // in labels[degree]
    int high_index;  // in labels[degree + 1]
};

struct Matching {
    std::vector<MatchPair> pairs;
};

struct ValidationReport {
    std::vector<std::string> issues;
    bool ok() const { return issues.empty(); }
};

// Checks conditions (i) (partner coefficient exactly 1) and (ii) (disjoint
// pairs) plus index sanity; reports every violation, never aborts.
ValidationReport validate_matching(const BasedChainComplex& c, const Matching& m);

// Optional normalization mode, off by default everywhere: rescales each
// collapsible basis vector so its partner coefficient becomes exactly 1.
// Returns the number of rescaled vectors; throws when a partner coefficient
// is zero. The constructions never need this; it exists for imported data.
int normalize_partners(BasedChainComplex& c, const Matching& m);

struct PathReport {
    int max_len = 0;   // pairs on the longest gradient path from the start
    bool cycle = false;
    bool cap_hit = false;
    std::vector<MatchPair> witness;  // a path realizing max_len or entering a cycle
};

// Exhaustive exploration of the gradient digraph from one matched redundant
// vector; cycle detection is exact, the step cap only guards lazily-built
// complexes and is reported distinctly when hit.
PathReport gradient_paths(const BasedChainComplex& c, const Matching& m, int start_degree,
                          int start_low_index, int step_cap = 64);

// All pairs of one degree at once, sharing the digraph and the memoized
// longest-path table; reports are keyed by low index.
std::map<int, PathReport> gradient_paths_degree(const BasedChainComplex& c, const Matching& m,
                                                int degree, int step_cap = 64);

std::vector<int> homology(const BasedChainComplex& c);  // Betti numbers by degree
bool exactness_at(const BasedChainComplex& c, int n);

// Does the matching span the given subspace of degree n, i.e. is every
// generator inside R_n + C_n?
bool spans(const BasedChainComplex& c, const Matching& m, int degree,
           const std::vector<SparseVec>& subspace_gens);
// Convenience: spans the entire chain group.
bool spans_degree(const BasedChainComplex& c, const Matching& m, int degree);

// Morse certificate for exactness at degrees 1..n: the matching must be valid
// and cycle-free (preconditions, violations throw) and span degrees 0..n
// (returns false = certification refused when it does not).
bool collapse_exactness(const BasedChainComplex& c, const Matching& m, int n);

}  // namespace spm
