#include "spmorse/morse.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "spmorse/normal_form.hpp"

namespace spm {

void BasedChainComplex::check_d_squared() const
{
    for (int n = 2; n <= top_degree(); ++n) {
        if (diffs[n].cols() != dim(n) || diffs[n].rows() != dim(n - 1))
            throw PreconditionError("chain complex: differential shape mismatch at degree " +
                                    std::to_string(n));
        RatMat prod = diffs[n - 1] * diffs[n];
        if (!prod.is_zero())
            throw PreconditionError("chain complex: d o d != 0 at degree " + std::to_string(n));
    }
}

ValidationReport validate_matching(const BasedChainComplex& c, const Matching& m)
{
    ValidationReport rep;
    std::set<std::pair<int, int>> used;
    for (size_t p = 0; p < m.pairs.size(); ++p) {
        const MatchPair& mp = m.pairs[p];
        if (mp.degree < 0 || mp.degree + 1 > c.top_degree() || mp.low_index < 0 ||
            mp.low_index >= c.dim(mp.degree) || mp.high_index < 0 ||
            mp.high_index >= c.dim(mp.degree + 1)) {
            rep.issues.push_back("pair " + std::to_string(p) + ": index out of range");
            continue;
        }
        const Rat& coeff = c.diffs[mp.degree + 1].at(mp.low_index, mp.high_index);
        if (coeff != 1)
            rep.issues.push_back("pair " + std::to_string(p) + ": partner coefficient " +
                                 to_string(coeff) + " != 1 (condition (i))");
        for (auto key : {std::make_pair(mp.degree, mp.low_index),
                         std::make_pair(mp.degree + 1, mp.high_index)}) {
            if (!used.insert(key).second)
                rep.issues.push_back("pair " + std::to_string(p) + ": basis vector (" +
                                     std::to_string(key.first) + "," + std::to_string(key.second) +
                                     ") in two pairs (condition (ii))");
        }
    }
    return rep;
}

int normalize_partners(BasedChainComplex& c, const Matching& m)
{
    int rescaled = 0;
    for (const MatchPair& mp : m.pairs) {
        const Rat& coeff = c.diffs[mp.degree + 1].at(mp.low_index, mp.high_index);
        if (coeff == 0)
            throw PreconditionError("normalize_partners: partner coefficient is zero");
        if (coeff == 1)
            continue;
        // rescale the collapsible vector: divide its column by the coefficient
        Rat inv = 1 / coeff;
        RatMat& d = c.diffs[mp.degree + 1];
        for (int r = 0; r < d.rows(); ++r) {
            const Rat& v = d.at(r, mp.high_index);
            if (v != 0)
                d.set(r, mp.high_index, v * inv);
        }
        // and scale its row in the next differential to keep d o d = 0
        if (mp.degree + 2 <= c.top_degree()) {
            RatMat& up = c.diffs[mp.degree + 2];
            for (int col = 0; col < up.cols(); ++col) {
                const Rat& v = up.at(mp.high_index, col);
                if (v != 0)
                    up.set(mp.high_index, col, v * coeff);
            }
        }
        ++rescaled;
    }
    return rescaled;
}

namespace {

// Gradient digraph on the pairs of one degree level: p -> q when the
// redundant vector of q appears in d(collapsible of p).
struct PairGraph {
    std::vector<int> nodes;                 // indices into m.pairs at this degree
    std::map<int, int> low_to_node;         // low index -> node position
    std::vector<std::vector<int>> out;      // adjacency
};

PairGraph build_graph(const BasedChainComplex& c, const Matching& m, int degree)
{
    PairGraph g;
    for (size_t p = 0; p < m.pairs.size(); ++p)
        if (m.pairs[p].degree == degree) {
            g.low_to_node[m.pairs[p].low_index] = static_cast<int>(g.nodes.size());
            g.nodes.push_back(static_cast<int>(p));
        }
    g.out.resize(g.nodes.size());
    // column access through the row-sparse transpose
    RatMat dT = c.diffs[degree + 1].transposed();
    for (size_t k = 0; k < g.nodes.size(); ++k) {
        const MatchPair& mp = m.pairs[g.nodes[k]];
        dT.for_row(mp.high_index, [&](int r, const Rat&) {
            if (r == mp.low_index)
                return;
            auto it = g.low_to_node.find(r);
            if (it != g.low_to_node.end())
                g.out[k].push_back(it->second);
        });
    }
    return g;
}

// Longest path (node count) from start with exact cycle detection.
struct Walker {
    const PairGraph& g;
    std::vector<int> state;  // 0 unvisited, 1 on stack, 2 done
    std::vector<int> best;   // memoized longest path from node
    std::vector<int> next;   // successor realizing best
    bool cycle = false;
    int cap;
    bool cap_hit = false;

    Walker(const PairGraph& graph, int step_cap)
        : g(graph), state(graph.nodes.size(), 0), best(graph.nodes.size(), 0),
          next(graph.nodes.size(), -1), cap(step_cap)
    {
    }

    int dfs(int v, int depth)
    {
        if (depth > cap) {
            cap_hit = true;
            return 1;
        }
        if (state[v] == 1) {
            cycle = true;
            return 1;
        }
        if (state[v] == 2)
            return best[v];
        state[v] = 1;
        int longest = 1;
        for (int w : g.out[v]) {
            int len = 1 + dfs(w, depth + 1);
            if (cycle)
                break;
            if (len > longest) {
                longest = len;
                next[v] = w;
            }
        }
        state[v] = 2;
        best[v] = longest;
        return longest;
    }
};

}  // namespace

PathReport gradient_paths(const BasedChainComplex& c, const Matching& m, int start_degree,
                          int start_low_index, int step_cap)
{
    ValidationReport vr = validate_matching(c, m);
    if (!vr.ok())
        throw PreconditionError("gradient_paths: invalid matching: " + vr.issues.front());
    PairGraph g = build_graph(c, m, start_degree);
    auto it = g.low_to_node.find(start_low_index);
    PathReport rep;
    if (it == g.low_to_node.end())
        return rep;  // unmatched start: empty report
    Walker walker(g, step_cap);
    rep.max_len = walker.dfs(it->second, 1);
    rep.cycle = walker.cycle;
    rep.cap_hit = walker.cap_hit;
    for (int v = it->second; v != -1; v = walker.next[v]) {
        rep.witness.push_back(m.pairs[g.nodes[v]]);
        if (walker.next[v] == -1 || static_cast<int>(rep.witness.size()) > rep.max_len)
            break;
    }
    return rep;
}

std::map<int, PathReport> gradient_paths_degree(const BasedChainComplex& c, const Matching& m,
                                                int degree, int step_cap)
{
    ValidationReport vr = validate_matching(c, m);
    if (!vr.ok())
        throw PreconditionError("gradient_paths_degree: invalid matching: " + vr.issues.front());
    PairGraph g = build_graph(c, m, degree);
    Walker walker(g, step_cap);
    std::map<int, PathReport> out;
    for (const auto& [low, node] : g.low_to_node) {
        PathReport rep;
        rep.max_len = walker.dfs(node, 1);
        rep.cycle = walker.cycle;  // a cycle anywhere reachable poisons the level
        rep.cap_hit = walker.cap_hit;
        out[low] = std::move(rep);
        if (walker.cycle)
            break;
    }
    return out;
}

std::vector<int> homology(const BasedChainComplex& c)
{
    c.check_d_squared();
    std::vector<int> betti(c.top_degree() + 1, 0);
    std::vector<int> ranks(c.top_degree() + 2, 0);
    for (int n = 1; n <= c.top_degree(); ++n)
        ranks[n] = rational_rank(c.diffs[n]);
    for (int n = 0; n <= c.top_degree(); ++n)
        betti[n] = c.dim(n) - ranks[n] - ranks[n + 1];
    return betti;
}

bool exactness_at(const BasedChainComplex& c, int n)
{
    return homology(c)[n] == 0;
}

bool spans(const BasedChainComplex& c, const Matching& m, int degree,
           const std::vector<SparseVec>& subspace_gens)
{
    (void)c;
    // R_n and C_n consist of basis vectors, so their span is a coordinate
    // subspace: membership is a support check.
    std::set<int> covered;
    for (const MatchPair& mp : m.pairs) {
        if (mp.degree == degree)
            covered.insert(mp.low_index);
        if (mp.degree + 1 == degree)
            covered.insert(mp.high_index);
    }
    for (const SparseVec& gen : subspace_gens)
        for (const auto& [i, v] : gen)
            if (v != 0 && !covered.count(i))
                return false;
    return true;
}

bool spans_degree(const BasedChainComplex& c, const Matching& m, int degree)
{
    std::vector<SparseVec> gens;
    for (int i = 0; i < c.dim(degree); ++i)
        gens.push_back(SparseVec{{i, Rat(1)}});
    return spans(c, m, degree, gens);
}

bool collapse_exactness(const BasedChainComplex& c, const Matching& m, int n)
{
    ValidationReport vr = validate_matching(c, m);
    if (!vr.ok())
        throw PreconditionError("collapse_exactness: invalid matching: " + vr.issues.front());
    c.check_d_squared();
    for (int k = 0; k <= std::min(n + 1, c.top_degree() - 1); ++k) {
        PairGraph g = build_graph(c, m, k);
        Walker walker(g, c.dim(k) + static_cast<int>(m.pairs.size()) + 1);
        for (size_t v = 0; v < g.nodes.size(); ++v) {
            walker.dfs(static_cast<int>(v), 1);
            if (walker.cycle || walker.cap_hit)
                throw PreconditionError("collapse_exactness: gradient cycle at degree " +
                                        std::to_string(k));
        }
    }
    for (int k = 0; k <= n; ++k)
        if (!spans_degree(c, m, k))
            return false;  // certification refused
    return true;
}

}  // namespace spm
