#include <doctest.h>

#include "generators.hpp"

using namespace spm;

namespace {

BasedChainComplex two_term(const Rat& coeff)
{
    BasedChainComplex c;
    c.labels = {{"x"}, {"y"}};
    c.diffs.resize(2);
    c.diffs[0] = RatMat(0, 1);
    c.diffs[1] = RatMat(1, 1);
    c.diffs[1].set(0, 0, coeff);
    return c;
}

// deg-1 {a, b}, deg-2 {A, B}
BasedChainComplex two_by_two(const Rat& a_of_A, const Rat& b_of_A, const Rat& a_of_B,
                             const Rat& b_of_B)
{
    BasedChainComplex c;
    c.labels = {{}, {"a", "b"}, {"A", "B"}};
    c.diffs.resize(3);
    c.diffs[0] = RatMat(0, 0);
    c.diffs[1] = RatMat(0, 2);
    c.diffs[2] = RatMat(2, 2);
    c.diffs[2].set(0, 0, a_of_A);
    c.diffs[2].set(1, 0, b_of_A);
    c.diffs[2].set(0, 1, a_of_B);
    c.diffs[2].set(1, 1, b_of_B);
    return c;
}

}  // namespace

TEST_CASE("validate_matching conditions")
{
    auto c = two_term(Rat(1));
    Matching good{{{0, 0, 0}}};
    CHECK(validate_matching(c, good).ok());

    auto c2 = two_term(Rat(2));
    CHECK(!validate_matching(c2, good).ok());  // coefficient 2 != 1

    auto c3 = two_by_two(Rat(1), Rat(0), Rat(0), Rat(1));
    Matching doubled{{{1, 0, 0}, {1, 0, 1}}};
    auto rep = validate_matching(c3, doubled);
    REQUIRE(!rep.ok());
    bool disjointness_flagged = false;
    for (const auto& issue : rep.issues)
        if (issue.find("two pairs") != std::string::npos)
            disjointness_flagged = true;
    CHECK(disjointness_flagged);
}

TEST_CASE("gradient paths on the hand-checked digraphs")
{
    // d(A) = a + b, d(B) = b: (a,A) -> (b,B), then stop
    auto c = two_by_two(Rat(1), Rat(1), Rat(0), Rat(1));
    Matching m{{{1, 0, 0}, {1, 1, 1}}};
    REQUIRE(validate_matching(c, m).ok());
    auto rep = gradient_paths(c, m, 1, 0);
    CHECK(rep.max_len == 2);
    CHECK(!rep.cycle);
    CHECK(!rep.cap_hit);
    REQUIRE(rep.witness.size() == 2);
    CHECK(rep.witness[0].low_index == 0);
    CHECK(rep.witness[1].low_index == 1);

    // d(A) = a + b, d(B) = a + b: cycle between the two pairs
    auto c2 = two_by_two(Rat(1), Rat(1), Rat(1), Rat(1));
    Matching m2{{{1, 0, 0}, {1, 1, 1}}};
    auto rep2 = gradient_paths(c2, m2, 1, 0);
    CHECK(rep2.cycle);

    // unmatched start gives an empty report
    Matching m3{{{1, 0, 0}}};
    auto rep3 = gradient_paths(c, m3, 1, 1);
    CHECK(rep3.max_len == 0);
    CHECK(rep3.witness.empty());
}

TEST_CASE("homology basics")
{
    auto c = two_term(Rat(1));
    auto b = homology(c);
    CHECK(b == std::vector<int>{0, 0});

    BasedChainComplex z;
    z.labels = {{"p", "q"}, {"r"}};
    z.diffs.resize(2);
    z.diffs[0] = RatMat(0, 2);
    z.diffs[1] = RatMat(2, 1);  // zero differential
    auto bz = homology(z);
    CHECK(bz == std::vector<int>{2, 1});
}

TEST_CASE("homology agrees with construction and snf oracle on random complexes")
{
    std::mt19937_64 rng(1001);
    for (int t = 0; t < 60; ++t) {
        auto rc = testgen::random_based_complex(rng, 3, 8);
        rc.complex.check_d_squared();
        auto computed = homology(rc.complex);
        CHECK(computed == rc.betti);
        CHECK(testgen::snf_betti(rc.complex) == rc.betti);
    }
}

TEST_CASE("spans")
{
    auto c = two_term(Rat(1));
    Matching full{{{0, 0, 0}}};
    CHECK(spans_degree(c, full, 0));
    CHECK(spans_degree(c, full, 1));
    Matching empty;
    CHECK(spans(c, empty, 0, {}));  // zero subspace only
    CHECK(!spans_degree(c, empty, 0));
}

TEST_CASE("collapse_exactness certifies and refuses correctly")
{
    auto c = two_term(Rat(1));
    Matching full{{{0, 0, 0}}};
    CHECK(collapse_exactness(c, full, 1));
    CHECK(exactness_at(c, 1));

    // Betti_2 = 1: no spanning matching of degree <= 2 can exist; exhaustive
    // search over coefficient-1 pairs confirms, and certification is refused.
    BasedChainComplex h;
    h.labels = {{}, {}, {"z"}};
    h.diffs.resize(3);
    h.diffs[0] = RatMat(0, 0);
    h.diffs[1] = RatMat(0, 0);
    h.diffs[2] = RatMat(0, 1);
    CHECK(homology(h)[2] == 1);
    Matching none;  // the only matching available at all
    CHECK(!collapse_exactness(h, none, 2));

    // cycle-bearing matchings are rejected as a precondition
    auto c2 = two_by_two(Rat(1), Rat(1), Rat(1), Rat(1));
    Matching m2{{{1, 0, 0}, {1, 1, 1}}};
    CHECK_THROWS_AS(collapse_exactness(c2, m2, 1), PreconditionError);
}

TEST_CASE("greedy matching: spanning implies exactness on random complexes")
{
    std::mt19937_64 rng(2024);
    int spanning_found = 0;
    for (int t = 0; t < 60; ++t) {
        auto rc = testgen::random_based_complex(rng, 3, 6, t % 3 == 0);
        Matching m = testgen::greedy_matching(rc.complex);
        REQUIRE(validate_matching(rc.complex, m).ok());
        int n = rc.complex.top_degree() - 1;
        bool all_span = true;
        for (int k = 0; k <= n && all_span; ++k)
            all_span = spans_degree(rc.complex, m, k);
        if (all_span) {
            ++spanning_found;
            CHECK(collapse_exactness(rc.complex, m, n));
            for (int k = 1; k <= n; ++k)
                CHECK(exactness_at(rc.complex, k));
        }
    }
    CHECK(spanning_found > 0);  // the implication was actually exercised
}

TEST_CASE("gradient termination matches an independent cycle detector")
{
    std::mt19937_64 rng(555);
    for (int t = 0; t < 40; ++t) {
        auto rc = testgen::random_based_complex(rng, 2, 6);
        Matching m = testgen::greedy_matching(rc.complex);
        // independent detector: Kahn's algorithm on the explicit digraph
        for (int degree = 0; degree < 2; ++degree) {
            std::vector<int> nodes;
            for (size_t p = 0; p < m.pairs.size(); ++p)
                if (m.pairs[p].degree == degree)
                    nodes.push_back(static_cast<int>(p));
            std::map<int, int> low_to_node;
            for (size_t k = 0; k < nodes.size(); ++k)
                low_to_node[m.pairs[nodes[k]].low_index] = static_cast<int>(k);
            std::vector<std::vector<int>> out(nodes.size());
            std::vector<int> indeg(nodes.size(), 0);
            const RatMat& d = rc.complex.diffs[degree + 1];
            for (size_t k = 0; k < nodes.size(); ++k)
                for (int r = 0; r < d.rows(); ++r) {
                    if (r == m.pairs[nodes[k]].low_index)
                        continue;
                    if (d.at(r, m.pairs[nodes[k]].high_index) == 0)
                        continue;
                    auto it = low_to_node.find(r);
                    if (it != low_to_node.end()) {
                        out[k].push_back(it->second);
                        ++indeg[it->second];
                    }
                }
            std::vector<int> queue;
            for (size_t k = 0; k < nodes.size(); ++k)
                if (indeg[k] == 0)
                    queue.push_back(static_cast<int>(k));
            size_t seen = 0;
            while (!queue.empty()) {
                int v = queue.back();
                queue.pop_back();
                ++seen;
                for (int w : out[v])
                    if (--indeg[w] == 0)
                        queue.push_back(w);
            }
            bool acyclic_oracle = seen == nodes.size();
            bool acyclic_reported = true;
            for (int node : nodes) {
                auto rep = gradient_paths(rc.complex, m, degree, m.pairs[node].low_index, 1 << 20);
                if (rep.cycle)
                    acyclic_reported = false;
            }
            CHECK(acyclic_oracle == acyclic_reported);
        }
    }
}

TEST_CASE("normalize_partners rescales to coefficient 1 and keeps d o d = 0")
{
    auto c = two_term(Rat(2));
    Matching m{{{0, 0, 0}}};
    REQUIRE(!validate_matching(c, m).ok());
    CHECK(normalize_partners(c, m) == 1);
    CHECK(validate_matching(c, m).ok());

    // three-term: rescaling the middle column must rescale its row above
    BasedChainComplex c3;
    c3.labels = {{"x"}, {"y"}, {"z"}};
    c3.diffs.resize(3);
    c3.diffs[0] = RatMat(0, 1);
    c3.diffs[1] = RatMat(1, 1);
    c3.diffs[1].set(0, 0, Rat(3));
    c3.diffs[2] = RatMat(1, 1);  // d2 = 0 keeps d o d = 0
    Matching m3{{{0, 0, 0}}};
    normalize_partners(c3, m3);
    c3.check_d_squared();
    CHECK(validate_matching(c3, m3).ok());

    auto cz = two_term(Rat(0));
    CHECK_THROWS_AS(normalize_partners(cz, m), PreconditionError);
}
