#include <algorithm>
#include <set>

#include "spmorse/e1.hpp"

// The discrete vector field on the assembled truncation, built exactly as the
// induction prescribes: the seed decomposition on the empty simplex, rest
// decompositions on the distinguished vertices, x*-decompositions elsewhere,
// and in degree 2 the filtration-descending passes with path-carried bases.
// Whenever the truncation lacks a demanded simplex the affected summand is
// marked unconstructed; the construction never improvises.

namespace spm {

namespace {

Simplex sorted_simplex(Simplex s)
{
    std::sort(s.begin(), s.end());
    return s;
}

// Extended first seed dual: pairs 1 with A_1 and 0 with A_2..A_{n_dist}.
LatticeVector seed_dual_ext(int g, int i, int j, int n_dist)
{
    if (j == 1 && i == 2) {
        LatticeVector u = LatticeVector::basis_b(g, 1);
        for (int l = 2; l <= n_dist; ++l)
            u -= LatticeVector::basis_b(g, l);
        return u;
    }
    return seed_dual(g, i, j);
}

struct Unconstructed {
    std::string reason;
};

struct Failed {
    std::string reason;
};

using Key = std::pair<int, std::vector<int>>;

struct Builder {
    const E1Truncation& t;
    FieldConstruction& f;
    E1Config cfg;
    int g;
    VecList bi;
    std::vector<LatticeVector> A, Bdual;  // index 0 = A_1
    std::map<Key, RowSpan> state;         // spanned subspace per summand
    std::map<Key, int> stage_of;
    std::map<int, Simplex> xstar_cache;           // vertex index -> x*
    std::map<int, std::array<LatticeVector, 4>> dual_cache;  // vertex index -> u_1..u_4

    explicit Builder(const E1Truncation& trunc, FieldConstruction& field)
        : t(trunc), f(field), cfg(trunc.cfg), g(trunc.cfg.genus), bi(trunc.cfg.bi())
    {
        for (int j = 1; j <= cfg.n_dist; ++j) {
            A.push_back(seed_vertex(g, cfg.i, j));
            Bdual.push_back(seed_dual_ext(g, cfg.i, j, cfg.n_dist));
        }
    }

    int vertex_index(const LatticeVector& v) const { return t.truncation.vertex_index(v); }

    std::vector<int> tuple_of(const Simplex& sorted) const
    {
        std::vector<int> tuple;
        for (const auto& v : sorted) {
            int idx = vertex_index(v);
            if (idx < 0)
                throw Unconstructed{"vertex " + v.str() + " not in truncation"};
            tuple.push_back(idx);
        }
        return tuple;
    }

    const E1Truncation::Summand& need_summand(int degree, const std::vector<int>& tuple) const
    {
        const auto* s = t.find_summand(degree, tuple);
        if (!s) {
            std::string key = "(";
            for (size_t i = 0; i < tuple.size(); ++i)
                key += (i ? "," : "") + std::to_string(tuple[i]);
            throw Unconstructed{"summand " + key + ") at degree " + std::to_string(degree) +
                                " not in truncation"};
        }
        return *s;
    }

    static int face_sign(const std::vector<int>& high, const std::vector<int>& low)
    {
        for (size_t j = 0; j < high.size(); ++j) {
            std::vector<int> face = high;
            face.erase(face.begin() + static_cast<long>(j));
            if (face == low)
                return j % 2 == 0 ? 1 : -1;
        }
        throw Failed{"face_sign: low tuple is not a face of the high tuple"};
    }

    // Adds the pair (z at low) <-> (+/- z at high) for a formal wedge triple;
    // returns false when z was already spanned at the low summand.
    bool add_pair(int degree, const std::vector<int>& low_tuple,
                  const std::vector<int>& high_tuple, const WedgeTriple& triple,
                  const std::string& lemma, int stage)
    {
        const auto& low_s = need_summand(degree, low_tuple);
        const auto& high_s = need_summand(degree + 1, high_tuple);
        Wedge3Element low_e = wedge(low_s.carrier, triple.v0, triple.v1, triple.v2);
        if (low_e.is_zero())
            return false;
        RowSpan& low_span = state[{degree, low_tuple}];
        if (low_span.contains(low_e.coords))
            return false;
        int sign = face_sign(high_tuple, low_tuple);
        Wedge3Element high_e = wedge(high_s.carrier, triple.v0, triple.v1, triple.v2);
        if (sign < 0)
            high_e = high_e * Rat(-1);
        RowSpan& high_span = state[{degree + 1, high_tuple}];
        if (!high_span.add(high_e.coords))
            throw Failed{"collapsible partner dependent in its summand (" + lemma + ")"};
        low_span.add(low_e.coords);
        f.pairs.push_back({degree, low_tuple, low_e.coords, high_tuple, high_e.coords, lemma,
                           stage});
        stage_of[{degree + 1, high_tuple}] =
            std::max(stage_of[{degree + 1, high_tuple}], stage);
        return true;
    }

    void set_status(int degree, const std::vector<int>& tuple, const std::string& status,
                    const std::string& reason)
    {
        f.status[{degree, tuple}] = {status, reason, stage_of[{degree, tuple}]};
    }

    void finalize_status(int degree, const std::vector<int>& tuple)
    {
        const auto* s = t.find_summand(degree, tuple);
        if (!s)
            return;
        auto it = state.find({degree, tuple});
        int rank = it == state.end() ? 0 : it->second.rank();
        if (rank == s->dim)
            set_status(degree, tuple, "certified", "");
        else if (!f.status.count({degree, tuple}))
            set_status(degree, tuple, "unconstructed",
                       "spanned " + std::to_string(rank) + " of " + std::to_string(s->dim));
    }

    // dual vectors u_1..u_4 for x and its star: <x_m, u_j> = delta, u_j
    // orthogonal to x and to b^i, deterministic via the pairing solver
    std::array<LatticeVector, 4> duals_for(const LatticeVector& x, const Simplex& star)
    {
        VecList constraints{x};
        for (int m = 0; m < 4; ++m)
            constraints.push_back(star[m]);
        for (const auto& b : bi)
            constraints.push_back(b);
        std::array<LatticeVector, 4> us;
        for (int j = 0; j < 4; ++j) {
            IntVec rhs(constraints.size(), Int(0));
            rhs[1 + j] = 1;
            auto u = solve_pairing(g, constraints, rhs);
            if (!u)
                throw Failed{"no dual vector for x* entry " + std::to_string(j + 1)};
            us[j] = *u;
        }
        return us;
    }

    const Simplex& xstar_of(int vertex_idx)
    {
        auto it = xstar_cache.find(vertex_idx);
        if (it != xstar_cache.end())
            return it->second;
        const LatticeVector& x = t.truncation.vertices[vertex_idx];
        int k = filtration_level(x, cfg.i, 4);
        if (k < 0)
            throw Failed{"vertex outside the complex"};
        Simplex star = assign_wstar({x}, cfg.i, k, cfg.n_dist);
        if (star.size() < 4)
            throw Unconstructed{"x* has only " + std::to_string(star.size()) + " vectors"};
        return xstar_cache.emplace(vertex_idx, std::move(star)).first->second;
    }

    bool is_seed(const LatticeVector& v, int upto) const
    {
        for (int j = 0; j < upto && j < static_cast<int>(A.size()); ++j)
            if (v == A[j])
                return true;
        return false;
    }

    int seed_index(const LatticeVector& v) const  // 1-based, 0 if not a seed
    {
        for (size_t j = 0; j < A.size(); ++j)
            if (v == A[j])
                return static_cast<int>(j) + 1;
        return 0;
    }

    // ---- degree 0 and 1 ----

    void build_deg0()
    {
        std::array<LatticeVector, 4> ws{A[0], A[1], A[2], A[3]};
        std::array<LatticeVector, 4> us{Bdual[0], Bdual[1], Bdual[2], Bdual[3]};
        Decomposition deco = decompose({}, ws, us, bi);
        try {
            for (int j = 0; j < 4; ++j) {
                std::vector<int> high = tuple_of({A[j]});
                for (const auto& tr : deco.pieces[j])
                    add_pair(0, {}, high, tr, "seed decomposition (degree 0)", 0);
            }
        } catch (const Unconstructed& u) {
            set_status(0, {}, "unconstructed", u.reason);
        }
        finalize_status(0, {});
    }

    void build_deg1_seed(int j)  // vertex A_{j+1}, 0-based j <= 3
    {
        std::vector<int> low = tuple_of({A[j]});
        if (j == 0) {  // R(A_1) = 0: the summand is fully collapsible already
            finalize_status(1, low);
            return;
        }
        std::array<LatticeVector, 4> ws{A[0], A[1], A[2], A[3]};
        std::array<LatticeVector, 4> us{Bdual[0], Bdual[1], Bdual[2], Bdual[3]};
        RestDecomposition rest = decompose_rest({}, ws, us, bi);
        try {
            for (int m = 0; m < j; ++m) {
                std::vector<int> high = tuple_of(sorted_simplex({A[m], A[j]}));
                for (const auto& tr : rest.parts[j][m])
                    add_pair(1, low, high, tr, "rest decomposition on A_" + std::to_string(j + 1),
                             0);
            }
        } catch (const Unconstructed& u) {
            set_status(1, low, "unconstructed", u.reason);
        }
        finalize_status(1, low);
    }

    void build_deg1_generic(int vidx)
    {
        const LatticeVector& x = t.truncation.vertices[vidx];
        std::vector<int> low{vidx};
        try {
            const Simplex& star = xstar_of(vidx);
            std::array<LatticeVector, 4> ws{star[0], star[1], star[2], star[3]};
            auto us = duals_for(x, star);
            dual_cache[vidx] = us;
            Decomposition deco = decompose({x}, ws, us, bi);
            for (int j = 0; j < 4; ++j) {
                std::vector<int> high = tuple_of(sorted_simplex({x, star[j]}));
                for (const auto& tr : deco.pieces[j])
                    add_pair(1, low, high, tr, "x* decomposition", 0);
            }
        } catch (const Unconstructed& u) {
            set_status(1, low, "unconstructed", u.reason);
        } catch (const ConstructionError& e) {
            set_status(1, low, "unconstructed", e.what());
        } catch (const Failed& e) {
            set_status(1, low, "failed", e.reason);
        }
        finalize_status(1, low);
    }

    void run_deg01()
    {
        build_deg0();
        if (t.degree_count() < 2)
            return;
        for (size_t vidx = 0; vidx < t.truncation.vertices.size(); ++vidx) {
            if (!t.find_summand(1, {static_cast<int>(vidx)}))
                continue;
            int j = seed_index(t.truncation.vertices[vidx]);
            if (j >= 1 && j <= 4)
                build_deg1_seed(j - 1);
            else
                build_deg1_generic(static_cast<int>(vidx));
        }
    }

    // ---- degree 2 ----

    // distinguished pairs: the rest of {A_m, A_j} decomposed against the
    // remaining distinguished vertices, with the B-prefix identifying the
    // already-collapsed part
    void build_deg2_seed_pair(int m, int j)  // 0-based, m < j <= 3
    {
        Simplex pair_s = sorted_simplex({A[m], A[j]});
        std::vector<int> low = tuple_of(pair_s);
        try {
            if (m == 0) {  // fully collapsed from R(A_j)
                finalize_status(2, low);
                return;
            }
            std::vector<int> others;
            for (int l = 0; l < cfg.n_dist; ++l)
                if (l != m && l != j)
                    others.push_back(l);
            if (others.size() < 4)
                throw Unconstructed{"distinguished set too small for the pair pass"};
            std::array<LatticeVector, 4> ws;
            std::array<LatticeVector, 4> us;
            // prefix A_1..A_{m-1} with their seed duals, then the next others
            std::vector<int> chosen;
            for (int p = 0; p < m; ++p)
                chosen.push_back(p);
            for (int l : others)
                if (static_cast<int>(chosen.size()) < 4 &&
                    std::find(chosen.begin(), chosen.end(), l) == chosen.end())
                    chosen.push_back(l);
            VecList constraints{A[m], A[j]};
            for (int l : chosen)
                constraints.push_back(A[l]);
            for (const auto& b : bi)
                constraints.push_back(b);
            for (int q = 0; q < 4; ++q) {
                ws[q] = A[chosen[q]];
                if (chosen[q] < m) {
                    us[q] = Bdual[chosen[q]];
                } else {
                    IntVec rhs(constraints.size(), Int(0));
                    rhs[2 + q] = 1;
                    auto u = solve_pairing(g, constraints, rhs);
                    if (!u)
                        throw Failed{"no dual for the distinguished pair pass"};
                    us[q] = *u;
                }
            }
            Decomposition deco = decompose(pair_s, ws, us, bi);
            // pieces with index >= m are the prior collapsible part
            RowSpan& span = state[{2, low}];
            const auto& summand = need_summand(2, low);
            for (int p = m; p < 4; ++p)
                for (const auto& tr : deco.pieces[p]) {
                    Wedge3Element e = wedge(summand.carrier, tr.v0, tr.v1, tr.v2);
                    if (!e.is_zero() && !span.contains(e.coords))
                        throw Failed{"prior collapsible part mismatch in the A-pair pass"};
                }
            for (int p = 0; p < m; ++p) {
                std::vector<int> high = tuple_of(sorted_simplex(join(pair_s, {A[chosen[p]]})));
                for (const auto& tr : deco.pieces[p])
                    add_pair(2, low, high, tr, "distinguished pair pass", 0);
            }
        } catch (const Unconstructed& u) {
            set_status(2, low, "unconstructed", u.reason);
        } catch (const ConstructionError& e) {
            set_status(2, low, "unconstructed", e.what());
        } catch (const Failed& e) {
            set_status(2, low, "failed", e.reason);
        }
        finalize_status(2, low);
    }

    // rest pass over x's own star: spans the {x, x_j} summands
    void build_deg2_star_rest(int vidx)
    {
        const LatticeVector& x = t.truncation.vertices[vidx];
        if (!dual_cache.count(vidx))
            return;  // degree-1 construction did not reach this vertex
        const Simplex& star = xstar_cache[vidx];
        std::array<LatticeVector, 4> ws{star[0], star[1], star[2], star[3]};
        const auto& us = dual_cache[vidx];
        RestDecomposition rest = decompose_rest({x}, ws, us, bi);
        for (int j = 1; j < 4; ++j) {
            std::vector<int> low;
            try {
                low = tuple_of(sorted_simplex({x, star[j]}));
                for (int m = 0; m < j; ++m) {
                    std::vector<int> high =
                        tuple_of(sorted_simplex({x, star[m], star[j]}));
                    for (const auto& tr : rest.parts[j][m])
                        add_pair(2, low, high, tr, "x* rest pass", stage_of[{2, low}]);
                }
                finalize_status(2, low);
            } catch (const Unconstructed& u) {
                if (!low.empty()) {
                    set_status(2, low, "unconstructed", u.reason);
                    finalize_status(2, low);
                }
            } catch (const Failed& e) {
                if (!low.empty())
                    set_status(2, low, "failed", e.reason);
            }
        }
        // {x, star[0]} is fully collapsed by the degree-1 pairing
        try {
            finalize_status(2, tuple_of(sorted_simplex({x, star[0]})));
        } catch (const Unconstructed&) {
        }
    }

    // both-new pairs: full decomposition against the pair's own star
    void build_deg2_pair_star(const std::vector<int>& low, const Simplex& pair_s, int k)
    {
        Simplex star = assign_wstar(pair_s, cfg.i, k, cfg.n_dist);
        if (star.size() < 4)
            throw Unconstructed{"pair star has only " + std::to_string(star.size()) +
                                " vectors"};
        std::array<LatticeVector, 4> ws{star[0], star[1], star[2], star[3]};
        VecList constraints = pair_s;
        for (int q = 0; q < 4; ++q)
            constraints.push_back(star[q]);
        for (const auto& b : bi)
            constraints.push_back(b);
        std::array<LatticeVector, 4> us;
        for (int q = 0; q < 4; ++q) {
            IntVec rhs(constraints.size(), Int(0));
            rhs[2 + q] = 1;
            auto u = solve_pairing(g, constraints, rhs);
            if (!u)
                throw Failed{"no dual in the pair-star pass"};
            us[q] = *u;
        }
        Decomposition deco = decompose(pair_s, ws, us, bi);
        for (int q = 0; q < 4; ++q) {
            std::vector<int> high = tuple_of(sorted_simplex(join(pair_s, {star[q]})));
            for (const auto& tr : deco.pieces[q])
                add_pair(2, low, high, tr, "pair-star pass (level " + std::to_string(k) + ")",
                         stage_of[{2, low}]);
        }
    }

    // run a precomputed carry plan; every step pairs z at {x, to} through
    // the 2-simplex {x, from, to}
    void execute_carry(const std::vector<int>& low, const LatticeVector& x,
                       const LatticeVector& xp)
    {
        auto steps = plan_deg2_carry(cfg, x, xp);
        int stage = stage_of[{2, low}];
        for (const auto& st : steps) {
            std::vector<int> plow = tuple_of(sorted_simplex({x, st.to}));
            std::vector<int> via = tuple_of(sorted_simplex({x, st.from, st.to}));
            ++stage;
            add_pair(2, plow, via, st.z, st.lemma, stage);
        }
        const auto& summand = need_summand(2, low);
        RowSpan& span = state[{2, low}];
        if (span.rank() != summand.dim)
            throw Unconstructed{"pair summand spanned " + std::to_string(span.rank()) +
                                " of " + std::to_string(summand.dim)};
    }

    void run_deg2()
    {
        if (t.degree_count() < 3)
            return;
        // distinguished pairs first (the induction start)
        for (int m = 0; m < 4; ++m)
            for (int j = m + 1; j < 4; ++j) {
                try {
                    std::vector<int> low = tuple_of(sorted_simplex({A[m], A[j]}));
                    build_deg2_seed_pair(m, j);
                } catch (const Unconstructed&) {
                }
            }
        // the star rest pass
        for (size_t vidx = 0; vidx < t.truncation.vertices.size(); ++vidx)
            if (seed_index(t.truncation.vertices[vidx]) == 0 ||
                seed_index(t.truncation.vertices[vidx]) > 4)
                build_deg2_star_rest(static_cast<int>(vidx));

        // remaining 1-simplices by descending filtration level
        std::vector<std::pair<int, std::vector<int>>> todo;
        for (const auto& tuple : t.truncation.simplices_of_dim(1)) {
            if (f.status.count({2, tuple}) || state.count({2, tuple}))
                continue;
            Simplex s = t.truncation.realize(tuple);
            int k = filtration_level(s, cfg.i, 4);
            todo.push_back({k, tuple});
        }
        std::sort(todo.begin(), todo.end(),
                  [](const auto& a, const auto& b) { return a.first > b.first; });
        for (const auto& [k, tuple] : todo) {
            Simplex s = t.truncation.realize(tuple);
            try {
                if (k < 0)
                    throw Failed{"pair outside the complex"};
                int lv0 = filtration_level(s[0], cfg.i, 4);
                int lv1 = filtration_level(s[1], cfg.i, 4);
                bool mixed = (lv0 == k) != (lv1 == k);
                if (!mixed) {
                    build_deg2_pair_star(tuple, s, k == level_infinity ? 5 : k);
                } else {
                    const LatticeVector& x = lv0 == k ? s[0] : s[1];
                    const LatticeVector& xp = lv0 == k ? s[1] : s[0];
                    execute_carry(tuple, x, xp);
                }
            } catch (const Unconstructed& u) {
                set_status(2, tuple, "unconstructed", u.reason);
            } catch (const ConstructionError& e) {
                set_status(2, tuple, "unconstructed", e.what());
            } catch (const PreconditionError& e) {
                set_status(2, tuple, "unconstructed", e.what());
            } catch (const Failed& e) {
                set_status(2, tuple, "failed", e.reason);
            }
            finalize_status(2, tuple);
        }
        // remaining degree-3 summands just report their fill level
        if (t.degree_count() >= 4)
            for (const auto& s : t.summands[3])
                finalize_status(3, s.tuple);
    }
};

}  // namespace

FieldConstruction build_field_deg01(const E1Truncation& t)
{
    int gs = t.cfg.surface_genus();
    if (gs < 8 - t.cfg.i)
        throw PreconditionError("build_field_deg01: g < 8 - i");
    FieldConstruction f;
    Builder b(t, f);
    b.run_deg01();
    return f;
}

void extend_field_deg2(const E1Truncation& t, FieldConstruction& f)
{
    Builder b(t, f);
    // replay the existing pairs into the builder state so independence and
    // prior-collapsible checks see the degree-0/1 field
    for (const auto& p : f.pairs) {
        b.state[{p.degree, p.low_tuple}].add(p.low);
        b.state[{p.degree + 1, p.high_tuple}].add(p.high);
    }
    // rebuild the caches the degree-1 pass would have filled
    for (size_t vidx = 0; vidx < t.truncation.vertices.size(); ++vidx) {
        if (b.seed_index(t.truncation.vertices[vidx]) >= 1 &&
            b.seed_index(t.truncation.vertices[vidx]) <= 4)
            continue;
        if (!t.find_summand(1, {static_cast<int>(vidx)}))
            continue;
        try {
            const Simplex& star = b.xstar_of(static_cast<int>(vidx));
            b.dual_cache[static_cast<int>(vidx)] =
                b.duals_for(t.truncation.vertices[vidx], star);
        } catch (...) {
        }
    }
    b.run_deg2();
}

}  // namespace spm
