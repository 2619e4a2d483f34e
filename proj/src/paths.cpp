#include "spmorse/complexes.hpp"

// connect_path: the constructive content of the connectivity lemmas. Every
// branch mirrors one case split of the corresponding proof; the chosen branch
// is determined by the hypotheses, constructed once, and validated. A failed
// validation reports the stage rather than retrying.

namespace spm {

namespace {

Simplex sorted_simplex(Simplex s)
{
    std::sort(s.begin(), s.end());
    return s;
}

bool in_block(const LatticeVector& v, int k)
{
    for (int c = 0; c < 2 * (k - 1); ++c)
        if (v[c] != 0)
            return false;
    return true;
}

struct EdgeChecker {
    int g, i, k, n_dist;
    LatticeVector x;
    VecList zs;
    std::optional<Int> rank_t;  // i = 2, k = 0: vertices must carry this b1-rank

    int next_level() const { return k >= 5 ? level_infinity : k + 1; }

    CheckResult vertex_ok(const LatticeVector& v) const
    {
        for (size_t zi = 0; zi < zs.size(); ++zi)
            if (form(v, zs[zi]) != 0)
                return {false, "vertex not orthogonal to z_" + std::to_string(zi)};
        if (rank_t && rank_b(v, 1) != *rank_t)
            return {false, "vertex b1-rank != t"};
        auto up = is_simplex(ComplexSpec::filtration(g, i, next_level(), n_dist), Simplex{v});
        if (!up.ok)
            return {false, "vertex not in F_{k+1}: " + up.diagnostic};
        auto with_x =
            is_simplex(ComplexSpec::filtration(g, i, k, n_dist), sorted_simplex({x, v}));
        if (!with_x.ok)
            return {false, "{x, v} not in F_k: " + with_x.diagnostic};
        return {};
    }

    CheckResult edge_ok(const LatticeVector& a, const LatticeVector& b) const
    {
        auto pair =
            is_simplex(ComplexSpec::filtration(g, i, next_level(), n_dist), sorted_simplex({a, b}));
        if (!pair.ok)
            return {false, "edge not in F_{k+1}: " + pair.diagnostic};
        auto with_x =
            is_simplex(ComplexSpec::filtration(g, i, k, n_dist), sorted_simplex({x, a, b}));
        if (!with_x.ok)
            return {false, "{x, edge} not in F_k: " + with_x.diagnostic};
        return {};
    }

    void validate_path(const VecList& path, const std::string& stage) const
    {
        for (const auto& v : path) {
            auto r = vertex_ok(v);
            if (!r.ok)
                throw ConstructionError("connect_path [" + stage + "]: " + r.diagnostic +
                                        " (vertex " + v.str() + ")");
        }
        for (size_t e = 0; e + 1 < path.size(); ++e) {
            auto r = edge_ok(path[e], path[e + 1]);
            if (!r.ok)
                throw ConstructionError("connect_path [" + stage + "]: " + r.diagnostic +
                                        " (edge " + path[e].str() + " -- " + path[e + 1].str() +
                                        ")");
        }
    }
};

LatticeVector shift_down(const LatticeVector& v)
{
    int g = v.genus();
    IntVec coords(2 * (g - 1));
    if (v[0] != 0 || v[1] != 0)
        throw std::logic_error("shift_down: first pair not zero");
    for (int c = 2; c < 2 * g; ++c)
        coords[c - 2] = v[c];
    return LatticeVector(g - 1, std::move(coords));
}

LatticeVector shift_up(const LatticeVector& v, int g)
{
    IntVec coords(2 * g, Int(0));
    for (int c = 0; c < v.dim(); ++c)
        coords[c + 2] = v[c];
    return LatticeVector(g, std::move(coords));
}

LatticeVector primitive_scale(const LatticeVector& v)
{
    Int c = v.content();
    if (c == 0)
        throw ConstructionError("connect_path: zero vector where a simple vector was needed");
    LatticeVector out = v;
    for (int idx = 0; idx < out.dim(); ++idx)
        out[idx] /= c;
    return out;
}

// The i = 1 construction (the connectivity lemma for ordered Lambda). Also
// reused by the i = 2 variants after projecting away the (a1, b1) block.
VecList lsmh_path(const LatticeVector& x, const VecList& zs, int k, const LatticeVector& v1,
                  const LatticeVector& v2, int n_dist)
{
    const int g = x.genus();
    EdgeChecker chk{g, 1, k, n_dist, x, zs, std::nullopt};
    {
        auto r1 = chk.vertex_ok(v1);
        if (!r1.ok)
            throw PreconditionError("connect_path: v1 invalid: " + r1.diagnostic);
        auto r2 = chk.vertex_ok(v2);
        if (!r2.ok)
            throw PreconditionError("connect_path: v2 invalid: " + r2.diagnostic);
    }
    if (v1 == v2)
        return {v1};
    if (chk.edge_ok(v1, v2).ok)
        return {v1, v2};

    // case: some a_j (j < k) orthogonal to every z
    for (int j = 1; j < k; ++j) {
        LatticeVector aj = LatticeVector::basis_a(g, j);
        bool orth = true;
        for (const auto& z : zs)
            if (form(aj, z) != 0)
                orth = false;
        if (orth) {
            VecList path{v1, aj, v2};
            chk.validate_path(path, "low-index shortcut");
            return path;
        }
    }

    const int m = k + 1;
    VecList zs_high;
    for (const auto& z : zs)
        if (in_block(z, k))
            zs_high.push_back(z);

    // main splitting: duals for S(pr_m{v1, v2, x}), then for the z-block;
    // falls through to the link route when the dimensions leave no room
    std::optional<LatticeVector> middle;
    {
        VecList proj;
        for (const auto& v : {v1, v2, x}) {
            LatticeVector p = pr_block(v, m);
            if (!p.is_zero())
                proj.push_back(p);
        }
        VecList s1, d1, t1 = block_basis(g, m);
        if (!proj.empty()) {
            s1 = columns_to_vectors(g, saturate(coords_matrix(proj)));
            PairingDual pd = pairing_dual(block_basis(g, m), s1);
            d1 = pd.d_basis;
            t1 = pd.t_basis;
        }
        VecList zt;
        for (const auto& z : zs_high) {
            LatticeVector p = project_to_complement(pr_block(z, m), s1, d1);
            if (!p.is_zero())
                zt.push_back(p);
        }
        if (zt.empty()) {
            if (!t1.empty())
                middle = t1[0];
        } else {
            VecList s21 = columns_to_vectors(g, saturate(coords_matrix(zt)));
            PairingDual pd2 = pairing_dual(t1, s21);
            LatticeVector w0 = s21[0];
            // <z, corr> = <w0, z> makes w0 + corr orthogonal to every z
            IntVec rhs(zs_high.size());
            for (size_t r = 0; r < zs_high.size(); ++r)
                rhs[r] = form(w0, zs_high[r]);
            auto corr = solve_pairing(g, zs_high, rhs, pd2.d_basis);
            if (corr)
                middle = w0 + *corr;
        }
    }
    if (middle) {
        VecList path{v1, primitive_scale(*middle), v2};
        chk.validate_path(path, "splitting route");
        return path;
    }

    // no room: route through the link of the normalized projection of x
    LatticeVector px = pr_block(x, m);
    if (px.is_zero())
        throw ConstructionError("connect_path [link route]: x projects to zero in H_{k+1}");
    LatticeVector xbar = primitive_scale(px);
    VecList w_ends;
    for (const auto& v : {v1, v2}) {
        VecList proj;
        for (const auto& u : {pr_block(v, m), px}) {
            if (!u.is_zero())
                proj.push_back(u);
        }
        VecList sb = columns_to_vectors(g, saturate(coords_matrix(proj)));
        PairingDual pd = pairing_dual(block_basis(g, m), sb);
        if (pd.t_basis.empty())
            throw ConstructionError("connect_path [link route]: T-bar is zero");
        w_ends.push_back(pd.t_basis[0]);
    }
    VecList path{v1, w_ends[0]};
    if (!chk.edge_ok(w_ends[0], w_ends[1]).ok) {
        // bridge inside the link of xbar in H_{k+1}
        VecList ker = orthogonal_sublattice(g, {xbar, w_ends[0], w_ends[1]}, block_basis(g, m));
        std::optional<LatticeVector> bridge;
        auto try_candidate = [&](const LatticeVector& u) {
            if (u.is_zero() || bridge)
                return;
            LatticeVector cand = primitive_scale(u);
            if (chk.vertex_ok(cand).ok && chk.edge_ok(w_ends[0], cand).ok &&
                chk.edge_ok(cand, w_ends[1]).ok)
                bridge = cand;
        };
        for (const auto& u : ker)
            try_candidate(u);
        for (size_t a = 0; a < ker.size() && !bridge; ++a)
            for (size_t b = a + 1; b < ker.size() && !bridge; ++b) {
                try_candidate(ker[a] + ker[b]);
                try_candidate(ker[a] - ker[b]);
            }
        if (!bridge)
            throw ConstructionError("connect_path [link route]: no bridge in the link");
        path.push_back(*bridge);
    }
    path.push_back(w_ends[1]);
    path.push_back(v2);
    // drop accidental repeats
    VecList trimmed;
    for (const auto& v : path)
        if (trimmed.empty() || !(trimmed.back() == v))
            trimmed.push_back(v);
    chk.validate_path(trimmed, "link route");
    return trimmed;
}

VecList lift_path(const VecList& inner, const LatticeVector& head, const LatticeVector& v1,
                  const LatticeVector& v2, int g)
{
    VecList out{v1};
    for (size_t idx = 1; idx + 1 < inner.size(); ++idx)
        out.push_back(head + shift_up(inner[idx], g));
    out.push_back(v2);
    return out;
}

}  // namespace

VecList connect_path(const LatticeVector& x, const VecList& z_constraints, int k,
                     const LatticeVector& v1, const LatticeVector& v2, PathVariant variant,
                     int n_dist)
{
    const int g = x.genus();
    switch (variant) {
    case PathVariant::Lsmh:
        return lsmh_path(x, z_constraints, k, v1, v2, n_dist);

    case PathVariant::CsmhK2: {
        if (k < 2)
            throw PreconditionError("connect_path: CsmhK2 needs k >= 2");
        LatticeVector px = pr2(x);
        if (px.content() != 1)
            throw PreconditionError("connect_path [projection lift]: pr2(x) not simple");
        VecList zs_down;
        for (const auto& z : z_constraints)
            zs_down.push_back(shift_down(pr2(z)));
        VecList inner = lsmh_path(shift_down(px), zs_down, k - 1, shift_down(pr2(v1)),
                                  shift_down(pr2(v2)), n_dist);
        VecList path = inner.size() == 1
                           ? VecList{v1}
                           : lift_path(inner, LatticeVector::basis_a(g, 1), v1, v2, g);
        EdgeChecker chk{g, 2, k, n_dist, x, z_constraints, std::nullopt};
        chk.validate_path(path, "projection lift");
        return path;
    }

    case PathVariant::CsmhK1: {
        if (v1 == v2)
            return {v1};
        // dual u to pr2(x), orthogonal to v1, v2 and the z's
        VecList constraints{pr2(x)};
        IntVec rhs{Int(1)};
        for (const auto& v : {v1, v2}) {
            constraints.push_back(v);
            rhs.push_back(Int(0));
        }
        for (const auto& z : z_constraints) {
            constraints.push_back(z);
            rhs.push_back(Int(0));
        }
        auto u = solve_pairing(g, constraints, rhs, block_basis(g, 2));
        if (!u)
            throw ConstructionError(
                "connect_path [unit-dual route]: no dual u (gcd2 hypothesis violated)");
        // successive duals: split off <pr2 x, u>, then S(pr {v1,v2}), then the z-block
        VecList t0 = orthogonal_sublattice(g, {pr2(x), *u}, block_basis(g, 2));
        VecList v_proj;
        for (const auto& v : {v1, v2}) {
            LatticeVector p = project_to_complement(pr2(v), {pr2(x)}, {*u});
            if (!p.is_zero())
                v_proj.push_back(p);
        }
        VecList s1, d1, t1 = t0;
        if (!v_proj.empty()) {
            s1 = columns_to_vectors(g, saturate(coords_matrix(v_proj)));
            PairingDual pd = pairing_dual(t0, s1);
            d1 = pd.d_basis;
            t1 = pd.t_basis;
        }
        VecList zt;
        for (const auto& z : z_constraints) {
            LatticeVector p = project_to_complement(project_to_complement(pr2(z), {pr2(x)}, {*u}),
                                                    s1, d1);
            if (!p.is_zero())
                zt.push_back(p);
        }
        VecList target;  // SV^{2,1} + D^2, inside which w' must be orthogonal to the z's
        if (zt.empty()) {
            target = t1;
        } else {
            VecList s21 = columns_to_vectors(g, saturate(coords_matrix(zt)));
            PairingDual pd2 = pairing_dual(t1, s21);
            target = s21;
            target.insert(target.end(), pd2.d_basis.begin(), pd2.d_basis.end());
        }
        VecList ker = z_constraints.empty()
                          ? target
                          : orthogonal_sublattice(g, z_constraints, target);
        if (ker.empty())
            throw ConstructionError("connect_path [unit-dual route]: no room for w'");
        LatticeVector wp = ker[0];
        Int c = form(LatticeVector::basis_a(g, 1) + wp, x);
        LatticeVector w = LatticeVector::basis_a(g, 1) + *u * c + wp;
        VecList path{v1, w, v2};
        EdgeChecker chk{g, 2, k, n_dist, x, z_constraints, std::nullopt};
        chk.validate_path(path, "unit-dual route");
        if (gcd2({x, v1, v2, w}) == 0)
            throw ConstructionError("connect_path [unit-dual route]: gcd2 positivity clause fails");
        return path;
    }

    case PathVariant::CsmhK0: {
        Int t = rank_b(x, 1);
        LatticeVector head = LatticeVector::basis_a(g, 1) + LatticeVector::basis_b(g, 1) * t;
        EdgeChecker chk{g, 2, 0, n_dist, x, z_constraints, t};
        if (v1 == v2) {
            chk.validate_path({v1}, "fixed-rank route");
            return {v1};
        }
        LatticeVector px = pr2(x);
        VecList path;
        if (px.is_zero()) {
            VecList constraints{v1, v2};
            constraints.insert(constraints.end(), z_constraints.begin(), z_constraints.end());
            VecList ker = orthogonal_sublattice(g, constraints, block_basis(g, 2));
            if (ker.empty())
                throw ConstructionError("connect_path [fixed-rank route]: no room for w'");
            path = {v1, head + ker[0], v2};
        } else {
            VecList zs_down;
            for (const auto& z : z_constraints)
                zs_down.push_back(shift_down(pr2(z)));
            VecList inner = lsmh_path(shift_down(primitive_scale(px)), zs_down, 1,
                                      shift_down(pr2(v1)), shift_down(pr2(v2)), n_dist);
            path = lift_path(inner, head, v1, v2, g);
        }
        chk.validate_path(path, "fixed-rank route");
        // positivity clause: when gcd2(x, v_j) > 0 the bridging vertex keeps it
        if (path.size() == 3)
            for (const auto& v : {v1, v2})
                if (gcd2({x, v}) > 0 && gcd2({x, v, path[1]}) == 0)
                    throw ConstructionError(
                        "connect_path [fixed-rank route]: gcd2 positivity clause fails");
        return path;
    }
    }
    throw std::logic_error("connect_path: unknown variant");
}

}  // namespace spm
