#include <algorithm>
#include <functional>
#include <set>

#include "spmorse/e1.hpp"

// Planning of the path-carried degree-2 bases: for a pair {x, x'} with x in
// F_k \ F_{k+1} and x' deeper, a basis of the pair summand is chosen so that
// every element starts life in some {x, h}-summand for a helper vertex h and
// rides to x' along a connectivity path. The plan is pure; executing it (and
// discovering missing truncation simplices) is the builder's job.

namespace spm {

namespace {

Simplex sorted_simplex(Simplex s)
{
    std::sort(s.begin(), s.end());
    return s;
}

PathVariant variant_for(int i, int k)
{
    if (i == 1)
        return PathVariant::Lsmh;
    if (k >= 2)
        return PathVariant::CsmhK2;
    return k == 1 ? PathVariant::CsmhK1 : PathVariant::CsmhK0;
}

void append_route(std::vector<CarryStep>& out, const WedgeTriple& z, const VecList& path,
                  const std::string& lemma)
{
    for (size_t e = 0; e + 1 < path.size(); ++e)
        out.push_back({z, path[e], path[e + 1], lemma});
}

// i = 1: the orthogonal-basis construction of the pair complement, each
// triple orthogonal to one of the four chosen helpers.
std::vector<CarryStep> plan_core_i1(const E1Config& cfg, const LatticeVector& x,
                                    const LatticeVector& xp, const VecList& helpers, int k)
{
    const int g = cfg.genus;
    std::vector<CarryStep> out;

    VecList basis;
    for (int j = 1; j < k; ++j) {
        basis.push_back(LatticeVector::basis_a(g, j));
        basis.push_back(LatticeVector::basis_b(g, j));
    }
    VecList hk = block_basis(g, std::max(k, 1));
    VecList constraints{x, xp};
    VecList with_vs = constraints;
    with_vs.insert(with_vs.end(), helpers.begin(), helpers.end());
    VecList vk_core = orthogonal_sublattice(g, with_vs, hk);
    VecList bk = vk_core;
    for (int jdrop = 0; jdrop < 4; ++jdrop) {
        VecList cons = constraints;
        for (int p = 0; p < 4; ++p)
            if (p != jdrop)
                cons.push_back(helpers[p]);
        VecList vkj = orthogonal_sublattice(g, cons, hk);
        bool found = false, any_outside = false;
        for (const auto& cand : vkj) {
            if (in_span_rat(vk_core, cand))
                continue;
            any_outside = true;
            VecList probe = vk_core;
            probe.push_back(cand);
            if (gcd_tuple(probe) == 1) {
                bk.push_back(cand);
                found = true;
                break;
            }
        }
        // helpers whose constraint is vacuous on the block (the seed prefix)
        // are covered by the low symplectic block instead
        if (!found && any_outside)
            throw ConstructionError("carry plan: no quotient-simple dual-type vector");
    }
    basis.insert(basis.end(), bk.begin(), bk.end());
    if (static_cast<int>(basis.size()) != 2 * g - 2)
        throw ConstructionError("carry plan: basis of <x,x'>^perp has wrong size (" +
                                std::to_string(basis.size()) + ")");

    const size_t n = basis.size();
    for (size_t a = 0; a < n; ++a)
        for (size_t b = a + 1; b < n; ++b)
            for (size_t c = b + 1; c < n; ++c) {
                int m = -1;
                for (int p = 0; p < 4 && m < 0; ++p)
                    if (form(basis[a], helpers[p]) == 0 && form(basis[b], helpers[p]) == 0 &&
                        form(basis[c], helpers[p]) == 0)
                        m = p;
                if (m < 0)
                    throw ConstructionError("carry plan: triple misses every helper");
                WedgeTriple z{to_rat_vec(basis[a]), to_rat_vec(basis[b]), to_rat_vec(basis[c])};
                VecList zs{basis[a], basis[b], basis[c]};
                VecList path = connect_path(x, zs, k, helpers[m], xp, PathVariant::Lsmh,
                                            cfg.n_dist);
                append_route(out, z, path, "path-carried basis");
            }
    return out;
}

// u in (H_Q)_2 with <x, u> = <a, u> = <b, u> = 1, exactly verified.
RatVec rational_unit_dual(int g, const LatticeVector& x, const LatticeVector& a,
                          const LatticeVector& b)
{
    VecList h2 = block_basis(g, 2);
    RatMat sys(3, static_cast<int>(h2.size()));
    for (size_t c = 0; c < h2.size(); ++c) {
        sys.set(0, static_cast<int>(c), Rat(form(x, h2[c])));
        sys.set(1, static_cast<int>(c), Rat(form(a, h2[c])));
        sys.set(2, static_cast<int>(c), Rat(form(b, h2[c])));
    }
    auto sol = solve_exact(sys, {Rat(1), Rat(1), Rat(1)});
    if (!sol)
        throw ConstructionError("carry plan: no rational u with unit pairings");
    RatVec u(2 * g, Rat(0));
    for (size_t c = 0; c < h2.size(); ++c)
        for (int idx = 0; idx < 2 * g; ++idx)
            u[idx] += (*sol)[c] * Rat(h2[c][idx]);
    for (const auto* v : {&x, &a, &b}) {
        Rat pairing(0);
        for (int i2 = 0; i2 < g; ++i2)
            pairing += Rat((*v)[2 * i2]) * u[2 * i2 + 1] - Rat((*v)[2 * i2 + 1]) * u[2 * i2];
        if (pairing != 1)
            throw std::logic_error("carry plan: rational u postcondition violated");
    }
    return u;
}

// i = 2: pr2-triples plus the b1-corrected pairs with per-edge rational duals.
std::vector<CarryStep> plan_core_i2(const E1Config& cfg, const LatticeVector& x,
                                    const LatticeVector& xp, const VecList& helpers, int k)
{
    const int g = cfg.genus;
    std::vector<CarryStep> out;
    PathVariant variant = variant_for(2, k);

    // helper-adapted basis of the pr2-complement: a core orthogonal to all
    // four helpers plus one dual-type vector per helper, so every basis
    // vector pairs to zero with at least three of them
    VecList h2 = block_basis(g, 2);
    VecList constraints{pr2(x), pr2(xp)};
    VecList with_helpers = constraints;
    with_helpers.insert(with_helpers.end(), helpers.begin(), helpers.end());
    VecList core = orthogonal_sublattice(g, with_helpers, h2);
    VecList b2 = core;
    for (int jdrop = 0; jdrop < 4; ++jdrop) {
        VecList cons = constraints;
        for (int p = 0; p < 4; ++p)
            if (p != jdrop)
                cons.push_back(helpers[p]);
        VecList vkj = orthogonal_sublattice(g, cons, h2);
        bool found = false, any_outside = false;
        for (const auto& cand : vkj) {
            if (in_span_rat(core, cand))
                continue;
            any_outside = true;
            VecList probe = core;
            probe.push_back(cand);
            if (gcd_tuple(probe) == 1) {
                b2.push_back(cand);
                found = true;
                break;
            }
        }
        if (!found && any_outside)
            throw ConstructionError("carry plan: no adapted dual-type vector (i = 2)");
    }
    if (b2.empty())
        throw ConstructionError("carry plan: empty pr2 complement");

    const size_t n = b2.size();
    for (size_t a = 0; a < n; ++a)
        for (size_t b = a + 1; b < n; ++b)
            for (size_t c = b + 1; c < n; ++c) {
                int m = -1;
                for (int p = 0; p < 4 && m < 0; ++p)
                    if (form(b2[a], helpers[p]) == 0 && form(b2[b], helpers[p]) == 0 &&
                        form(b2[c], helpers[p]) == 0)
                        m = p;
                if (m < 0)
                    continue;  // covered by the b1-part below
                WedgeTriple z{to_rat_vec(b2[a]), to_rat_vec(b2[b]), to_rat_vec(b2[c])};
                VecList zs{b2[a], b2[b], b2[c]};
                VecList path = connect_path(x, zs, k, helpers[m], xp, variant, cfg.n_dist);
                append_route(out, z, path, "path-carried pr2 basis");
            }

    for (size_t r = 0; r < n; ++r)
        for (size_t s2 = r + 1; s2 < n; ++s2) {
            int m = -1;
            for (int p = 0; p < 4 && m < 0; ++p)
                if (form(b2[r], helpers[p]) == 0 && form(b2[s2], helpers[p]) == 0)
                    m = p;
            if (m < 0)
                throw ConstructionError("carry plan: pair misses every helper");
            VecList zs{b2[r], b2[s2]};
            VecList path = connect_path(x, zs, k, helpers[m], xp, variant, cfg.n_dist);
            for (size_t e = 0; e + 1 < path.size(); ++e) {
                RatVec u = rational_unit_dual(g, x, path[e], path[e + 1]);
                RatVec btilde = to_rat_vec(LatticeVector::basis_b(g, 1));
                for (int idx = 0; idx < 2 * g; ++idx)
                    btilde[idx] -= u[idx];
                out.push_back({{btilde, to_rat_vec(b2[r]), to_rat_vec(b2[s2])}, path[e],
                               path[e + 1], "b1-corrected pair (unit duals)"});
            }
        }
    return out;
}

VecList star_of(const E1Config& cfg, const LatticeVector& x, int k)
{
    Simplex star = assign_wstar({x}, cfg.i, k, cfg.n_dist);
    if (star.size() < 4)
        throw ConstructionError("carry plan: x* has fewer than four vectors");
    return {star[0], star[1], star[2], star[3]};
}

}  // namespace

std::vector<CarryStep> plan_deg2_carry(const E1Config& cfg, const LatticeVector& x,
                                       const LatticeVector& xp)
{
    const int g = cfg.genus;
    int kx = filtration_level(x, cfg.i, 4);
    int kp = filtration_level(xp, cfg.i, 4);
    if (kx < 0 || kp < 0 || kp <= kx)
        throw PreconditionError("plan_deg2_carry: expected level(x) < level(x')");
    const int k = kx;
    VecList star = star_of(cfg, x, k);

    if (cfg.i == 1)
        return plan_core_i1(cfg, x, xp, star, k);

    // i = 2 case split on the hypotheses of the helper lemma
    if (k >= 2) {
        VecList probe{x, xp, star[1], star[2], star[3]};
        VecList proj;
        for (const auto& v : probe)
            proj.push_back(pr2(v));
        if (gcd_tuple(proj) == 0)
            throw ConstructionError("carry plan: hypothesis (a) fails for the star");
        return plan_core_i2(cfg, x, xp, star, k);
    }

    if (k == 1) {
        VecList tuple{x, xp, star[0], star[1], star[2], star[3]};
        VecList proj;
        for (const auto& v : tuple)
            proj.push_back(pr2(v));
        if (gcd_tuple(proj) == 1)
            return plan_core_i2(cfg, x, xp, star, k);
        // auxiliary vertices x'_j = a1 + v_j + c_j y with y dual to pr2(x)
        auto y = solve_pairing(g, {pr2(x)}, {Int(1)}, block_basis(g, 2));
        if (!y)
            throw ConstructionError("carry plan: pr2(x) not simple at k = 1");
        VecList sat_parts{pr2(x), pr2(xp), pr2(star[0]), pr2(star[1]), pr2(star[2]),
                          pr2(star[3]), *y};
        VecList s_basis = columns_to_vectors(g, saturate(coords_matrix(sat_parts)));
        VecList aux;
        for (const auto& cand : block_basis(g, 2)) {
            if (aux.size() == 4)
                break;
            VecList probe2 = s_basis;
            probe2.insert(probe2.end(), aux.begin(), aux.end());
            probe2.push_back(cand);
            if (gcd_tuple(probe2) == 1)
                aux.push_back(cand);
        }
        if (aux.size() < 4)
            throw ConstructionError("carry plan: no room for auxiliary vertices at k = 1");
        VecList helpers;
        for (const auto& v : aux) {
            Int c = -form(x, LatticeVector::basis_a(g, 1) + v);
            helpers.push_back(LatticeVector::basis_a(g, 1) + v + *y * c);
        }
        std::vector<CarryStep> out;
        for (const auto& h : helpers) {
            auto steps = plan_core_i2(cfg, x, h, star, k);
            out.insert(out.end(), steps.begin(), steps.end());
        }
        auto final_steps = plan_core_i2(cfg, x, xp, helpers, k);
        out.insert(out.end(), final_steps.begin(), final_steps.end());
        return out;
    }

    // k = 0: split on the b1-ranks
    if (rank_b(xp, 1) == rank_b(x, 1))
        return plan_core_i2(cfg, x, xp, star, k);
    Simplex pair_star = assign_wstar({x, xp}, cfg.i, 0, cfg.n_dist);
    if (pair_star.size() < 4)
        throw ConstructionError("carry plan: pair star too small at k = 0");
    VecList helpers{pair_star[0], pair_star[1], pair_star[2], pair_star[3]};
    std::vector<CarryStep> out;
    for (const auto& h : helpers) {
        auto steps = plan_core_i2(cfg, x, h, star, 0);
        out.insert(out.end(), steps.begin(), steps.end());
    }
    auto final_steps = plan_core_i2(cfg, x, xp, helpers, 0);
    out.insert(out.end(), final_steps.begin(), final_steps.end());
    return out;
}

std::vector<Simplex> deg2_carry_demands(const E1Config& cfg, const LatticeVector& x,
                                        const LatticeVector& xp)
{
    auto steps = plan_deg2_carry(cfg, x, xp);
    std::vector<Simplex> out;
    out.push_back(sorted_simplex({x, xp}));
    for (const auto& st : steps)
        out.push_back(sorted_simplex({x, st.from, st.to}));
    return out;
}

FiniteComplex extend_complex(const FiniteComplex& fc, const std::vector<Simplex>& extra)
{
    std::set<LatticeVector> verts(fc.vertices.begin(), fc.vertices.end());
    for (const auto& s : extra)
        for (const auto& v : s)
            verts.insert(v);
    FiniteComplex out;
    out.g = fc.g;
    out.i = fc.i;
    out.box = fc.box;
    out.complete = fc.complete;
    out.vertices.assign(verts.begin(), verts.end());
    std::sort(out.vertices.begin(), out.vertices.end());

    auto index_of = [&](const LatticeVector& v) {
        return static_cast<int>(std::lower_bound(out.vertices.begin(), out.vertices.end(), v) -
                                out.vertices.begin());
    };
    std::function<void(const std::vector<int>&)> insert_closed =
        [&](const std::vector<int>& tuple) {
            if (tuple.empty() || !out.simplices.insert(tuple).second)
                return;
            for (const auto& f : proper_faces(tuple))
                insert_closed(f);
        };
    for (const auto& tuple : fc.simplices) {
        std::vector<int> mapped;
        for (int idx : tuple)
            mapped.push_back(index_of(fc.vertices[idx]));
        std::sort(mapped.begin(), mapped.end());
        insert_closed(mapped);
    }
    for (const auto& s : extra) {
        std::vector<int> mapped;
        for (const auto& v : s)
            mapped.push_back(index_of(v));
        std::sort(mapped.begin(), mapped.end());
        mapped.erase(std::unique(mapped.begin(), mapped.end()), mapped.end());
        insert_closed(mapped);
    }
    return out;
}

}  // namespace spm
