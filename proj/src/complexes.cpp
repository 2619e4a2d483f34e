#include "spmorse/complexes.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace spm {

LatticeVector seed_vertex(int g, int i, int j)
{
    if (j == 1)
        return LatticeVector::basis_a(g, 1);
    if (i == 1)
        return LatticeVector::basis_a(g, j);
    return LatticeVector::basis_a(g, 1) + LatticeVector::basis_a(g, j);
}

LatticeVector seed_dual(int g, int i, int j)
{
    if (j == 1) {
        if (i == 1)
            return LatticeVector::basis_b(g, 1);
        LatticeVector u = LatticeVector::basis_b(g, 1);
        for (int l = 2; l <= 4; ++l)
            u -= LatticeVector::basis_b(g, l);
        return u;
    }
    return LatticeVector::basis_b(g, j);
}

ComplexSpec ComplexSpec::lambda(int g)
{
    ComplexSpec s;
    s.family = Family::L;
    s.g = g;
    return s;
}

ComplexSpec ComplexSpec::lambda_a1(int g)
{
    ComplexSpec s;
    s.family = Family::La1;
    s.g = g;
    return s;
}

ComplexSpec ComplexSpec::ordered(int g, int i)
{
    ComplexSpec s;
    s.family = Family::LOrdered;
    s.g = g;
    s.i = i;
    return s;
}

ComplexSpec ComplexSpec::filtration(int g, int i, int level, int n_dist)
{
    ComplexSpec s;
    s.family = Family::Filtration;
    s.g = g;
    s.i = i;
    s.level = level;
    s.n_dist = n_dist;
    return s;
}

ComplexSpec ComplexSpec::good_gcd(int g, Simplex delta)
{
    ComplexSpec s;
    s.family = Family::GoodGcd;
    s.g = g;
    s.i = 2;
    s.delta = std::move(delta);
    return s;
}

ComplexSpec ComplexSpec::b1_rank(int g, Simplex delta, std::optional<Int> t)
{
    ComplexSpec s;
    s.family = Family::B1RankT;
    s.g = g;
    s.i = 2;
    s.delta = std::move(delta);
    s.t = std::move(t);
    return s;
}

ComplexSpec ComplexSpec::m_complex(int g, Simplex d1, Simplex d2, Simplex d3, VecList dual1,
                                   VecList dual2, std::optional<Int> t)
{
    ComplexSpec s;
    s.family = Family::MComplex;
    s.g = g;
    s.i = 2;
    s.delta = std::move(d1);
    s.delta2 = std::move(d2);
    s.delta3 = std::move(d3);
    s.dual1 = std::move(dual1);
    s.dual2 = std::move(dual2);
    s.t = std::move(t);
    return s;
}

ComplexSpec ComplexSpec::n_complex(int g, Simplex delta, VecList dual, std::optional<Int> t)
{
    ComplexSpec s = m_complex(g, std::move(delta), {}, {}, std::move(dual), {}, std::move(t));
    s.family = Family::NComplex;
    return s;
}

Int default_rank_t(const Simplex& delta)
{
    if (delta.empty() || gcd2(delta) == 1)
        return Int(0);
    return rank_b(delta[0], 1);
}

Simplex join(const Simplex& v, const Simplex& w)
{
    Simplex out = v;
    out.insert(out.end(), w.begin(), w.end());
    return out;
}

namespace {

CheckResult fail(std::string why) { return {false, std::move(why)}; }

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

CheckResult check_lambda(const Simplex& s)
{
    for (size_t i = 0; i < s.size(); ++i)
        for (size_t j = i + 1; j < s.size(); ++j) {
            Int p = form(s[i], s[j]);
            if (p != 0)
                return fail("not isotropic at pair (" + std::to_string(i) + "," +
                            std::to_string(j) + "), form = " + to_string(p));
        }
    Int gg = gcd_tuple(s);
    if (gg != 1)
        return fail("gcd = " + to_string(gg));
    return {};
}

CheckResult check_la1(const Simplex& s)
{
    for (size_t i = 0; i < s.size(); ++i)
        if (rank_a(s[i], 1) != 1)
            return fail("a1-rank of vertex " + std::to_string(i) + " is " +
                        to_string(rank_a(s[i], 1)) + ", need 1");
    return check_lambda(s);
}

CheckResult check_base(int i, const Simplex& s)
{
    return i == 1 ? check_lambda(s) : check_la1(s);
}

CheckResult check_ordered(int i, const Simplex& s)
{
    for (size_t k = 0; k + 1 < s.size(); ++k)
        if (!(s[k] < s[k + 1]))
            return fail("vertices not in ascending order at position " + std::to_string(k));
    return check_base(i, s);
}

bool is_seed(const ComplexSpec& spec, const LatticeVector& v)
{
    for (int j = 1; j <= spec.n_dist; ++j)
        if (v == seed_vertex(spec.g, spec.i, j))
            return true;
    return false;
}

CheckResult check_filtration(const ComplexSpec& spec, const Simplex& s)
{
    CheckResult base = check_ordered(spec.i, s);
    if (!base.ok)
        return base;
    const int k = spec.level;
    if (k == level_infinity) {
        for (size_t idx = 0; idx < s.size(); ++idx)
            if (!is_seed(spec, s[idx]))
                return fail("vertex " + std::to_string(idx) + " not distinguished (F_inf)");
        return {};
    }
    if (spec.i == 1) {
        if (k <= 1)
            return {};  // F^1_1 is the whole ordered complex
        for (size_t idx = 0; idx < s.size(); ++idx)
            if (!in_block(s[idx], k) && !is_seed(spec, s[idx]))
                return fail("vertex " + std::to_string(idx) + " outside H_" + std::to_string(k) +
                            " and not distinguished");
        return {};
    }
    // i = 2
    if (k <= 0)
        return {};
    if (k == 1) {
        if (gcd2(s) == 1)
            return {};
        ComplexSpec f2 = spec;
        f2.level = 2;
        CheckResult r = check_filtration(f2, s);
        if (r.ok)
            return {};
        return fail("gcd2 = " + to_string(gcd2(s)) + " != 1 and not in F^2_2");
    }
    // k >= 2: vertices in (a1 + H_k) or distinguished, and the simplex joined
    // with a1 stays a simplex (star condition).
    for (size_t idx = 0; idx < s.size(); ++idx) {
        const LatticeVector& v = s[idx];
        bool in_a1_hk = v.a_coeff(1) == 1 && v.b_coeff(1) == 0 && in_block(pr2(v), k);
        if (!in_a1_hk && !is_seed(spec, v))
            return fail("vertex " + std::to_string(idx) + " outside a1 + H_" + std::to_string(k) +
                        " and not distinguished");
    }
    Simplex with_a1 = s;
    bool has_a1 = false;
    for (const auto& v : s)
        if (v == LatticeVector::basis_a(spec.g, 1))
            has_a1 = true;
    if (!has_a1) {
        with_a1.push_back(LatticeVector::basis_a(spec.g, 1));
        CheckResult star = check_la1(with_a1);
        if (!star.ok)
            return fail("star(a1) condition: " + star.diagnostic);
    }
    return {};
}

VecList saturation_basis_h2(const VecList& parts)
{
    if (parts.empty())
        return {};
    VecList proj;
    for (const auto& v : parts)
        proj.push_back(pr2(v));
    IntMat sat = saturate(coords_matrix(proj));
    return columns_to_vectors(parts[0].genus(), sat);
}

CheckResult check_good_gcd(const ComplexSpec& spec, const Simplex& s, const VecList& extra_sat)
{
    // membership in the link of delta inside Lambda^{a1}
    CheckResult in_link = check_la1(join(spec.delta, s));
    if (!in_link.ok)
        return fail("join with delta: " + in_link.diagnostic);
    VecList tuple;
    for (const auto& v : s)
        tuple.push_back(pr2(v));
    tuple.insert(tuple.end(), extra_sat.begin(), extra_sat.end());
    Int gg = gcd_tuple(tuple);
    if (gg != 1)
        return fail("gcd2(simplex; S(delta)) = " + to_string(gg));
    return {};
}

CheckResult check_b1_rank(const ComplexSpec& spec, const Simplex& s, const VecList& extra_sat)
{
    CheckResult r = check_good_gcd(spec, s, extra_sat);
    if (!r.ok)
        return r;
    Int want = spec.t ? *spec.t : default_rank_t(spec.delta);
    for (size_t idx = 0; idx < s.size(); ++idx)
        if (rank_b(s[idx], 1) != want)
            return fail("b1-rank of vertex " + std::to_string(idx) + " is " +
                        to_string(rank_b(s[idx], 1)) + ", need " + to_string(want));
    return {};
}

}  // namespace

CheckResult is_simplex(const ComplexSpec& spec, const Simplex& s)
{
    for (const auto& v : s)
        if (v.genus() != spec.g)
            return fail("vertex genus mismatch");

    CheckResult res;
    switch (spec.family) {
    case Family::L:
        res = check_lambda(s);
        break;
    case Family::La1:
        res = check_la1(s);
        break;
    case Family::LOrdered:
        res = check_ordered(spec.i, s);
        break;
    case Family::Filtration:
        res = check_filtration(spec, s);
        break;
    case Family::GoodGcd:
        res = check_good_gcd(spec, s, saturation_basis_h2(spec.delta));
        break;
    case Family::B1RankT:
        res = check_b1_rank(spec, s, saturation_basis_h2(spec.delta));
        break;
    case Family::MComplex:
    case Family::NComplex: {
        Simplex whole = join(join(spec.delta, spec.delta2), spec.delta3);
        ComplexSpec inner = spec;
        inner.delta = whole;
        if (!inner.t)
            inner.t = default_rank_t(whole);
        res = check_b1_rank(inner, s, saturation_basis_h2(whole));
        if (!res.ok)
            break;
        // (a) gcd2(w, S(delta1, delta2, delta3, D(delta1), D(delta2))) = 1
        VecList sat_parts = whole;
        sat_parts.insert(sat_parts.end(), spec.dual1.begin(), spec.dual1.end());
        sat_parts.insert(sat_parts.end(), spec.dual2.begin(), spec.dual2.end());
        VecList sat = saturation_basis_h2(sat_parts);
        VecList tuple;
        for (const auto& v : s)
            tuple.push_back(pr2(v));
        tuple.insert(tuple.end(), sat.begin(), sat.end());
        Int gg = gcd_tuple(tuple);
        if (gg != 1) {
            res = fail("condition (a): gcd2(w, S(deltas, duals)) = " + to_string(gg));
            break;
        }
        // (b) w orthogonal to D(delta1)
        for (size_t idx = 0; idx < s.size(); ++idx)
            for (const auto& d : spec.dual1)
                if (form(s[idx], d) != 0) {
                    res = fail("condition (b): vertex " + std::to_string(idx) +
                               " not orthogonal to D(delta1)");
                    break;
                }
        break;
    }
    }
    if (!res.ok)
        return res;

    if (!spec.vertex_subspace.empty())
        for (size_t idx = 0; idx < s.size(); ++idx)
            if (!in_span_int(spec.vertex_subspace, s[idx]))
                return fail("vertex " + std::to_string(idx) + " outside the vertex subspace");
    for (size_t idx = 0; idx < s.size(); ++idx)
        for (size_t zi = 0; zi < spec.orth_constraints.size(); ++zi)
            if (form(s[idx], spec.orth_constraints[zi]) != 0)
                return fail("vertex " + std::to_string(idx) + " not orthogonal to constraint " +
                            std::to_string(zi));
    return {};
}

int FiniteComplex::max_dim() const
{
    int d = -1;
    for (const auto& t : simplices)
        d = std::max(d, static_cast<int>(t.size()) - 1);
    return d;
}

bool FiniteComplex::closed_under_faces() const
{
    for (const auto& t : simplices)
        for (const auto& f : proper_faces(t))
            if (!f.empty() && !simplices.count(f))
                return false;
    return true;
}

std::vector<std::vector<int>> FiniteComplex::simplices_of_dim(int d) const
{
    std::vector<std::vector<int>> out;
    for (const auto& t : simplices)
        if (static_cast<int>(t.size()) == d + 1)
            out.push_back(t);
    return out;
}

Simplex FiniteComplex::realize(const std::vector<int>& tuple) const
{
    Simplex s;
    for (int idx : tuple)
        s.push_back(vertices.at(idx));
    return s;
}

int FiniteComplex::vertex_index(const LatticeVector& v) const
{
    for (size_t i = 0; i < vertices.size(); ++i)
        if (vertices[i] == v)
            return static_cast<int>(i);
    return -1;
}

std::vector<std::vector<int>> proper_faces(const std::vector<int>& tuple)
{
    std::vector<std::vector<int>> out;
    for (size_t drop = 0; drop < tuple.size(); ++drop) {
        std::vector<int> f;
        for (size_t i = 0; i < tuple.size(); ++i)
            if (i != drop)
                f.push_back(tuple[i]);
        out.push_back(std::move(f));
    }
    return out;
}

std::vector<Simplex> link_of(const ComplexSpec& spec, const Simplex& v, const FiniteComplex& pool)
{
    CheckResult own = is_simplex(spec, v);
    if (!own.ok)
        throw PreconditionError("link_of: base simplex invalid: " + own.diagnostic);
    std::vector<Simplex> out;
    for (const auto& tuple : pool.simplices) {
        Simplex w = pool.realize(tuple);
        if (is_simplex(spec, join(v, w)).ok)
            out.push_back(std::move(w));
    }
    return out;
}

FiniteComplex enumerate_truncation(int g, int i, int box, int max_dim, int max_vertices,
                                   int max_simplices_per_dim)
{
    if (box < 0)
        throw PreconditionError("enumerate_truncation: negative box");
    FiniteComplex fc;
    fc.g = g;
    fc.i = i;
    fc.box = box;
    if (box == 0)
        return fc;

    // vertices: lexicographic scan of the coordinate box
    const int dim = 2 * g;
    IntVec coords(dim, Int(-box));
    bool done = false;
    while (!done) {
        LatticeVector v(g, coords);
        bool valid = !v.is_zero() && v.content() == 1 && (i == 1 || rank_a(v, 1) == 1);
        if (valid) {
            if (max_vertices > 0 && static_cast<int>(fc.vertices.size()) >= max_vertices) {
                fc.complete = false;
                break;
            }
            fc.vertices.push_back(v);
        }
        int pos = dim - 1;
        while (pos >= 0) {
            coords[pos] += 1;
            if (coords[pos] <= box)
                break;
            coords[pos] = -box;
            --pos;
        }
        if (pos < 0)
            done = true;
    }
    std::sort(fc.vertices.begin(), fc.vertices.end());

    for (size_t idx = 0; idx < fc.vertices.size(); ++idx)
        fc.simplices.insert({static_cast<int>(idx)});

    std::vector<std::vector<int>> frontier = fc.simplices_of_dim(0);
    for (int d = 1; d <= max_dim; ++d) {
        std::vector<std::vector<int>> next;
        int count = 0;
        for (const auto& tuple : frontier) {
            for (int idx = tuple.back() + 1; idx < static_cast<int>(fc.vertices.size()); ++idx) {
                std::vector<int> cand = tuple;
                cand.push_back(idx);
                Simplex s = fc.realize(cand);
                // multicomplex membership is order free; test the sorted tuple
                CheckResult r = i == 1 ? check_lambda(s) : check_la1(s);
                if (!r.ok)
                    continue;
                if (max_simplices_per_dim > 0 && count >= max_simplices_per_dim) {
                    fc.complete = false;
                    break;
                }
                next.push_back(cand);
                ++count;
            }
            if (!fc.complete && max_simplices_per_dim > 0 && count >= max_simplices_per_dim)
                break;
        }
        for (const auto& t : next)
            fc.simplices.insert(t);
        frontier = std::move(next);
        if (frontier.empty())
            break;
    }
    return fc;
}

int filtration_level(const LatticeVector& v, int i, int n_dist)
{
    return filtration_level(Simplex{v}, i, n_dist);
}

int filtration_level(const Simplex& s, int i, int n_dist)
{
    if (s.empty())
        return level_infinity;
    int g = s[0].genus();
    if (is_simplex(ComplexSpec::filtration(g, i, level_infinity, n_dist), s).ok)
        return level_infinity;
    for (int k = 5; k >= (i == 1 ? 1 : 0); --k)
        if (is_simplex(ComplexSpec::filtration(g, i, k, n_dist), s).ok)
            return k;
    return -1;
}

Simplex assign_wstar(const Simplex& w, int i, int k, int n_dist, int g_hint)
{
    if (w.empty() && g_hint <= 0)
        throw PreconditionError("assign_wstar: empty simplex needs g_hint");
    const int g = w.empty() ? g_hint : w[0].genus();  // ambient genus
    const int gs = i == 1 ? g : g - 1;  // surface genus: i = 2 lives in H(g+1)
    if (gs < 8 - i)
        throw PreconditionError("assign_wstar: g < 8 - i");
    if (k < (i == 1 ? 1 : 0) || k > 5)
        throw PreconditionError("assign_wstar: level out of range");
    // filtration levels are taken literally (4 distinguished vertices); the
    // extended set enters only through the k = 5 completion below. The empty
    // simplex lies in every stage, so its level precondition is vacuous.
    if (!w.empty()) {
        int level = filtration_level(w, i, 4);
        if (level != k)
            throw PreconditionError("assign_wstar: simplex has level " +
                                    (level == level_infinity ? std::string("inf")
                                                             : std::to_string(level)) +
                                    ", expected " + std::to_string(k));
    }

    const int s_dim = static_cast<int>(w.size()) - 1;
    const int target = gs - 3 + i - std::max(s_dim, 0);
    const int next_level = k == 5 ? level_infinity : k + 1;
    const int next_ndist = k == 5 ? n_dist : 4;

    Simplex result;
    for (int j = 1; j <= k - 1 && j <= 4; ++j)
        result.push_back(seed_vertex(g, i, j));

    auto join_ok = [&](const Simplex& extra) {
        Simplex all = sorted_simplex(join(w, extra));
        return is_simplex(ComplexSpec::filtration(g, i, k, 4), all).ok;
    };

    if (k == 5) {
        // distinguished completion only; the extended set caps the size here
        for (int j = 5; j <= n_dist && static_cast<int>(result.size()) < target; ++j) {
            Simplex cand = result;
            cand.push_back(seed_vertex(g, i, j));
            if (join_ok(cand) &&
                is_simplex(ComplexSpec::filtration(g, i, next_level, next_ndist),
                           sorted_simplex(cand))
                    .ok)
                result = cand;
        }
    } else {
        const int m = std::max(k + 1, 2);
        VecList proj;
        for (const auto& v : w) {
            LatticeVector p = pr_block(v, m);
            if (!p.is_zero())
                proj.push_back(p);
        }
        VecList s_basis;
        VecList d_basis;
        VecList t_lattice = block_basis(g, m);
        if (!proj.empty()) {
            s_basis = columns_to_vectors(g, saturate(coords_matrix(proj)));
            PairingDual pd = pairing_dual(block_basis(g, m), s_basis);
            d_basis = pd.d_basis;
            t_lattice = pd.t_basis;
        }
        auto pairs = symplectic_gram_schmidt(g, t_lattice);

        LatticeVector shift = LatticeVector::zero(g);
        if (i == 2) {
            if (k >= 2) {
                shift = LatticeVector::basis_a(g, 1);
            } else {
                Int t_val = default_rank_t(w);
                LatticeVector u = LatticeVector::zero(g);
                if (!s_basis.empty()) {
                    // u in D with a1 + t b1 + u orthogonal to w
                    LatticeVector base =
                        LatticeVector::basis_a(g, 1) + LatticeVector::basis_b(g, 1) * t_val;
                    IntMat sys(static_cast<int>(w.size()), static_cast<int>(d_basis.size()));
                    IntVec rhs(w.size());
                    bool any = false;
                    for (size_t r = 0; r < w.size(); ++r) {
                        for (size_t c = 0; c < d_basis.size(); ++c) {
                            Int p = form(d_basis[c], w[r]);
                            if (p != 0)
                                sys.set(static_cast<int>(r), static_cast<int>(c), p);
                        }
                        rhs[r] = -form(base, w[r]);
                        if (rhs[r] != 0)
                            any = true;
                    }
                    if (any) {
                        RatMat sys_q = to_rational(sys);
                        RatVec rhs_q(rhs.size());
                        for (size_t r = 0; r < rhs.size(); ++r)
                            rhs_q[r] = Rat(rhs[r]);
                        auto sol = solve_exact(sys_q, rhs_q);
                        if (!sol)
                            throw ConstructionError(
                                "assign_wstar: no compensating vector in D(w)");
                        for (size_t c = 0; c < d_basis.size(); ++c) {
                            if ((*sol)[c].get_den() != 1)
                                throw ConstructionError(
                                    "assign_wstar: compensating vector not integral");
                            u += d_basis[c] * Int((*sol)[c].get_num());
                        }
                    }
                }
                shift = LatticeVector::basis_a(g, 1) + LatticeVector::basis_b(g, 1) * t_val + u;
            }
        }

        for (const auto& pr : pairs) {
            if (static_cast<int>(result.size()) >= target)
                break;
            result.push_back(i == 1 ? pr.first : shift + pr.first);
        }
        if (static_cast<int>(result.size()) < target)
            throw ConstructionError("assign_wstar: isotropic summand of T too small (" +
                                    std::to_string(result.size()) + " of " +
                                    std::to_string(target) + ")");
    }

    // postconditions (i)-(iv)
    if (!join_ok(result))
        throw ConstructionError("assign_wstar: (i) join not a simplex of F_k");
    Simplex sorted_star = sorted_simplex(result);
    if (!is_simplex(ComplexSpec::filtration(g, i, next_level, next_ndist), sorted_star).ok)
        throw ConstructionError("assign_wstar: w* not inside F_{k+1}");
    for (int j = 1; j <= k - 1; ++j)
        if (result[j - 1] != seed_vertex(g, i, j))
            throw ConstructionError("assign_wstar: (ii) w_j != A_j");
    // (iii): subsets of w in F_{k+1} stay joinable within F_{k+1}
    const size_t n = w.size();
    for (size_t mask = 0; mask < (size_t(1) << n); ++mask) {
        Simplex sub;
        for (size_t b = 0; b < n; ++b)
            if (mask & (size_t(1) << b))
                sub.push_back(w[b]);
        if (!is_simplex(ComplexSpec::filtration(g, i, next_level, next_ndist),
                        sorted_simplex(sub))
                 .ok)
            continue;
        if (!is_simplex(ComplexSpec::filtration(g, i, next_level, next_ndist),
                        sorted_simplex(join(sub, result)))
                 .ok)
            throw ConstructionError("assign_wstar: (iii) fails for a subsimplex");
    }
    if (i == 2 && k == 0 && !w.empty())
        for (const auto& wj : result)
            if (rank_b(wj, 1) != rank_b(w[0], 1))
                throw ConstructionError("assign_wstar: (iv) b1-rank mismatch");
    return result;
}

DegenerateRelation degenerate_relation(const Simplex& delta)
{
    if (delta.empty())
        throw PreconditionError("degenerate_relation: empty simplex");
    int g = delta[0].genus();
    CheckResult valid = is_simplex(ComplexSpec::lambda_a1(g), delta);
    if (!valid.ok)
        throw PreconditionError("degenerate_relation: delta not in Lambda^{a1}: " +
                                valid.diagnostic);
    if (gcd2(delta) != 0)
        throw PreconditionError("degenerate_relation: gcd2 = " + to_string(gcd2(delta)) +
                                ", need 0");

    VecList proj;
    for (const auto& v : delta)
        proj.push_back(pr2(v));
    RatMat m = to_rational(coords_matrix(proj));
    RatMat ker = rational_kernel(m);
    if (ker.cols() != 1)
        throw std::logic_error("degenerate_relation: kernel dimension " +
                               std::to_string(ker.cols()) + " != 1");
    // clear denominators and divide by the content
    Int lcm(1);
    for (int r = 0; r < ker.rows(); ++r) {
        Int den = ker.at(r, 0).get_den();
        lcm = lcm / gcd(lcm, den) * den;
    }
    IntVec coeffs(ker.rows());
    Int content(0);
    for (int r = 0; r < ker.rows(); ++r) {
        coeffs[r] = Int(ker.at(r, 0).get_num()) * (lcm / Int(ker.at(r, 0).get_den()));
        content = gcd(content, coeffs[r]);
    }
    for (Int& c : coeffs)
        c /= content;

    Int s(0), t(0);
    for (size_t idx = 0; idx < delta.size(); ++idx) {
        s += coeffs[idx];
        t += coeffs[idx] * rank_b(delta[idx], 1);
    }
    if (s == 0)
        throw std::logic_error("degenerate_relation: s = 0 on a valid simplex");
    if (s < 0) {
        for (Int& c : coeffs)
            c = -c;
        s = -s;
        t = -t;
    }
    if (s != 1)
        throw std::logic_error("degenerate_relation: s = " + to_string(s) +
                               " cannot be normalized to 1");
    // exact verification of the relation
    LatticeVector lhs = LatticeVector::zero(g);
    for (size_t idx = 0; idx < delta.size(); ++idx)
        lhs += delta[idx] * coeffs[idx];
    LatticeVector rhs = LatticeVector::basis_a(g, 1) + LatticeVector::basis_b(g, 1) * t;
    if (!(lhs == rhs))
        throw std::logic_error("degenerate_relation: relation does not hold exactly");
    return {std::move(coeffs), std::move(s), std::move(t)};
}

bool regular_bad(const Simplex& image, BadMode mode, const BadParams& params)
{
    switch (mode) {
    case BadMode::RankR:
        for (const auto& v : image)
            if (abs(form(v, params.y_functional)) != params.r_value)
                return false;
        return true;
    case BadMode::B1NotT:
        for (const auto& v : image)
            if (rank_b(v, 1) == params.t)
                return false;
        return true;
    case BadMode::GcdDrop:
        for (size_t drop = 0; drop < image.size(); ++drop) {
            Simplex rest;
            for (size_t i = 0; i < image.size(); ++i)
                if (i != drop)
                    rest.push_back(image[i]);
            VecList tuple{pr2(image[drop])};
            VecList sat = saturation_basis_h2(rest);
            tuple.insert(tuple.end(), sat.begin(), sat.end());
            if (gcd_tuple(tuple) <= 1)
                return false;
        }
        return true;
    case BadMode::Gcd2Zero: {
        if (gcd2(image) != 0)
            return false;
        const size_t n = image.size();
        for (size_t mask = 1; mask < (size_t(1) << n); ++mask) {
            if (mask == (size_t(1) << n) - 1)
                continue;  // not proper
            Simplex sub;
            for (size_t b = 0; b < n; ++b)
                if (mask & (size_t(1) << b))
                    sub.push_back(image[b]);
            if (gcd2(sub) == 0)
                return false;
        }
        return true;
    }
    case BadMode::MComplexBad:
        for (size_t drop = 0; drop < image.size(); ++drop) {
            Simplex rest;
            for (size_t i = 0; i < image.size(); ++i)
                if (i != drop)
                    rest.push_back(image[i]);
            VecList parts = rest;
            parts.insert(parts.end(), params.delta.begin(), params.delta.end());
            parts.insert(parts.end(), params.dual1.begin(), params.dual1.end());
            parts.insert(parts.end(), params.dual23.begin(), params.dual23.end());
            VecList tuple{pr2(image[drop])};
            VecList sat = saturation_basis_h2(parts);
            tuple.insert(tuple.end(), sat.begin(), sat.end());
            if (gcd_tuple(tuple) == 1)
                return false;
        }
        return true;
    }
    return false;
}

CheckResult SimplicialMapRecord::validate() const
{
    for (const auto& tuple : simplices) {
        Simplex img = image_of(tuple);
        CheckResult r = is_simplex(target, img);
        if (!r.ok) {
            std::ostringstream ids;
            for (int id : tuple)
                ids << id << " ";
            return fail("image of (" + ids.str() + ") invalid: " + r.diagnostic);
        }
    }
    return {};
}

Simplex SimplicialMapRecord::image_of(const std::vector<int>& tuple) const
{
    // order by the record's vertex priority
    std::vector<int> ordered = tuple;
    std::sort(ordered.begin(), ordered.end(), [&](int a, int b) {
        auto pa = std::find(vertex_order.begin(), vertex_order.end(), a);
        auto pb = std::find(vertex_order.begin(), vertex_order.end(), b);
        return pa < pb;
    });
    Simplex img;
    for (int id : ordered)
        img.push_back(assignment.at(id));
    return img;
}

namespace {

std::set<std::vector<int>> boundary_of_ball(const std::set<std::vector<int>>& ball)
{
    int top = 0;
    for (const auto& t : ball)
        top = std::max(top, static_cast<int>(t.size()));
    std::map<std::vector<int>, int> face_count;
    for (const auto& t : ball)
        if (static_cast<int>(t.size()) == top)
            for (const auto& f : proper_faces(t))
                ++face_count[f];
    std::set<std::vector<int>> boundary;
    for (const auto& [f, c] : face_count)
        if (c == 1) {
            boundary.insert(f);
            std::function<void(const std::vector<int>&)> close = [&](const std::vector<int>& t) {
                for (const auto& sub : proper_faces(t))
                    if (!sub.empty() && boundary.insert(sub).second)
                        close(sub);
            };
            close(f);
        }
    return boundary;
}

bool is_closed_manifold(const std::set<std::vector<int>>& simplices)
{
    int top = 0;
    for (const auto& t : simplices)
        top = std::max(top, static_cast<int>(t.size()));
    if (top < 2)
        return false;
    std::map<std::vector<int>, int> face_count;
    for (const auto& t : simplices)
        if (static_cast<int>(t.size()) == top)
            for (const auto& f : proper_faces(t))
                ++face_count[f];
    for (const auto& t : simplices)
        if (static_cast<int>(t.size()) == top - 1 && face_count[t] != 2)
            return false;
    return true;
}

}  // namespace

SimplicialMapRecord link_move(const SimplicialMapRecord& f, const std::vector<int>& sigma,
                              const SimplicialMapRecord& phi,
                              const std::map<int, int>& boundary_glue)
{
    if (!f.simplices.count(sigma))
        throw PreconditionError("link_move: sigma not a simplex of the source");

    // link of sigma in the source
    std::set<std::vector<int>> link;
    for (const auto& t : f.simplices) {
        bool disjoint = true;
        for (int id : sigma)
            if (std::find(t.begin(), t.end(), id) != t.end())
                disjoint = false;
        if (!disjoint)
            continue;
        std::vector<int> uni = t;
        uni.insert(uni.end(), sigma.begin(), sigma.end());
        std::sort(uni.begin(), uni.end());
        if (f.simplices.count(uni))
            link.insert(t);
    }

    // boundary of the ball, mapped through the glue, must equal the link
    std::set<std::vector<int>> bd = boundary_of_ball(phi.simplices);
    std::set<std::vector<int>> bd_mapped;
    for (const auto& t : bd) {
        std::vector<int> m;
        for (int id : t) {
            auto it = boundary_glue.find(id);
            if (it == boundary_glue.end())
                throw PreconditionError("link_move: boundary vertex " + std::to_string(id) +
                                        " has no glue image");
            m.push_back(it->second);
        }
        std::sort(m.begin(), m.end());
        bd_mapped.insert(m);
    }
    if (bd_mapped != link)
        throw PreconditionError("link_move: boundary of the ball does not match link(sigma)");
    for (const auto& [bid, sid] : boundary_glue)
        if (!(phi.assignment.at(bid) == f.assignment.at(sid)))
            throw PreconditionError("link_move: phi disagrees with f on the boundary at ball id " +
                                    std::to_string(bid));

    // fresh ids for interior vertices of the ball
    int next_id = 0;
    for (const auto& [id, v] : f.assignment)
        next_id = std::max(next_id, id + 1);
    std::map<int, int> ball_to_new = boundary_glue;
    std::vector<int> fresh;
    for (const auto& [id, v] : phi.assignment)
        if (!ball_to_new.count(id)) {
            ball_to_new[id] = next_id;
            fresh.push_back(next_id);
            ++next_id;
        }

    SimplicialMapRecord out;
    out.target = f.target;
    out.assignment = f.assignment;
    for (const auto& [bid, nid] : ball_to_new)
        out.assignment[nid] = phi.assignment.at(bid);

    // S' = (S minus star(sigma)) union (B * boundary(sigma))
    for (const auto& t : f.simplices) {
        bool contains_sigma = std::includes(t.begin(), t.end(), sigma.begin(), sigma.end());
        if (!contains_sigma)
            out.simplices.insert(t);
    }
    std::vector<std::vector<int>> sigma_faces = proper_faces(sigma);
    sigma_faces.push_back({});  // the empty face: B itself glues in
    for (const auto& bt : phi.simplices) {
        std::vector<int> mapped;
        for (int id : bt)
            mapped.push_back(ball_to_new.at(id));
        std::sort(mapped.begin(), mapped.end());
        for (const auto& df : sigma_faces) {
            std::vector<int> uni = mapped;
            uni.insert(uni.end(), df.begin(), df.end());
            std::sort(uni.begin(), uni.end());
            out.simplices.insert(uni);
        }
    }

    // ordering: fresh ball vertices first (Remark-style "A before B")
    out.vertex_order = fresh;
    for (int id : f.vertex_order)
        out.vertex_order.push_back(id);

    if (is_closed_manifold(f.simplices) && !is_closed_manifold(out.simplices))
        throw ConstructionError("link_move: gluing produced a non-manifold");
    return out;
}

}  // namespace spm
