#include "spmorse/symplectic.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace spm {

LatticeVector::LatticeVector(int g, IntVec coords) : g_(g), coords_(std::move(coords))
{
    if (static_cast<int>(coords_.size()) != 2 * g_)
        throw std::invalid_argument("LatticeVector: coordinate count != 2g");
}

LatticeVector LatticeVector::basis_a(int g, int j)
{
    if (j < 1 || j > g)
        throw PreconditionError("basis index out of range");
    LatticeVector v = zero(g);
    v[2 * (j - 1)] = 1;
    return v;
}

LatticeVector LatticeVector::basis_b(int g, int j)
{
    if (j < 1 || j > g)
        throw PreconditionError("basis index out of range");
    LatticeVector v = zero(g);
    v[2 * j - 1] = 1;
    return v;
}

bool LatticeVector::is_zero() const
{
    return std::all_of(coords_.begin(), coords_.end(), [](const Int& c) { return c == 0; });
}

Int LatticeVector::content() const
{
    Int g(0);
    for (const Int& c : coords_)
        g = spm::gcd(g, c);
    return g;
}

LatticeVector LatticeVector::operator+(const LatticeVector& o) const
{
    LatticeVector r = *this;
    r += o;
    return r;
}

LatticeVector LatticeVector::operator-(const LatticeVector& o) const
{
    LatticeVector r = *this;
    r -= o;
    return r;
}

LatticeVector LatticeVector::operator-() const
{
    LatticeVector r = *this;
    for (Int& c : r.coords_)
        c = -c;
    return r;
}

LatticeVector LatticeVector::operator*(const Int& s) const
{
    LatticeVector r = *this;
    for (Int& c : r.coords_)
        c *= s;
    return r;
}

LatticeVector& LatticeVector::operator+=(const LatticeVector& o)
{
    if (g_ != o.g_)
        throw PreconditionError("space mismatch");
    for (int i = 0; i < dim(); ++i)
        coords_[i] += o.coords_[i];
    return *this;
}

LatticeVector& LatticeVector::operator-=(const LatticeVector& o)
{
    if (g_ != o.g_)
        throw PreconditionError("space mismatch");
    for (int i = 0; i < dim(); ++i)
        coords_[i] -= o.coords_[i];
    return *this;
}

bool LatticeVector::operator<(const LatticeVector& o) const
{
    if (g_ != o.g_)
        return g_ < o.g_;
    for (int i = 0; i < dim(); ++i) {
        int c = cmp(coords_[i], o.coords_[i]);
        if (c != 0)
            return c < 0;
    }
    return false;
}

std::string LatticeVector::str() const
{
    std::ostringstream out;
    bool first = true;
    for (int i = 0; i < dim(); ++i) {
        const Int& c = coords_[i];
        if (c == 0)
            continue;
        if (!first && c > 0)
            out << "+";
        if (c == -1)
            out << "-";
        else if (c != 1)
            out << c.get_str() << "*";
        out << (i % 2 == 0 ? "a" : "b") << (i / 2 + 1);
        first = false;
    }
    if (first)
        out << "0";
    return out.str();
}

Int form(const LatticeVector& u, const LatticeVector& v)
{
    if (u.genus() != v.genus())
        throw PreconditionError("form: space mismatch");
    Int s(0);
    for (int i = 0; i < u.genus(); ++i)
        s += u[2 * i] * v[2 * i + 1] - u[2 * i + 1] * v[2 * i];
    return s;
}

Int rank_a(const LatticeVector& x, int j)
{
    if (j < 1 || j > x.genus())
        throw PreconditionError("rank_a: index out of range");
    return x.a_coeff(j);
}

Int rank_b(const LatticeVector& x, int j)
{
    if (j < 1 || j > x.genus())
        throw PreconditionError("rank_b: index out of range");
    return x.b_coeff(j);
}

LatticeVector pr_block(const LatticeVector& v, int m)
{
    LatticeVector r = v;
    for (int i = 0; i < std::min(2 * (m - 1), r.dim()); ++i)
        r[i] = 0;
    return r;
}

VecList block_basis(int g, int m)
{
    VecList out;
    for (int j = m; j <= g; ++j) {
        out.push_back(LatticeVector::basis_a(g, j));
        out.push_back(LatticeVector::basis_b(g, j));
    }
    return out;
}

IntMat coords_matrix(const VecList& vs)
{
    if (vs.empty())
        return IntMat(0, 0);
    IntMat m(vs[0].dim(), static_cast<int>(vs.size()));
    for (int c = 0; c < static_cast<int>(vs.size()); ++c) {
        if (vs[c].genus() != vs[0].genus())
            throw PreconditionError("space mismatch in tuple");
        for (int r = 0; r < vs[0].dim(); ++r)
            if (vs[c][r] != 0)
                m.set(r, c, vs[c][r]);
    }
    return m;
}

VecList columns_to_vectors(int g, const IntMat& m)
{
    VecList out;
    for (int c = 0; c < m.cols(); ++c) {
        LatticeVector v = LatticeVector::zero(g);
        for (int r = 0; r < m.rows(); ++r)
            v[r] = m.at(r, c);
        out.push_back(std::move(v));
    }
    return out;
}

namespace {

// Integral x with a x = b; nullopt when unsolvable. Works through the column
// HNF: a = H' * (u^T)^{-1} with H' = hnf(a^T).h transposed, so forward
// substitution in H' followed by x = u^T y.
std::optional<IntVec> solve_int_system(const IntMat& a, const IntVec& b)
{
    HnfResult hr = hnf(a.transposed());
    const IntMat& h = hr.h;  // rows of h = columns of the column-echelon form
    IntVec y(h.rows(), Int(0));
    for (int i = 0; i < h.rows(); ++i) {
        auto entries = h.row_entries(i);
        if (entries.empty())
            continue;  // free
        int p = entries[0].first;  // pivot row of column i in H'
        Int val = b[p];
        for (int i2 = 0; i2 < i; ++i2)
            val -= h.at(i2, p) * y[i2];
        if (val % entries[0].second != 0)
            return std::nullopt;
        y[i] = val / entries[0].second;
    }
    // consistency over all rows
    IntVec check(a.rows(), Int(0));
    for (int i = 0; i < h.rows(); ++i)
        if (y[i] != 0)
            h.for_row(i, [&](int r, const Int& v) { check[r] += v * y[i]; });
    if (check != b)
        return std::nullopt;
    return hr.u.transposed().apply(y);
}

// Babai-style passes shrinking x modulo the columns of k (standard dot).
void size_reduce(IntVec& x, const IntMat& k)
{
    for (int pass = 0; pass < 2; ++pass) {
        for (int c = 0; c < k.cols(); ++c) {
            Int dot(0), norm(0);
            for (int r = 0; r < k.rows(); ++r) {
                const Int& kv = k.at(r, c);
                dot += x[r] * kv;
                norm += kv * kv;
            }
            if (norm == 0)
                continue;
            Int t = fdiv(2 * dot + norm, 2 * norm);  // nearest integer to dot/norm
            if (t != 0)
                for (int r = 0; r < k.rows(); ++r)
                    x[r] -= t * k.at(r, c);
        }
    }
}

// Rows: the pairing functionals <constraints[i], .> evaluated on basis vectors.
IntMat pairing_rows(const VecList& constraints, const VecList& basis)
{
    IntMat p(static_cast<int>(constraints.size()), static_cast<int>(basis.size()));
    for (int i = 0; i < p.rows(); ++i)
        for (int j = 0; j < p.cols(); ++j) {
            Int v = form(constraints[i], basis[j]);
            if (v != 0)
                p.set(i, j, v);
        }
    return p;
}

VecList standard_basis(int g)
{
    return block_basis(g, 1);
}

LatticeVector from_combination(int g, const VecList& basis, const IntVec& coeffs)
{
    LatticeVector out = LatticeVector::zero(g);
    for (size_t i = 0; i < basis.size(); ++i)
        if (coeffs[i] != 0)
            out += basis[i] * coeffs[i];
    return out;
}

}  // namespace

Int gcd_tuple(const VecList& vs)
{
    const int n = static_cast<int>(vs.size());
    if (n == 0)
        return Int(1);
    IntMat m = coords_matrix(vs);
    IntMat s = saturate(m);
    if (s.cols() < n)
        return Int(0);
    // Coordinates of the tuple in the canonical basis of the smallest summand.
    IntMat c(n, n);
    RatMat s_rat = to_rational(s);
    for (int j = 0; j < n; ++j) {
        RatVec rhs(m.rows());
        for (int r = 0; r < m.rows(); ++r)
            rhs[r] = Rat(m.at(r, j));
        auto sol = solve_exact(s_rat, rhs);
        if (!sol)
            throw std::logic_error("gcd_tuple: saturation does not contain the tuple");
        for (int i = 0; i < n; ++i) {
            const Rat& v = (*sol)[i];
            if (v.get_den() != 1)
                throw std::logic_error("gcd_tuple: non-integral coordinates in saturation");
            if (v != 0)
                c.set(i, j, v.get_num());
        }
    }
    return abs(det(c));
}

Int gcd2(const VecList& vs)
{
    VecList proj;
    proj.reserve(vs.size());
    for (const auto& v : vs)
        proj.push_back(pr2(v));
    return gcd_tuple(proj);
}

Int gcd_tuple_cat(std::initializer_list<const VecList*> parts)
{
    VecList all;
    for (const VecList* p : parts)
        all.insert(all.end(), p->begin(), p->end());
    return gcd_tuple(all);
}

bool is_isotropic(const VecList& vs)
{
    for (size_t i = 0; i < vs.size(); ++i)
        for (size_t j = i + 1; j < vs.size(); ++j)
            if (form(vs[i], vs[j]) != 0)
                return false;
    return true;
}

VecList orthogonal_sublattice(int g, const VecList& constraints, const VecList& ambient_basis)
{
    const VecList& amb = ambient_basis.empty() ? standard_basis(g) : ambient_basis;
    IntMat p = pairing_rows(constraints, amb);
    IntMat k = kernel_int(p);
    VecList out;
    for (int c = 0; c < k.cols(); ++c) {
        IntVec coeffs(k.rows());
        for (int r = 0; r < k.rows(); ++r)
            coeffs[r] = k.at(r, c);
        out.push_back(from_combination(g, amb, coeffs));
    }
    return out;
}

std::optional<LatticeVector> solve_pairing(int g, const VecList& constraints, const IntVec& rhs,
                                           const VecList& ambient_basis)
{
    const VecList& amb = ambient_basis.empty() ? standard_basis(g) : ambient_basis;
    IntMat p = pairing_rows(constraints, amb);
    auto x = solve_int_system(p, rhs);
    if (!x)
        return std::nullopt;
    size_reduce(*x, kernel_int(p));
    return from_combination(g, amb, *x);
}

std::vector<std::pair<LatticeVector, LatticeVector>> symplectic_gram_schmidt(int g,
                                                                             const VecList& basis)
{
    std::vector<std::pair<LatticeVector, LatticeVector>> pairs;
    VecList current = basis;
    while (!current.empty()) {
        if (current.size() == 1)
            throw ConstructionError("symplectic_gram_schmidt: odd rank sublattice");
        LatticeVector e = current[0];
        auto f = solve_pairing(g, {e}, {Int(1)}, current);
        if (!f)
            throw ConstructionError("symplectic_gram_schmidt: form not unimodular on sublattice");
        pairs.emplace_back(e, *f);
        current = orthogonal_sublattice(g, {e, *f}, current);
    }
    return pairs;
}

bool in_span_int(const VecList& basis, const LatticeVector& v)
{
    if (basis.empty())
        return v.is_zero();
    IntMat m = coords_matrix(basis);
    IntVec b(v.coords());
    return solve_int_system(m, b).has_value();
}

bool in_span_rat(const VecList& basis, const LatticeVector& v)
{
    if (basis.empty())
        return v.is_zero();
    RatMat m = to_rational(coords_matrix(basis));
    RatVec b(v.dim());
    for (int i = 0; i < v.dim(); ++i)
        b[i] = Rat(v[i]);
    return solve_exact(m, b).has_value();
}

namespace {

// Inductive dual construction. Returns integral duals u_1..u_n inside the
// ambient lattice with <v_i, u_j> = delta_ij, the u_j spanning an isotropic
// summand, plus a basis of the orthogonal complement T of span(v) + span(u).
// Works whether or not the span of vs is isotropic.
PairingDual dual_in(int g, const VecList& ambient_basis, const VecList& vs, int depth)
{
    if (vs.empty())
        return {{}, ambient_basis};

    const LatticeVector& v1 = vs[0];
    auto u1 = solve_pairing(g, {v1}, {Int(1)}, ambient_basis);
    if (!u1)
        throw ConstructionError("dual stage " + std::to_string(depth) +
                                ": no u with <v1,u> = 1 (vector not unimodular in lattice)");
    // The induction needs gcd(u1, v1, ..., vn) = 1. For isotropic spans any
    // solution works; otherwise walk the kernel of <v1, .> until the side
    // condition holds.
    if (vs.size() > 1) {
        auto extends_tuple = [&](const LatticeVector& u) {
            VecList all = vs;
            all.push_back(u);
            return gcd_tuple(all) == 1;
        };
        if (!extends_tuple(*u1)) {
            VecList ker = orthogonal_sublattice(g, {v1}, ambient_basis);
            bool found = false;
            for (size_t i = 0; i < ker.size() && !found; ++i)
                for (const Int& s : {Int(1), Int(-1)})
                    if (extends_tuple(*u1 + ker[i] * s)) {
                        *u1 += ker[i] * s;
                        found = true;
                        break;
                    }
            for (size_t i = 0; i < ker.size() && !found; ++i)
                for (size_t j = i + 1; j < ker.size() && !found; ++j)
                    for (const Int& s : {Int(1), Int(-1)})
                        if (extends_tuple(*u1 + ker[i] + ker[j] * s)) {
                            *u1 += ker[i] + ker[j] * s;
                            found = true;
                        }
            if (!found)
                throw ConstructionError("dual stage " + std::to_string(depth) +
                                        ": no u1 with gcd(u1, vs) = 1 in reach");
        }
    }

    VecList h1 = orthogonal_sublattice(g, {v1, *u1}, ambient_basis);

    VecList tails;
    IntVec c(vs.size(), Int(0));  // c_i = <v_i, u1>
    for (size_t i = 1; i < vs.size(); ++i) {
        c[i] = form(vs[i], *u1);
        Int beta = form(v1, vs[i]);
        tails.push_back(vs[i] - v1 * c[i] - *u1 * beta);
    }

    PairingDual inner = dual_in(g, h1, tails, depth + 1);

    VecList duals;
    duals.push_back(*u1);  // corrected below
    for (auto& uj : inner.d_basis) {
        Int d = form(*u1, uj);
        duals.push_back(uj + v1 * d);
    }
    for (size_t j = 1; j < duals.size(); ++j)
        duals[0] -= duals[j] * c[j];

    return {std::move(duals), std::move(inner.t_basis)};
}

void check_dual_result(const VecList& vs, const PairingDual& pd)
{
    for (size_t i = 0; i < vs.size(); ++i)
        for (size_t j = 0; j < pd.d_basis.size(); ++j)
            if (form(vs[i], pd.d_basis[j]) != (i == j ? 1 : 0))
                throw std::logic_error("dual construction: pairing not delta");
    if (!is_isotropic(pd.d_basis))
        throw std::logic_error("dual construction: D not isotropic");
}

}  // namespace

PairingDual pairing_dual(const VecList& ambient_basis, const VecList& vs)
{
    if (vs.empty())
        throw PreconditionError("pairing_dual: empty tuple");
    int g = vs[0].genus();
    const VecList amb = ambient_basis.empty() ? standard_basis(g) : ambient_basis;
    PairingDual pd = dual_in(g, amb, vs, 0);
    check_dual_result(vs, pd);
    return pd;
}

void SplittingData::verify() const
{
    if (s_basis.size() != d_basis.size())
        throw ConstructionError("splitting: |S| != |D|");
    if (s_basis.empty() && t_basis.empty())
        throw ConstructionError("splitting: empty");
    int g = s_basis.empty() ? t_basis[0].genus() : s_basis[0].genus();
    for (size_t i = 0; i < s_basis.size(); ++i)
        for (size_t j = 0; j < d_basis.size(); ++j)
            if (form(s_basis[i], d_basis[j]) != (i == j ? 1 : 0))
                throw ConstructionError("splitting: <s_i, d_j> != delta at (" +
                                        std::to_string(i) + "," + std::to_string(j) + ")");
    if (!is_isotropic(s_basis))
        throw ConstructionError("splitting: S not isotropic");
    if (!is_isotropic(d_basis))
        throw ConstructionError("splitting: D not isotropic");
    for (const auto& t : t_basis)
        for (const auto& sd : {std::cref(s_basis), std::cref(d_basis)})
            for (const auto& v : sd.get())
                if (form(t, v) != 0)
                    throw ConstructionError("splitting: T not orthogonal to S+D");
    if (s_basis.size() * 2 + t_basis.size() != static_cast<size_t>(2 * g))
        throw ConstructionError("splitting: rank mismatch");
    VecList all = s_basis;
    all.insert(all.end(), d_basis.begin(), d_basis.end());
    all.insert(all.end(), t_basis.begin(), t_basis.end());
    if (abs(det(coords_matrix(all))) != 1)
        throw ConstructionError("splitting: concatenated basis not unimodular");
}

SplittingData dual_summand(const VecList& vs)
{
    if (vs.empty())
        throw PreconditionError("dual_summand: empty tuple");
    int g = vs[0].genus();
    if (static_cast<int>(vs.size()) > g)
        throw PreconditionError("dual_summand: n > g (n = " + std::to_string(vs.size()) +
                                ", g = " + std::to_string(g) + ")");
    Int gg = gcd_tuple(vs);
    if (gg != 1)
        throw PreconditionError("dual_summand: gcd = " + to_string(gg) + ", need 1");
    if (!is_isotropic(vs))
        throw PreconditionError("dual_summand: span not isotropic");
    PairingDual pd = pairing_dual({}, vs);
    SplittingData sd{vs, std::move(pd.d_basis), std::move(pd.t_basis)};
    sd.verify();
    return sd;
}

LatticeVector project_to_complement(const LatticeVector& x, const VecList& s_basis,
                                    const VecList& d_basis)
{
    const size_t n = s_basis.size();
    if (d_basis.size() != n)
        throw PreconditionError("project_to_complement: basis size mismatch");
    IntVec alpha(n), beta(n);
    for (size_t j = 0; j < n; ++j)
        alpha[j] = form(x, d_basis[j]);
    for (size_t i = 0; i < n; ++i) {
        beta[i] = form(s_basis[i], x);
        for (size_t k = 0; k < n; ++k)
            beta[i] -= alpha[k] * form(s_basis[i], s_basis[k]);
    }
    LatticeVector t = x;
    for (size_t i = 0; i < n; ++i) {
        t -= s_basis[i] * alpha[i];
        t -= d_basis[i] * beta[i];
    }
    return t;
}

namespace {

LatticeVector project_to_t(const SplittingData& base, const LatticeVector& x)
{
    return project_to_complement(x, base.s_basis, base.d_basis);
}

}  // namespace

SplittingData extend_dual(const SplittingData& base, const VecList& ws, ExtendMode mode)
{
    if (ws.empty())
        return base;
    int g = ws[0].genus();

    if (mode == ExtendMode::Enlarge) {
        Int gg = gcd_tuple_cat({&ws, &base.s_basis});
        if (gg != 1)
            throw PreconditionError("extend_dual(ii): gcd(ws, S) = " + to_string(gg));
        if (base.s_basis.size() + ws.size() > static_cast<size_t>(g))
            throw PreconditionError("extend_dual(ii): n + k > g");

        VecList tails;
        for (const auto& w : ws)
            tails.push_back(project_to_t(base, w));
        VecList sw = columns_to_vectors(g, saturate(coords_matrix(tails)));
        VecList w_block = sw;
        if (!sw.empty()) {
            PairingDual dw = dual_in(g, base.t_basis, sw, 0);
            w_block.insert(w_block.end(), dw.d_basis.begin(), dw.d_basis.end());
            size_t deficit = ws.size() - sw.size();
            if (deficit > 0) {
                auto pairs = symplectic_gram_schmidt(g, dw.t_basis);
                if (pairs.size() < deficit)
                    throw ConstructionError("extend_dual(ii): no room to pad W");
                for (size_t i = 0; i < deficit; ++i) {
                    w_block.push_back(pairs[i].first);
                    w_block.push_back(pairs[i].second);
                }
            }
        } else {
            throw ConstructionError("extend_dual(ii): ws projects to zero in T");
        }

        VecList ambient = base.s_basis;
        ambient.insert(ambient.end(), base.d_basis.begin(), base.d_basis.end());
        ambient.insert(ambient.end(), w_block.begin(), w_block.end());

        VecList s2 = base.s_basis;
        s2.insert(s2.end(), ws.begin(), ws.end());
        PairingDual pd = dual_in(g, ambient, s2, 0);
        check_dual_result(s2, pd);

        VecList sd2 = s2;
        sd2.insert(sd2.end(), pd.d_basis.begin(), pd.d_basis.end());
        SplittingData out{std::move(s2), std::move(pd.d_basis),
                          orthogonal_sublattice(g, sd2)};
        out.verify();
        // clause containment: S + D inside S2 + D2
        for (const auto& v : base.d_basis) {
            VecList span = out.s_basis;
            span.insert(span.end(), out.d_basis.begin(), out.d_basis.end());
            if (!in_span_int(span, v))
                throw ConstructionError("extend_dual(ii): containment S+D in S2+D2 fails");
        }
        return out;
    }

    // clause (iii): dual of ws inside T
    {
        Int gg = gcd_tuple_cat({&ws, &base.s_basis, &base.d_basis});
        if (gg != 1)
            throw PreconditionError("extend_dual(iii): gcd(ws, S, D) = " + to_string(gg));
        VecList tails;
        for (const auto& w : ws)
            tails.push_back(project_to_t(base, w));
        PairingDual pd = dual_in(g, base.t_basis, tails, 0);
        check_dual_result(ws, pd);  // <w_i, u_j> = <tail_i, u_j> since u_j in T
        VecList sd = ws;
        sd.insert(sd.end(), pd.d_basis.begin(), pd.d_basis.end());
        SplittingData out{ws, std::move(pd.d_basis), orthogonal_sublattice(g, sd)};
        out.verify();
        for (const auto& u : out.d_basis)
            if (!in_span_int(base.t_basis, u))
                throw ConstructionError("extend_dual(iii): D(ws) not inside T");
        return out;
    }
}

SplittingData extend_dual_nested(const SplittingData& outer, const SplittingData& inner,
                                 const VecList& ws)
{
    if (ws.empty())
        return inner;
    int g = ws[0].genus();
    Int gg = gcd_tuple_cat({&ws, &outer.s_basis, &outer.d_basis, &inner.s_basis});
    if (gg != 1)
        throw PreconditionError("extend_dual(iv): gcd(ws, S1, D1, S2) = " + to_string(gg));

    VecList v_t, w_t;
    for (const auto& v : inner.s_basis)
        v_t.push_back(project_to_t(outer, v));
    for (const auto& w : ws)
        w_t.push_back(project_to_t(outer, w));

    VecList inner_span = v_t;
    inner_span.insert(inner_span.end(), inner.d_basis.begin(), inner.d_basis.end());
    SplittingData base_in_t1{v_t, inner.d_basis,
                             orthogonal_sublattice(g, inner_span, outer.t_basis)};
    SplittingData ext = extend_dual(base_in_t1, w_t, ExtendMode::Enlarge);

    VecList s3 = inner.s_basis;
    s3.insert(s3.end(), ws.begin(), ws.end());
    VecList sd3 = s3;
    sd3.insert(sd3.end(), ext.d_basis.begin(), ext.d_basis.end());
    SplittingData out{std::move(s3), ext.d_basis, orthogonal_sublattice(g, sd3)};
    out.verify();
    for (const auto& u : out.d_basis)
        if (!in_span_int(outer.t_basis, u))
            throw ConstructionError("extend_dual(iv): D3 not inside T1");
    return out;
}

LatticeVector compensate(const VecList& delta, const Int& t)
{
    if (delta.empty())
        throw PreconditionError("compensate: empty simplex");
    int g = delta[0].genus();
    VecList proj;
    for (const auto& v : delta)
        proj.push_back(pr2(v));
    IntMat sat = saturate(coords_matrix(proj));
    if (sat.cols() < static_cast<int>(delta.size()))
        throw PreconditionError("compensate: gcd2(delta) = 0");
    VecList s_basis = columns_to_vectors(g, sat);

    PairingDual pd = dual_in(g, block_basis(g, 2), s_basis, 0);
    check_dual_result(s_basis, pd);

    LatticeVector shift = LatticeVector::basis_a(g, 1) + LatticeVector::basis_b(g, 1) * t;
    IntMat sys(static_cast<int>(delta.size()), static_cast<int>(pd.d_basis.size()));
    IntVec rhs(delta.size());
    for (size_t i = 0; i < delta.size(); ++i) {
        for (size_t j = 0; j < pd.d_basis.size(); ++j) {
            Int v = form(pd.d_basis[j], delta[i]);
            if (v != 0)
                sys.set(static_cast<int>(i), static_cast<int>(j), v);
        }
        rhs[i] = -form(shift, delta[i]);
    }
    auto sol = solve_int_system(sys, rhs);
    if (!sol)
        throw ConstructionError("compensate: no integral u in D(delta) for t = " + to_string(t));
    LatticeVector u = LatticeVector::zero(g);
    for (size_t j = 0; j < pd.d_basis.size(); ++j)
        if ((*sol)[j] != 0)
            u += pd.d_basis[j] * (*sol)[j];
    for (const auto& v : delta)
        if (form(shift + u, v) != 0)
            throw std::logic_error("compensate: postcondition violated");
    return u;
}

std::pair<Int, LatticeVector> divide_reduce(const LatticeVector& v, const LatticeVector& pivot,
                                            const LatticeVector& y_dual)
{
    Int rp = form(pivot, y_dual);
    if (rp == 0)
        throw PreconditionError("divide_reduce: pivot has rank 0");
    Int rv = form(v, y_dual);
    Int q = fdiv(rv, rp);
    Int r0 = rv - q * rp;
    Int q_alt = q + (rp > 0 ? 1 : -1);
    Int r_alt = rv - q_alt * rp;
    if (abs(r_alt) < abs(r0) || (abs(r_alt) == abs(r0) && q_alt < q))
        q = q_alt;
    return {q, v - pivot * q};
}

LatticeVector projection_move(const LatticeVector& h, const LatticeVector& x,
                              const LatticeVector& y)
{
    if (form(x, y) != 1)
        throw PreconditionError("projection_move: <x, y> != 1");
    if (form(h, x) != 0)
        throw PreconditionError("projection_move: h not orthogonal to x");
    return h - x * form(h, y);
}

IntMat form_matrix(int g)
{
    IntMat j(2 * g, 2 * g);
    for (int i = 0; i < g; ++i) {
        j.set(2 * i, 2 * i + 1, Int(1));
        j.set(2 * i + 1, 2 * i, Int(-1));
    }
    return j;
}

bool is_symplectic_matrix(int g, const IntMat& m)
{
    if (m.rows() != 2 * g || m.cols() != 2 * g)
        return false;
    IntMat j = form_matrix(g);
    return m.transposed() * j * m == j;
}

LatticeVector apply_matrix(const IntMat& m, const LatticeVector& v)
{
    if (m.cols() != v.dim())
        throw PreconditionError("apply_matrix: shape mismatch");
    return LatticeVector(v.genus(), m.apply(v.coords()));
}

IntMat random_symplectic(int g, std::uint64_t seed, int word_length)
{
    std::mt19937_64 rng(seed);
    IntMat m = IntMat::identity(2 * g);
    for (int step = 0; step < word_length; ++step) {
        LatticeVector t = LatticeVector::zero(g);
        do {
            for (int i = 0; i < 2 * g; ++i)
                t[i] = static_cast<long>(rng() % 5) - 2;
        } while (t.is_zero());
        // transvection x -> x + <x, t> t
        IntMat tv(2 * g, 2 * g);
        for (int c = 0; c < 2 * g; ++c) {
            LatticeVector e = LatticeVector::zero(g);
            e[c] = 1;
            LatticeVector img = e + t * form(e, t);
            for (int r = 0; r < 2 * g; ++r)
                if (img[r] != 0)
                    tv.set(r, c, img[r]);
        }
        m = tv * m;
    }
    return m;
}

}  // namespace spm
