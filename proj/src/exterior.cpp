#include "spmorse/exterior.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace spm {

RatVec to_rat_vec(const LatticeVector& v)
{
    RatVec out(v.dim());
    for (int i = 0; i < v.dim(); ++i)
        out[i] = Rat(v[i]);
    return out;
}

SubspaceBasis SubspaceBasis::from_vectors(int ambient, const std::vector<RatVec>& gens)
{
    RatMat m(static_cast<int>(gens.size()), ambient);
    for (int r = 0; r < m.rows(); ++r) {
        if (static_cast<int>(gens[r].size()) != ambient)
            throw std::invalid_argument("SubspaceBasis: generator length mismatch");
        for (int c = 0; c < ambient; ++c)
            if (gens[r][c] != 0)
                m.set(r, c, gens[r][c]);
    }
    std::vector<int> pivots = rref(m);
    SubspaceBasis out;
    out.ambient_ = ambient;
    out.pivots_ = pivots;
    out.rows_ = RatMat(static_cast<int>(pivots.size()), ambient);
    for (int r = 0; r < out.rows_.rows(); ++r)
        m.for_row(r, [&](int c, const Rat& v) { out.rows_.set(r, c, v); });
    return out;
}

SubspaceBasis SubspaceBasis::full(int ambient)
{
    std::vector<RatVec> gens(ambient, RatVec(ambient, Rat(0)));
    for (int i = 0; i < ambient; ++i)
        gens[i][i] = 1;
    return from_vectors(ambient, gens);
}

RatVec SubspaceBasis::row(int i) const
{
    RatVec out(ambient_, Rat(0));
    rows_.for_row(i, [&](int c, const Rat& v) { out[c] = v; });
    return out;
}

std::optional<RatVec> SubspaceBasis::coordinates(const RatVec& v) const
{
    if (static_cast<int>(v.size()) != ambient_)
        throw std::invalid_argument("coordinates: ambient dimension mismatch");
    // In RREF the candidate coordinates can be read off at the pivot columns.
    RatVec coords(dim());
    for (int i = 0; i < dim(); ++i)
        coords[i] = v[pivots_[i]];
    RatVec recon(ambient_, Rat(0));
    for (int i = 0; i < dim(); ++i)
        if (coords[i] != 0)
            rows_.for_row(i, [&](int c, const Rat& x) { recon[c] += coords[i] * x; });
    if (recon != v)
        return std::nullopt;
    return coords;
}

bool SubspaceBasis::contains(const SubspaceBasis& other) const
{
    for (int i = 0; i < other.dim(); ++i)
        if (!contains_vector(other.row(i)))
            return false;
    return true;
}

std::string SubspaceBasis::digest() const
{
    // FNV-1a over the canonical row entries; carriers are RREF so equal
    // subspaces hash equal.
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](const std::string& s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ULL;
        }
    };
    mix(std::to_string(ambient_));
    for (int r = 0; r < rows_.rows(); ++r)
        rows_.for_row(r, [&](int c, const Rat& v) {
            mix(std::to_string(r) + ":" + std::to_string(c) + ":" + to_string(v));
        });
    std::ostringstream out;
    out << std::hex << h;
    return out.str();
}

SubspaceBasis orth_complement(const VecList& vs, int g)
{
    // <h, v> = 0 is one linear condition per v; assemble the functional rows.
    RatMat cond(static_cast<int>(vs.size()), 2 * g);
    for (int r = 0; r < cond.rows(); ++r) {
        const LatticeVector& v = vs[r];
        if (v.genus() != g)
            throw PreconditionError("orth_complement: space mismatch");
        for (int i = 0; i < g; ++i) {
            // <h, v> = sum_i h_{a_i} v_{b_i} - h_{b_i} v_{a_i}
            if (v[2 * i + 1] != 0)
                cond.set(r, 2 * i, Rat(v[2 * i + 1]));
            if (v[2 * i] != 0)
                cond.set(r, 2 * i + 1, Rat(-v[2 * i]));
        }
    }
    RatMat k = rational_kernel(cond);
    std::vector<RatVec> gens;
    for (int c = 0; c < k.cols(); ++c) {
        RatVec v(2 * g, Rat(0));
        for (int r = 0; r < 2 * g; ++r)
            v[r] = k.at(r, c);
        gens.push_back(std::move(v));
    }
    return SubspaceBasis::from_vectors(2 * g, gens);
}

std::vector<std::array<int, 3>> wedge3_basis(const SubspaceBasis& s)
{
    return Wedge3Index(s.dim()).all();
}

Wedge3Index::Wedge3Index(int d) : dim(d)
{
    count = d >= 3 ? d * (d - 1) * (d - 2) / 6 : 0;
}

int Wedge3Index::rank(int i, int j, int k) const
{
    auto c2 = [](long n) { return n >= 2 ? n * (n - 1) / 2 : 0L; };
    auto c3 = [](long n) { return n >= 3 ? n * (n - 1) * (n - 2) / 6 : 0L; };
    long r = c3(dim) - c3(dim - i) + c2(dim - i - 1) - c2(dim - j) + (k - j - 1);
    return static_cast<int>(r);
}

std::array<int, 3> Wedge3Index::unrank(int r) const
{
    for (int i = 0; i < dim - 2; ++i)
        for (int j = i + 1; j < dim - 1; ++j) {
            int base = rank(i, j, j + 1);
            if (r >= base && r < base + dim - 1 - j)
                return {i, j, j + 1 + (r - base)};
        }
    throw std::out_of_range("Wedge3Index::unrank");
}

std::vector<std::array<int, 3>> Wedge3Index::all() const
{
    std::vector<std::array<int, 3>> out;
    out.reserve(count);
    for (int i = 0; i < dim; ++i)
        for (int j = i + 1; j < dim; ++j)
            for (int k = j + 1; k < dim; ++k)
                out.push_back({i, j, k});
    return out;
}

Wedge3Element& Wedge3Element::operator+=(const Wedge3Element& o)
{
    if (!(*carrier == *o.carrier))
        throw PreconditionError("wedge addition: carrier mismatch");
    sparse_axpy(coords, Rat(1), o.coords);
    return *this;
}

Wedge3Element Wedge3Element::operator*(const Rat& s) const
{
    return {carrier, sparse_scaled(coords, s)};
}

bool Wedge3Element::operator==(const Wedge3Element& o) const
{
    return *carrier == *o.carrier && coords == o.coords;
}

namespace {

// Triple-coordinate expansion of x ^ y ^ z for coordinate vectors over a
// common basis of dimension dim.
SparseVec wedge_coords(int dim, const RatVec& x, const RatVec& y, const RatVec& z)
{
    std::vector<int> support;
    for (int i = 0; i < dim; ++i)
        if (x[i] != 0 || y[i] != 0 || z[i] != 0)
            support.push_back(i);
    Wedge3Index idx(dim);
    SparseVec out;
    const int s = static_cast<int>(support.size());
    for (int a = 0; a < s; ++a)
        for (int b = a + 1; b < s; ++b)
            for (int c = b + 1; c < s; ++c) {
                int p = support[a], q = support[b], r = support[c];
                Rat d = x[p] * (y[q] * z[r] - y[r] * z[q]) - x[q] * (y[p] * z[r] - y[r] * z[p]) +
                        x[r] * (y[p] * z[q] - y[q] * z[p]);
                if (d != 0)
                    out[idx.rank(p, q, r)] = d;
            }
    return out;
}

}  // namespace

Wedge3Element wedge(const SubspacePtr& carrier, const RatVec& u, const RatVec& v, const RatVec& w)
{
    auto cu = carrier->coordinates(u);
    auto cv = carrier->coordinates(v);
    auto cw = carrier->coordinates(w);
    if (!cu || !cv || !cw)
        throw PreconditionError("wedge: vector outside carrier");
    return {carrier, wedge_coords(carrier->dim(), *cu, *cv, *cw)};
}

Wedge3Element wedge(const SubspacePtr& carrier, const LatticeVector& u, const LatticeVector& v,
                    const LatticeVector& w)
{
    return wedge(carrier, to_rat_vec(u), to_rat_vec(v), to_rat_vec(w));
}

Wedge3Element rewrite(const Wedge3Element& e, const SubspacePtr& target)
{
    if (*e.carrier == *target)
        return {target, e.coords};
    const SubspaceBasis& src = *e.carrier;
    if (src.ambient() != target->ambient())
        throw PreconditionError("rewrite: ambient mismatch");
    std::vector<RatVec> m(src.dim());
    for (int i = 0; i < src.dim(); ++i) {
        auto c = target->coordinates(src.row(i));
        if (!c)
            throw PreconditionError("rewrite: carrier not contained in target");
        m[i] = std::move(*c);
    }
    Wedge3Index src_idx(src.dim());
    SparseVec out;
    for (const auto& [r, coeff] : e.coords) {
        auto t = src_idx.unrank(r);
        sparse_axpy(out, coeff, wedge_coords(target->dim(), m[t[0]], m[t[1]], m[t[2]]));
    }
    return {target, std::move(out)};
}

std::vector<Wedge3Element> materialize(const std::vector<WedgeTriple>& triples,
                                       const SubspacePtr& carrier)
{
    std::vector<Wedge3Element> out;
    out.reserve(triples.size());
    for (const auto& t : triples)
        out.push_back(wedge(carrier, t.v0, t.v1, t.v2));
    return out;
}

int Decomposition::total_dim() const
{
    int n = 0;
    for (const auto& s : summands)
        n += static_cast<int>(s.size());
    return n;
}

namespace {

void check_decompose_inputs(const VecList& w, const std::array<LatticeVector, 4>& ws,
                            const std::array<LatticeVector, 4>& us, const VecList& bi)
{
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            Int p = form(ws[i], us[j]);
            if (p != (i == j ? 1 : 0))
                throw PreconditionError("decompose: <w_" + std::to_string(i + 1) + ", u_" +
                                        std::to_string(j + 1) + "> = " + to_string(p));
        }
    for (const auto& x : w) {
        for (int j = 0; j < 4; ++j) {
            if (form(x, us[j]) != 0)
                throw PreconditionError("decompose: u_" + std::to_string(j + 1) +
                                        " not orthogonal to vertex " + x.str());
            if (form(x, ws[j]) != 0)
                throw PreconditionError("decompose: w_" + std::to_string(j + 1) +
                                        " not orthogonal to vertex " + x.str());
        }
    }
    for (const auto& b : bi)
        for (int j = 0; j < 4; ++j)
            if (form(b, us[j]) != 0)
                throw PreconditionError("decompose: u_" + std::to_string(j + 1) +
                                        " not orthogonal to b^i");
}

VecList with_extra(const VecList& w, const VecList& bi, std::initializer_list<LatticeVector> more)
{
    VecList out = w;
    out.insert(out.end(), bi.begin(), bi.end());
    out.insert(out.end(), more.begin(), more.end());
    return out;
}

// Rows of sub that greedily extend seeds to a basis of sub.
std::vector<RatVec> complement_rows(const SubspaceBasis& sub, const std::vector<RatVec>& seeds)
{
    RowSpan span;
    for (const auto& s : seeds) {
        SparseVec v;
        for (size_t i = 0; i < s.size(); ++i)
            if (s[i] != 0)
                v[static_cast<int>(i)] = s[i];
        if (!span.add(v))
            throw std::logic_error("complement_rows: dependent seeds");
    }
    std::vector<RatVec> out;
    for (int r = 0; r < sub.dim(); ++r) {
        RatVec row = sub.row(r);
        SparseVec v;
        for (size_t i = 0; i < row.size(); ++i)
            if (row[i] != 0)
                v[static_cast<int>(i)] = row[i];
        if (span.add(v))
            out.push_back(std::move(row));
    }
    return out;
}

std::array<std::vector<WedgeTriple>, 4> build_pieces(const VecList& w,
                                                     const std::array<LatticeVector, 4>& ws,
                                                     const std::array<LatticeVector, 4>& us,
                                                     const VecList& bi, int g)
{
    std::array<std::vector<WedgeTriple>, 4> pieces;
    RatVec u1 = to_rat_vec(us[0]), u2 = to_rat_vec(us[1]), u3 = to_rat_vec(us[2]);

    SubspaceBasis v1 = orth_complement(with_extra(w, bi, {ws[0]}), g);
    for (int i = 0; i < v1.dim(); ++i)
        for (int j = i + 1; j < v1.dim(); ++j)
            for (int k = j + 1; k < v1.dim(); ++k)
                pieces[0].push_back({v1.row(i), v1.row(j), v1.row(k)});

    SubspaceBasis v2 = orth_complement(with_extra(w, bi, {ws[1]}), g);
    auto c2 = complement_rows(v2, {u1});
    for (size_t i = 0; i < c2.size(); ++i)
        for (size_t j = i + 1; j < c2.size(); ++j)
            pieces[1].push_back({u1, c2[i], c2[j]});

    SubspaceBasis v3 = orth_complement(with_extra(w, bi, {ws[2]}), g);
    auto c3 = complement_rows(v3, {u1, u2});
    for (const auto& c : c3)
        pieces[2].push_back({u1, u2, c});

    pieces[3].push_back({u1, u2, u3});
    return pieces;
}

}  // namespace

Decomposition decompose(const VecList& w, const std::array<LatticeVector, 4>& ws,
                        const std::array<LatticeVector, 4>& us, const VecList& bi)
{
    check_decompose_inputs(w, ws, us, bi);
    int g = ws[0].genus();

    Decomposition out;
    out.big = std::make_shared<SubspaceBasis>(orth_complement(with_extra(w, bi, {}), g));
    out.pieces = build_pieces(w, ws, us, bi, g);
    for (int j = 0; j < 4; ++j)
        out.summands[j] = materialize(out.pieces[j], out.big);

    // Direct-sum certificate by exact rank.
    Wedge3Index idx(out.big->dim());
    if (out.total_dim() != idx.count)
        throw std::logic_error("decompose: summand dimensions sum to " +
                               std::to_string(out.total_dim()) + ", expected " +
                               std::to_string(idx.count));
    RowSpan span;
    for (const auto& summand : out.summands)
        for (const auto& e : summand)
            if (!span.add(e.coords))
                throw std::logic_error("decompose: summands not independent");
    return out;
}

RestDecomposition decompose_rest(const VecList& w, const std::array<LatticeVector, 4>& ws,
                                 const std::array<LatticeVector, 4>& us, const VecList& bi)
{
    check_decompose_inputs(w, ws, us, bi);
    int g = ws[0].genus();
    auto pieces = build_pieces(w, ws, us, bi, g);
    RatVec u1 = to_rat_vec(us[0]), u2 = to_rat_vec(us[1]);

    RestDecomposition out;
    for (int j = 1; j < 4; ++j) {
        // Lambda^3 <w, w_1, w_j>^perp
        SubspaceBasis a = orth_complement(with_extra(w, bi, {ws[0], ws[j]}), g);
        for (int p = 0; p < a.dim(); ++p)
            for (int q = p + 1; q < a.dim(); ++q)
                for (int r = q + 1; r < a.dim(); ++r)
                    out.parts[j][0].push_back({a.row(p), a.row(q), a.row(r)});
        if (j >= 2) {
            // u1 ^ Lambda^2 <w, w_2, w_j>^perp
            SubspaceBasis b = orth_complement(with_extra(w, bi, {ws[1], ws[j]}), g);
            auto cb = complement_rows(b, {u1});
            for (size_t p = 0; p < cb.size(); ++p)
                for (size_t q = p + 1; q < cb.size(); ++q)
                    out.parts[j][1].push_back({u1, cb[p], cb[q]});
        }
        if (j >= 3) {
            // u1 ^ u2 ^ <w, w_3, w_j>^perp
            SubspaceBasis c = orth_complement(with_extra(w, bi, {ws[2], ws[j]}), g);
            auto cc = complement_rows(c, {u1, u2});
            for (const auto& v : cc)
                out.parts[j][2].push_back({u1, u2, v});
        }

        // C(w_j) (+) R(w_j) must be exactly Lambda^3 <w, w_j, b^i>^perp.
        auto vj = std::make_shared<SubspaceBasis>(
            orth_complement(with_extra(w, bi, {ws[j]}), g));
        RowSpan span;
        int count = 0;
        for (const auto& e : materialize(pieces[j], vj)) {
            if (!span.add(e.coords))
                throw std::logic_error("decompose_rest: C(w_j) degenerate");
            ++count;
        }
        for (const auto& e : materialize(out.rest_of(j), vj)) {
            if (!span.add(e.coords))
                throw std::logic_error("decompose_rest: C and R overlap at j = " +
                                       std::to_string(j + 1));
            ++count;
        }
        if (count != Wedge3Index(vj->dim()).count)
            throw std::logic_error("decompose_rest: C + R does not fill the pair summand");
    }
    return out;
}

}  // namespace spm
