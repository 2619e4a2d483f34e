#include "spmorse/e1.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace spm {

VecList E1Config::bi() const
{
    if (i == 1)
        return {};
    return {LatticeVector::basis_b(genus, 1)};
}

SubspacePtr e1_carrier(const E1Config& cfg, const Simplex& w)
{
    VecList constraints = w;
    VecList extra = cfg.bi();
    constraints.insert(constraints.end(), extra.begin(), extra.end());
    return std::make_shared<SubspaceBasis>(orth_complement(constraints, cfg.genus));
}

bool E1Element::is_zero() const
{
    for (const auto& [w, v] : parts)
        if (!v.is_zero())
            return false;
    return true;
}

void E1Element::add(const Simplex& w, const Wedge3Element& v, const Rat& scale)
{
    if (v.is_zero() || scale == 0)
        return;
    auto it = parts.find(w);
    if (it == parts.end()) {
        parts.emplace(w, v * scale);
    } else {
        it->second += v * scale;
        if (it->second.is_zero())
            parts.erase(it);
    }
}

E1Element e1_d(const E1Element& e)
{
    E1Element out;
    out.cfg = e.cfg;
    for (const auto& [w, v] : e.parts) {
        for (size_t j = 0; j < w.size(); ++j) {
            Simplex face;
            for (size_t idx = 0; idx < w.size(); ++idx)
                if (idx != j)
                    face.push_back(w[idx]);
            SubspacePtr target = e1_carrier(e.cfg, face);
            out.add(face, rewrite(v, target), Rat(j % 2 == 0 ? 1 : -1));
        }
    }
    return out;
}

E1Element e1_act(const E1Config& cfg, const IntMat& m, const E1Element& e)
{
    if (!is_symplectic_matrix(cfg.genus, m))
        throw PreconditionError("e1_act: matrix does not preserve the form");
    if (cfg.i == 2) {
        LatticeVector b1 = LatticeVector::basis_b(cfg.genus, 1);
        if (!(apply_matrix(m, b1) == b1))
            throw PreconditionError("e1_act: matrix does not stabilize b_1 (i = 2)");
    }
    E1Element out;
    out.cfg = cfg;
    for (const auto& [w, v] : e.parts) {
        Simplex img;
        for (const auto& vert : w)
            img.push_back(apply_matrix(m, vert));
        SubspacePtr target = e1_carrier(cfg, img);
        // push the coefficient through Lambda^3 of m restricted to the carrier
        RatMat mm = to_rational(m);
        std::vector<RatVec> rows;
        for (int r = 0; r < v.carrier->dim(); ++r)
            rows.push_back(mm.apply(v.carrier->row(r)));
        Wedge3Index idx(v.carrier->dim());
        Wedge3Element mapped{target, {}};
        for (const auto& [rank, coeff] : v.coords) {
            auto t3 = idx.unrank(rank);
            Wedge3Element piece = wedge(target, rows[t3[0]], rows[t3[1]], rows[t3[2]]);
            sparse_axpy(mapped.coords, coeff, piece.coords);
        }
        out.add(img, mapped);
    }
    return out;
}

bool e1_equal(const E1Element& a, const E1Element& b)
{
    E1Element diff = a;
    for (const auto& [w, v] : b.parts)
        diff.add(w, v, Rat(-1));
    return diff.is_zero();
}

FiniteComplex construction_closure(const E1Config& cfg, const VecList& extra_vertices,
                                   bool with_deg2)
{
    const int g = cfg.genus;
    std::set<LatticeVector> verts;
    for (int j = 1; j <= cfg.n_dist; ++j)
        verts.insert(seed_vertex(g, cfg.i, j));

    std::vector<LatticeVector> work(extra_vertices.begin(), extra_vertices.end());
    std::map<LatticeVector, Simplex> stars;
    std::set<LatticeVector> seeds4;
    for (int j = 1; j <= 4; ++j)
        seeds4.insert(seed_vertex(g, cfg.i, j));

    while (!work.empty()) {
        LatticeVector x = work.back();
        work.pop_back();
        if (verts.count(x) && stars.count(x))
            continue;
        verts.insert(x);
        if (seeds4.count(x))
            continue;
        int k = filtration_level(x, cfg.i, 4);
        if (k < 0)
            throw PreconditionError("construction_closure: vertex outside the complex: " +
                                    x.str());
        Simplex star = assign_wstar({x}, cfg.i, k, cfg.n_dist);
        stars.emplace(x, star);
        for (const auto& v : star)
            if (!verts.count(v))
                work.push_back(v);
    }

    FiniteComplex fc;
    fc.g = g;
    fc.i = cfg.i;
    fc.vertices.assign(verts.begin(), verts.end());
    std::sort(fc.vertices.begin(), fc.vertices.end());

    auto index_of = [&](const LatticeVector& v) {
        return static_cast<int>(std::lower_bound(fc.vertices.begin(), fc.vertices.end(), v) -
                                fc.vertices.begin());
    };
    auto add_closed = [&](std::vector<int> tuple) {
        std::sort(tuple.begin(), tuple.end());
        tuple.erase(std::unique(tuple.begin(), tuple.end()), tuple.end());
        std::function<void(const std::vector<int>&)> rec = [&](const std::vector<int>& t) {
            if (t.empty() || !fc.simplices.insert(t).second)
                return;
            for (const auto& face : proper_faces(t))
                rec(face);
        };
        rec(tuple);
    };

    for (size_t idx = 0; idx < fc.vertices.size(); ++idx)
        fc.simplices.insert({static_cast<int>(idx)});

    // distinguished pairs (and triples for the degree-2 pass)
    auto base_spec = cfg.i == 1 ? ComplexSpec::lambda(g) : ComplexSpec::lambda_a1(g);
    std::vector<LatticeVector> seeds;
    for (int j = 1; j <= cfg.n_dist; ++j)
        seeds.push_back(seed_vertex(g, cfg.i, j));
    for (size_t m = 0; m < seeds.size(); ++m)
        for (size_t j = m + 1; j < seeds.size(); ++j) {
            if (is_simplex(base_spec, {seeds[m], seeds[j]}).ok)
                add_closed({index_of(seeds[m]), index_of(seeds[j])});
            if (with_deg2)
                for (size_t l = j + 1; l < seeds.size(); ++l)
                    if (is_simplex(base_spec, {seeds[m], seeds[j], seeds[l]}).ok)
                        add_closed({index_of(seeds[m]), index_of(seeds[j]), index_of(seeds[l])});
        }

    // star pairs {x, x_j} and the star-rest triples {x, x_m, x_j}
    for (const auto& [x, star] : stars) {
        for (const auto& v : star)
            add_closed({index_of(x), index_of(v)});
        if (with_deg2)
            for (size_t m = 0; m < star.size() && m < 4; ++m)
                for (size_t j = m + 1; j < star.size() && j < 4; ++j)
                    add_closed({index_of(x), index_of(star[m]), index_of(star[j])});
    }
    return fc;
}

const E1Truncation::Summand* E1Truncation::find_summand(int degree,
                                                        const std::vector<int>& tuple) const
{
    if (degree < 0 || degree >= degree_count())
        return nullptr;
    for (const auto& s : summands[degree])
        if (s.tuple == tuple)
            return &s;
    return nullptr;
}

E1Truncation build_e1(const E1Config& cfg, const FiniteComplex& truncation, int max_degree)
{
    if (!truncation.closed_under_faces())
        throw PreconditionError("build_e1: truncation not closed under faces");

    E1Truncation out;
    out.cfg = cfg;
    out.truncation = truncation;
    out.summands.resize(max_degree + 1);
    out.complex.labels.resize(max_degree + 1);
    out.complex.diffs.resize(max_degree + 1);

    auto tuple_label = [&](const std::vector<int>& tuple) {
        std::string s = "(";
        for (size_t i = 0; i < tuple.size(); ++i)
            s += (i ? "," : "") + std::to_string(tuple[i]);
        return s + ")";
    };

    for (int p = 0; p <= max_degree; ++p) {
        std::vector<std::vector<int>> tuples =
            p == 0 ? std::vector<std::vector<int>>{{}} : truncation.simplices_of_dim(p - 1);
        int offset = 0;
        for (const auto& tuple : tuples) {
            E1Truncation::Summand s;
            s.tuple = tuple;
            s.carrier = e1_carrier(cfg, truncation.realize(tuple));
            s.offset = offset;
            s.dim = Wedge3Index(s.carrier->dim()).count;
            offset += s.dim;
            for (int b = 0; b < s.dim; ++b)
                out.complex.labels[p].push_back(tuple_label(tuple) + "#" + std::to_string(b));
            out.summands[p].push_back(std::move(s));
        }
    }

    out.complex.diffs[0] = RatMat(0, out.complex.dim(0));
    for (int p = 1; p <= max_degree; ++p) {
        RatMat d(out.complex.dim(p - 1), out.complex.dim(p));
        for (const auto& s : out.summands[p]) {
            Wedge3Index idx(s.carrier->dim());
            for (size_t j = 0; j < s.tuple.size(); ++j) {
                std::vector<int> face = s.tuple;
                face.erase(face.begin() + static_cast<long>(j));
                const E1Truncation::Summand* target = out.find_summand(p - 1, face);
                if (!target)
                    throw PreconditionError("build_e1: face summand missing");
                Rat sign(j % 2 == 0 ? 1 : -1);
                for (int b = 0; b < s.dim; ++b) {
                    auto t3 = idx.unrank(b);
                    Wedge3Element unit{s.carrier, SparseVec{{b, Rat(1)}}};
                    Wedge3Element img = rewrite(unit, target->carrier);
                    for (const auto& [r, c] : img.coords)
                        d.set(target->offset + r, s.offset + b,
                              d.at(target->offset + r, s.offset + b) + sign * c);
                }
            }
        }
        out.complex.diffs[p] = std::move(d);
    }
    out.complex.check_d_squared();
    return out;
}

}  // namespace spm
