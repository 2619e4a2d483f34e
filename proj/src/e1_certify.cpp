#include <algorithm>
#include <set>

#include "spmorse/e1.hpp"

namespace spm {

namespace {

using Key = std::pair<int, std::vector<int>>;

struct SummandBasis {
    std::vector<SparseVec> vectors;  // canonical summand-local coordinates
    std::vector<std::string> labels;
    RowSpan span;
};

}  // namespace

std::pair<BasedChainComplex, Matching> field_to_based(const E1Truncation& t,
                                                      const FieldConstruction& f)
{
    std::map<Key, SummandBasis> bases;
    // slots of every pair vector; -1 when a vector had to be dropped
    std::vector<std::pair<int, int>> pair_slots(f.pairs.size(), {-1, -1});

    auto add_vector = [&](const Key& key, const SparseVec& v, const std::string& label) -> int {
        SummandBasis& sb = bases[key];
        if (!sb.span.add(v))
            return -1;
        sb.vectors.push_back(v);
        sb.labels.push_back(label);
        return static_cast<int>(sb.vectors.size()) - 1;
    };

    for (size_t p = 0; p < f.pairs.size(); ++p) {
        const FieldPair& fp = f.pairs[p];
        pair_slots[p].first = add_vector({fp.degree, fp.low_tuple}, fp.low,
                                         "R[" + fp.lemma + "]");
        pair_slots[p].second = add_vector({fp.degree + 1, fp.high_tuple}, fp.high,
                                          "C[" + fp.lemma + "]");
    }
    // complete every summand with canonical units
    for (int degree = 0; degree < t.degree_count(); ++degree)
        for (const auto& s : t.summands[degree]) {
            SummandBasis& sb = bases[{degree, s.tuple}];
            for (int b = 0; b < s.dim && sb.span.rank() < s.dim; ++b)
                add_vector({degree, s.tuple}, SparseVec{{b, Rat(1)}}, "completion");
        }

    // global offsets in the new basis (summand order of the truncation)
    std::map<Key, int> new_offset;
    BasedChainComplex out;
    out.labels.resize(t.degree_count());
    out.diffs.resize(t.degree_count());
    for (int degree = 0; degree < t.degree_count(); ++degree) {
        int off = 0;
        for (const auto& s : t.summands[degree]) {
            SummandBasis& sb = bases[{degree, s.tuple}];
            new_offset[{degree, s.tuple}] = off;
            for (const auto& l : sb.labels)
                out.labels[degree].push_back(l);
            off += static_cast<int>(sb.vectors.size());
        }
    }

    out.diffs[0] = RatMat(0, out.dim(0));
    for (int degree = 1; degree < t.degree_count(); ++degree) {
        RatMat d(out.dim(degree - 1), out.dim(degree));
        // row-sparse transpose gives cheap column access
        RatMat dT = t.complex.diffs[degree].transposed();
        for (const auto& s : t.summands[degree]) {
            const SummandBasis& sb = bases.at({degree, s.tuple});
            for (size_t col = 0; col < sb.vectors.size(); ++col) {
                // canonical image of this basis vector under the differential
                std::map<int, Rat> image;  // global canonical row -> value
                for (const auto& [b, coeff] : sb.vectors[col]) {
                    const Rat cval = coeff;
                    dT.for_row(s.offset + b, [&](int r, const Rat& v) {
                        image[r] += cval * v;
                        if (image[r] == 0)
                            image.erase(r);
                    });
                }
                // express per target summand over its new basis
                for (const auto& face : t.summands[degree - 1]) {
                    SparseVec local;
                    for (auto it = image.lower_bound(face.offset);
                         it != image.end() && it->first < face.offset + face.dim; ++it)
                        local[it->first - face.offset] = it->second;
                    if (local.empty())
                        continue;
                    const SummandBasis& tb = bases.at({degree - 1, face.tuple});
                    auto coords = tb.span.express(local);
                    if (!coords)
                        throw std::logic_error("field_to_based: face image outside summand span");
                    for (const auto& [slot, v] : *coords)
                        d.set(new_offset.at({degree - 1, face.tuple}) + slot,
                              new_offset.at({degree, s.tuple}) + static_cast<int>(col), v);
                }
            }
        }
        out.diffs[degree] = std::move(d);
    }

    Matching m;
    for (size_t p = 0; p < f.pairs.size(); ++p) {
        const FieldPair& fp = f.pairs[p];
        if (pair_slots[p].first < 0 || pair_slots[p].second < 0)
            continue;  // dropped (dependent) vectors surface as validation issues
        m.pairs.push_back({fp.degree,
                           new_offset.at({fp.degree, fp.low_tuple}) + pair_slots[p].first,
                           new_offset.at({fp.degree + 1, fp.high_tuple}) + pair_slots[p].second});
    }
    return {std::move(out), std::move(m)};
}

Certificate certify(const E1Truncation& t, const FieldConstruction& f, int step_cap)
{
    Certificate cert;
    auto [based, matching] = field_to_based(t, f);
    if (matching.pairs.size() != f.pairs.size())
        cert.issues.push_back("some pair vectors were dependent and dropped");
    ValidationReport vr = validate_matching(based, matching);
    cert.matching_ok = vr.ok() && matching.pairs.size() == f.pairs.size();
    for (const auto& issue : vr.issues)
        cert.issues.push_back(issue);

    // gradient termination for every pair start, grouped by low summand
    // (located through the new-basis offset ranges)
    std::map<Key, std::pair<int, bool>> path_info;  // max_len, cycle
    if (cert.matching_ok) {
        // every summand is completed to its full dimension, so the new-basis
        // offsets coincide with the canonical ones
        std::map<int, std::vector<std::pair<int, Key>>> ranges;  // degree -> (offset, key)
        for (int degree = 0; degree < t.degree_count(); ++degree)
            for (const auto& s : t.summands[degree])
                ranges[degree].push_back({s.offset, {degree, s.tuple}});
        std::set<int> degrees;
        for (const MatchPair& mp : matching.pairs)
            degrees.insert(mp.degree);
        std::map<int, std::map<int, PathReport>> by_degree;
        for (int degree : degrees)
            by_degree[degree] = gradient_paths_degree(based, matching, degree, step_cap);
        for (const MatchPair& mp : matching.pairs) {
            const PathReport& rep = by_degree[mp.degree][mp.low_index];
            Key key{mp.degree, {}};
            const auto& degree_ranges = ranges[mp.degree];
            for (size_t r = 0; r < degree_ranges.size(); ++r) {
                int next = r + 1 < degree_ranges.size() ? degree_ranges[r + 1].first
                                                        : based.dim(mp.degree);
                if (mp.low_index >= degree_ranges[r].first && mp.low_index < next) {
                    key = degree_ranges[r].second;
                    break;
                }
            }
            auto& info = path_info[key];
            info.first = std::max(info.first, rep.max_len);
            info.second = info.second || rep.cycle;
            cert.max_path_len = std::max(cert.max_path_len, rep.max_len);
            cert.any_cycle = cert.any_cycle || rep.cycle;
            cert.cap_hit = cert.cap_hit || rep.cap_hit;
        }
    }

    bool all_certified_012 = true;
    for (int degree = 0; degree < t.degree_count(); ++degree)
        for (const auto& s : t.summands[degree]) {
            CertificateEntry e;
            e.degree = degree;
            e.tuple = s.tuple;
            auto it = f.status.find({degree, s.tuple});
            if (it != f.status.end()) {
                e.status = it->second.status;
                e.reason = it->second.reason;
                e.stage = it->second.stage;
            } else {
                e.status = degree >= 3 ? "certified" : "unconstructed";
            }
            auto pit = path_info.find({degree, s.tuple});
            if (pit != path_info.end()) {
                e.max_path_len = pit->second.first;
                e.cycle = pit->second.second;
            }
            if (degree <= 2 && e.status != "certified")
                all_certified_012 = false;
            cert.entries.push_back(std::move(e));
        }

    if (all_certified_012 && t.degree_count() >= 4 && cert.matching_ok && !cert.any_cycle) {
        cert.exactness_checked = true;
        bool morse_route = collapse_exactness(based, matching, 2);
        bool rank_route = exactness_at(based, 2);
        cert.exactness_value = rank_route;
        if (morse_route != rank_route)
            cert.issues.push_back("collapse certificate disagrees with the rank computation");
    }
    return cert;
}

}  // namespace spm
