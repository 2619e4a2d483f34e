#include "spmorse/json_io.hpp"

#include <cstdio>
#include <fstream>

namespace spm {

namespace {

template <typename T>
Json mat_to_json(const BasicMat<T>& m)
{
    Json entries = Json::array();
    for (int r = 0; r < m.rows(); ++r)
        m.for_row(r, [&](int c, const T& v) {
            entries.push_back(Json::array({r, c, to_string(v)}));
        });
    return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
}

}  // namespace

Json to_json(const IntMat& m) { return mat_to_json(m); }

IntMat int_mat_from_json(const Json& j)
{
    IntMat m(j.at("rows").get<int>(), j.at("cols").get<int>());
    for (const auto& e : j.at("entries"))
        m.set(e.at(0).get<int>(), e.at(1).get<int>(), int_from_string(e.at(2).get<std::string>()));
    return m;
}

Json to_json(const RatMat& m) { return mat_to_json(m); }

RatMat rat_mat_from_json(const Json& j)
{
    RatMat m(j.at("rows").get<int>(), j.at("cols").get<int>());
    for (const auto& e : j.at("entries"))
        m.set(e.at(0).get<int>(), e.at(1).get<int>(), rat_from_string(e.at(2).get<std::string>()));
    return m;
}

Json to_json(const LatticeVector& v)
{
    Json coords = Json::array();
    for (int i = 0; i < v.dim(); ++i)
        coords.push_back(to_string(v[i]));
    return Json{{"g", v.genus()}, {"coords", coords}};
}

LatticeVector lattice_vector_from_json(const Json& j)
{
    int g = j.at("g").get<int>();
    IntVec coords;
    for (const auto& c : j.at("coords"))
        coords.push_back(int_from_string(c.get<std::string>()));
    return LatticeVector(g, std::move(coords));
}

Json to_json(const VecList& vs)
{
    Json out = Json::array();
    for (const auto& v : vs)
        out.push_back(to_json(v));
    return out;
}

VecList vec_list_from_json(const Json& j)
{
    VecList out;
    for (const auto& v : j)
        out.push_back(lattice_vector_from_json(v));
    return out;
}

std::string digest_of(const Json& j)
{
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : j.dump()) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

Json to_json(const SplittingData& s)
{
    Json out{{"s_basis", to_json(s.s_basis)},
             {"d_basis", to_json(s.d_basis)},
             {"t_basis", to_json(s.t_basis)}};
    out["digest"] = digest_of(out);
    return out;
}

SplittingData splitting_from_json(const Json& j)
{
    return {vec_list_from_json(j.at("s_basis")), vec_list_from_json(j.at("d_basis")),
            vec_list_from_json(j.at("t_basis"))};
}

namespace {

const std::map<std::string, Family>& family_names()
{
    static const std::map<std::string, Family> names{
        {"L", Family::L},           {"L_a1", Family::La1},
        {"L_ordered", Family::LOrdered}, {"filtration", Family::Filtration},
        {"good_gcd", Family::GoodGcd},   {"b1_rank", Family::B1RankT},
        {"M", Family::MComplex},    {"N", Family::NComplex}};
    return names;
}

std::string family_name(Family f)
{
    for (const auto& [name, fam] : family_names())
        if (fam == f)
            return name;
    return "?";
}

}  // namespace

Json to_json(const ComplexSpec& spec)
{
    Json out{{"tag", family_name(spec.family)}, {"g", spec.g}, {"i", spec.i},
             {"level", spec.level == level_infinity ? Json("inf") : Json(spec.level)},
             {"n_dist", spec.n_dist}};
    if (!spec.delta.empty())
        out["delta"] = to_json(spec.delta);
    if (!spec.delta2.empty())
        out["delta2"] = to_json(spec.delta2);
    if (!spec.delta3.empty())
        out["delta3"] = to_json(spec.delta3);
    if (!spec.dual1.empty())
        out["dual1"] = to_json(spec.dual1);
    if (!spec.dual2.empty())
        out["dual2"] = to_json(spec.dual2);
    if (spec.t)
        out["t"] = to_string(*spec.t);
    if (!spec.vertex_subspace.empty())
        out["vertex_subspace"] = to_json(spec.vertex_subspace);
    if (!spec.orth_constraints.empty())
        out["orth_constraints"] = to_json(spec.orth_constraints);
    return out;
}

ComplexSpec complex_spec_from_json(const Json& j)
{
    ComplexSpec spec;
    auto it = family_names().find(j.at("tag").get<std::string>());
    if (it == family_names().end())
        throw PreconditionError("unknown complex tag: " + j.at("tag").get<std::string>());
    spec.family = it->second;
    spec.g = j.at("g").get<int>();
    spec.i = j.value("i", 1);
    if (j.contains("level"))
        spec.level = j.at("level").is_string() ? level_infinity : j.at("level").get<int>();
    spec.n_dist = j.value("n_dist", 4);
    if (j.contains("delta"))
        spec.delta = vec_list_from_json(j.at("delta"));
    if (j.contains("delta2"))
        spec.delta2 = vec_list_from_json(j.at("delta2"));
    if (j.contains("delta3"))
        spec.delta3 = vec_list_from_json(j.at("delta3"));
    if (j.contains("dual1"))
        spec.dual1 = vec_list_from_json(j.at("dual1"));
    if (j.contains("dual2"))
        spec.dual2 = vec_list_from_json(j.at("dual2"));
    if (j.contains("t"))
        spec.t = int_from_string(j.at("t").get<std::string>());
    if (j.contains("vertex_subspace"))
        spec.vertex_subspace = vec_list_from_json(j.at("vertex_subspace"));
    if (j.contains("orth_constraints"))
        spec.orth_constraints = vec_list_from_json(j.at("orth_constraints"));
    return spec;
}

Json to_json(const FiniteComplex& fc)
{
    Json simplices = Json::array();
    for (const auto& t : fc.simplices)
        simplices.push_back(t);
    return Json{{"g", fc.g},
                {"i", fc.i},
                {"box", fc.box},
                {"vertices", to_json(fc.vertices)},
                {"simplices", simplices},
                {"complete", fc.complete}};
}

FiniteComplex finite_complex_from_json(const Json& j)
{
    FiniteComplex fc;
    fc.g = j.at("g").get<int>();
    fc.i = j.value("i", 1);
    fc.box = j.value("box", 0);
    fc.vertices = vec_list_from_json(j.at("vertices"));
    for (const auto& t : j.at("simplices"))
        fc.simplices.insert(t.get<std::vector<int>>());
    fc.complete = j.value("complete", true);
    return fc;
}

Json to_json(const Wedge3Element& e)
{
    Json coords = Json::object();
    for (const auto& [rank, v] : e.coords)
        coords[std::to_string(rank)] = to_string(v);
    return Json{{"carrier_digest", e.carrier->digest()}, {"coords", coords}};
}

Json to_json(const BasedChainComplex& c)
{
    Json labels = Json::array();
    for (const auto& degree : c.labels)
        labels.push_back(degree);
    Json diffs = Json::array();
    for (const auto& d : c.diffs)
        diffs.push_back(to_json(d));
    return Json{{"labels", labels}, {"differentials", diffs}};
}

BasedChainComplex based_complex_from_json(const Json& j)
{
    BasedChainComplex c;
    for (const auto& degree : j.at("labels"))
        c.labels.push_back(degree.get<std::vector<std::string>>());
    for (const auto& d : j.at("differentials"))
        c.diffs.push_back(rat_mat_from_json(d));
    return c;
}

Json to_json(const Matching& m)
{
    Json pairs = Json::array();
    for (const auto& p : m.pairs)
        pairs.push_back(Json::array({p.degree, p.low_index, p.high_index}));
    return Json{{"pairs", pairs}};
}

Matching matching_from_json(const Json& j)
{
    Matching m;
    for (const auto& p : j.at("pairs"))
        m.pairs.push_back({p.at(0).get<int>(), p.at(1).get<int>(), p.at(2).get<int>()});
    return m;
}

Json to_json(const E1Config& cfg)
{
    return Json{{"i", cfg.i}, {"g", cfg.genus}, {"n_dist", cfg.n_dist}};
}

E1Config e1_config_from_json(const Json& j)
{
    return {j.at("i").get<int>(), j.at("g").get<int>(), j.value("n_dist", 6)};
}

Json to_json(const Certificate& cert, const E1Config& cfg, const std::string& truncation_digest)
{
    Json summands = Json::array();
    for (const auto& e : cert.entries) {
        Json entry{{"degree", e.degree},
                   {"simplex", e.tuple},
                   {"status", e.status},
                   {"stage", e.stage},
                   {"max_path_len", e.max_path_len}};
        if (!e.reason.empty())
            entry["reason"] = e.reason;
        if (e.cycle)
            entry["cycle"] = true;
        summands.push_back(std::move(entry));
    }
    return Json{{"config", to_json(cfg)},
                {"truncation_digest", truncation_digest},
                {"matching_ok", cert.matching_ok},
                {"issues", cert.issues},
                {"max_path_len", cert.max_path_len},
                {"any_cycle", cert.any_cycle},
                {"cap_hit", cert.cap_hit},
                {"summands", summands},
                {"exactness",
                 Json{{"checked", cert.exactness_checked}, {"value", cert.exactness_value}}}};
}

void write_json_file(const std::string& path, const Json& j)
{
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot open " + tmp + " for writing");
        out << j.dump(2) << "\n";
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("cannot move " + tmp + " into place");
}

Json read_json_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    return Json::parse(in);  // parse errors carry byte positions
}

}  // namespace spm
