// Command-line front end: batch access to the lattice calculus, the complex
// predicates, the E^1 builder and the Morse engine. All file formats are the
// JSON schemas of json_io; output is written atomically and is byte-identical
// across runs for a fixed config and seed.

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

#include "spmorse/json_io.hpp"

using namespace spm;

namespace {

int resource_cap_from_env(int fallback)
{
    if (const char* v = std::getenv("SPMORSE_RESOURCE_CAP"))
        return std::atoi(v);
    return fallback;
}

void emit(const Json& j, const std::string& output)
{
    if (output.empty())
        std::cout << j.dump(2) << "\n";
    else
        write_json_file(output, j);
}

FiniteComplex truncation_from_config(const Json& cfg, const E1Config& e1cfg)
{
    const Json& tr = cfg.at("truncation");
    std::string mode = tr.value("mode", "closure");
    if (mode == "closure") {
        VecList extra;
        if (tr.contains("extra_vertices"))
            extra = vec_list_from_json(tr.at("extra_vertices"));
        return construction_closure(e1cfg, extra, tr.value("with_deg2", false));
    }
    if (mode == "box") {
        int cap = resource_cap_from_env(tr.value("max_simplices_per_dim", 0));
        return enumerate_truncation(e1cfg.genus, e1cfg.i, tr.at("box").get<int>(),
                                    tr.value("max_dim", 2), tr.value("max_vertices", 0), cap);
    }
    if (mode == "file")
        return finite_complex_from_json(read_json_file(tr.at("path").get<std::string>()));
    throw PreconditionError("unknown truncation mode: " + mode);
}

int run(int argc, char** argv)
{
    CLI::App app{"symplectic lattice calculus, arc-complex predicates and discrete Morse "
                 "certification"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string output;
    app.add_option("-o,--output", output, "write the result to a file (atomic)");
    long seed = 0;
    app.add_option("--seed", seed, "seed for seeded generators, echoed into outputs");

    // gcd
    std::string gcd_file;
    auto* cmd_gcd = app.add_subcommand("gcd", "tuple gcd of lattice vectors")->fallthrough();
    cmd_gcd->add_option("vectors", gcd_file)->required();

    // dual
    std::string dual_file;
    auto* cmd_dual = app.add_subcommand("dual", "dual summand and symplectic splitting")->fallthrough();
    cmd_dual->add_option("vectors", dual_file)->required();

    // simplex check
    auto* cmd_simplex = app.add_subcommand("simplex", "simplex operations")->fallthrough();
    std::string spec_file, simplex_file;
    auto* cmd_check = cmd_simplex->add_subcommand("check", "membership with diagnostic")->fallthrough();
    cmd_check->add_option("spec", spec_file)->required();
    cmd_check->add_option("simplex", simplex_file)->required();

    // enumerate
    std::string enum_cfg;
    int opt_genus = 0, opt_box = -1, opt_i = 0;
    auto* cmd_enum = app.add_subcommand("enumerate", "box truncation of Lambda^i")->fallthrough();
    cmd_enum->add_option("config", enum_cfg)->required();
    cmd_enum->add_option("--genus", opt_genus, "override g");
    cmd_enum->add_option("--box", opt_box, "override the coordinate bound");
    cmd_enum->add_option("--component-index", opt_i, "override i");

    // e1 build / certify
    auto* cmd_e1 = app.add_subcommand("e1", "E^1 truncations and field certification")->fallthrough();
    std::string e1_cfg_file;
    int cap_steps = 64;
    auto* cmd_build = cmd_e1->add_subcommand("build", "assemble the chain complex")->fallthrough();
    cmd_build->add_option("config", e1_cfg_file)->required();
    auto* cmd_cert = cmd_e1->add_subcommand("certify", "build the field and certify it")->fallthrough();
    cmd_cert->add_option("config", e1_cfg_file)->required();
    cmd_cert->add_option("--cap-steps", cap_steps, "gradient exploration cap");

    // morse
    auto* cmd_morse = app.add_subcommand("morse", "based chain complex operations")->fallthrough();
    std::string complex_file, matching_file;
    auto* cmd_validate = cmd_morse->add_subcommand("validate", "matching conditions (i), (ii)")->fallthrough();
    cmd_validate->add_option("complex", complex_file)->required();
    cmd_validate->add_option("matching", matching_file)->required();
    auto* cmd_hom = cmd_morse->add_subcommand("homology", "Betti numbers by exact ranks")->fallthrough();
    cmd_hom->add_option("complex", complex_file)->required();
    auto* cmd_paths = cmd_morse->add_subcommand("paths", "gradient path exploration")->fallthrough();
    cmd_paths->add_option("complex", complex_file)->required();
    cmd_paths->add_option("matching", matching_file)->required();
    int start_degree = 0, start_index = 0;
    cmd_paths->add_option("--start-degree", start_degree);
    cmd_paths->add_option("--start-index", start_index);
    cmd_paths->add_option("--cap-steps", cap_steps);

    // path connect
    auto* cmd_path = app.add_subcommand("path", "constructive connectivity")->fallthrough();
    std::string path_args;
    auto* cmd_connect = cmd_path->add_subcommand("connect", "path between two vertices")->fallthrough();
    cmd_connect->add_option("args", path_args)->required();

    CLI11_PARSE(app, argc, argv);

    if (*cmd_gcd) {
        VecList vs = vec_list_from_json(read_json_file(gcd_file));
        std::cout << to_string(gcd_tuple(vs)) << "\n";
        return 0;
    }
    if (*cmd_dual) {
        VecList vs = vec_list_from_json(read_json_file(dual_file));
        emit(to_json(dual_summand(vs)), output);
        return 0;
    }
    if (*cmd_check) {
        ComplexSpec spec = complex_spec_from_json(read_json_file(spec_file));
        Simplex s = vec_list_from_json(read_json_file(simplex_file));
        CheckResult r = is_simplex(spec, s);
        std::cout << (r.ok ? "simplex" : "not a simplex: " + r.diagnostic) << "\n";
        return r.ok ? 0 : 1;
    }
    if (*cmd_enum) {
        Json cfg = read_json_file(enum_cfg);
        int g = opt_genus > 0 ? opt_genus : cfg.at("g").get<int>();
        int i = opt_i > 0 ? opt_i : cfg.value("i", 1);
        int box = opt_box >= 0 ? opt_box : cfg.at("box").get<int>();
        int cap = resource_cap_from_env(cfg.value("max_simplices_per_dim", 0));
        FiniteComplex fc = enumerate_truncation(g, i, box, cfg.value("max_dim", 2),
                                                cfg.value("max_vertices", 0), cap);
        emit(to_json(fc), output);
        return 0;
    }
    if (*cmd_build || *cmd_cert) {
        Json cfg = read_json_file(e1_cfg_file);
        E1Config e1cfg = e1_config_from_json(cfg);
        FiniteComplex fc = truncation_from_config(cfg, e1cfg);
        int max_degree = cfg.value("max_degree", 2);
        E1Truncation t = build_e1(e1cfg, fc, max_degree);
        if (*cmd_build) {
            Json out{{"config", to_json(e1cfg)},
                     {"seed", seed},
                     {"truncation", to_json(fc)},
                     {"complex", to_json(t.complex)}};
            emit(out, output);
            return 0;
        }
        FieldConstruction field = build_field_deg01(t);
        if (cfg.value("with_deg2", false) || max_degree >= 3)
            extend_field_deg2(t, field);
        Certificate cert = certify(t, field, cap_steps);
        Json cert_json = to_json(cert, e1cfg, digest_of(to_json(fc)));
        cert_json["seed"] = seed;
        emit(cert_json, output);
        return cert.matching_ok && !cert.any_cycle ? 0 : 1;
    }
    if (*cmd_validate) {
        BasedChainComplex c = based_complex_from_json(read_json_file(complex_file));
        Matching m = matching_from_json(read_json_file(matching_file));
        ValidationReport rep = validate_matching(c, m);
        emit(Json{{"ok", rep.ok()}, {"issues", rep.issues}}, output);
        return rep.ok() ? 0 : 1;
    }
    if (*cmd_hom) {
        BasedChainComplex c = based_complex_from_json(read_json_file(complex_file));
        emit(Json{{"betti", homology(c)}}, output);
        return 0;
    }
    if (*cmd_paths) {
        BasedChainComplex c = based_complex_from_json(read_json_file(complex_file));
        Matching m = matching_from_json(read_json_file(matching_file));
        PathReport rep = gradient_paths(c, m, start_degree, start_index, cap_steps);
        Json witness = Json::array();
        for (const auto& p : rep.witness)
            witness.push_back(Json::array({p.degree, p.low_index, p.high_index}));
        emit(Json{{"max_len", rep.max_len},
                  {"cycle", rep.cycle},
                  {"cap_hit", rep.cap_hit},
                  {"witness", witness}},
             output);
        return 0;
    }
    if (*cmd_connect) {
        Json args = read_json_file(path_args);
        std::map<std::string, PathVariant> variants{{"lsmh", PathVariant::Lsmh},
                                                    {"csmh_k2", PathVariant::CsmhK2},
                                                    {"csmh_k1", PathVariant::CsmhK1},
                                                    {"csmh_k0", PathVariant::CsmhK0}};
        auto it = variants.find(args.at("variant").get<std::string>());
        if (it == variants.end())
            throw PreconditionError("unknown path variant");
        VecList zs;
        if (args.contains("z"))
            zs = vec_list_from_json(args.at("z"));
        VecList path = connect_path(lattice_vector_from_json(args.at("x")), zs,
                                    args.at("k").get<int>(),
                                    lattice_vector_from_json(args.at("v1")),
                                    lattice_vector_from_json(args.at("v2")), it->second,
                                    args.value("n_dist", 6));
        emit(Json{{"path", to_json(path)}}, output);
        return 0;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    try {
        return run(argc, argv);
    } catch (const Json::parse_error& e) {
        std::cerr << "json error: " << e.what() << "\n";
        return 3;
    } catch (const PreconditionError& e) {
        std::cerr << "precondition: " << e.what() << "\n";
        return 2;
    } catch (const ConstructionError& e) {
        std::cerr << "construction: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
