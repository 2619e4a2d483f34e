#pragma once

#include <json.hpp>

#include "spmorse/e1.hpp"

namespace spm {

using Json = nlohmann::json;

// Matrices serialize as {rows, cols, entries: [[r, c, "value"]]} with decimal
// strings; everything integer-valued survives arbitrary precision.
Json to_json(const IntMat& m);
IntMat int_mat_from_json(const Json& j);
Json to_json(const RatMat& m);
RatMat rat_mat_from_json(const Json& j);

Json to_json(const LatticeVector& v);  // {g, coords: ["..."]}
LatticeVector lattice_vector_from_json(const Json& j);

Json to_json(const VecList& vs);
VecList vec_list_from_json(const Json& j);

Json to_json(const SplittingData& s);  // bases plus a verification digest
SplittingData splitting_from_json(const Json& j);

Json to_json(const ComplexSpec& spec);
ComplexSpec complex_spec_from_json(const Json& j);

Json to_json(const FiniteComplex& fc);
FiniteComplex finite_complex_from_json(const Json& j);

Json to_json(const Wedge3Element& e);  // carrier digest + sparse triple map

Json to_json(const BasedChainComplex& c);
BasedChainComplex based_complex_from_json(const Json& j);

Json to_json(const Matching& m);
Matching matching_from_json(const Json& j);

Json to_json(const E1Config& cfg);
E1Config e1_config_from_json(const Json& j);

Json to_json(const Certificate& cert, const E1Config& cfg, const std::string& truncation_digest);

std::string digest_of(const Json& j);

// Atomic write: the file appears complete or not at all.
void write_json_file(const std::string& path, const Json& j);
Json read_json_file(const std::string& path);

}  // namespace spm
