#pragma once

#include <string>
#include <string_view>

#include "bgjt/descent.hpp"
#include "bgjt/oracle.hpp"
#include "json.hpp"

namespace bgjt {

using Json = nlohmann::json;

// F_{q^2} element u + v*g as [u, v]; polynomials as arrays of those,
// little-endian by degree.
Json elt_json(const FieldTower& F, Fq2Elt a);
Fq2Elt elt_from_json(const FieldTower& F, const Json& j);
Json poly_json(const FieldTower& F, const Poly& a);
Poly poly_from_json(const FieldTower& F, const Json& j);

// Human form: "(1+2*g)x^2 + 3x + g". Integers are F_q element indices.
// Throws InvalidArgument.
Poly parse_poly(const FieldTower& F, std::string_view text);

// FNV-1a 64 of the compact dump, as 16 hex digits.
std::string content_hash(const Json& j);

Json tower_json(const FieldTower& F);

// Includes "setup_hash" over everything else in the object.
Json setup_json(const FieldTower& F, const SetupInstance& s);
// Rebuilds through make_setup and checks f and the cofactors against the
// stored ones. Throws StaleCache on mismatch.
SetupInstance setup_from_json(const FieldTower& F, const Json& j);

Json cosets_json(const FieldTower& F, const CosetSet& cosets);
CosetSet cosets_from_json(const FieldTower& F, const Json& j);

Json relations_json(const FieldTower& F, const RelationSet& rs, const std::string& setup_hash);
RelationSet relations_from_json(const FieldTower& F, const Json& j);

Json dlogs_json(const FieldTower& F, const DlogTable& t, bool verified);
DlogTable dlogs_from_json(const FieldTower& F, const Json& j);

Json int_vec_json(const IntVec& v);  // decimal strings
Json smith_json(const SmithShapeReport& r);
Json theorem4_json(const Theorem4Certificate& c);
Json psi2_json(const Psi2Report& r);
Json quotient_json(const QuotientReport& r);
Json linear_trap_json(const FieldTower& F, const LinearTrapReport& r);
Json trap_sweep_json(const FieldTower& F, const TrapSweep& s);
Json setup_report_json(const FieldTower& F, const SetupReport& r);
Json descent_step_json(const FieldTower& F, const DescentStep& s);
// Tree {W, status, method, accepted_count, exponent, log, children}.
Json trace_json(const FieldTower& F, const DlogResult& r);

}  // namespace bgjt
