#pragma once

// JSON forms of the public result types, matching the documented wire
// formats byte for byte.

#include "topical/graphs.hpp"
#include "topical/json_writer.hpp"
#include "topical/solver.hpp"

namespace topical {

// {"vertices":[{"id":0,"sigma":[1]},...],"edges":[[u,v],...]}
Json graph_json(const Digraph& g);

// {"status":...,"eigenvalue_additive":...,"eigenvalue_multiplicative":...,
//  "eigenvector_additive":[...],"eigenvector_multiplicative":[...],
//  "residual_sup":...,"iterations":...,"cw_lower":...,"cw_upper":...}
Json eigen_report_json(const EigenReport& rep);

// Appends the same fields to an existing object (for CLI envelopes).
void eigen_report_fields(Json& obj, const EigenReport& rep);

}  // namespace topical
