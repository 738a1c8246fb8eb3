#pragma once

#include "afflab/catalogue.hpp"
#include "afflab/connection.hpp"
#include "afflab/geodesics.hpp"
#include "afflab/projective.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>

namespace afflab {

using Json = nlohmann::json;

// Numbers serialize as JSON numbers when approximate or integral, and as
// exact "p/q" strings otherwise.
Json num_to_json(const Num& v);
Num num_from_json(const Json& j, bool exact_mode);

// {"type":"A","gamma":[a,b,c,d,e,f]} with numbers or "p/q" strings.
Json model_to_json(const TypeAModel& m);
TypeAModel model_from_json(const Json& j, bool exact_mode);

// Accepts the Type A literal above or
// {"type":"general","christoffel":{"22_1":"x1", ...}} with expression-grammar
// values; missing entries are zero.
Connection connection_from_json(const Json& j, bool exact_mode);

Json label_to_json(const CanonicalLabel& label);
CanonicalLabel label_from_json(const Json& j, bool exact_mode);

Json mat2_to_json(const Mat2& a);
Json classify_to_json(const ClassifyResult& r);
Json flatten_to_json(const FlattenResult& r);
Json verdict_to_json(const CompletenessVerdict& v);
Json probe_to_json(const ProbeReport& r);

// Columns t,x1,x2,u1,u2 at the accepted step points.
void write_trace_csv(const GeodesicTrace& trace, std::ostream& os);

}  // namespace afflab
