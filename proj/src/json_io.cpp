#include "afflab/json_io.hpp"

#include "afflab/errors.hpp"

#include <cmath>
#include <ostream>

namespace afflab {

Json num_to_json(const Num& v) {
    if (!v.is_exact()) return Json(v.to_double());
    const auto& q = v.rational();
    if (boost::multiprecision::denominator(q) == 1) {
        auto n = boost::multiprecision::numerator(q);
        if (n >= -(1ll << 53) && n <= (1ll << 53))
            return Json(n.convert_to<long long>());
    }
    return Json(v.str());
}

Num num_from_json(const Json& j, bool exact_mode) {
    if (j.is_string()) return parse_number(j.get<std::string>(), exact_mode);
    if (j.is_number_integer())
        return exact_mode ? Num((long long)j.get<long long>())
                          : Num::approx(double(j.get<long long>()));
    if (j.is_number_float()) {
        double d = j.get<double>();
        if (!exact_mode) return Num::approx(d);
        // Decimal JSON literals are exact decimal fractions.
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", d);
        return parse_number(buf, true);
    }
    throw ParamDomainError("expected a number or \"p/q\" string");
}

Json model_to_json(const TypeAModel& m) {
    Json gamma = Json::array();
    for (const auto& g : m.gamma) gamma.push_back(num_to_json(g));
    return Json{{"type", "A"}, {"gamma", gamma}};
}

TypeAModel model_from_json(const Json& j, bool exact_mode) {
    if (!j.is_object() || j.value("type", "A") != "A" || !j.contains("gamma"))
        throw ParamDomainError("expected {\"type\":\"A\",\"gamma\":[...]} literal");
    const Json& gamma = j["gamma"];
    if (!gamma.is_array() || gamma.size() != 6)
        throw ParamDomainError("gamma must list the 6 Christoffel coefficients");
    TypeAModel m;
    for (int k = 0; k < 6; ++k) m.gamma[k] = num_from_json(gamma[k], exact_mode);
    return m;
}

Connection connection_from_json(const Json& j, bool exact_mode) {
    std::string type = j.value("type", "A");
    if (type == "A") return Connection::lift(model_from_json(j, exact_mode));
    if (type != "general")
        throw ParamDomainError("connection type must be \"A\" or \"general\"");
    Connection conn;
    if (!j.contains("christoffel") || !j["christoffel"].is_object())
        throw ParamDomainError("general connection needs a christoffel object");
    for (const auto& [key, value] : j["christoffel"].items()) {
        if (key.size() != 4 || key[2] != '_')
            throw ParamDomainError("christoffel key must look like \"12_1\"");
        int i = key[0] - '0', jj = key[1] - '0', k = key[3] - '0';
        if (i < 1 || i > 2 || jj < 1 || jj > 2 || k < 1 || k > 2)
            throw ParamDomainError("christoffel indices out of range in " + key);
        conn.set_christoffel(i, jj, k, ep_parse(value.get<std::string>(), exact_mode));
    }
    return conn;
}

Json label_to_json(const CanonicalLabel& label) {
    Json out{{"label", family_name(label.family)}};
    Json params = Json::array();
    for (const auto& p : label.params) params.push_back(num_to_json(p));
    out["params"] = params;
    return out;
}

CanonicalLabel label_from_json(const Json& j, bool exact_mode) {
    CanonicalLabel label;
    label.family = parse_family(j.at("label").get<std::string>());
    for (const auto& p : j.value("params", Json::array()))
        label.params.push_back(num_from_json(p, exact_mode));
    return label;
}

Json mat2_to_json(const Mat2& a) {
    return Json::array({Json::array({num_to_json(a.m[0][0]), num_to_json(a.m[0][1])}),
                        Json::array({num_to_json(a.m[1][0]), num_to_json(a.m[1][1])})});
}

Json classify_to_json(const ClassifyResult& r) {
    Json out = label_to_json(r.label);
    out["A"] = mat2_to_json(r.A);
    out["w"] = Json::array({num_to_json(r.w.w1), num_to_json(r.w.w2)});
    out["residuals"] = Json{{"christoffel", r.model_residual},
                            {"span_verified", r.span_verified}};
    return out;
}

Json flatten_to_json(const FlattenResult& r) {
    return Json{{"case", r.case_id},
                {"prescale", mat2_to_json(r.prescale)},
                {"w", Json::array({num_to_json(r.w.w1), num_to_json(r.w.w2)})},
                {"flat", model_to_json(r.flat)},
                {"prescaled", model_to_json(r.prescaled)}};
}

Json verdict_to_json(const CompletenessVerdict& v) {
    Json out{{"kind", completeness_kind_name(v.kind)}};
    if (v.target) out["target"] = label_to_json(*v.target);
    out["evidence"] = v.evidence;
    return out;
}

Json probe_to_json(const ProbeReport& r) {
    Json rays = Json::array();
    for (const auto& ray : r.rays) {
        rays.push_back(Json{{"u0", Json::array({ray.u0[0], ray.u0[1]})},
                            {"forward", termination_name(ray.forward)},
                            {"backward", termination_name(ray.backward)},
                            {"forward_end", ray.forward_end},
                            {"backward_end", ray.backward_end},
                            {"diagnostic_max", ray.diagnostic_max}});
    }
    Json out{{"rays", rays}, {"all_complete", r.all_complete}};
    if (r.label) out["model"] = label_to_json(*r.label);
    if (r.agrees_with_table) out["agrees_with_table"] = *r.agrees_with_table;
    return out;
}

void write_trace_csv(const GeodesicTrace& trace, std::ostream& os) {
    os << "t,x1,x2,u1,u2\n";
    char line[160];
    for (const auto& s : trace.samples()) {
        std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%.17g\n", s.t,
                      s.x[0], s.x[1], s.u[0], s.u[1]);
        os << line;
    }
}

}  // namespace afflab
