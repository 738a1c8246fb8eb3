// afflab: curvature, quasi-Einstein solution spaces, projective flattening,
// catalogue classification, geodesic probing and portraits for constant
// Christoffel connections on the plane.

#include <CLI11.hpp>

#include "afflab/catalogue.hpp"
#include "afflab/errors.hpp"
#include "afflab/geodesics.hpp"
#include "afflab/json_io.hpp"
#include "afflab/portrait.hpp"
#include "afflab/projective.hpp"
#include "afflab/quasi_einstein.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace afflab;

namespace {

bool exact_mode_from_env() {
    const char* mode = std::getenv("AFFLAB_MODE");
    if (!mode) return true;
    std::string m(mode);
    if (m == "float") return false;
    if (m == "exact" || m.empty()) return true;
    throw ParamDomainError("AFFLAB_MODE must be 'exact' or 'float'");
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParamDomainError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Json parse_json_arg(const std::string& arg) {
    std::string text = !arg.empty() && arg[0] == '@' ? slurp(arg.substr(1)) : arg;
    try {
        return Json::parse(text);
    } catch (const std::exception& e) {
        throw ParamDomainError(std::string("bad JSON argument: ") + e.what());
    }
}

std::vector<Num> parse_num_list(const std::string& csv, bool exact) {
    std::vector<Num> out;
    if (csv.empty()) return out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_number(item, exact));
    return out;
}

struct ModelArgs {
    std::string model_json;
    std::string gamma_csv;

    void attach(CLI::App* cmd) {
        cmd->add_option("--model,-m", model_json,
                        "model as JSON (inline or @file)");
        cmd->add_option("--gamma,-g", gamma_csv,
                        "six comma-separated Christoffel coefficients");
    }
    TypeAModel type_a(bool exact) const {
        if (!gamma_csv.empty()) {
            auto nums = parse_num_list(gamma_csv, exact);
            if (nums.size() != 6)
                throw ParamDomainError("--gamma needs exactly 6 values");
            TypeAModel m;
            for (int k = 0; k < 6; ++k) m.gamma[k] = nums[k];
            return m;
        }
        if (model_json.empty())
            throw ParamDomainError("provide --model or --gamma");
        return model_from_json(parse_json_arg(model_json), exact);
    }
    Connection connection(bool exact) const {
        if (!gamma_csv.empty()) return Connection::lift(type_a(exact));
        if (model_json.empty())
            throw ParamDomainError("provide --model or --gamma");
        return connection_from_json(parse_json_arg(model_json), exact);
    }
};

struct LabelArgs {
    std::string label;
    std::string params_csv;

    void attach(CLI::App* cmd) {
        cmd->add_option("--label,-l", label, "catalogue label, e.g. M_2^2 or N");
        cmd->add_option("--params,-p", params_csv, "comma-separated parameters");
    }
    bool present() const { return !label.empty(); }
    CanonicalLabel get(bool exact) const {
        CanonicalLabel out;
        out.family = parse_family(label);
        out.params = parse_num_list(params_csv, exact);
        validate_params(out.family, out.params);
        return out;
    }
};

void emit(const Json& payload, const std::string& out_path,
          const std::string& summary) {
    if (out_path.empty()) {
        std::cout << payload.dump(2) << "\n";
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw Error("cannot open " + out_path + " for writing");
        out << payload.dump(2) << "\n";
    }
    if (!summary.empty()) std::cerr << summary << "\n";
}

std::array<double, 2> parse_point(const std::string& csv) {
    auto nums = parse_num_list(csv, false);
    if (nums.size() != 2) throw ParamDomainError("expected two components: " + csv);
    return {nums[0].to_double(), nums[1].to_double()};
}

MapSpec resolve_map(const std::string& name, const std::vector<Num>& params) {
    static const std::map<std::string, int> named = {
        {"Phi_1^0", 1}, {"Phi_2^0", 2}, {"Phi_3^0", 3}, {"Phi_4^0", 4},
        {"Phi_5^0", 5}, {"Phi_1^1", 6}, {"Phi_2^1", 7}, {"Phi_3^1", 8},
        {"Phi_4^1", 9}, {"Phi_5^1", 10}};
    if (name == "Psi") {
        std::array<double, 4> abcd{0, 1, 0, 0};
        for (std::size_t k = 0; k < params.size() && k < 4; ++k)
            abcd[k] = params[k].to_double();
        return psi_map(abcd[0], abcd[1], abcd[2], abcd[3]);
    }
    if (name == "Phi_N") return phi_n_map();
    if (auto it = named.find(name); it != named.end())
        return catalogue_map(it->second, params);
    try {
        return catalogue_map(std::stoi(name), params);
    } catch (const std::invalid_argument&) {
        throw UnknownMapError("unknown map name '" + name + "'");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"affine surface laboratory"};
    app.require_subcommand(1);
    bool exact = true;
    try {
        exact = exact_mode_from_env();
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    std::string out_path;
    app.add_option("--out,-o", out_path, "write the JSON report to a file")
        ->capture_default_str();

    // --- ricci ---------------------------------------------------------
    auto* cmd_ricci = app.add_subcommand("ricci", "Ricci tensor and rank");
    ModelArgs ricci_model;
    ricci_model.attach(cmd_ricci);
    cmd_ricci->callback([&]() {
        Connection conn = ricci_model.connection(exact);
        if (auto m = conn.as_type_a()) {
            SymBilinear rho = ricci_type_a(*m);
            auto v = rho.constant_values();
            Json payload{
                {"rho", Json::array({Json::array({num_to_json(v[0]), num_to_json(v[1])}),
                                     Json::array({num_to_json(v[1]), num_to_json(v[2])})})},
                {"rank", ricci_rank(*m)},
                {"symmetric", true}};
            emit(payload, out_path,
                 "rank " + std::to_string(ricci_rank(*m)) + " Ricci tensor");
            return;
        }
        SymBilinear rho = ricci_general(conn);
        Json payload{{"rho",
                      Json{{"11", rho.r11.str()},
                           {"12", rho.r12.str()},
                           {"21", rho.r21.str()},
                           {"22", rho.r22.str()}}},
                     {"symmetric", rho.symmetric()}};
        emit(payload, out_path, "general-connection Ricci tensor");
    });

    // --- flatten -------------------------------------------------------
    auto* cmd_flatten = app.add_subcommand("flatten", "strong projective flattening");
    ModelArgs flatten_model;
    flatten_model.attach(cmd_flatten);
    cmd_flatten->callback([&]() {
        TypeAModel m = flatten_model.type_a(exact);
        FlattenResult r = flatten(m);
        auto v = ricci_type_a(r.flat).constant_values();
        double sup = std::max({std::abs(v[0].to_double()), std::abs(v[1].to_double()),
                               std::abs(v[2].to_double())});
        Json payload = flatten_to_json(r);
        payload["ricci_sup"] = sup;
        emit(payload, out_path,
             "case " + std::to_string(r.case_id) + ", flat-model Ricci sup " +
                 std::to_string(sup));
    });

    // --- classify ------------------------------------------------------
    auto* cmd_classify = app.add_subcommand("classify", "catalogue classification");
    ModelArgs classify_model;
    classify_model.attach(cmd_classify);
    cmd_classify->callback([&]() {
        ClassifyResult r = classify(classify_model.type_a(exact));
        emit(classify_to_json(r), out_path, "label " + r.label.str());
    });

    // --- qsolve --------------------------------------------------------
    auto* cmd_qsolve = app.add_subcommand("qsolve", "solution space of H f + rho f = 0");
    ModelArgs qsolve_model;
    qsolve_model.attach(cmd_qsolve);
    cmd_qsolve->callback([&]() {
        FuncSpan q = qe_solve_type_a(qsolve_model.type_a(exact));
        Json basis = Json::array();
        for (const auto& f : q.basis()) basis.push_back(f.str());
        emit(Json{{"dim", q.dim()}, {"basis", basis}}, out_path,
             "solution space dimension " + std::to_string(q.dim()));
    });

    // --- qcheck --------------------------------------------------------
    auto* cmd_qcheck = app.add_subcommand("qcheck", "membership in the solution space");
    ModelArgs qcheck_model;
    qcheck_model.attach(cmd_qcheck);
    std::string fn_text;
    cmd_qcheck->add_option("--fn,-f", fn_text, "candidate function")->required();
    cmd_qcheck->callback([&]() {
        Connection conn = qcheck_model.connection(exact);
        ExpPoly f = ep_parse(fn_text, exact);
        QeResidual r = qe_apply(conn, f);
        bool member = qe_member(conn, f);
        Json payload{{"exact_zero", r.exact_zero},
                     {"max_abs", r.max_abs},
                     {"member", member}};
        emit(payload, out_path, member ? "member of Q" : "not a member of Q");
    });

    // --- geodesic ------------------------------------------------------
    auto* cmd_geo = app.add_subcommand("geodesic", "integrate one geodesic");
    ModelArgs geo_model;
    geo_model.attach(cmd_geo);
    std::string x0_csv = "0,0", u0_csv = "1,0", csv_path;
    double tmax = 10.0, tol = 1e-10;
    cmd_geo->add_option("--x0", x0_csv, "initial position a,b");
    cmd_geo->add_option("--u0", u0_csv, "initial velocity c,d");
    cmd_geo->add_option("--tmax,-t", tmax, "signed parameter span");
    cmd_geo->add_option("--tol", tol, "relative tolerance");
    cmd_geo->add_option("--csv", csv_path, "write t,x1,x2,u1,u2 samples");
    cmd_geo->callback([&]() {
        Connection conn = geo_model.connection(exact);
        IntegrateOptions opts;
        opts.rel_tol = tol;
        GeodesicTrace tr = integrate(conn, parse_point(x0_csv), parse_point(u0_csv),
                                     tmax, opts);
        if (!csv_path.empty()) {
            std::ofstream csv(csv_path, std::ios::binary);
            if (!csv) throw Error("cannot open " + csv_path + " for writing");
            write_trace_csv(tr, csv);
        }
        Json payload{{"termination", termination_name(tr.termination())},
                     {"t_end", tr.t_end()},
                     {"samples", tr.samples().size()},
                     {"residual_max", tr.residual_max()}};
        if (tr.termination() == Termination::BlowUp)
            payload["blowup_estimate"] = tr.blowup_estimate();
        emit(payload, out_path,
             termination_name(tr.termination()) + " at t=" +
                 std::to_string(tr.t_end()));
    });

    // --- probe ---------------------------------------------------------
    auto* cmd_probe = app.add_subcommand("probe", "origin-fan completeness probe");
    ModelArgs probe_model;
    LabelArgs probe_label;
    probe_model.attach(cmd_probe);
    probe_label.attach(cmd_probe);
    int rays = 64;
    double probe_tmax = 32.0;
    std::string probe_json;
    cmd_probe->add_option("--rays,-r", rays, "number of fan directions");
    cmd_probe->add_option("--tmax,-t", probe_tmax, "horizon per direction");
    cmd_probe->add_option("--json,-j", probe_json, "write the report to a file");
    cmd_probe->callback([&]() {
        ProbeReport report;
        if (probe_label.present()) {
            report = completeness_probe(probe_label.get(exact), rays, probe_tmax);
        } else {
            report = completeness_probe(probe_model.connection(exact), rays,
                                        probe_tmax);
        }
        std::string dest = !probe_json.empty() ? probe_json : out_path;
        int complete = 0;
        for (const auto& ray : report.rays)
            complete += ray.forward == Termination::ReachedTmax &&
                        ray.backward == Termination::ReachedTmax;
        emit(probe_to_json(report), dest,
             std::to_string(complete) + "/" + std::to_string(report.rays.size()) +
                 " rays complete");
        if (report.agrees_with_table && !*report.agrees_with_table)
            throw ClassifyError("probe disagrees with the classification verdict");
    });

    // --- verdict -------------------------------------------------------
    auto* cmd_verdict = app.add_subcommand("verdict", "completeness verdict");
    LabelArgs verdict_label;
    verdict_label.attach(cmd_verdict);
    cmd_verdict->callback([&]() {
        CompletenessVerdict v = verdict(verdict_label.get(exact));
        emit(verdict_to_json(v), out_path, completeness_kind_name(v.kind));
    });

    // --- maps ----------------------------------------------------------
    auto* cmd_maps = app.add_subcommand("maps", "affine map catalogue");
    auto* cmd_maps_verify = cmd_maps->add_subcommand("verify", "check a map");
    std::string map_name, map_params_csv;
    int grid_n = 5;
    cmd_maps_verify->add_option("--name,-n", map_name, "map name or index")
        ->required();
    cmd_maps_verify->add_option("--params,-p", map_params_csv, "map parameters");
    cmd_maps_verify->add_option("--grid", grid_n, "grid resolution per axis");
    cmd_maps_verify->callback([&]() {
        MapSpec spec = resolve_map(map_name, parse_num_list(map_params_csv, exact));
        double residual =
            verify_affine_map(spec, square_grid(grid_n, spec.lo, spec.hi));
        bool pass = residual < 1e-9;
        emit(Json{{"name", spec.name}, {"residual", residual}, {"pass", pass}},
             out_path, spec.name + " residual " + std::to_string(residual));
        if (!pass)
            throw ClassifyError(spec.name + " failed affine verification");
    });

    // --- portrait ------------------------------------------------------
    auto* cmd_portrait = app.add_subcommand("portrait", "geodesic portrait SVG");
    ModelArgs portrait_model;
    LabelArgs portrait_label;
    portrait_model.attach(cmd_portrait);
    portrait_label.attach(cmd_portrait);
    std::string view_csv = "-3,3", svg_path;
    int portrait_rays = 24, size_px = 480;
    double portrait_tmax = 32.0;
    cmd_portrait->add_option("--rays,-r", portrait_rays, "fan size");
    cmd_portrait->add_option("--tmax,-t", portrait_tmax, "horizon per ray");
    cmd_portrait->add_option("--view", view_csv, "viewport lo,hi");
    cmd_portrait->add_option("--size", size_px, "image size in pixels");
    cmd_portrait->add_option("--svg", svg_path, "output SVG path")->required();
    cmd_portrait->callback([&]() {
        PortraitSpec spec;
        if (portrait_label.present()) {
            CanonicalLabel label = portrait_label.get(exact);
            spec.conn = canonical_connection(label);
            spec.title = label.str();
        } else {
            spec.conn = portrait_model.connection(exact);
        }
        auto view = parse_point(view_csv);
        spec.view_lo = view[0];
        spec.view_hi = view[1];
        spec.rays = portrait_rays;
        spec.t_max = portrait_tmax;
        spec.size_px = size_px;
        write_portrait_svg(spec, svg_path);
        emit(Json{{"svg", svg_path}, {"rays", spec.rays}}, out_path,
             "wrote " + svg_path);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 64;
    } catch (const ParamDomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const UnknownMapError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const SingularMatrixError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
