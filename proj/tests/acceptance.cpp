// Acceptance suite: twelve end-to-end checks with stated tolerances and
// runtime budgets. Each prints one PASS/FAIL line; the process exits
// nonzero when any check fails.

#include "afflab/catalogue.hpp"
#include "afflab/errors.hpp"
#include "afflab/geodesics.hpp"
#include "afflab/projective.hpp"
#include "afflab/quasi_einstein.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace afflab;

namespace {

int g_failures = 0;

void run_criterion(int id, const std::string& name, double budget_seconds,
                   const std::function<std::string()>& body) {
    using Clock = std::chrono::steady_clock;
    auto start = Clock::now();
    std::string detail;
    bool ok = true;
    try {
        detail = body();  // empty string = pass
        ok = detail.empty();
    } catch (const std::exception& e) {
        ok = false;
        detail = std::string("exception: ") + e.what();
    }
    double elapsed = std::chrono::duration<double>(Clock::now() - start).count();
    if (elapsed > budget_seconds) {
        ok = false;
        if (!detail.empty()) detail += "; ";
        detail += "runtime " + std::to_string(elapsed) + "s exceeds budget";
    }
    std::printf("[%s] criterion %2d: %-38s (%.2fs%s)\n", ok ? "PASS" : "FAIL", id,
                name.c_str(), elapsed, detail.empty() ? "" : (" | " + detail).c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

// The catalogue parameter grid used across the criteria.
std::vector<CanonicalLabel> catalogue_grid() {
    std::vector<CanonicalLabel> labels;
    for (Family f : {Family::M0_0, Family::M1_0, Family::M2_0, Family::M3_0,
                     Family::M4_0, Family::M5_0})
        labels.push_back({f});
    labels.push_back({Family::M1_1});
    std::vector<Num> c1_grid = {Num(-2), Num::ratio(-1, 2), Num::ratio(1, 3),
                                Num(1), Num(2)};
    for (const auto& c1 : c1_grid) labels.push_back({Family::M2_1, {c1}});
    for (const auto& c1 : c1_grid) labels.push_back({Family::M3_1, {c1}});
    for (int c : {-1, 0, 1, 2}) labels.push_back({Family::M4_1, {Num(c)}});
    for (int c : {-1, 0, 1, 2}) labels.push_back({Family::M5_1, {Num(c)}});
    labels.push_back({Family::M1_2, {Num(2), Num(2)}});
    labels.push_back({Family::M1_2, {Num(-1), Num(3)}});
    labels.push_back({Family::M1_2, {Num::ratio(1, 2), Num::ratio(1, 4)}});
    labels.push_back({Family::M2_2, {Num(-1), Num(0)}});
    labels.push_back({Family::M2_2, {Num(-1), Num(1)}});
    labels.push_back({Family::M2_2, {Num(0), Num(1)}});
    labels.push_back({Family::M2_2, {Num(2), Num(3)}});
    for (int c2 : {-1, 1, 2}) labels.push_back({Family::M3_2, {Num(c2)}});
    labels.push_back({Family::M4_2, {Num(1)}});
    labels.push_back({Family::M4_2, {Num(-1)}});
    return labels;
}

int family_nu(Family f) { return family_rank(f); }

TypeAModel random_rational_model(std::mt19937& rng) {
    std::uniform_int_distribution<int> den(1, 7);
    TypeAModel m;
    for (auto& g : m.gamma) {
        int q = den(rng);
        std::uniform_int_distribution<int> num(-3 * q, 3 * q);
        g = Num::ratio(num(rng), q);
    }
    return m;
}

Mat2 random_gl2(std::mt19937& rng) {
    std::uniform_int_distribution<int> num(-6, 6), den(1, 4);
    while (true) {
        Mat2 a;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) a.m[i][j] = Num::ratio(num(rng), den(rng));
        if (!a.det().is_zero()) return a;
    }
}

std::string check_rank_conformance() {
    for (const auto& label : catalogue_grid()) {
        TypeAModel m = canonical_model(label);
        if (ricci_rank(m) != family_nu(label.family))
            return label.str() + " has rank " + std::to_string(ricci_rank(m));
    }
    return {};
}

std::string check_annihilation() {
    for (const auto& label : catalogue_grid()) {
        Connection conn = Connection::lift(canonical_model(label));
        FuncSpan span = q_catalogue(label);
        for (const auto& f : span.given()) {
            QeResidual r = qe_apply(conn, f);
            if (!r.exact_zero)
                return label.str() + " basis element is not an exact solution";
            if (!qe_member(conn, f)) return label.str() + " membership failed";
        }
    }
    // float-parameter instances: residual below 1e-12 on the sample grid
    for (const CanonicalLabel& label :
         {CanonicalLabel{Family::M4_1, {Num::approx(0.3)}},
          CanonicalLabel{Family::M2_2, {Num::approx(-1.0), Num::approx(1.5)}},
          CanonicalLabel{Family::M3_1, {Num::approx(0.7)}}}) {
        Connection conn = Connection::lift(canonical_model(label));
        FuncSpan span = q_catalogue(label);
        for (const auto& f : span.given()) {
            QeResidual r = qe_apply(conn, f);
            if (!r.exact_zero && r.max_abs >= 1e-12)
                return label.str() + " float residual " + std::to_string(r.max_abs);
        }
    }
    return {};
}

std::string check_solver_catalogue() {
    for (const auto& label : catalogue_grid()) {
        FuncSpan solved = qe_solve_type_a(canonical_model(label));
        if (!span_equal(solved, q_catalogue(label)))
            return "solver span differs from catalogue for " + label.str();
    }
    return {};
}

std::string check_flattening() {
    std::mt19937 rng(140);
    for (int k = 0; k < 1000; ++k) {
        TypeAModel m = random_rational_model(rng);
        FlattenResult r = flatten(m);
        SymBilinear rho = ricci_type_a(r.flat);
        if (r.case_id == 2) {
            if (!rho.is_zero()) return "case-2 model " + m.str() + " not exactly flat";
        } else {
            auto v = rho.constant_values();
            double sup = std::max({std::abs(v[0].to_double()),
                                   std::abs(v[1].to_double()),
                                   std::abs(v[2].to_double())});
            if (sup >= 1e-9)
                return "case-1 model " + m.str() + " residual " + std::to_string(sup);
        }
    }
    return {};
}

std::string check_q_transformation() {
    std::mt19937 rng(141);
    std::uniform_int_distribution<int> wnum(-4, 4), wden(1, 3);
    for (int k = 0; k < 100; ++k) {
        TypeAModel m = random_rational_model(rng);
        Num w1 = Num::ratio(wnum(rng), wden(rng));
        Num w2 = Num::ratio(wnum(rng), wden(rng));
        TypeAModel gm = projective_change(m, {w1, w2});
        FuncSpan lhs = qe_solve_type_a(gm);
        FuncSpan rhs = qe_solve_type_a(m).scaled_exp(w1, w2);
        if (!span_equal(lhs, rhs))
            return "transformation law failed for " + m.str() + " with w=(" +
                   w1.str() + "," + w2.str() + ")";
    }
    return {};
}

std::string check_affine_maps() {
    auto grid = square_grid(5, -1.0, 1.0);
    std::vector<std::pair<std::string, MapSpec>> maps;
    for (int idx = 1; idx <= 10; ++idx)
        maps.emplace_back("map " + std::to_string(idx), catalogue_map(idx));
    maps.emplace_back("Psi(0,1,0,0)", psi_map(0, 1, 0, 0));
    maps.emplace_back("Psi(1,0,2,1)", psi_map(1, 0, 2, 1));
    maps.emplace_back("Phi_N", phi_n_map());
    for (const auto& [name, spec] : maps) {
        double residual = verify_affine_map(spec, grid);
        if (residual >= 1e-9)
            return name + " residual " + std::to_string(residual);
    }
    return {};
}

std::string check_integrator_vs_closed_forms() {
    struct Case {
        GeodesicCase id;
        std::vector<double> params;
        double lo, hi;  // finite reference window inside the validity interval
    };
    std::vector<Case> cases = {
        {GeodesicCase::M11_log, {}, 0.15, 2.5},
        {GeodesicCase::M21_log, {1.0 / 3}, 0.15, 2.5},
        {GeodesicCase::M21_log, {-0.25}, 0.15, 2.5},
        {GeodesicCase::M31_log, {1.0 / 3}, 0.15, 2.5},
        {GeodesicCase::M31_log, {-0.25}, 0.15, 2.5},
        {GeodesicCase::M31Half_exp, {1, 1}, -2, 2},
        {GeodesicCase::M31Half_exp, {2, 0}, -2, 2},
        {GeodesicCase::M21Half_log, {}, 0.15, 2.5},
        {GeodesicCase::M41_logsq, {2}, 0.15, 2.5},
        {GeodesicCase::M51_logcos, {1}, 0, 0},      // true validity window
        {GeodesicCase::M51_logcos, {2}, 0, 0},
        {GeodesicCase::M51Zero_logcos, {}, 0, 0},
        {GeodesicCase::N_sin, {1, 1}, -2, 2},
        {GeodesicCase::M12_ray, {2, 2}, 0.15, 2.5},
        {GeodesicCase::M22_ray, {0, 1}, 0.15, 2.5},
        {GeodesicCase::M22_ray, {2, 3}, 0.15, 2.5},
        {GeodesicCase::M32_ray, {1}, 0.15, 2.5},
        {GeodesicCase::M42_ray, {1}, 0.15, 2.5},
        {GeodesicCase::M42_ray, {-1}, 0.15, 2.5},
    };
    for (const auto& c : cases) {
        ClosedFormGeodesic curve = closed_form_geodesic(c.id, c.params);
        double lo = c.lo, hi = c.hi;
        if (lo == 0 && hi == 0) {
            lo = curve.t_min;
            hi = curve.t_max;
        }
        // middle 80% of the reference window
        double len = hi - lo;
        lo += 0.1 * len;
        hi -= 0.1 * len;
        double t0 = 0.5 * (lo + hi);
        auto x0 = curve.pos(t0);
        auto u0 = curve.vel(t0);
        GeodesicTrace fwd = integrate(curve.model, x0, u0, hi - t0);
        GeodesicTrace bwd = integrate(curve.model, x0, u0, lo - t0);
        double worst = 0;
        for (int k = 0; k <= 24; ++k) {
            double t = lo + (hi - lo) * k / 24.0;
            const GeodesicTrace& tr = t >= t0 ? fwd : bwd;
            auto got = tr.eval(t - t0);
            auto want = curve.pos(t);
            worst = std::max({worst, std::abs(got.x[0] - want[0]),
                              std::abs(got.x[1] - want[1])});
        }
        if (worst >= 1e-6)
            return "case " + std::to_string(int(c.id)) + " position error " +
                   std::to_string(worst);
    }
    GeodesicTrace blow = integrate(
        Connection::lift(canonical_model({Family::M1_1})), {0, 0}, {0, 0.5}, -2);
    if (blow.termination() != Termination::BlowUp)
        return "backward ray on M_1^1 did not register as blow-up";
    if (std::abs(blow.blowup_estimate() + 1.0) >= 1e-3)
        return "M_1^1 blow-up estimate " + std::to_string(blow.blowup_estimate());
    return {};
}

std::string check_completeness_table() {
    std::vector<std::pair<CanonicalLabel, bool>> sample = {
        {{Family::M0_0}, true},
        {{Family::M4_0}, true},
        {{Family::M3_1, {Num::ratio(-1, 2)}}, true},
        {{Family::M2_2, {Num(-1), Num(0)}}, true},
        {{Family::M2_2, {Num(-1), Num(1)}}, true},
        {{Family::M2_2, {Num(-1), Num(2)}}, true},
        {{Family::N}, true},
        {{Family::M1_0}, false},
        {{Family::M2_0}, false},
        {{Family::M3_0}, false},
        {{Family::M5_0}, false},
        {{Family::M1_1}, false},
        {{Family::M2_1, {Num::ratio(1, 3)}}, false},
        {{Family::M3_1, {Num::ratio(1, 3)}}, false},
        {{Family::M4_1, {Num(1)}}, false},
        {{Family::M5_1, {Num(0)}}, false},
        {{Family::M5_1, {Num(1)}}, false},
        {{Family::M1_2, {Num(2), Num(2)}}, false},
        {{Family::M2_2, {Num(2), Num(3)}}, false},
        {{Family::M3_2, {Num(1)}}, false},
        {{Family::M4_2, {Num(1)}}, false},
        {{Family::M4_2, {Num(-1)}}, false},
    };
    for (const auto& [label, expect_complete] : sample) {
        ProbeReport report = completeness_probe(label, 64, 32.0);
        if (report.all_complete != expect_complete)
            return label.str() + " probed " +
                   (report.all_complete ? "complete" : "incomplete") +
                   ", table says otherwise";
        if (!report.agrees_with_table || !*report.agrees_with_table)
            return label.str() + " probe/verdict disagreement";
    }
    return {};
}

std::string check_collinearity() {
    std::mt19937 rng(900);
    std::uniform_real_distribution<double> angle(0, 2 * 3.14159265358979323846);
    std::uniform_real_distribution<double> offset(-0.3, 0.3);
    std::vector<CanonicalLabel> models = {
        {Family::M0_0}, {Family::M1_0}, {Family::M2_0}, {Family::M3_0},
        {Family::M4_0}, {Family::M5_0}, {Family::M1_1},
        {Family::M2_1, {Num::ratio(1, 3)}}, {Family::M3_1, {Num::ratio(-1, 2)}},
        {Family::M3_1, {Num(1)}}, {Family::M4_1, {Num(1)}},
        {Family::M5_1, {Num(0)}}, {Family::M5_1, {Num(1)}},
        {Family::M1_2, {Num(2), Num(2)}}, {Family::M2_2, {Num(-1), Num(1)}},
        {Family::M2_2, {Num(2), Num(3)}}, {Family::M3_2, {Num(1)}},
        {Family::M4_2, {Num(1)}},
    };
    for (const auto& label : models) {
        Connection conn = Connection::lift(canonical_model(label));
        FuncSpan span = q_catalogue(label);
        for (int k = 0; k < 20; ++k) {
            double th = angle(rng);
            std::array<double, 2> x0{offset(rng), offset(rng)};
            std::array<double, 2> u0{std::cos(th), std::sin(th)};
            double span_t = k % 2 == 0 ? 0.75 : -0.75;
            GeodesicTrace tr = integrate(conn, x0, u0, span_t);
            double dev = collinearity_check(tr, span);
            if (dev >= 1e-6)
                return label.str() + " deviation " + std::to_string(dev);
        }
    }
    return {};
}

std::string check_velocity_family() {
    for (auto [b2, a, b] : std::vector<std::array<double, 3>>{
             {0, 1, 1}, {1, 0, 1}, {2, 1, -1}}) {
        VelocityFamily fam(b2, a, b);
        for (double span : {24.0, -24.0}) {
            auto path = fam.integrate_tau(span);
            double residual = fam.system_residual(path);
            if (residual >= 1e-10)
                return "system residual " + std::to_string(residual);
            if (b != 0) {
                double lo = 0, hi = 0;
                for (const auto& [t, tau] : path) {
                    lo = std::min(lo, tau);
                    hi = std::max(hi, tau);
                }
                if (hi - lo > 3.14159265358979323846 + 1e-9)
                    return "tau excursion " + std::to_string(hi - lo);
            }
        }
    }
    return {};
}

std::string check_classification_roundtrip() {
    std::mt19937 rng(77);
    for (const auto& label : catalogue_grid()) {
        TypeAModel base = canonical_model(label);
        std::vector<Num> expect = canonicalize_params(label.family, label.params);
        for (int k = 0; k < 10; ++k) {
            Mat2 A = random_gl2(rng);
            ClassifyResult r = classify(linear_transform(base, A));
            if (r.label.family != label.family)
                return label.str() + " classified as " + r.label.str();
            if (r.label.params.size() != expect.size())
                return label.str() + " param count mismatch";
            for (std::size_t p = 0; p < expect.size(); ++p)
                if (std::abs(r.label.params[p].to_double() -
                             expect[p].to_double()) > 1e-6)
                    return label.str() + " params came back as " + r.label.str();
            if (!r.span_verified) return label.str() + " span verification failed";
        }
    }
    return {};
}

std::string check_diagnostic_evidence() {
    std::vector<CanonicalLabel> models = {
        {Family::M1_1},
        {Family::M2_1, {Num::ratio(1, 3)}},
        {Family::M4_1, {Num(1)}},
        {Family::M5_1, {Num(1)}},
    };
    for (const auto& label : models) {
        ProbeReport report = completeness_probe(label, 64, 32.0);
        bool any_blowup = false;
        double best = 0;
        for (const auto& ray : report.rays) {
            if (ray.forward == Termination::BlowUp ||
                ray.backward == Termination::BlowUp) {
                any_blowup = true;
                best = std::max(best, ray.diagnostic_max);
            }
        }
        if (!any_blowup) return label.str() + " produced no blow-up ray";
        if (best <= 1e6)
            return label.str() + " diagnostic peaked at " + std::to_string(best);
    }
    return {};
}

}  // namespace

int main() {
    std::printf("afflab acceptance suite\n");
    run_criterion(1, "Ricci rank conformance", 1.0, check_rank_conformance);
    run_criterion(2, "quasi-Einstein annihilation", 5.0, check_annihilation);
    run_criterion(3, "solver/catalogue equivalence", 30.0, check_solver_catalogue);
    run_criterion(4, "flattening soundness", 10.0, check_flattening);
    run_criterion(5, "Q transformation law", 60.0, check_q_transformation);
    run_criterion(6, "affine map verification", 5.0, check_affine_maps);
    run_criterion(7, "integrator vs closed forms", 10.0,
                  check_integrator_vs_closed_forms);
    run_criterion(8, "completeness table reproduction", 120.0, check_completeness_table);
    run_criterion(9, "collinearity in affine charts", 60.0, check_collinearity);
    run_criterion(10, "reduced velocity family", 5.0, check_velocity_family);
    run_criterion(11, "classification round trip", 60.0,
                  check_classification_roundtrip);
    run_criterion(12, "blow-up diagnostic evidence", 10.0, check_diagnostic_evidence);
    if (g_failures) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
