#include "afflab/geodesics.hpp"

#include "afflab/errors.hpp"
#include "dopri5.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <thread>

namespace afflab {

namespace {

constexpr double kPi = 3.14159265358979323846;

using State4 = std::array<double, 4>;  // x1, x2, u1, u2

double velocity_norm4(const State4& y) { return std::hypot(y[2], y[3]); }

struct Rhs {
    const Connection* conn;
    bool constant;
    std::array<double, 6> g;  // constant coefficients when available

    explicit Rhs(const Connection& c) : conn(&c) {
        constant = c.is_constant();
        if (constant) g = c.eval(0, 0);
    }

    State4 operator()(const State4& y) const {
        std::array<double, 6> gg;
        if (constant) {
            gg = g;
        } else {
            try {
                gg = conn->eval(y[0], y[1]);
            } catch (const EvalOverflowError&) {
                return {NAN, NAN, NAN, NAN};
            }
        }
        const double u1 = y[2], u2 = y[3];
        // order: G11^1, G11^2, G12^1, G12^2, G22^1, G22^2
        double a1 = -(gg[0] * u1 * u1 + 2 * gg[2] * u1 * u2 + gg[4] * u2 * u2);
        double a2 = -(gg[1] * u1 * u1 + 2 * gg[3] * u1 * u2 + gg[5] * u2 * u2);
        return {u1, u2, a1, a2};
    }
};

}  // namespace

std::string termination_name(Termination t) {
    switch (t) {
        case Termination::ReachedTmax: return "ReachedTmax";
        case Termination::BlowUp: return "BlowUp";
        case Termination::StepCollapse: return "StepCollapse";
        case Termination::Overflow: return "Overflow";
    }
    return "?";
}

struct GeodesicTrace::Impl {
    std::vector<detail::DenseStep<4>> steps;
};

TraceSample GeodesicTrace::eval(double t) const {
    const auto& steps = impl_->steps;
    if (steps.empty()) return samples_.front();
    // Locate the step containing t (steps ordered along the signed span).
    const double dir = steps.front().h >= 0 ? 1.0 : -1.0;
    std::size_t lo = 0, hi = steps.size();
    while (hi - lo > 1) {
        std::size_t mid = (lo + hi) / 2;
        if (dir * (t - steps[mid].t0) >= 0) lo = mid;
        else hi = mid;
    }
    auto y = steps[lo].eval(t);
    return TraceSample{t, {y[0], y[1]}, {y[2], y[3]}};
}

GeodesicTrace integrate(const Connection& conn, const std::array<double, 2>& x0,
                        const std::array<double, 2>& u0, double t_span,
                        const IntegrateOptions& opts) {
    Rhs rhs(conn);
    auto res = detail::dopri5<4>(rhs, {x0[0], x0[1], u0[0], u0[1]}, t_span,
                                 opts.rel_tol, opts.abs_tol, opts.u_max,
                                 opts.h_min, opts.max_steps, &velocity_norm4);
    GeodesicTrace trace;
    auto impl = std::make_shared<GeodesicTrace::Impl>();
    impl->steps = std::move(res.steps);
    trace.impl_ = impl;
    for (std::size_t k = 0; k < res.ts.size(); ++k) {
        const auto& y = res.states[k];
        trace.samples_.push_back(
            TraceSample{res.ts[k], {y[0], y[1]}, {y[2], y[3]}});
    }
    switch (res.outcome) {
        case detail::StepOutcome::Done:
            trace.termination_ = Termination::ReachedTmax;
            break;
        case detail::StepOutcome::UMax:
            trace.termination_ = Termination::BlowUp;
            break;
        case detail::StepOutcome::StepCollapse:
        case detail::StepOutcome::MaxSteps:
            trace.termination_ = Termination::StepCollapse;
            break;
        case detail::StepOutcome::NonFinite:
            trace.termination_ = Termination::Overflow;
            break;
    }

    if (trace.termination_ == Termination::BlowUp) {
        // 1/|u| decays linearly toward the escape time of a quadratic system;
        // fit it over the trailing decade of samples.
        const auto& ss = trace.samples_;
        double ulast = std::hypot(ss.back().u[0], ss.back().u[1]);
        double sum_t = 0, sum_z = 0, sum_tt = 0, sum_tz = 0;
        int n = 0;
        for (auto it = ss.rbegin(); it != ss.rend(); ++it) {
            double unorm = std::hypot(it->u[0], it->u[1]);
            if (unorm < ulast / 10) break;
            double z = 1.0 / unorm;
            sum_t += it->t;
            sum_z += z;
            sum_tt += it->t * it->t;
            sum_tz += it->t * z;
            ++n;
        }
        double denom = n * sum_tt - sum_t * sum_t;
        if (n >= 3 && std::abs(denom) > 0) {
            double beta = (n * sum_tz - sum_t * sum_z) / denom;
            double alpha = (sum_z - beta * sum_t) / n;
            if (beta != 0.0) trace.blowup_estimate_ = -alpha / beta;
            else trace.blowup_estimate_ = ss.back().t;
        } else {
            trace.blowup_estimate_ = ss.back().t;
        }
    }

    // Reconstruction residual: differentiate the dense output and compare
    // with the field, relative to the local acceleration scale.
    double worst = 0;
    const auto& steps = impl->steps;
    std::size_t stride = std::max<std::size_t>(1, steps.size() / 8000);
    for (std::size_t k = 0; k < steps.size(); k += stride) {
        for (double th : {0.25, 0.5, 0.75}) {
            double t = steps[k].t0 + th * steps[k].h;
            auto y = steps[k].eval(t);
            auto yd = steps[k].eval_derivative(t);
            auto f = rhs(y);
            if (!std::isfinite(f[0])) continue;
            double scale = std::max({1.0, std::abs(f[2]), std::abs(f[3]),
                                     std::abs(y[2]), std::abs(y[3])});
            double r = std::max({std::abs(yd[0] - f[0]), std::abs(yd[1] - f[1]),
                                 std::abs(yd[2] - f[2]), std::abs(yd[3] - f[3])});
            worst = std::max(worst, r / scale);
        }
    }
    trace.residual_max_ = worst;
    return trace;
}

// ---------------------------------------------------------------------------
// Closed-form catalogue

namespace {

using Curve = std::function<std::array<double, 2>(double)>;

ClosedFormGeodesic make_curve(GeodesicCase id, Connection model, double t_min,
                              double t_max, Curve pos, Curve vel, Curve acc) {
    ClosedFormGeodesic c;
    c.id = id;
    c.model = std::move(model);
    c.t_min = t_min;
    c.t_max = t_max;
    c.pos = std::move(pos);
    c.vel = std::move(vel);
    c.acc = std::move(acc);
    return c;
}

Connection lift_family(Family f, std::vector<Num> params = {}) {
    return Connection::lift(canonical_model(CanonicalLabel(f, std::move(params))));
}

double need_param(const std::vector<double>& params, std::size_t k,
                  const char* what) {
    if (k >= params.size())
        throw ParamDomainError(std::string("missing parameter: ") + what);
    return params[k];
}

}  // namespace

ClosedFormGeodesic closed_form_geodesic(GeodesicCase id,
                                        const std::vector<double>& params) {
    const double inf = std::numeric_limits<double>::infinity();
    switch (id) {
        case GeodesicCase::M11_log:
            return make_curve(
                id, lift_family(Family::M1_1), 0, inf,
                [](double t) { return std::array<double, 2>{0, std::log(t) / 2}; },
                [](double t) { return std::array<double, 2>{0, 1 / (2 * t)}; },
                [](double t) {
                    return std::array<double, 2>{0, -1 / (2 * t * t)};
                });
        case GeodesicCase::M21_log:
        case GeodesicCase::M31_log: {
            double c1 = need_param(params, 0, "c1");
            if (std::abs(1 + 2 * c1) < 1e-12)
                throw ParamDomainError("log curve needs c1 != -1/2");
            double k = 1 / (1 + 2 * c1);
            Family fam = id == GeodesicCase::M21_log ? Family::M2_1 : Family::M3_1;
            return make_curve(
                id, lift_family(fam, {Num::approx(c1)}), 0, inf,
                [k](double t) { return std::array<double, 2>{0, k * std::log(t)}; },
                [k](double t) { return std::array<double, 2>{0, k / t}; },
                [k](double t) { return std::array<double, 2>{0, -k / (t * t)}; });
        }
        case GeodesicCase::M31Half_exp: {
            double a = need_param(params, 0, "a"), b = need_param(params, 1, "b");
            Connection model = lift_family(Family::M3_1, {Num::ratio(-1, 2)});
            if (b == 0.0)
                return make_curve(
                    id, std::move(model), -inf, inf,
                    [a](double t) { return std::array<double, 2>{a * t, 0}; },
                    [a](double) { return std::array<double, 2>{a, 0}; },
                    [](double) { return std::array<double, 2>{0, 0}; });
            return make_curve(
                id, std::move(model), -inf, inf,
                [a, b](double t) {
                    return std::array<double, 2>{a / b * (std::exp(b * t) - 1), b * t};
                },
                [a, b](double t) {
                    return std::array<double, 2>{a * std::exp(b * t), b};
                },
                [a, b](double t) {
                    return std::array<double, 2>{a * b * std::exp(b * t), 0};
                });
        }
        case GeodesicCase::M21Half_log:
            return make_curve(
                id, lift_family(Family::M2_1, {Num::ratio(-1, 2)}), 0, inf,
                [](double t) { return std::array<double, 2>{-std::log(t), 0}; },
                [](double t) { return std::array<double, 2>{-1 / t, 0}; },
                [](double t) { return std::array<double, 2>{1 / (t * t), 0}; });
        case GeodesicCase::M41_logsq: {
            double c = need_param(params, 0, "c");
            return make_curve(
                id, lift_family(Family::M4_1, {Num::approx(c)}), 0, inf,
                [c](double t) {
                    double L = std::log(t);
                    return std::array<double, 2>{-c / 8 * L * L, L / 2};
                },
                [c](double t) {
                    double L = std::log(t);
                    return std::array<double, 2>{-c / 4 * L / t, 1 / (2 * t)};
                },
                [c](double t) {
                    double L = std::log(t);
                    return std::array<double, 2>{-c / 4 * (1 - L) / (t * t),
                                                 -1 / (2 * t * t)};
                });
        }
        case GeodesicCase::M51_logcos: {
            double c = need_param(params, 0, "c");
            if (c == 0.0) throw ParamDomainError("log-cos curve needs c != 0");
            // s = log(t)/(2c) must stay in (-pi/2, pi/2).
            double lo = std::exp(-std::abs(c) * kPi);
            double hi = std::exp(std::abs(c) * kPi);
            return make_curve(
                id, lift_family(Family::M5_1, {Num::approx(c)}), lo, hi,
                [c](double t) {
                    double s = std::log(t) / (2 * c);
                    return std::array<double, 2>{
                        std::log(std::cos(s)) + std::log(t) / 2, s};
                },
                [c](double t) {
                    double s = std::log(t) / (2 * c);
                    double sd = 1 / (2 * c * t);
                    return std::array<double, 2>{(c - std::tan(s)) * sd, sd};
                },
                [c](double t) {
                    double s = std::log(t) / (2 * c);
                    double sd = 1 / (2 * c * t);
                    double sdd = -1 / (2 * c * t * t);
                    double sec2 = 1 / std::pow(std::cos(s), 2);
                    return std::array<double, 2>{
                        -sec2 * sd * sd + (c - std::tan(s)) * sdd, sdd};
                });
        }
        case GeodesicCase::M51Zero_logcos:
            return make_curve(
                id, lift_family(Family::M5_1, {Num(0)}), -kPi / 2, kPi / 2,
                [](double t) {
                    return std::array<double, 2>{std::log(std::cos(t)), t};
                },
                [](double t) { return std::array<double, 2>{-std::tan(t), 1}; },
                [](double t) {
                    return std::array<double, 2>{-1 / std::pow(std::cos(t), 2), 0};
                });
        case GeodesicCase::N_sin: {
            double a = need_param(params, 0, "a"), b = need_param(params, 1, "b");
            Connection model = Connection::geometry_n();
            if (b == 0.0)
                return make_curve(
                    id, std::move(model), -inf, inf,
                    [a](double t) { return std::array<double, 2>{a * t, 0}; },
                    [a](double) { return std::array<double, 2>{a, 0}; },
                    [](double) { return std::array<double, 2>{0, 0}; });
            return make_curve(
                id, std::move(model), -inf, inf,
                [a, b](double t) {
                    return std::array<double, 2>{a / b * std::sin(b * t), b * t};
                },
                [a, b](double t) {
                    return std::array<double, 2>{a * std::cos(b * t), b};
                },
                [a, b](double t) {
                    return std::array<double, 2>{-a * b * std::sin(b * t), 0};
                });
        }
        case GeodesicCase::M12_ray: {
            double a1 = need_param(params, 0, "a1"), a2 = need_param(params, 1, "a2");
            double den1 = 1 + a1 - a2, den2 = 1 + a2 - a1;
            // (1+a1-a2) + (1+a2-a1) = 2, so one denominator is usable.
            double vx, vy;
            if (std::abs(den1) >= std::abs(den2)) {
                vx = (1 - a2) / den1;
                vy = a1 / den1;
            } else {
                vx = a2 / den2;
                vy = (1 - a1) / den2;
            }
            return make_curve(
                id, lift_family(Family::M1_2, {Num::approx(a1), Num::approx(a2)}),
                0, inf,
                [vx, vy](double t) {
                    double L = std::log(t);
                    return std::array<double, 2>{vx * L, vy * L};
                },
                [vx, vy](double t) { return std::array<double, 2>{vx / t, vy / t}; },
                [vx, vy](double t) {
                    return std::array<double, 2>{-vx / (t * t), -vy / (t * t)};
                });
        }
        case GeodesicCase::M22_ray: {
            double b1 = need_param(params, 0, "b1"), b2 = need_param(params, 1, "b2");
            if (std::abs(1 + b1) < 1e-12)
                throw ParamDomainError("log ray needs b1 != -1");
            double k = 1 / (1 + b1);
            return make_curve(
                id, lift_family(Family::M2_2, {Num::approx(b1), Num::approx(b2)}),
                0, inf,
                [k](double t) { return std::array<double, 2>{k * std::log(t), 0}; },
                [k](double t) { return std::array<double, 2>{k / t, 0}; },
                [k](double t) { return std::array<double, 2>{-k / (t * t), 0}; });
        }
        case GeodesicCase::M32_ray:
        case GeodesicCase::M42_ray: {
            double p = need_param(params, 0, id == GeodesicCase::M32_ray ? "c2" : "eps");
            Connection model =
                id == GeodesicCase::M32_ray
                    ? lift_family(Family::M3_2, {Num::approx(p)})
                    : lift_family(Family::M4_2, {Num(p > 0 ? 1 : -1)});
            return make_curve(
                id, std::move(model), 0, inf,
                [](double t) { return std::array<double, 2>{std::log(t) / 2, 0}; },
                [](double t) { return std::array<double, 2>{1 / (2 * t), 0}; },
                [](double t) { return std::array<double, 2>{-1 / (2 * t * t), 0}; });
        }
    }
    throw ParamDomainError("unknown geodesic case");
}

double geodesic_residual(const Connection& conn,
                         const std::function<std::array<double, 2>(double)>& pos,
                         const std::function<std::array<double, 2>(double)>& vel,
                         const std::function<std::array<double, 2>(double)>& acc,
                         const std::vector<double>& ts) {
    double worst = 0;
    for (double t : ts) {
        auto x = pos(t);
        auto u = vel(t);
        auto a = acc(t);
        auto g = conn.eval(x[0], x[1]);
        double r1 = a[0] + g[0] * u[0] * u[0] + 2 * g[2] * u[0] * u[1] +
                    g[4] * u[1] * u[1];
        double r2 = a[1] + g[1] * u[0] * u[0] + 2 * g[3] * u[0] * u[1] +
                    g[5] * u[1] * u[1];
        worst = std::max({worst, std::abs(r1), std::abs(r2)});
    }
    return worst;
}

double geodesic_residual(const ClosedFormGeodesic& curve,
                         const std::vector<double>& ts) {
    return geodesic_residual(curve.model, curve.pos, curve.vel, curve.acc, ts);
}

// ---------------------------------------------------------------------------
// Diagnostics

std::vector<std::array<double, 3>> ricci_diagnostic(const TypeAModel& model,
                                                 const GeodesicTrace& trace) {
    auto v = ricci_type_a(model).constant_values();
    double r11 = v[0].to_double(), r12 = v[1].to_double(), r22 = v[2].to_double();
    std::vector<std::array<double, 3>> out;
    out.reserve(trace.samples().size());
    for (const auto& s : trace.samples()) {
        double d1 = r11 * s.u[0] + r12 * s.u[1];
        double d2 = r12 * s.u[0] + r22 * s.u[1];
        out.push_back({s.t, std::abs(d1), std::abs(d2)});
    }
    return out;
}

double collinearity_check(const GeodesicTrace& trace, const FuncSpan& span) {
    AffineFactorization fac = factor_affine_chart(span);
    std::vector<Eigen::Vector2d> pts;
    for (const auto& s : trace.samples())
        pts.emplace_back(fac.phi1.eval(s.x[0], s.x[1]),
                         fac.phi2.eval(s.x[0], s.x[1]));
    if (pts.size() < 3) return 0.0;
    Eigen::Vector2d mean = Eigen::Vector2d::Zero();
    for (const auto& p : pts) mean += p;
    mean /= double(pts.size());
    Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
    for (const auto& p : pts) cov += (p - mean) * (p - mean).transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(cov);
    Eigen::Vector2d normal = es.eigenvectors().col(0);  // smallest eigenvalue
    double worst = 0;
    for (const auto& p : pts) worst = std::max(worst, std::abs(normal.dot(p - mean)));
    return worst;
}

// ---------------------------------------------------------------------------
// VelocityFamily

VelocityFamily::VelocityFamily(double b2, double a, double b)
    : b2_(b2), a_(a), b_(b) {
    if (a == 0.0 && b == 0.0)
        throw ParamDomainError("velocity family needs (a,b) != (0,0)");
}

double VelocityFamily::u1_at(double tau) const {
    double A = 0.5 * (-2 * a_ * b2_ + b_ * b2_ * b2_ + b_);
    return std::exp(-b2_ * tau) * (A * std::sin(tau) + a_ * std::cos(tau));
}

double VelocityFamily::u2_at(double tau) const {
    double B = b_ * b2_ - 2 * a_;
    return std::exp(-b2_ * tau) * (B * std::sin(tau) + b_ * std::cos(tau));
}

double VelocityFamily::du1_at(double tau) const {
    double A = 0.5 * (-2 * a_ * b2_ + b_ * b2_ * b2_ + b_);
    return std::exp(-b2_ * tau) *
           (-b2_ * (A * std::sin(tau) + a_ * std::cos(tau)) + A * std::cos(tau) -
            a_ * std::sin(tau));
}

double VelocityFamily::du2_at(double tau) const {
    double B = b_ * b2_ - 2 * a_;
    return std::exp(-b2_ * tau) *
           (-b2_ * (B * std::sin(tau) + b_ * std::cos(tau)) + B * std::cos(tau) -
            b_ * std::sin(tau));
}

std::vector<std::array<double, 2>> VelocityFamily::integrate_tau(double t_span,
                                                               double tol) const {
    if (constant_branch()) {
        // u2 = 0 initially forces the constant solution, tau stays put.
        return {{0.0, 0.0}, {t_span, 0.0}};
    }
    auto rhs = [this](const std::array<double, 1>& y) {
        return std::array<double, 1>{u2_at(y[0])};
    };
    auto res = detail::dopri5<1>(rhs, {0.0}, t_span, tol, tol, 1e300, 1e-14,
                                 1000000, nullptr);
    std::vector<std::array<double, 2>> path;
    for (std::size_t k = 0; k < res.ts.size(); ++k)
        path.push_back({res.ts[k], res.states[k][0]});
    return path;
}

double VelocityFamily::system_residual(
    const std::vector<std::array<double, 2>>& path) const {
    double worst = 0;
    for (const auto& [t, tau] : path) {
        double u1 = constant_branch() ? a_ : u1_at(tau);
        double u2 = constant_branch() ? 0.0 : u2_at(tau);
        double taud = u2;  // tau' = u2(tau)
        double u1d = constant_branch() ? 0.0 : du1_at(tau) * taud;
        double u2d = constant_branch() ? 0.0 : du2_at(tau) * taud;
        double r1 = u1d + 2 * b2_ * u1 * u2 - 0.5 * (1 + b2_ * b2_) * u2 * u2;
        double r2 = u2d + 2 * u1 * u2;
        worst = std::max({worst, std::abs(r1), std::abs(r2)});
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Probe and verdict

std::vector<std::array<double, 2>> singular_directions(const CanonicalLabel& label) {
    auto unit = [](double x, double y) {
        double n = std::hypot(x, y);
        return std::array<double, 2>{x / n, y / n};
    };
    switch (label.family) {
        case Family::M1_1:
        case Family::M4_1:
            return {unit(0, 1)};
        case Family::M2_1: {
            double c1 = label.params.at(0).to_double();
            if (std::abs(c1 + 0.5) < 1e-12) return {unit(-1, 0)};
            return {unit(0, 1), unit(-1, 0)};
        }
        case Family::M3_1: {
            double c1 = label.params.at(0).to_double();
            if (std::abs(c1 + 0.5) < 1e-12) return {};
            return {unit(0, 1)};
        }
        case Family::M5_1: {
            double c = label.params.at(0).to_double();
            if (c == 0.0) return {unit(0, 1)};
            return {unit(c, 1), unit(0, 1)};
        }
        case Family::M1_2: {
            double a1 = label.params.at(0).to_double();
            double a2 = label.params.at(1).to_double();
            std::vector<std::array<double, 2>> dirs;
            if (std::abs(1 + a1 - a2) > 1e-9) dirs.push_back(unit(1 - a2, a1));
            if (std::abs(1 + a2 - a1) > 1e-9) dirs.push_back(unit(a2, 1 - a1));
            return dirs;
        }
        case Family::M2_2: {
            double b1 = label.params.at(0).to_double();
            if (std::abs(b1 + 1) < 1e-12) return {};
            return {unit(1, 0)};
        }
        case Family::M3_2:
        case Family::M4_2:
            return {unit(1, 0)};
        default:
            return {};
    }
}

ProbeReport completeness_probe(const Connection& conn, int n_rays, double t_max,
                               const IntegrateOptions& opts,
                               const std::optional<CanonicalLabel>& label) {
    if (n_rays < 8) throw ParamDomainError("probe needs at least 8 rays");
    std::vector<std::array<double, 2>> dirs;
    for (int k = 0; k < n_rays; ++k) {
        double th = 2 * kPi * k / n_rays;
        dirs.push_back({std::cos(th), std::sin(th)});
    }
    if (label)
        for (const auto& d : singular_directions(*label)) {
            bool dup = false;
            for (const auto& e : dirs)
                if (std::hypot(d[0] - e[0], d[1] - e[1]) < 1e-12) dup = true;
            if (!dup) dirs.push_back(d);
        }

    auto model = conn.as_type_a();
    ProbeReport report;
    report.label = label;
    report.rays.resize(dirs.size());

    auto run_ray = [&](std::size_t idx) {
        RayResult out;
        out.u0 = dirs[idx];
        GeodesicTrace fwd = integrate(conn, {0, 0}, dirs[idx], t_max, opts);
        GeodesicTrace bwd = integrate(conn, {0, 0}, dirs[idx], -t_max, opts);
        out.forward = fwd.termination();
        out.backward = bwd.termination();
        out.forward_end = fwd.termination() == Termination::BlowUp
                              ? fwd.blowup_estimate()
                              : fwd.t_end();
        out.backward_end = bwd.termination() == Termination::BlowUp
                               ? bwd.blowup_estimate()
                               : bwd.t_end();
        if (model) {
            for (const auto& row : ricci_diagnostic(*model, fwd))
                out.diagnostic_max = std::max({out.diagnostic_max, row[1], row[2]});
            for (const auto& row : ricci_diagnostic(*model, bwd))
                out.diagnostic_max = std::max({out.diagnostic_max, row[1], row[2]});
        }
        report.rays[idx] = out;
    };

    unsigned workers = std::min<unsigned>(std::thread::hardware_concurrency(),
                                          unsigned(dirs.size()));
    if (workers <= 1) {
        for (std::size_t k = 0; k < dirs.size(); ++k) run_ray(k);
    } else {
        std::vector<std::thread> pool;
        std::size_t chunk = (dirs.size() + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            std::size_t lo = w * chunk, hi = std::min(dirs.size(), lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back([&, lo, hi]() {
                for (std::size_t k = lo; k < hi; ++k) run_ray(k);
            });
        }
        for (auto& th : pool) th.join();
    }

    report.all_complete = true;
    for (const auto& ray : report.rays)
        if (ray.forward != Termination::ReachedTmax ||
            ray.backward != Termination::ReachedTmax)
            report.all_complete = false;
    if (label) {
        CompletenessVerdict v = verdict(*label);
        report.agrees_with_table =
            (v.kind == CompletenessKind::Complete) == report.all_complete;
    }
    return report;
}

ProbeReport completeness_probe(const CanonicalLabel& label, int n_rays,
                               double t_max, const IntegrateOptions& opts) {
    return completeness_probe(canonical_connection(label), n_rays, t_max, opts,
                              label);
}

std::string completeness_kind_name(CompletenessKind k) {
    switch (k) {
        case CompletenessKind::Complete: return "Complete";
        case CompletenessKind::Completable: return "Completable";
        case CompletenessKind::EssentiallyIncomplete: return "EssentiallyIncomplete";
        case CompletenessKind::IncompleteUnresolved: return "IncompleteUnresolved";
    }
    return "?";
}

CompletenessVerdict verdict(const CanonicalLabel& label) {
    validate_params(label.family, label.params);
    auto param_is = [&](std::size_t k, double v) {
        return std::abs(label.params.at(k).to_double() - v) < 1e-9;
    };
    CompletenessVerdict out;
    auto complete = [&](const char* why) {
        out.kind = CompletenessKind::Complete;
        out.evidence.push_back(why);
    };
    auto completable = [&](CanonicalLabel target, const char* why) {
        out.kind = CompletenessKind::Completable;
        out.target = std::move(target);
        out.evidence.push_back(why);
    };
    auto incomplete = [&](const char* why) {
        out.kind = CompletenessKind::EssentiallyIncomplete;
        out.evidence.push_back(why);
    };
    switch (label.family) {
        case Family::M0_0:
            complete("flat plane; geodesics are affine lines");
            break;
        case Family::M4_0:
            complete("globally affine-diffeomorphic to the flat plane");
            break;
        case Family::M1_0:
        case Family::M2_0:
        case Family::M3_0:
            completable(CanonicalLabel(Family::M0_0),
                        "proper affine embedding into the flat plane");
            break;
        case Family::M5_0:
            out.kind = CompletenessKind::IncompleteUnresolved;
            out.evidence.push_back(
                "the map into the flat plane is an immersion, not an embedding");
            break;
        case Family::M1_1:
            incomplete("log-parametrized geodesic escapes in finite time with "
                       "divergent Ricci contraction");
            break;
        case Family::M2_1:
            if (param_is(0, -0.5))
                completable(CanonicalLabel(Family::M3_1, {Num::ratio(-1, 2)}),
                            "embeds into the complete rank-1 model via "
                            "(exp(-x1), x2)");
            else
                incomplete("log-parametrized geodesic escapes in finite time with "
                           "divergent Ricci contraction");
            break;
        case Family::M3_1:
            if (param_is(0, -0.5))
                complete("the origin fan ((a/b)(e^{bt}-1), bt) covers all "
                         "parameter time");
            else
                incomplete("log-parametrized geodesic escapes in finite time with "
                           "divergent Ricci contraction");
            break;
        case Family::M4_1:
            incomplete("log-parametrized geodesic escapes in finite time with "
                       "divergent Ricci contraction");
            break;
        case Family::M5_1:
            if (param_is(0, 0.0))
                completable(CanonicalLabel(Family::N),
                            "embeds into the complete surface N via (exp(x1), x2)");
            else
                incomplete("log-cos geodesic escapes in finite time with "
                           "divergent Ricci contraction");
            break;
        case Family::M1_2:
        case Family::M3_2:
        case Family::M4_2:
            incomplete("log-ray geodesic has unbounded velocity at finite "
                       "parameter time");
            break;
        case Family::M2_2:
            if (param_is(0, -1.0))
                complete("velocities stay bounded along every geodesic; the "
                         "reparametrization stays monotone");
            else
                incomplete("log-ray geodesic has unbounded velocity at finite "
                           "parameter time");
            break;
        case Family::N:
            complete("the origin fan ((a/b) sin(bt), bt) covers all parameter "
                     "time");
            break;
    }
    return out;
}

}  // namespace afflab
