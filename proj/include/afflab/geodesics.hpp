#pragma once

#include "afflab/catalogue.hpp"
#include "afflab/connection.hpp"
#include "afflab/func_span.hpp"

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace afflab {

enum class Termination { ReachedTmax, BlowUp, StepCollapse, Overflow };
std::string termination_name(Termination t);

struct TraceSample {
    double t;
    std::array<double, 2> x, u;
};

struct IntegrateOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    // Velocity escape threshold for declaring finite-time blow-up. Complete
    // catalogue geodesics reach |u| ~ e^32 ~ 8e13 at the default horizon, so
    // the cut sits well above that while still far below overflow.
    double u_max = 1e15;
    double h_min = 1e-14;
    std::size_t max_steps = 4000000;
};

// A geodesic solution with dense output. Samples are the accepted step
// endpoints; eval() interpolates anywhere in the achieved span.
class GeodesicTrace {
public:
    const std::vector<TraceSample>& samples() const { return samples_; }
    Termination termination() const { return termination_; }
    // Finite escape-time estimate; only meaningful for BlowUp.
    double blowup_estimate() const { return blowup_estimate_; }
    // sup over reconstruction points of the equation residual, relative to
    // the local acceleration scale.
    double residual_max() const { return residual_max_; }
    double t_begin() const { return samples_.front().t; }
    double t_end() const { return samples_.back().t; }

    // Interpolated (x, u) inside the achieved span.
    TraceSample eval(double t) const;

private:
    friend GeodesicTrace integrate(const Connection&, const std::array<double, 2>&,
                                   const std::array<double, 2>&, double,
                                   const IntegrateOptions&);
    struct Impl;
    std::shared_ptr<const Impl> impl_;
    std::vector<TraceSample> samples_;
    Termination termination_ = Termination::ReachedTmax;
    double blowup_estimate_ = 0;
    double residual_max_ = 0;
};

// Integrates the geodesic system xdot = u, udot^i = -G_jk^i(x) u^j u^k from
// x0, u0 over the signed parameter span.
GeodesicTrace integrate(const Connection& conn, const std::array<double, 2>& x0,
                        const std::array<double, 2>& u0, double t_span,
                        const IntegrateOptions& opts = {});

// ---------------------------------------------------------------------------
// Closed-form geodesics catalogued from the classification families

enum class GeodesicCase {
    M11_log,         // (0, log(t)/2) on M_1^1
    M21_log,         // (0, log(t)/(1+2c1)) on M_2^1(c1), c1 != -1/2
    M31_log,         // same curve on M_3^1(c1)
    M31Half_exp,     // ((a/b)(e^{bt}-1), bt) on M_3^1(-1/2)
    M21Half_log,     // (-log(t), 0) on M_2^1(-1/2)
    M41_logsq,       // (-(c/8)log^2(t), log(t)/2) on M_4^1(c)
    M51_logcos,      // (log cos(log t/(2c)) + log(t)/2, log(t)/(2c)) on M_5^1(c)
    M51Zero_logcos,  // (log cos t, t) on M_5^1(0)
    N_sin,           // ((a/b) sin(bt), bt) on N
    M12_ray,         // log(t) * v on M_1^2(a1,a2)
    M22_ray,         // (log(t), 0)/(1+b1) on M_2^2(b1,b2), b1 != -1
    M32_ray,         // (log(t), 0)/2 on M_3^2(c2)
    M42_ray,         // (log(t), 0)/2 on M_4^2(+-1)
};

struct ClosedFormGeodesic {
    GeodesicCase id;
    Connection model;
    double t_min, t_max;  // open validity interval
    std::function<std::array<double, 2>(double)> pos, vel, acc;
};

// Builds the closed-form curve; params are case specific (see GeodesicCase).
// Throws ParamDomainError on out-of-domain parameters.
ClosedFormGeodesic closed_form_geodesic(GeodesicCase id,
                                        const std::vector<double>& params = {});

// sup over the sample parameters of |sigma'' + G(sigma)(sigma', sigma')|.
double geodesic_residual(const Connection& conn,
                         const std::function<std::array<double, 2>(double)>& pos,
                         const std::function<std::array<double, 2>(double)>& vel,
                         const std::function<std::array<double, 2>(double)>& acc,
                         const std::vector<double>& ts);
double geodesic_residual(const ClosedFormGeodesic& curve,
                         const std::vector<double>& ts);

// ---------------------------------------------------------------------------
// Diagnostics

// Per-sample contraction magnitudes (t, |rho(u, d1)|, |rho(u, d2)|).
std::vector<std::array<double, 3>> ricci_diagnostic(const TypeAModel& model,
                                                 const GeodesicTrace& trace);

// Maps the trace through the affine chart of the span and returns the
// maximal perpendicular deviation from the total-least-squares line.
double collinearity_check(const GeodesicTrace& trace, const FuncSpan& span);

// ---------------------------------------------------------------------------
// The velocity family of the rank-2 complete models

// Closed velocity forms u1(tau), u2(tau) solving the reduced geodesic system
// of M_2^2(-1, b2) together with the reparametrization ODE tau' = u2(tau),
// tau(0) = 0.
class VelocityFamily {
public:
    // Throws ParamDomainError when (a, b) = (0, 0).
    VelocityFamily(double b2, double a, double b);

    double b2() const { return b2_; }
    bool constant_branch() const { return b_ == 0.0; }

    double u1_at(double tau) const;
    double u2_at(double tau) const;
    double du1_at(double tau) const;
    double du2_at(double tau) const;

    // Integrates tau' = u2(tau) over the signed span; samples are (t, tau).
    std::vector<std::array<double, 2>> integrate_tau(double t_span,
                                                     double tol = 1e-12) const;
    // Largest residual of the reduced system along the integrated path.
    double system_residual(const std::vector<std::array<double, 2>>& path) const;

private:
    double b2_, a_, b_;
};

// ---------------------------------------------------------------------------
// Completeness probing and the classification verdict

struct RayResult {
    std::array<double, 2> u0;
    Termination forward = Termination::ReachedTmax;
    Termination backward = Termination::ReachedTmax;
    double forward_end = 0, backward_end = 0;  // achieved parameter values
    double diagnostic_max = 0;                 // only for Type A models
};

struct ProbeReport {
    std::optional<CanonicalLabel> label;
    std::vector<RayResult> rays;
    bool all_complete = false;
    std::optional<bool> agrees_with_table;
};

// Integrates a fan of unit-speed rays from the origin in both directions,
// n equispaced angles plus the family's catalogued singular directions.
// Requires n >= 8.
ProbeReport completeness_probe(const Connection& conn, int n_rays = 64,
                               double t_max = 32.0,
                               const IntegrateOptions& opts = {},
                               const std::optional<CanonicalLabel>& label = {});
ProbeReport completeness_probe(const CanonicalLabel& label, int n_rays = 64,
                               double t_max = 32.0,
                               const IntegrateOptions& opts = {});

enum class CompletenessKind {
    Complete,
    Completable,
    EssentiallyIncomplete,
    IncompleteUnresolved,
};
std::string completeness_kind_name(CompletenessKind k);

struct CompletenessVerdict {
    CompletenessKind kind = CompletenessKind::Complete;
    std::optional<CanonicalLabel> target;  // completion geometry, if any
    std::vector<std::string> evidence;
};

// The classification verdict for a catalogue label.
CompletenessVerdict verdict(const CanonicalLabel& label);

// Unit directions of the catalogued singular geodesics for the family.
std::vector<std::array<double, 2>> singular_directions(const CanonicalLabel& label);

}  // namespace afflab
