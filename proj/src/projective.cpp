#include "afflab/projective.hpp"

#include "afflab/errors.hpp"
#include "poly_util.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>

namespace afflab {

// ---------------------------------------------------------------------------
// Mat2

Mat2 Mat2::identity() {
    Mat2 a;
    a.m[0][0] = Num(1);
    a.m[1][1] = Num(1);
    return a;
}

Mat2 Mat2::diag(const Num& d1, const Num& d2) {
    Mat2 a;
    a.m[0][0] = d1;
    a.m[1][1] = d2;
    return a;
}

Mat2 Mat2::from_columns(const std::array<Num, 2>& c1,
                        const std::array<Num, 2>& c2) {
    Mat2 a;
    a.m[0][0] = c1[0];
    a.m[1][0] = c1[1];
    a.m[0][1] = c2[0];
    a.m[1][1] = c2[1];
    return a;
}

Mat2 Mat2::inverse() const {
    Num dt = det();
    bool singular = dt.is_exact() ? dt.is_zero() : std::abs(dt.to_double()) < 1e-12;
    if (singular) throw SingularMatrixError("matrix is singular");
    Mat2 inv;
    inv.m[0][0] = m[1][1] / dt;
    inv.m[0][1] = -m[0][1] / dt;
    inv.m[1][0] = -m[1][0] / dt;
    inv.m[1][1] = m[0][0] / dt;
    return inv;
}

Mat2 Mat2::transpose() const {
    Mat2 t;
    t.m[0][0] = m[0][0];
    t.m[0][1] = m[1][0];
    t.m[1][0] = m[0][1];
    t.m[1][1] = m[1][1];
    return t;
}

Mat2 Mat2::operator*(const Mat2& o) const {
    Mat2 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            r.m[i][j] = m[i][0] * o.m[0][j] + m[i][1] * o.m[1][j];
    return r;
}

std::array<double, 2> Mat2::apply(const std::array<double, 2>& v) const {
    return {m[0][0].to_double() * v[0] + m[0][1].to_double() * v[1],
            m[1][0].to_double() * v[0] + m[1][1].to_double() * v[1]};
}

std::array<Num, 2> Mat2::apply(const std::array<Num, 2>& v) const {
    return {m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]};
}

bool Mat2::all_exact() const {
    for (const auto& row : m)
        for (const auto& v : row)
            if (!v.is_exact()) return false;
    return true;
}

bool Mat2::is_identity() const {
    return m[0][0] == Num(1) && m[1][1] == Num(1) && m[0][1].is_zero() &&
           m[1][0].is_zero();
}

// ---------------------------------------------------------------------------
// Projective change and linear transformation

TypeAModel projective_change(const TypeAModel& model, const ProjectivePotential& w) {
    TypeAModel g;
    g.gamma[0] = model.gamma[0] + w.w1 + w.w1;  // G11^1 + 2 w1
    g.gamma[1] = model.gamma[1];                // G11^2
    g.gamma[2] = model.gamma[2] + w.w2;         // G12^1 + w2
    g.gamma[3] = model.gamma[3] + w.w1;         // G12^2 + w1
    g.gamma[4] = model.gamma[4];                // G22^1
    g.gamma[5] = model.gamma[5] + w.w2 + w.w2;  // G22^2 + 2 w2
    return g;
}

TypeAModel linear_transform(const TypeAModel& model, const Mat2& A) {
    Mat2 inv = A.inverse();  // throws on singular input
    TypeAModel out;
    for (int i = 1; i <= 2; ++i)
        for (int j = i; j <= 2; ++j)
            for (int k = 1; k <= 2; ++k) {
                Num acc(0);
                for (int p = 1; p <= 2; ++p)
                    for (int q = 1; q <= 2; ++q)
                        for (int mm = 1; mm <= 2; ++mm)
                            acc += A.m[k - 1][mm - 1] * inv.m[p - 1][i - 1] *
                                   inv.m[q - 1][j - 1] * model.christoffel(p, q, mm);
                int pair = (i == 1 && j == 1) ? 0 : (i == 1 && j == 2) ? 1 : 2;
                out.gamma[pair * 2 + (k - 1)] = acc;
            }
    return out;
}

// ---------------------------------------------------------------------------
// Flattening

FlattenResult flatten(const TypeAModel& model) {
    FlattenResult res;
    res.prescale = Mat2::identity();
    const Num& b = model.g11_2();
    const bool b_zero = b.is_exact() ? b.is_zero() : std::abs(b.to_double()) < 1e-12;

    if (b_zero) {
        res.case_id = 2;
        res.prescaled = model;
        res.w = ProjectivePotential{model.g12_2() - model.g11_1(), -model.g12_1()};
        res.flat = projective_change(model, res.w);
        return res;
    }

    res.case_id = 1;
    const bool unit = b.is_exact() ? b == Num(1)
                                   : std::abs(b.to_double() - 1.0) < 1e-15;
    if (unit) {
        res.prescaled = model;
    } else {
        res.prescale = Mat2::diag(Num(1), Num(1) / b);
        res.prescaled = linear_transform(model, res.prescale);
    }
    const Num &a = res.prescaled.g11_1(), &c = res.prescaled.g12_1(),
              &d = res.prescaled.g12_2(), &e = res.prescaled.g22_1(),
              &f = res.prescaled.g22_2();

    // With w2 chosen to kill g_rho11, g_rho12 is a monic cubic in -w1:
    //   g_rho12(w1) = (K - a w1 - w1^2)(d + w1) - e,  K = 2c - a d + d^2 - f.
    Num K = c + c - a * d + d * d - f;
    std::vector<Num> cubic{-(K * d - e), -(K - a * d), a + d, Num(1)};

    std::vector<double> coeffs;
    for (const auto& v : cubic) coeffs.push_back(v.to_double());
    auto roots = detail::poly_roots(coeffs);
    double best_w1 = 0.0, best_w2 = 0.0;
    bool found = false;
    for (const auto& r : roots) {
        if (std::abs(r.imag()) > 1e-8 * (1 + std::abs(r.real()))) continue;
        double w1 = r.real();
        double w2 = (K.to_double() - c.to_double()) - a.to_double() * w1 - w1 * w1;
        if (!found || std::abs(w1) < std::abs(best_w1) - 1e-12 ||
            (std::abs(std::abs(w1) - std::abs(best_w1)) <= 1e-12 && w2 < best_w2)) {
            best_w1 = w1;
            best_w2 = w2;
            found = true;
        }
    }
    if (!found)
        throw SingularMatrixError("no real cubic root in flatten (unreachable)");

    Num w1 = Num::approx(best_w1);
    if (model.all_exact()) {
        // Keep exactness when the chosen root happens to be rational.
        if (auto snap = rationalize(best_w1, 1e-11, 1000)) {
            Num cand((*snap));
            Num value = ((K - a * cand - cand * cand) * (d + cand)) - e;
            if (value.is_zero()) w1 = cand;
        }
    }
    Num w2 = c - a * d + d * d - f - a * w1 - w1 * w1;
    res.w = ProjectivePotential{w1, w2};
    res.flat = projective_change(res.prescaled, res.w);
    return res;
}

// ---------------------------------------------------------------------------
// Classification

namespace {

using Eigen::Vector2d;

struct RealGroup {
    Vector2d lam;
    int dim = 0;
    std::vector<std::array<double, 6>> polys;  // monomial basis coefficients
};

struct PairGroup {
    Vector2d re, im;
    int cdim = 0;
};

// Monomial order used throughout: 1, x1, x2, x1^2, x1*x2, x2^2.
std::array<double, 6> poly_coeffs(const ExpPoly& p) {
    std::array<double, 6> out{};
    for (const auto& t : p.terms()) {
        int idx = -1;
        if (t.i == 0 && t.j == 0) idx = 0;
        else if (t.i == 1 && t.j == 0) idx = 1;
        else if (t.i == 0 && t.j == 1) idx = 2;
        else if (t.i == 2 && t.j == 0) idx = 3;
        else if (t.i == 1 && t.j == 1) idx = 4;
        else if (t.i == 0 && t.j == 2) idx = 5;
        if (idx >= 0) out[idx] += t.coeff.re.to_double();
    }
    return out;
}

bool near_zero_vec(const Vector2d& v, double tol = 1e-7) { return v.norm() < tol; }

bool collinear(const Vector2d& u, const Vector2d& v, double tol = 1e-7) {
    return std::abs(u.x() * v.y() - u.y() * v.x()) <
           tol * (1 + u.norm()) * (1 + v.norm());
}

// Splits a kernel into its quadratic rows and its degree <= 1 subspace.
struct KernelShape {
    std::vector<std::array<double, 6>> quad_rows;
    std::vector<std::array<double, 6>> lin_rows;  // zero quadratic part
};

KernelShape kernel_shape(const std::vector<std::array<double, 6>>& polys) {
    // Row reduce with the quadratic columns first so echelon rows whose pivot
    // falls in the linear/constant block have no quadratic part at all.
    const int order[6] = {3, 4, 5, 1, 2, 0};
    Eigen::MatrixXd M(polys.size(), 6);
    for (std::size_t r = 0; r < polys.size(); ++r)
        for (int cidx = 0; cidx < 6; ++cidx) M(int(r), cidx) = polys[r][order[cidx]];
    std::size_t row = 0;
    std::vector<int> pivots;
    for (int col = 0; col < 6 && row < polys.size(); ++col) {
        std::size_t best = polys.size();
        double mag = 1e-9;
        for (std::size_t r = row; r < polys.size(); ++r)
            if (std::abs(M(int(r), col)) > mag) {
                mag = std::abs(M(int(r), col));
                best = r;
            }
        if (best == polys.size()) continue;
        M.row(int(row)).swap(M.row(int(best)));
        M.row(int(row)) /= M(int(row), col);
        for (std::size_t r = 0; r < polys.size(); ++r)
            if (r != row) M.row(int(r)) -= M(int(r), col) * M.row(int(row));
        pivots.push_back(col);
        ++row;
    }
    KernelShape shape;
    for (std::size_t r = 0; r < pivots.size(); ++r) {
        std::array<double, 6> coeffs{};
        for (int cidx = 0; cidx < 6; ++cidx) {
            double v = M(int(r), cidx);
            coeffs[order[cidx]] = std::abs(v) < 1e-9 ? 0.0 : v;
        }
        if (pivots[r] < 3) shape.quad_rows.push_back(coeffs);
        else shape.lin_rows.push_back(coeffs);
    }
    return shape;
}

// The linear covector of the degree-1 subspace {1, l}; requires exactly one
// direction.
Vector2d linear_covector(const KernelShape& shape) {
    Vector2d v(0, 0);
    for (const auto& row : shape.lin_rows) {
        Vector2d cand(row[1], row[2]);
        if (cand.norm() < 1e-8) continue;
        if (v.norm() < 1e-8) v = cand;
        else if (!collinear(v, cand))
            throw ClassifyError("degree-1 kernel subspace is not a pencil");
    }
    if (v.norm() < 1e-8)
        throw ClassifyError("kernel has no degree-1 element");
    return v;
}

// Decomposes the quadratic part of q as kappa*(v.x)^2 for the raw (not
// normalized) covector v, so exact inputs stay rational; throws when the
// quadratic part has rank 2 or is not aligned with v.
double rank_one_coefficient(const std::array<double, 6>& q, const Vector2d& v) {
    Eigen::Matrix2d Q;
    Q << q[3], q[4] / 2, q[4] / 2, q[5];
    double scale = Q.norm();
    if (scale < 1e-10) throw ClassifyError("expected a quadratic kernel element");
    if (std::abs(Q.determinant()) > 1e-7 * scale * scale)
        throw ClassifyError("quadratic kernel part has rank 2");
    double kappa = v.dot(Q * v) / (v.squaredNorm() * v.squaredNorm());
    if (std::abs(kappa) < 1e-8 * scale / v.squaredNorm())
        throw ClassifyError("quadratic kernel part is not aligned with the pencil");
    return kappa;
}

struct Candidate {
    CanonicalLabel label;
    Eigen::Matrix2d T;  // T = A^T, columns are observed exponent images
};

Eigen::Matrix2d cols(const Vector2d& c1, const Vector2d& c2) {
    Eigen::Matrix2d t;
    t.col(0) = c1;
    t.col(1) = c2;
    return t;
}

// Parameters of exact inputs are rational only when the model actually lies
// over the rational catalogue; the tight tolerance keeps nearby-but-wrong
// rationals (dense at denominator 10^3) from capturing irrational values.
Num make_param(double v, bool exact_input) {
    if (exact_input)
        if (auto r = rationalize(v, 1e-11, 1000)) return Num(*r);
    return Num::approx(v);
}

std::vector<Candidate> flat_candidates(const std::vector<RealGroup>& R,
                                       const std::vector<PairGroup>& P) {
    std::vector<Candidate> cands;
    if (P.size() == 1 && R.size() == 1 && R[0].dim == 1 && P[0].cdim == 1) {
        if (!near_zero_vec(R[0].lam))
            throw ClassifyError("flat complex-pair pattern requires a zero exponent");
        cands.push_back({CanonicalLabel(Family::M5_0), cols(P[0].re, P[0].im)});
        cands.push_back({CanonicalLabel(Family::M5_0), cols(P[0].re, -P[0].im)});
        return cands;
    }
    if (!P.empty()) throw ClassifyError("unexpected complex exponents, flat case");
    if (R.size() == 1 && R[0].dim == 3) {
        KernelShape shape = kernel_shape(R[0].polys);
        if (shape.quad_rows.empty()) {
            cands.push_back({CanonicalLabel(Family::M0_0), Eigen::Matrix2d::Identity()});
            return cands;
        }
        // M_4^0: match {1, l, q} to {1, y2, y2^2 + 2 y1}.
        Vector2d v = linear_covector(shape);
        const auto& q0 = shape.quad_rows[0];
        double kappa = rank_one_coefficient(q0, v);
        double alpha = 1.0 / kappa;
        Vector2d q_lin(q0[1], q0[2]);
        Vector2d col1 = alpha * q_lin / 2.0;
        cands.push_back({CanonicalLabel(Family::M4_0), cols(col1, v)});
        return cands;
    }
    if (R.size() == 2) {
        const RealGroup& g0 = R[0];
        const RealGroup& g1 = R[1];
        const RealGroup* zero = near_zero_vec(g0.lam) ? &g0 : &g1;
        const RealGroup* other = zero == &g0 ? &g1 : &g0;
        if (!near_zero_vec(zero->lam))
            throw ClassifyError("flat two-group pattern requires a zero exponent");
        KernelShape shape = kernel_shape(zero->dim == 2 ? zero->polys : other->polys);
        Vector2d v = linear_covector(shape);
        if (zero->dim == 1 && other->dim == 2)
            cands.push_back({CanonicalLabel(Family::M1_0), cols(other->lam, v)});
        else if (zero->dim == 2 && other->dim == 1)
            cands.push_back({CanonicalLabel(Family::M3_0), cols(v, other->lam)});
        return cands;
    }
    if (R.size() == 3) {
        // M_2^0 with exponents {0, (0,1), (-1,0)}.
        std::vector<const RealGroup*> nonzero;
        int zeros = 0;
        for (const auto& g : R) {
            if (near_zero_vec(g.lam)) ++zeros;
            else nonzero.push_back(&g);
        }
        if (zeros == 1 && nonzero.size() == 2) {
            const Vector2d s = nonzero[0]->lam, t = nonzero[1]->lam;
            cands.push_back({CanonicalLabel(Family::M2_0), cols(-t, s)});
            cands.push_back({CanonicalLabel(Family::M2_0), cols(-s, t)});
        }
        return cands;
    }
    return cands;
}

std::vector<Candidate> rank1_candidates(const std::vector<RealGroup>& R,
                                        const std::vector<PairGroup>& P,
                                        bool exact_input) {
    std::vector<Candidate> cands;
    if (P.size() == 1) {
        // M_5^1(c): pair at (0,c) +- i(0,1), one real exponent at (1,0).
        if (R.size() != 1 || R[0].dim != 1)
            throw ClassifyError("complex pair pattern needs one real exponent");
        const Vector2d p = P[0].re, q = P[0].im, r = R[0].lam;
        if (!collinear(p, q) && p.norm() > 1e-7)
            throw ClassifyError("complex exponent pair is not aligned");
        for (int sgn : {+1, -1}) {
            Vector2d qe = sgn * q;
            double c = p.norm() < 1e-9 ? 0.0 : p.dot(qe) / qe.squaredNorm();
            if (c < -1e-9) continue;
            cands.push_back({CanonicalLabel(Family::M5_1,
                                            {make_param(std::max(c, 0.0), exact_input)}),
                             cols(r, qe)});
        }
        return cands;
    }
    if (R.size() == 1 && R[0].dim == 3) {
        // M_4^1(c), canonical c in {0, 1}.
        const Vector2d u = R[0].lam;
        KernelShape shape = kernel_shape(R[0].polys);
        if (shape.quad_rows.empty()) {
            Vector2d perp(-u.y(), u.x());
            cands.push_back(
                {CanonicalLabel(Family::M4_1, {Num(0)}), cols(perp, u)});
            return cands;
        }
        Vector2d v = linear_covector(shape);
        if (!collinear(u, v))
            throw ClassifyError("kernel pencil is not aligned with the exponent");
        double kappa = rank_one_coefficient(shape.quad_rows[0], v);
        double mu = u.dot(v) / v.squaredNorm();  // u = mu * v
        double alpha = mu * mu / kappa;
        Vector2d q_lin(shape.quad_rows[0][1], shape.quad_rows[0][2]);
        Vector2d col1 = alpha * q_lin / 2.0;
        cands.push_back({CanonicalLabel(Family::M4_1, {Num(1)}), cols(col1, u)});
        return cands;
    }
    if (R.size() == 2) {
        const RealGroup& dbl = R[0].dim == 2 ? R[0] : R[1];
        const RealGroup& sgl = R[0].dim == 2 ? R[1] : R[0];
        if (dbl.dim != 2 || sgl.dim != 1)
            throw ClassifyError("rank-1 two-group pattern with unexpected dims");
        const Vector2d p = dbl.lam, q = sgl.lam;
        if (collinear(p, q)) {
            // M_3^1(c1): p = (0,c1) double, q = (0,c1+1).
            Vector2d dhat = p.normalized();
            double sigma = p.dot(dhat), tau = q.dot(dhat);
            double c1 = sigma / (tau - sigma);
            Vector2d v = linear_covector(kernel_shape(dbl.polys));
            cands.push_back({CanonicalLabel(Family::M3_1, {make_param(c1, exact_input)}),
                             cols(v, q - p)});
        } else {
            // M_1^1: p = (0,1) double, q = (-1,1).
            cands.push_back({CanonicalLabel(Family::M1_1), cols(p - q, p)});
        }
        return cands;
    }
    if (R.size() == 3) {
        // M_2^1(c1): exponents (0,c1), (0,c1+1), (-1,c1).
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                if (i == j) continue;
                int k = 3 - i - j;
                const Vector2d s = R[i].lam, t = R[j].lam, r = R[k].lam;
                if (!collinear(s, t) || collinear(s, r)) continue;
                Vector2d dhat = s.normalized();
                double sigma = s.dot(dhat), tau = t.dot(dhat);
                double c1 = sigma / (tau - sigma);
                Vector2d col2 = t - s;
                Vector2d col1 = c1 * col2 - r;
                cands.push_back({CanonicalLabel(Family::M2_1,
                                                {make_param(c1, exact_input)}),
                                 cols(col1, col2)});
            }
        // Prefer the canonical representative c1 >= -1/2.
        std::stable_sort(cands.begin(), cands.end(),
                         [](const Candidate& x, const Candidate& y) {
                             double cx = x.label.params[0].to_double();
                             double cy = y.label.params[0].to_double();
                             return (cx >= -0.5) > (cy >= -0.5);
                         });
        return cands;
    }
    return cands;
}

std::vector<Candidate> rank2_candidates(const std::vector<RealGroup>& R,
                                        const std::vector<PairGroup>& P,
                                        bool exact_input) {
    std::vector<Candidate> cands;
    if (P.size() == 1) {
        // M_2^2(b1,b2): pair at (1,0) +- i(0,1), one real exponent.
        if (R.size() != 1 || R[0].dim != 1)
            throw ClassifyError("rank-2 pair pattern needs one real exponent");
        const Vector2d p = P[0].re, q = P[0].im, r = R[0].lam;
        for (int sgn : {+1, -1}) {
            Eigen::Matrix2d T = cols(p, sgn * q);
            if (std::abs(T.determinant()) < 1e-9) continue;
            Vector2d b = T.inverse() * r;
            cands.push_back({CanonicalLabel(Family::M2_2,
                                            {make_param(b.x(), exact_input),
                                             make_param(b.y(), exact_input)}),
                             T});
        }
        std::stable_sort(cands.begin(), cands.end(),
                         [](const Candidate& x, const Candidate& y) {
                             return (x.label.params[1].to_double() >= -1e-9) >
                                    (y.label.params[1].to_double() >= -1e-9);
                         });
        return cands;
    }
    if (R.size() == 1 && R[0].dim == 3) {
        // M_4^2(+-1): kernel {1, l, 2 x1 +- x2^2} at a single exponent s.
        const Vector2d s = R[0].lam;
        KernelShape shape = kernel_shape(R[0].polys);
        if (shape.quad_rows.empty())
            throw ClassifyError("rank-2 triple pattern needs a quadratic");
        Vector2d v = linear_covector(shape);
        const auto& q0 = shape.quad_rows[0];
        double kappa = rank_one_coefficient(q0, v);
        Vector2d q_lin(q0[1], q0[2]);
        Eigen::Matrix2d lhs = cols(q_lin, v);
        if (std::abs(lhs.determinant()) < 1e-9 * (1 + q_lin.norm()))
            throw ClassifyError("quadratic kernel element lacks an x1 component");
        Vector2d ab = lhs.inverse() * (2.0 * s);
        double alpha = ab.x();
        // (gamma v . x)^2 must match eps * alpha * kappa (v.x)^2; only the
        // sign with a positive square is realizable.
        double eps = alpha * kappa > 0 ? 1.0 : -1.0;
        double gamma = std::sqrt(std::abs(alpha * kappa));
        cands.push_back(
            {CanonicalLabel(Family::M4_2, {Num(int(eps))}), cols(s, gamma * v)});
        return cands;
    }
    if (R.size() == 2) {
        // M_3^2(c2): double exponent s with kernel {1, x1 - c2 x2}, single t.
        const RealGroup& dbl = R[0].dim == 2 ? R[0] : R[1];
        const RealGroup& sgl = R[0].dim == 2 ? R[1] : R[0];
        if (dbl.dim != 2 || sgl.dim != 1)
            throw ClassifyError("rank-2 two-group pattern with unexpected dims");
        const Vector2d s = dbl.lam, t = sgl.lam;
        Vector2d v = linear_covector(kernel_shape(dbl.polys));
        Eigen::Matrix2d lhs = cols(t - s, v);
        if (std::abs(lhs.determinant()) < 1e-9)
            throw ClassifyError("degenerate M_3^2 pattern");
        Vector2d cg = lhs.inverse() * s;
        cands.push_back({CanonicalLabel(Family::M3_2, {make_param(cg.x(), exact_input)}),
                         cols(s, t - s)});
        return cands;
    }
    if (R.size() == 3) {
        // M_1^2(a1,a2): three pairwise independent exponents.
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                if (i == j) continue;
                int k = 3 - i - j;
                Eigen::Matrix2d T = cols(R[i].lam, R[j].lam);
                if (std::abs(T.determinant()) < 1e-9) continue;
                Vector2d a = T.inverse() * R[k].lam;
                cands.push_back({CanonicalLabel(Family::M1_2,
                                                {make_param(a.x(), exact_input),
                                                 make_param(a.y(), exact_input)}),
                                 T});
            }
        // Canonical representative: lexicographically largest (a1, a2).
        std::stable_sort(cands.begin(), cands.end(),
                         [](const Candidate& x, const Candidate& y) {
                             double x1 = x.label.params[0].to_double();
                             double y1 = y.label.params[0].to_double();
                             if (std::abs(x1 - y1) > 1e-9) return x1 > y1;
                             return x.label.params[1].to_double() >
                                    y.label.params[1].to_double();
                         });
        return cands;
    }
    return cands;
}

Mat2 to_mat2(const Eigen::Matrix2d& t, bool exact_input) {
    Mat2 out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            double v = t(i, j);
            if (exact_input) {
                if (auto r = rationalize(v, 1e-11, 100000)) {
                    out.m[i][j] = Num(*r);
                    continue;
                }
            }
            out.m[i][j] = Num::approx(v);
        }
    return out;
}

}  // namespace

ClassifyResult classify(const TypeAModel& model) {
    const bool exact_input = model.all_exact();
    const int nu = ricci_rank(model);
    QSolveResult q = qe_solve_detailed(model);

    std::vector<RealGroup> R;
    std::vector<PairGroup> P;
    for (const auto& root : q.roots) {
        if (root.complex_pair) {
            PairGroup g;
            g.re = Vector2d(root.lam1.re.to_double(), root.lam2.re.to_double());
            g.im = Vector2d(root.lam1.im.to_double(), root.lam2.im.to_double());
            g.cdim = root.kernel_dim;
            P.push_back(g);
        } else {
            RealGroup g;
            g.lam = Vector2d(root.lam1.re.to_double(), root.lam2.re.to_double());
            g.dim = root.kernel_dim;
            for (const auto& p : root.polys) g.polys.push_back(poly_coeffs(p));
            R.push_back(g);
        }
    }

    std::vector<Candidate> cands;
    switch (nu) {
        case 0: cands = flat_candidates(R, P); break;
        case 1: cands = rank1_candidates(R, P, exact_input); break;
        default: cands = rank2_candidates(R, P, exact_input); break;
    }
    if (cands.empty())
        throw ClassifyError("no catalogue pattern matches the solution space of " +
                            model.str());

    double model_scale = 1.0;
    for (const auto& g : model.gamma)
        model_scale = std::max(model_scale, std::abs(g.to_double()));

    std::string failures;
    for (const auto& cand : cands) {
        if (std::abs(cand.T.determinant()) < 1e-10) continue;
        TypeAModel canonical;
        try {
            canonical = canonical_model(cand.label);
        } catch (const ParamDomainError&) {
            continue;
        }
        Mat2 A = to_mat2(cand.T, exact_input).transpose();
        TypeAModel transformed;
        try {
            transformed = linear_transform(model, A);
        } catch (const SingularMatrixError&) {
            continue;
        }
        // A mis-snapped rationalization shows up as an inexact match; fall
        // back to the plain float matrix in that case.
        if (exact_input && A.all_exact() && canonical.all_exact() &&
            !models_equal(transformed, canonical)) {
            A = to_mat2(cand.T, false).transpose();
            transformed = linear_transform(model, A);
        }
        double residual = max_abs_difference(transformed, canonical);
        if (residual > 1e-6 * (1 + model_scale)) {
            failures += " " + cand.label.str();
            continue;
        }
        ClassifyResult result;
        result.label = cand.label;
        result.A = A;
        result.model_residual = residual;
        // Push the solved span through the change of variables and compare
        // against the catalogue span.
        Mat2 Ainv = A.inverse();
        std::vector<ExpPoly> moved;
        for (const auto& f : q.span.basis())
            moved.push_back(substitute_linear(f, Ainv.m[0][0], Ainv.m[0][1],
                                              Ainv.m[1][0], Ainv.m[1][1]));
        result.span_verified =
            span_equal(FuncSpan::canonicalize(std::move(moved)),
                       q_catalogue(cand.label));
        try {
            AffineFactorization fac = factor_affine_chart(q.span);
            result.w = ProjectivePotential{-fac.w1, -fac.w2};
        } catch (const FactorError&) {
            result.w = ProjectivePotential{Num(0), Num(0)};
        }
        return result;
    }
    throw ClassifyError("classification candidates failed verification for " +
                        model.str() + " (tried:" + failures + ")");
}

// ---------------------------------------------------------------------------
// Affine map catalogue

namespace {

MapSpec make_map(std::string name, const char* phi1, const char* phi2,
                 Connection source, Connection target) {
    MapSpec spec;
    spec.name = std::move(name);
    spec.phi1 = ep_parse(phi1);
    spec.phi2 = ep_parse(phi2);
    spec.source = std::move(source);
    spec.target = std::move(target);
    return spec;
}

Connection lift_label(Family f, std::vector<Num> params = {}) {
    return Connection::lift(canonical_model(CanonicalLabel(f, std::move(params))));
}

}  // namespace

MapSpec catalogue_map(int index, const std::vector<Num>& params) {
    auto one_param = [&](Num fallback) {
        if (params.empty()) return fallback;
        if (params.size() != 1)
            throw UnknownMapError("map " + std::to_string(index) +
                                  " takes one parameter");
        return params[0];
    };
    switch (index) {
        case 1:
            return make_map("Phi_1^0", "exp(x1)", "x2*exp(x1)",
                            lift_label(Family::M1_0), lift_label(Family::M0_0));
        case 2:
            return make_map("Phi_2^0", "exp(x2)", "exp(-x1)",
                            lift_label(Family::M2_0), lift_label(Family::M0_0));
        case 3:
            return make_map("Phi_3^0", "x1", "exp(x2)", lift_label(Family::M3_0),
                            lift_label(Family::M0_0));
        case 4:
            return make_map("Phi_4^0", "x2", "x2^2+2*x1", lift_label(Family::M4_0),
                            lift_label(Family::M0_0));
        case 5:
            return make_map("Phi_5^0", "exp(x1)*cos(x2)", "exp(x1)*sin(x2)",
                            lift_label(Family::M5_0), lift_label(Family::M0_0));
        case 6:
            return make_map("Phi_1^1", "exp(-x1)", "x2", lift_label(Family::M1_1),
                            lift_label(Family::M4_1, {Num(0)}));
        case 7: {
            Num c1 = one_param(Num::ratio(1, 3));
            return make_map("Phi_2^1", "exp(-x1)", "x2",
                            lift_label(Family::M2_1, {c1}),
                            lift_label(Family::M3_1, {c1}));
        }
        case 8: {
            Num c1 = one_param(Num::ratio(1, 3));
            return make_map("Phi_3^1", "x1*exp(-x2)", "-x2",
                            lift_label(Family::M3_1, {c1}),
                            lift_label(Family::M3_1, {Num(-1) - c1}));
        }
        case 9: {
            Num c = one_param(Num(1));
            MapSpec spec;
            spec.name = "Phi_4^1";
            spec.phi1 = ExpPoly::x1() +
                        ExpPoly::monomial(c * Num::ratio(1, 2), 0, 2);
            spec.phi2 = ExpPoly::x2();
            spec.source = lift_label(Family::M4_1, {c});
            spec.target = lift_label(Family::M4_1, {Num(0)});
            return spec;
        }
        case 10: {
            Num c = one_param(Num(1));
            return make_map("Phi_5^1", "x1", "-x2", lift_label(Family::M5_1, {c}),
                            lift_label(Family::M5_1, {-c}));
        }
        default:
            throw UnknownMapError("no catalogue map with index " +
                                  std::to_string(index));
    }
}

MapSpec psi_map(double a, double b, double c, double d) {
    MapSpec spec;
    spec.name = "Psi";
    Num ea = a == 0.0 ? Num(1) : Num::approx(std::exp(a));
    spec.phi1 = ExpPoly::monomial(ea, 1, 0) +
                ExpPoly::cosine(0, 1).scaled(b == 0.0 ? Num(0) : Num::approx(b)) +
                ExpPoly::sine(0, 1).scaled(c == 0.0 ? Num(0) : Num::approx(c));
    spec.phi2 = ExpPoly::x2() +
                ExpPoly::constant(d == 0.0 ? Num(0) : Num::approx(d));
    spec.source = Connection::geometry_n();
    spec.target = Connection::geometry_n();
    return spec;
}

MapSpec phi_n_map() {
    MapSpec spec = make_map("Phi_N", "exp(x1)", "x2",
                            lift_label(Family::M5_1, {Num(0)}),
                            Connection::geometry_n());
    return spec;
}

std::vector<std::array<double, 2>> square_grid(int n, double lo, double hi) {
    std::vector<std::array<double, 2>> pts;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double x = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
            double y = n == 1 ? lo : lo + (hi - lo) * j / (n - 1);
            pts.push_back({x, y});
        }
    return pts;
}

double verify_affine_map(const MapSpec& map,
                         const std::vector<std::array<double, 2>>& grid) {
    const ExpPoly* phi[2] = {&map.phi1, &map.phi2};
    ExpPoly dphi[2][2], d2phi[2][2][2];
    for (int comp = 0; comp < 2; ++comp)
        for (int i = 0; i < 2; ++i) {
            dphi[comp][i] = phi[comp]->derivative(i + 1);
            for (int j = 0; j < 2; ++j)
                d2phi[comp][i][j] = dphi[comp][i].derivative(j + 1);
        }
    auto gamma_at = [](const std::array<double, 6>& g, int i, int j, int k) {
        int pair = (i == 1 && j == 1) ? 0 : (i == 2 && j == 2) ? 2 : 1;
        return g[pair * 2 + (k - 1)];
    };
    double worst = 0;
    for (const auto& pt : grid) {
        double J[2][2], D2[2][2][2];
        for (int comp = 0; comp < 2; ++comp)
            for (int i = 0; i < 2; ++i) {
                J[comp][i] = dphi[comp][i].eval(pt[0], pt[1]);
                for (int j = 0; j < 2; ++j)
                    D2[comp][i][j] = d2phi[comp][i][j].eval(pt[0], pt[1]);
            }
        double det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
        if (std::abs(det) < 1e-12)
            throw SingularJacobianError("Jacobian singular at (" +
                                        std::to_string(pt[0]) + "," +
                                        std::to_string(pt[1]) + ")");
        double y1 = map.phi1.eval(pt[0], pt[1]);
        double y2 = map.phi2.eval(pt[0], pt[1]);
        auto gsrc = map.source.eval(pt[0], pt[1]);
        auto gtgt = map.target.eval(y1, y2);
        for (int comp = 1; comp <= 2; ++comp)
            for (int i = 1; i <= 2; ++i)
                for (int j = i; j <= 2; ++j) {
                    double r = D2[comp - 1][i - 1][j - 1];
                    for (int aa = 1; aa <= 2; ++aa)
                        for (int bb = 1; bb <= 2; ++bb)
                            r += gamma_at(gtgt, aa, bb, comp) * J[aa - 1][i - 1] *
                                 J[bb - 1][j - 1];
                    for (int k = 1; k <= 2; ++k)
                        r -= gamma_at(gsrc, i, j, k) * J[comp - 1][k - 1];
                    worst = std::max(worst, std::abs(r));
                }
    }
    return worst;
}

}  // namespace afflab
