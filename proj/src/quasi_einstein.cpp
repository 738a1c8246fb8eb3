#include "afflab/quasi_einstein.hpp"

#include "afflab/errors.hpp"
#include "poly_util.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>

namespace afflab {

namespace {

using Cx = std::complex<double>;
using detail::poly_roots;
using detail::square_free_part;

struct Quadrics {
    // Phi_11 = l1^2 - a l1 - b l2 + r11, Phi_12 = l1 l2 - c l1 - d l2 + r12,
    // Phi_22 = l2^2 - e l1 - f l2 + r22.
    double a, b, c, d, e, f, r11, r12, r22;

    Cx phi11(Cx l1, Cx l2) const { return l1 * l1 - a * l1 - b * l2 + r11; }
    Cx phi12(Cx l1, Cx l2) const { return l1 * l2 - c * l1 - d * l2 + r12; }
    Cx phi22(Cx l1, Cx l2) const { return l2 * l2 - e * l1 - f * l2 + r22; }
    double residual(Cx l1, Cx l2) const {
        return std::max({std::abs(phi11(l1, l2)), std::abs(phi12(l1, l2)),
                         std::abs(phi22(l1, l2))});
    }
    double scale() const {
        return 1.0 + std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d),
                               std::abs(e), std::abs(f), std::abs(r11),
                               std::abs(r12), std::abs(r22)});
    }
};

// Gauss-Newton refinement of a joint root of the three (holomorphic) quadrics.
void polish_root(const Quadrics& q, Cx& l1, Cx& l2) {
    for (int it = 0; it < 6; ++it) {
        Eigen::Matrix<Cx, 3, 2> J;
        Eigen::Matrix<Cx, 3, 1> F;
        F << q.phi11(l1, l2), q.phi12(l1, l2), q.phi22(l1, l2);
        J << 2.0 * l1 - q.a, Cx(-q.b), l2 - q.c, l1 - q.d, Cx(-q.e),
            2.0 * l2 - q.f;
        Eigen::Matrix<Cx, 2, 2> JtJ = J.adjoint() * J;
        Eigen::Matrix<Cx, 2, 1> rhs = J.adjoint() * F;
        if (std::abs(JtJ.determinant()) < 1e-14) break;
        Eigen::Matrix<Cx, 2, 1> step = JtJ.inverse() * rhs;
        l1 -= step(0);
        l2 -= step(1);
        if (step.norm() < 1e-15) break;
    }
}

// Candidate exponents: all common zeros of the three quadrics. For exact
// models the eliminant polynomials are made square-free exactly first, so
// repeated roots are located accurately.
std::vector<std::pair<Cx, Cx>> characteristic_roots(const TypeAModel& m) {
    auto rho = ricci_type_a(m).constant_values();
    Quadrics q{m.g11_1().to_double(), m.g11_2().to_double(),
               m.g12_1().to_double(), m.g12_2().to_double(),
               m.g22_1().to_double(), m.g22_2().to_double(),
               rho[0].to_double(),    rho[1].to_double(),
               rho[2].to_double()};
    const bool exact = m.all_exact();
    const double tol = 1e-6 * q.scale() * q.scale();

    std::vector<std::pair<Cx, Cx>> candidates;
    const Num &a = m.g11_1(), &b = m.g11_2(), &c = m.g12_1(), &d = m.g12_2(),
              &e = m.g22_1(), &f = m.g22_2();
    const Num &R11 = rho[0], &R12 = rho[1], &R22 = rho[2];

    auto roots_of = [&](std::vector<Num> coeffs) {
        if (exact) coeffs = square_free_part(coeffs);
        std::vector<double> dc;
        for (const auto& v : coeffs) dc.push_back(v.to_double());
        return poly_roots(dc);
    };

    const bool b_zero = exact ? b.is_zero() : std::abs(q.b) < 1e-12;
    if (!b_zero) {
        // Eliminate l2 through Phi_11; Phi_12 becomes a monic cubic in l1.
        std::vector<Num> cubic{-(d * R11) + b * R12, a * d + R11 - b * c,
                               -(a + d), Num(1)};
        for (Cx l1 : roots_of(cubic)) {
            Cx l2 = (l1 * l1 - q.a * l1 + q.r11) / q.b;
            polish_root(q, l1, l2);
            if (q.residual(l1, l2) < tol) candidates.emplace_back(l1, l2);
        }
    } else {
        std::vector<Num> quad1{R11, -a, Num(1)};
        for (Cx l1 : roots_of(quad1)) {
            // Branch with Phi_12 linear in l2.
            if (std::abs(l1 - Cx(q.d)) > 1e-12) {
                Cx l2 = (q.c * l1 - q.r12) / (l1 - q.d);
                polish_root(q, l1, l2);
                if (q.residual(l1, l2) < tol) candidates.emplace_back(l1, l2);
            }
            // Branch with l1 = d annihilating Phi_12; Phi_22 picks l2.
            if (std::abs(q.c * l1 - q.r12) < tol &&
                std::abs(l1 - Cx(q.d)) < 1e-6 * q.scale()) {
                std::vector<Num> quad2{R22 - e * d, -f, Num(1)};
                for (Cx l2 : roots_of(quad2)) {
                    Cx l1b = Cx(q.d);
                    polish_root(q, l1b, l2);
                    if (q.residual(l1b, l2) < tol) candidates.emplace_back(l1b, l2);
                }
            }
        }
    }

    // Cluster within 1e-8.
    std::vector<std::pair<Cx, Cx>> out;
    for (const auto& cand : candidates) {
        bool dup = false;
        for (const auto& seen : out)
            if (std::abs(cand.first - seen.first) < 1e-8 &&
                std::abs(cand.second - seen.second) < 1e-8) {
                dup = true;
                break;
            }
        if (!dup) out.push_back(cand);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Kernel of the stacked operator at a fixed exponent, over the monomial
// basis {1, x1, x2, x1^2, x1*x2, x2^2}.

int mono_index(int i, int j) {
    static const int table[3][3] = {{0, 2, 5}, {1, 4, -1}, {3, -1, -1}};
    return table[i][j];
}

struct Mono {
    int i, j;
};
const Mono kMonos[6] = {{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}};

using CMat = std::array<std::array<CNum, 6>, 6>;

CMat cmat_zero() {
    CMat m{};
    for (auto& row : m)
        for (auto& v : row) v = CNum(0);
    return m;
}

CMat cmat_id(const CNum& s) {
    CMat m = cmat_zero();
    for (int k = 0; k < 6; ++k) m[k][k] = s;
    return m;
}

CMat derivative_matrix(int axis) {
    CMat m = cmat_zero();
    for (int col = 0; col < 6; ++col) {
        Mono mo = kMonos[col];
        int e = axis == 1 ? mo.i : mo.j;
        if (e == 0) continue;
        int ti = axis == 1 ? mo.i - 1 : mo.i;
        int tj = axis == 1 ? mo.j : mo.j - 1;
        m[mono_index(ti, tj)][col] = CNum(Num(e));
    }
    return m;
}

CMat cmat_add(const CMat& a, const CMat& b) {
    CMat m = cmat_zero();
    for (int r = 0; r < 6; ++r)
        for (int c = 0; c < 6; ++c) m[r][c] = a[r][c] + b[r][c];
    return m;
}

CMat cmat_sub(const CMat& a, const CMat& b) {
    CMat m = cmat_zero();
    for (int r = 0; r < 6; ++r)
        for (int c = 0; c < 6; ++c) m[r][c] = a[r][c] - b[r][c];
    return m;
}

CMat cmat_mul(const CMat& a, const CMat& b) {
    CMat m = cmat_zero();
    for (int r = 0; r < 6; ++r)
        for (int c = 0; c < 6; ++c)
            for (int k = 0; k < 6; ++k) m[r][c] = m[r][c] + a[r][k] * b[k][c];
    return m;
}

CMat cmat_scale(const CMat& a, const CNum& s) {
    CMat m = cmat_zero();
    for (int r = 0; r < 6; ++r)
        for (int c = 0; c < 6; ++c) m[r][c] = a[r][c] * s;
    return m;
}

// The operator on polynomial parts for entry (i,j) of H + rho at exponent
// lam: (D_i + lam_i)(D_j + lam_j) - G_ij^k (D_k + lam_k) + rho_ij.
CMat entry_operator(const TypeAModel& m, const std::array<Num, 3>& rho, int i,
                    int j, const CNum& lam1, const CNum& lam2) {
    CMat D1 = derivative_matrix(1), D2 = derivative_matrix(2);
    CMat Si = cmat_add(i == 1 ? D1 : D2, cmat_id(i == 1 ? lam1 : lam2));
    CMat Sj = cmat_add(j == 1 ? D1 : D2, cmat_id(j == 1 ? lam1 : lam2));
    CMat acc = cmat_mul(Si, Sj);
    CMat T1 = cmat_add(D1, cmat_id(lam1));
    CMat T2 = cmat_add(D2, cmat_id(lam2));
    acc = cmat_sub(acc, cmat_scale(T1, CNum(m.christoffel(i, j, 1))));
    acc = cmat_sub(acc, cmat_scale(T2, CNum(m.christoffel(i, j, 2))));
    int pair = (i == 1 && j == 1) ? 0 : (i == 2 && j == 2) ? 2 : 1;
    acc = cmat_add(acc, cmat_id(CNum(rho[pair])));
    return acc;
}

// Exact nullspace of the stacked 18x6 matrix via Gauss-Jordan over complex
// rationals. Returns kernel vectors in the monomial basis.
std::vector<std::array<CNum, 6>> exact_nullspace(
    std::vector<std::array<CNum, 6>> rows) {
    std::vector<int> pivot_col;
    std::size_t r = 0;
    for (int col = 0; col < 6 && r < rows.size(); ++col) {
        std::size_t sel = rows.size();
        for (std::size_t k = r; k < rows.size(); ++k)
            if (!rows[k][col].is_zero()) {
                sel = k;
                break;
            }
        if (sel == rows.size()) continue;
        std::swap(rows[r], rows[sel]);
        CNum inv = CNum(Num(1)) / rows[r][col];
        for (auto& v : rows[r]) v = v * inv;
        for (std::size_t k = 0; k < rows.size(); ++k) {
            if (k == r || rows[k][col].is_zero()) continue;
            CNum factor = rows[k][col];
            for (int c = 0; c < 6; ++c) rows[k][c] = rows[k][c] - factor * rows[r][c];
        }
        pivot_col.push_back(col);
        ++r;
    }
    std::vector<std::array<CNum, 6>> kernel;
    for (int col = 0; col < 6; ++col) {
        if (std::find(pivot_col.begin(), pivot_col.end(), col) != pivot_col.end())
            continue;
        std::array<CNum, 6> v{};
        for (auto& x : v) x = CNum(0);
        v[col] = CNum(Num(1));
        for (std::size_t k = 0; k < pivot_col.size(); ++k)
            v[pivot_col[k]] = -rows[k][col];
        kernel.push_back(v);
    }
    return kernel;
}

// Float nullspace via SVD.
std::vector<std::array<CNum, 6>> float_nullspace(
    const std::vector<std::array<CNum, 6>>& rows) {
    Eigen::MatrixXcd M(rows.size(), 6);
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (int c = 0; c < 6; ++c) M(int(r), c) = rows[r][c].to_complex();
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    double smax = sv.size() ? sv(0) : 0.0;
    std::vector<std::array<CNum, 6>> kernel;
    for (int k = 0; k < sv.size(); ++k) {
        if (sv(k) > 1e-7 * std::max(1.0, smax)) continue;
        std::array<CNum, 6> v{};
        for (int c = 0; c < 6; ++c)
            v[c] = CNum::approx(svd.matrixV()(c, k));
        kernel.push_back(v);
    }
    // Row-reduce the kernel so the basis has echelon shape (readable output).
    if (!kernel.empty()) {
        Eigen::MatrixXcd K(kernel.size(), 6);
        for (std::size_t r = 0; r < kernel.size(); ++r)
            for (int c = 0; c < 6; ++c) K(int(r), c) = kernel[r][c].to_complex();
        std::size_t row = 0;
        for (int col = 0; col < 6 && row < kernel.size(); ++col) {
            std::size_t best = kernel.size();
            double mag = 1e-8;
            for (std::size_t r = row; r < kernel.size(); ++r)
                if (std::abs(K(int(r), col)) > mag) {
                    mag = std::abs(K(int(r), col));
                    best = r;
                }
            if (best == kernel.size()) continue;
            K.row(int(row)).swap(K.row(int(best)));
            K.row(int(row)) /= K(int(row), col);
            for (std::size_t r = 0; r < kernel.size(); ++r)
                if (r != row) K.row(int(r)) -= K(int(r), col) * K.row(int(row));
            ++row;
        }
        for (std::size_t r = 0; r < kernel.size(); ++r)
            for (int c = 0; c < 6; ++c) {
                Cx z = K(int(r), c);
                kernel[r][c] = std::abs(z) < 1e-11 ? CNum(0) : CNum::approx(z);
            }
    }
    return kernel;
}

ExpPoly poly_from_coeffs(const std::array<CNum, 6>& v, const CNum& lam1,
                         const CNum& lam2, bool conjugate) {
    std::vector<EpTerm> terms;
    for (int c = 0; c < 6; ++c) {
        if (v[c].is_zero()) continue;
        CNum coeff = conjugate ? v[c].conj() : v[c];
        CNum l1 = conjugate ? lam1.conj() : lam1;
        CNum l2 = conjugate ? lam2.conj() : lam2;
        terms.push_back(EpTerm{coeff, kMonos[c].i, kMonos[c].j, l1, l2});
    }
    return ExpPoly(std::move(terms));
}

}  // namespace

QeResidual qe_apply(const Connection& conn, const ExpPoly& f) {
    SymBilinear rho = ricci_general(conn).symmetrized();
    SymBilinear h = hessian(conn, f);
    QeResidual out;
    out.tensor.r11 = h.r11 + rho.r11 * f;
    out.tensor.r12 = h.r12 + rho.r12 * f;
    out.tensor.r21 = h.r21 + rho.r21 * f;
    out.tensor.r22 = h.r22 + rho.r22 * f;
    out.exact_zero = out.tensor.is_zero();
    out.max_abs = out.exact_zero ? 0.0 : out.tensor.max_abs_on_grid();
    return out;
}

bool qe_member(const Connection& conn, const ExpPoly& f, double tol) {
    if (f.is_zero()) return true;
    ExpPoly normalized = f;
    if (!f.all_exact()) {
        double scale = f.max_abs_coeff();
        if (scale > 0) normalized = f.scaled(Num::approx(1.0 / scale));
    }
    QeResidual r = qe_apply(conn, normalized);
    return r.exact_zero || r.max_abs < tol;
}

QSolveResult qe_solve_detailed(const TypeAModel& model) {
    const bool exact_model = model.all_exact();
    auto rho = ricci_type_a(model).constant_values();
    auto roots = characteristic_roots(model);

    QSolveResult result;
    std::vector<ExpPoly> basis;

    // Keep one representative per conjugate pair.
    std::vector<std::pair<Cx, Cx>> reps;
    for (const auto& [l1, l2] : roots) {
        const bool realish = std::abs(l1.imag()) < 1e-9 && std::abs(l2.imag()) < 1e-9;
        if (realish) {
            reps.emplace_back(Cx(l1.real(), 0), Cx(l2.real(), 0));
            continue;
        }
        bool positive = l1.imag() > 1e-9 ||
                        (std::abs(l1.imag()) <= 1e-9 && l2.imag() > 0);
        if (positive) reps.emplace_back(l1, l2);
    }

    for (const auto& [l1, l2] : reps) {
        const bool is_real = l1.imag() == 0 && l2.imag() == 0;
        // Snap to exact scalars when the model is exact and a small rational
        // is this close; repeated roots of rational eliminants are rational.
        auto snap = [&](double x) -> Num {
            if (exact_model)
                if (auto r = rationalize(x, 1e-11, 100)) return Num(*r);
            return Num::approx(x);
        };
        CNum lam1(snap(l1.real()), snap(l1.imag()));
        CNum lam2(snap(l2.real()), snap(l2.imag()));
        const bool exact_root = lam1.is_exact() && lam2.is_exact();

        std::vector<std::array<CNum, 6>> rows;
        for (auto [i, j] : {std::pair{1, 1}, std::pair{1, 2}, std::pair{2, 2}}) {
            CMat op = entry_operator(model, rho, i, j, lam1, lam2);
            for (int r = 0; r < 6; ++r) {
                std::array<CNum, 6> row;
                for (int c = 0; c < 6; ++c) row[c] = op[r][c];
                rows.push_back(row);
            }
        }
        auto kernel = (exact_model && exact_root) ? exact_nullspace(std::move(rows))
                                                  : float_nullspace(rows);
        if (kernel.empty()) continue;

        QRoot root;
        root.lam1 = lam1;
        root.lam2 = lam2;
        root.complex_pair = !is_real;
        root.kernel_dim = int(kernel.size());
        for (const auto& v : kernel) {
            if (is_real) {
                ExpPoly f = poly_from_coeffs(v, lam1, lam2, false);
                basis.push_back(f);
                std::array<CNum, 6> poly_v = v;
                root.polys.push_back(poly_from_coeffs(poly_v, CNum(0), CNum(0), false));
            } else {
                // Real closure: f + conj(f) and (f - conj(f))/i, halved.
                ExpPoly f = poly_from_coeffs(v, lam1, lam2, false);
                ExpPoly fbar = poly_from_coeffs(v, lam1, lam2, true);
                CNum half(Num::ratio(1, 2));
                CNum half_over_i(Num(0), Num::ratio(-1, 2));
                basis.push_back((f + fbar).scaled(half));
                basis.push_back((f - fbar).scaled(half_over_i));
            }
        }
        result.roots.push_back(std::move(root));
    }

    result.span = FuncSpan::canonicalize(std::move(basis));
    if (result.span.dim() != 3)
        throw DimensionError("solution space of " + model.str() +
                             " came out with dimension " +
                             std::to_string(result.span.dim()) + ", expected 3");
    return result;
}

FuncSpan qe_solve_type_a(const TypeAModel& model) {
    return qe_solve_detailed(model).span;
}

}  // namespace afflab
