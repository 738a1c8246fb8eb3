#include "afflab/connection.hpp"

#include "afflab/errors.hpp"

#include <cmath>
#include <sstream>

namespace afflab {

const Num& TypeAModel::christoffel(int i, int j, int k) const {
    if (i > j) std::swap(i, j);
    int pair = (i == 1 && j == 1) ? 0 : (i == 1 && j == 2) ? 1 : 2;
    return gamma[pair * 2 + (k - 1)];
}

std::string TypeAModel::str() const {
    std::ostringstream os;
    os << "M(";
    for (int k = 0; k < 6; ++k) os << (k ? "," : "") << gamma[k].str();
    os << ")";
    return os.str();
}

double max_abs_difference(const TypeAModel& a, const TypeAModel& b) {
    double m = 0;
    for (int k = 0; k < 6; ++k)
        m = std::max(m, std::abs(a.gamma[k].to_double() - b.gamma[k].to_double()));
    return m;
}

bool models_equal(const TypeAModel& a, const TypeAModel& b, double tol) {
    if (a.all_exact() && b.all_exact()) {
        for (int k = 0; k < 6; ++k)
            if (!(a.gamma[k] == b.gamma[k])) return false;
        return true;
    }
    return max_abs_difference(a, b) <= tol;
}

int Connection::pair_index(int i, int j) {
    if (i > j) std::swap(i, j);
    if (i == 1 && j == 1) return 0;
    if (i == 1 && j == 2) return 1;
    return 2;
}

Connection Connection::lift(const TypeAModel& model) {
    Connection c;
    for (int pair = 0; pair < 3; ++pair)
        for (int k = 0; k < 2; ++k)
            c.gamma_[pair][k] = ExpPoly::constant(model.gamma[pair * 2 + k]);
    return c;
}

Connection Connection::geometry_n() {
    Connection c;
    c.set_christoffel(2, 2, 1, ExpPoly::x1());
    return c;
}

const ExpPoly& Connection::christoffel(int i, int j, int k) const {
    return gamma_[pair_index(i, j)][k - 1];
}

void Connection::set_christoffel(int i, int j, int k, ExpPoly value) {
    gamma_[pair_index(i, j)][k - 1] = std::move(value);
}

bool Connection::is_constant() const {
    for (const auto& pair : gamma_)
        for (const auto& g : pair)
            if (!g.is_constant()) return false;
    return true;
}

std::optional<TypeAModel> Connection::as_type_a() const {
    if (!is_constant()) return std::nullopt;
    TypeAModel m;
    for (int pair = 0; pair < 3; ++pair)
        for (int k = 0; k < 2; ++k)
            m.gamma[pair * 2 + k] = gamma_[pair][k].constant_value();
    return m;
}

std::array<double, 6> Connection::eval(double x1, double x2) const {
    std::array<double, 6> out;
    for (int pair = 0; pair < 3; ++pair)
        for (int k = 0; k < 2; ++k)
            out[pair * 2 + k] = gamma_[pair][k].eval(x1, x2);
    return out;
}

bool SymBilinear::symmetric(double tol) const {
    ExpPoly diff = r12 - r21;
    if (diff.is_zero()) return true;
    return diff.max_abs_coeff() < tol;
}

SymBilinear SymBilinear::symmetrized() const {
    ExpPoly half_sum = (r12 + r21).scaled(Num::ratio(1, 2));
    return SymBilinear{r11, half_sum, half_sum, r22};
}

const ExpPoly& SymBilinear::entry(int i, int j) const {
    if (i == 1) return j == 1 ? r11 : r12;
    return j == 1 ? r21 : r22;
}

double SymBilinear::max_abs_on_grid() const {
    double m = 0;
    for (int a = 0; a < 10; ++a)
        for (int b = 0; b < 10; ++b) {
            double x = -2.0 + 4.0 * a / 9.0;
            double y = -2.0 + 4.0 * b / 9.0;
            m = std::max({m, std::abs(r11.eval(x, y)), std::abs(r12.eval(x, y)),
                          std::abs(r21.eval(x, y)), std::abs(r22.eval(x, y))});
        }
    return m;
}

SymBilinear ricci_type_a(const TypeAModel& m) {
    const Num &a = m.g11_1(), &b = m.g11_2(), &c = m.g12_1(), &d = m.g12_2(),
              &e = m.g22_1(), &f = m.g22_2();
    Num r11 = (a - d) * d + b * (f - c);
    Num r12 = c * d - b * e;
    Num r22 = -(c * c) + f * c + (a - d) * e;
    SymBilinear rho;
    rho.r11 = ExpPoly::constant(r11);
    rho.r12 = ExpPoly::constant(r12);
    rho.r21 = ExpPoly::constant(r12);
    rho.r22 = ExpPoly::constant(r22);
    return rho;
}

SymBilinear ricci_general(const Connection& conn) {
    auto G = [&](int i, int j, int k) -> const ExpPoly& {
        return conn.christoffel(i, j, k);
    };
    auto rho_entry = [&](int jj, int kk) {
        ExpPoly acc;
        for (int i = 1; i <= 2; ++i) {
            acc = acc + G(jj, kk, i).derivative(i) - G(i, kk, i).derivative(jj);
            for (int mm = 1; mm <= 2; ++mm)
                acc = acc + G(i, mm, i) * G(jj, kk, mm) - G(jj, mm, i) * G(i, kk, mm);
        }
        return acc;
    };
    SymBilinear rho;
    rho.r11 = rho_entry(1, 1);
    rho.r12 = rho_entry(1, 2);
    rho.r21 = rho_entry(2, 1);
    rho.r22 = rho_entry(2, 2);
    return rho;
}

std::array<double, 2> curvature_apply(const Connection& conn,
                                      const std::array<double, 2>& point,
                                      const std::array<double, 2>& xi1,
                                      const std::array<double, 2>& xi2,
                                      const std::array<double, 2>& xi3) {
    // R_{ijk}^l at the point, then contract with the constant vectors.
    double R[2][2][2][2];
    for (int i = 1; i <= 2; ++i)
        for (int j = 1; j <= 2; ++j)
            for (int k = 1; k <= 2; ++k)
                for (int l = 1; l <= 2; ++l) {
                    ExpPoly term = conn.christoffel(j, k, l).derivative(i) -
                                   conn.christoffel(i, k, l).derivative(j);
                    for (int mm = 1; mm <= 2; ++mm)
                        term = term +
                               conn.christoffel(i, mm, l) * conn.christoffel(j, k, mm) -
                               conn.christoffel(j, mm, l) * conn.christoffel(i, k, mm);
                    R[i - 1][j - 1][k - 1][l - 1] = term.eval(point[0], point[1]);
                }
    std::array<double, 2> out{0, 0};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l)
                    out[l] += R[i][j][k][l] * xi1[i] * xi2[j] * xi3[k];
    return out;
}

SymBilinear hessian(const Connection& conn, const ExpPoly& f) {
    ExpPoly d1 = f.derivative(1), d2 = f.derivative(2);
    auto entry = [&](int i, int j) {
        ExpPoly e = (i == 1 ? d1 : d2).derivative(j);
        e = e - conn.christoffel(i, j, 1) * d1 - conn.christoffel(i, j, 2) * d2;
        return e;
    };
    SymBilinear h;
    h.r11 = entry(1, 1);
    h.r12 = entry(1, 2);
    h.r21 = entry(2, 1);
    h.r22 = entry(2, 2);
    return h;
}

int ricci_rank(const TypeAModel& model) {
    SymBilinear rho = ricci_type_a(model);
    auto v = rho.constant_values();
    if (model.all_exact()) {
        bool zero = v[0].is_zero() && v[1].is_zero() && v[2].is_zero();
        if (zero) return 0;
        Num det = v[0] * v[2] - v[1] * v[1];
        return det.is_zero() ? 1 : 2;
    }
    double r11 = v[0].to_double(), r12 = v[1].to_double(), r22 = v[2].to_double();
    double tr = r11 + r22;
    double det = r11 * r22 - r12 * r12;
    double disc = std::sqrt(std::max(tr * tr - 4 * det, 0.0));
    double e1 = (tr + disc) / 2, e2 = (tr - disc) / 2;
    int rank = 0;
    if (std::abs(e1) > 1e-12) ++rank;
    if (std::abs(e2) > 1e-12) ++rank;
    return rank;
}

}  // namespace afflab
