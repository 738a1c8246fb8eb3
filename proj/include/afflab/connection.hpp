#pragma once

#include "afflab/exp_poly.hpp"

#include <array>
#include <optional>
#include <string>

namespace afflab {

// Constant-Christoffel connection on R^2, identified with a point of R^6 in
// the order G11^1, G11^2, G12^1, G12^2, G22^1, G22^2. The lower-index
// symmetry G12^k = G21^k is structural and never stored twice.
struct TypeAModel {
    std::array<Num, 6> gamma{};

    TypeAModel() = default;
    TypeAModel(Num a, Num b, Num c, Num d, Num e, Num f)
        : gamma{std::move(a), std::move(b), std::move(c),
                std::move(d), std::move(e), std::move(f)} {}

    const Num& g11_1() const { return gamma[0]; }
    const Num& g11_2() const { return gamma[1]; }
    const Num& g12_1() const { return gamma[2]; }
    const Num& g12_2() const { return gamma[3]; }
    const Num& g22_1() const { return gamma[4]; }
    const Num& g22_2() const { return gamma[5]; }

    // Christoffel value by 1-based indices; i,j order is immaterial.
    const Num& christoffel(int i, int j, int k) const;

    bool all_exact() const {
        for (const auto& g : gamma)
            if (!g.is_exact()) return false;
        return true;
    }
    std::array<double, 6> to_doubles() const {
        std::array<double, 6> out;
        for (int k = 0; k < 6; ++k) out[k] = gamma[k].to_double();
        return out;
    }
    bool is_zero() const {
        for (const auto& g : gamma)
            if (!g.is_zero()) return false;
        return true;
    }
    std::string str() const;
};

double max_abs_difference(const TypeAModel& a, const TypeAModel& b);
bool models_equal(const TypeAModel& a, const TypeAModel& b, double tol = 1e-9);

// Torsion-free connection whose Christoffel coefficients are exponential
// polynomials. A TypeAModel lifts losslessly to constant entries.
class Connection {
public:
    Connection() = default;

    static Connection lift(const TypeAModel& model);
    // The completion geometry: only nonzero symbol is G22^1 = x1.
    static Connection geometry_n();

    const ExpPoly& christoffel(int i, int j, int k) const;
    void set_christoffel(int i, int j, int k, ExpPoly value);

    bool is_constant() const;
    std::optional<TypeAModel> as_type_a() const;

    // The six coefficient values at a point, in TypeAModel order.
    std::array<double, 6> eval(double x1, double x2) const;

private:
    static int pair_index(int i, int j);
    // [pair 11|12|22][k-1]
    std::array<std::array<ExpPoly, 2>, 3> gamma_{};
};

// Bilinear form with ExpPoly entries; symmetric() reports whether the
// off-diagonal entries agree.
struct SymBilinear {
    ExpPoly r11, r12, r21, r22;

    bool symmetric(double tol = 1e-10) const;
    SymBilinear symmetrized() const;
    bool is_zero() const {
        return r11.is_zero() && r12.is_zero() && r21.is_zero() && r22.is_zero();
    }
    const ExpPoly& entry(int i, int j) const;
    // For constant tensors: the 3 independent values (r11, r12, r22).
    std::array<Num, 3> constant_values() const {
        return {r11.constant_value(), r12.constant_value(), r22.constant_value()};
    }
    double max_abs_on_grid() const;
};

// Ricci tensor of a Type A model from the closed-form quadratic expressions;
// exact for rational inputs.
SymBilinear ricci_type_a(const TypeAModel& model);

// Ricci tensor of a general connection via rho_jk = R_{ijk}^i with
// R_{ijk}^l = d_i G_jk^l - d_j G_ik^l + G_im^l G_jk^m - G_jm^l G_ik^m.
SymBilinear ricci_general(const Connection& conn);

// R(xi1, xi2) xi3 at a point, for constant vector fields xi.
std::array<double, 2> curvature_apply(const Connection& conn,
                                      const std::array<double, 2>& point,
                                      const std::array<double, 2>& xi1,
                                      const std::array<double, 2>& xi2,
                                      const std::array<double, 2>& xi3);

// Hessian H f = (d_i d_j f - G_ij^k d_k f) dx^i x dx^j.
SymBilinear hessian(const Connection& conn, const ExpPoly& f);

// Rank of the 2x2 Ricci matrix; exact over rationals, otherwise eigenvalues
// below 1e-12 in magnitude count as zero.
int ricci_rank(const TypeAModel& model);

}  // namespace afflab
