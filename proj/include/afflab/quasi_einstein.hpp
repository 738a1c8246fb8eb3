#pragma once

#include "afflab/connection.hpp"
#include "afflab/func_span.hpp"

#include <vector>

namespace afflab {

// Residual of the quasi-Einstein operator f -> H f + rho_s f. exact_zero is
// set when every canonical coefficient vanished; max_abs is the supremum of
// the entries over a fixed 10x10 grid in [-2,2]^2.
struct QeResidual {
    SymBilinear tensor;
    bool exact_zero = false;
    double max_abs = 0.0;
};

QeResidual qe_apply(const Connection& conn, const ExpPoly& f);

// Membership in Q = ker(H + rho_s): exact zero, or grid residual below tol
// after normalizing f to unit maximal coefficient.
bool qe_member(const Connection& conn, const ExpPoly& f, double tol = 1e-10);

// One characteristic exponent of the solution space, with the polynomial
// parts attached. For a conjugate pair only the representative with positive
// imaginary part is listed and kernel_dim counts complex dimensions.
struct QRoot {
    CNum lam1, lam2;
    bool complex_pair = false;
    int kernel_dim = 0;
    std::vector<ExpPoly> polys;  // real roots only: polynomial parts
};

struct QSolveResult {
    FuncSpan span;
    std::vector<QRoot> roots;
};

// Solves Q for a constant-coefficient model with the exponential-polynomial
// ansatz e^(lam.x) p(x), deg p <= 2. The characteristic variety is cut out
// by three quadrics in lam; kernels at each root supply the polynomial
// parts. Throws DimensionError when the assembled span is not 3-dimensional.
QSolveResult qe_solve_detailed(const TypeAModel& model);
FuncSpan qe_solve_type_a(const TypeAModel& model);

}  // namespace afflab
