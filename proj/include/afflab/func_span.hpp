#pragma once

#include "afflab/exp_poly.hpp"

#include <array>
#include <optional>
#include <vector>

namespace afflab {

// Residual below which a function counts as contained in a span (after
// normalizing to unit max coefficient) on the approximate path.
inline constexpr double kSpanResidualTol = 1e-6;

// Finite-dimensional real span of exponential polynomials. The stored basis
// is the reduced row echelon form over the union term-key set; `given`
// retains the originally supplied functions.
class FuncSpan {
public:
    FuncSpan() = default;

    // Reduces the input to an independent canonical basis (rank = dim).
    static FuncSpan canonicalize(std::vector<ExpPoly> funcs);

    int dim() const { return int(basis_.size()); }
    const std::vector<ExpPoly>& basis() const { return basis_; }
    const std::vector<ExpPoly>& given() const { return given_; }

    bool contains(const ExpPoly& f, double tol = kSpanResidualTol) const;

    // Span of {exp(w1*x1+w2*x2) * b : b in basis}.
    FuncSpan scaled_exp(const Num& w1, const Num& w2) const;

    friend bool span_equal(const FuncSpan& a, const FuncSpan& b, double tol);

private:
    std::vector<ExpPoly> basis_;
    std::vector<ExpPoly> given_;
};

bool span_equal(const FuncSpan& a, const FuncSpan& b,
                double tol = kSpanResidualTol);

// Factors a 3-dimensional span as exp(g) * span{1, phi1, phi2} with
// g = w1*x1 + w2*x2; throws FactorError when no real exponent exposes the
// constant function.
struct AffineFactorization {
    Num w1, w2;
    ExpPoly phi1, phi2;
};
AffineFactorization factor_affine_chart(const FuncSpan& span);

}  // namespace afflab
