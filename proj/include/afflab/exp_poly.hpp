#pragma once

#include "afflab/numeric.hpp"

#include <string>
#include <vector>

namespace afflab {

// One canonical term: coeff * x1^i * x2^j * exp(lam1*x1 + lam2*x2).
struct EpTerm {
    CNum coeff;
    int i = 0, j = 0;
    CNum lam1, lam2;
};

// Exact closed algebra of exponential polynomials with complex exponents.
// Real-valuedness is carried as conjugation closure of the term multiset:
// every term with a non-real exponent is paired with its conjugate, and
// real-exponent terms have real coefficients.
//
// Canonical form: terms sorted by (lam1, lam2, i, j); exponents closer than
// kExponentMergeTol merged (float mode); no duplicate keys; no zero
// coefficients.
class ExpPoly {
public:
    ExpPoly() = default;
    explicit ExpPoly(std::vector<EpTerm> terms) : terms_(std::move(terms)) {
        canonicalize();
    }

    static ExpPoly zero() { return ExpPoly(); }
    static ExpPoly constant(const Num& c);
    static ExpPoly monomial(const Num& c, int i, int j);
    static ExpPoly x1() { return monomial(Num(1), 1, 0); }
    static ExpPoly x2() { return monomial(Num(1), 0, 1); }
    // exp(a*x1 + b*x2)
    static ExpPoly exponential(const Num& a, const Num& b);
    static ExpPoly cosine(const Num& a, const Num& b);
    static ExpPoly sine(const Num& a, const Num& b);

    const std::vector<EpTerm>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    // Value of the constant part (the term with zero exponent and degree 0).
    Num constant_value() const;
    double max_abs_coeff() const;
    bool all_exact() const;

    bool is_real_closed(double tol = 1e-9) const;

    ExpPoly operator-() const;
    friend ExpPoly operator+(const ExpPoly& a, const ExpPoly& b);
    friend ExpPoly operator-(const ExpPoly& a, const ExpPoly& b);
    friend ExpPoly operator*(const ExpPoly& a, const ExpPoly& b);
    ExpPoly scaled(const Num& a) const;
    ExpPoly scaled(const CNum& a) const;

    // Exact partial derivative along axis 1 or 2.
    ExpPoly derivative(int axis) const;

    // Real value at a real point; throws EvalOverflowError when any
    // |Re(lam.x)| exceeds 700 on an approximate path.
    double eval(double px1, double px2) const;
    std::complex<double> eval_complex(double px1, double px2) const;

    friend bool operator==(const ExpPoly& a, const ExpPoly& b);
    friend bool operator!=(const ExpPoly& a, const ExpPoly& b) { return !(a == b); }

    std::string str() const;

private:
    void canonicalize();
    std::vector<EpTerm> terms_;
};

// f(m11*y1 + m12*y2, m21*y1 + m22*y2): composition with a linear change of
// variables, exact within the class.
ExpPoly substitute_linear(const ExpPoly& f, const Num& m11, const Num& m12,
                          const Num& m21, const Num& m22);

// Terms regrouped by exponent; `poly` holds the polynomial part with zero
// exponent. Groups are ordered by exponent key.
struct ExponentGroup {
    CNum lam1, lam2;
    ExpPoly poly;
};
std::vector<ExponentGroup> exponent_groups(const ExpPoly& f);

// Parses the expression grammar: sums of products of numeric literals
// (integer, decimal, "p/q"), `i`, `x1^k`, `x2^k`, `exp(a*x1+b*x2)`,
// `cos(...)`, `sin(...)`, and parenthesized subexpressions. cos/sin expand
// into conjugate complex-exponential pairs. The result must be real-closed.
ExpPoly ep_parse(const std::string& text, bool exact_mode = true);

inline std::string ep_format(const ExpPoly& f) { return f.str(); }

}  // namespace afflab
