// Internal univariate polynomial helpers shared by the solver and the
// flattening code. Coefficients are stored low to high.
#pragma once

#include "afflab/numeric.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <vector>

namespace afflab::detail {

inline std::vector<Num> poly_derivative(const std::vector<Num>& p) {
    std::vector<Num> d;
    for (std::size_t k = 1; k < p.size(); ++k) d.push_back(p[k] * Num(int(k)));
    return d;
}

inline void poly_trim(std::vector<Num>& p) {
    while (!p.empty() && p.back().is_zero()) p.pop_back();
}

inline std::vector<Num> poly_rem(std::vector<Num> a, const std::vector<Num>& b) {
    while (a.size() >= b.size() && !a.empty()) {
        Num factor = a.back() / b.back();
        std::size_t shift = a.size() - b.size();
        for (std::size_t k = 0; k < b.size(); ++k) a[shift + k] -= factor * b[k];
        a.pop_back();
        poly_trim(a);
        if (a.size() < b.size()) break;
    }
    return a;
}

inline std::vector<Num> poly_gcd(std::vector<Num> a, std::vector<Num> b) {
    poly_trim(a);
    poly_trim(b);
    while (!b.empty()) {
        auto r = poly_rem(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        Num lead = a.back();
        for (auto& c : a) c /= lead;
    }
    return a;
}

inline std::vector<Num> poly_div_exact(const std::vector<Num>& a,
                                       const std::vector<Num>& b) {
    std::vector<Num> rem = a,
                     quot(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, Num(0));
    while (rem.size() >= b.size() && !rem.empty()) {
        Num factor = rem.back() / b.back();
        std::size_t shift = rem.size() - b.size();
        quot[shift] = factor;
        for (std::size_t k = 0; k < b.size(); ++k) rem[shift + k] -= factor * b[k];
        rem.pop_back();
        poly_trim(rem);
        if (rem.size() < b.size()) break;
    }
    return quot;
}

// Distinct-root part p / gcd(p, p'); for exact inputs this turns repeated
// roots into simple ones ahead of the numeric root finder.
inline std::vector<Num> square_free_part(const std::vector<Num>& p) {
    auto g = poly_gcd(p, poly_derivative(p));
    if (g.size() <= 1) return p;
    return poly_div_exact(p, g);
}

// All roots via the companion matrix, Newton-polished.
inline std::vector<std::complex<double>> poly_roots(
    const std::vector<double>& coeffs_low_to_high) {
    using Cx = std::complex<double>;
    std::vector<double> p = coeffs_low_to_high;
    while (!p.empty() && std::abs(p.back()) < 1e-14) p.pop_back();
    if (p.size() <= 1) return {};
    const int n = int(p.size()) - 1;
    std::vector<Cx> roots;
    if (n == 1) {
        roots.push_back(Cx(-p[0] / p[1], 0));
    } else {
        Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
        for (int k = 0; k < n; ++k) comp(k, n - 1) = -p[k] / p[n];
        for (int k = 1; k < n; ++k) comp(k, k - 1) = 1.0;
        Eigen::EigenSolver<Eigen::MatrixXd> es(comp);
        for (int k = 0; k < n; ++k) roots.push_back(es.eigenvalues()(k));
    }
    auto eval = [&](Cx z, Cx& val, Cx& der) {
        val = 0;
        der = 0;
        for (int k = n; k >= 0; --k) {
            der = der * z + val;
            val = val * z + p[k];
        }
    };
    for (auto& r : roots)
        for (int it = 0; it < 4; ++it) {
            Cx v, d;
            eval(r, v, d);
            if (std::abs(d) < 1e-300) break;
            r -= v / d;
        }
    return roots;
}

}  // namespace afflab::detail
