#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>

namespace afflab {

using Rational = boost::multiprecision::cpp_rational;

// Comparison tolerance for float-mode scalar identity tests.
inline constexpr double kFloatEps = 1e-12;
// Exponent keys closer than this are merged during canonicalization.
inline constexpr double kExponentMergeTol = 1e-10;

// Scalar that is an exact rational until an irrational value enters a
// computation, after which it degrades to a double. Exact op exact stays
// exact; anything touching an approximate value becomes approximate.
class Num {
public:
    Num() : exact_(true), q_(0), d_(0.0) {}
    Num(int v) : exact_(true), q_(v), d_(double(v)) {}
    Num(long long v) : exact_(true), q_(v), d_(double(v)) {}
    Num(const Rational& q) : exact_(true), q_(q), d_(q.convert_to<double>()) {}
    static Num approx(double d) {
        Num n;
        n.exact_ = false;
        n.q_ = 0;
        n.d_ = d;
        return n;
    }
    static Num ratio(long long p, long long q) { return Num(Rational(p, q)); }

    bool is_exact() const { return exact_; }
    double to_double() const { return exact_ ? q_.convert_to<double>() : d_; }
    const Rational& rational() const { return q_; }  // valid only when exact

    bool is_zero() const { return exact_ ? q_.is_zero() : d_ == 0.0; }
    // Zero within tol when approximate, exact zero otherwise.
    bool near_zero(double tol = kFloatEps) const {
        return exact_ ? q_.is_zero() : std::abs(d_) < tol;
    }

    Num operator-() const {
        return exact_ ? Num(Rational(-q_)) : approx(-d_);
    }
    friend Num operator+(const Num& a, const Num& b) {
        if (a.exact_ && b.exact_) return Num(Rational(a.q_ + b.q_));
        return approx(a.to_double() + b.to_double());
    }
    friend Num operator-(const Num& a, const Num& b) {
        if (a.exact_ && b.exact_) return Num(Rational(a.q_ - b.q_));
        return approx(a.to_double() - b.to_double());
    }
    friend Num operator*(const Num& a, const Num& b) {
        if (a.exact_ && b.exact_) return Num(Rational(a.q_ * b.q_));
        return approx(a.to_double() * b.to_double());
    }
    friend Num operator/(const Num& a, const Num& b) {
        if (a.exact_ && b.exact_ && !b.q_.is_zero())
            return Num(Rational(a.q_ / b.q_));
        return approx(a.to_double() / b.to_double());
    }
    Num& operator+=(const Num& o) { return *this = *this + o; }
    Num& operator-=(const Num& o) { return *this = *this - o; }
    Num& operator*=(const Num& o) { return *this = *this * o; }
    Num& operator/=(const Num& o) { return *this = *this / o; }

    // Strict ordering used for canonical term sorting. Exact pairs compare
    // exactly; any approximate operand compares through double.
    friend int cmp(const Num& a, const Num& b) {
        if (a.exact_ && b.exact_)
            return a.q_ < b.q_ ? -1 : (a.q_ > b.q_ ? 1 : 0);
        double x = a.to_double(), y = b.to_double();
        return x < y ? -1 : (x > y ? 1 : 0);
    }
    friend bool operator<(const Num& a, const Num& b) { return cmp(a, b) < 0; }
    friend bool operator==(const Num& a, const Num& b) {
        if (a.exact_ && b.exact_) return a.q_ == b.q_;
        return a.to_double() == b.to_double();
    }
    // Identity up to the merge tolerance when either side is approximate.
    // The tolerance is relative at large magnitudes: float roots carry
    // relative accuracy, so exponents of size s match within tol * (1 + s).
    friend bool near(const Num& a, const Num& b, double tol = kExponentMergeTol) {
        if (a.exact_ && b.exact_) return a.q_ == b.q_;
        double x = a.to_double(), y = b.to_double();
        return std::abs(x - y) <= tol * (1.0 + std::max(std::abs(x), std::abs(y)));
    }

    std::string str() const;

private:
    bool exact_;
    Rational q_;
    double d_;
};

// Complex scalar over Num. Real and imaginary parts degrade independently.
struct CNum {
    Num re, im;

    CNum() = default;
    CNum(Num r) : re(std::move(r)), im(0) {}
    CNum(Num r, Num i) : re(std::move(r)), im(std::move(i)) {}
    CNum(int r) : re(r), im(0) {}
    static CNum approx(std::complex<double> z) {
        return CNum(Num::approx(z.real()), Num::approx(z.imag()));
    }

    bool is_real() const { return im.is_zero(); }
    bool is_exact() const { return re.is_exact() && im.is_exact(); }
    bool is_zero() const { return re.is_zero() && im.is_zero(); }
    bool near_zero(double tol = kFloatEps) const {
        return re.near_zero(tol) && im.near_zero(tol);
    }
    std::complex<double> to_complex() const {
        return {re.to_double(), im.to_double()};
    }
    double abs() const { return std::abs(to_complex()); }

    CNum conj() const { return CNum(re, -im); }
    CNum operator-() const { return CNum(-re, -im); }
    friend CNum operator+(const CNum& a, const CNum& b) {
        return CNum(a.re + b.re, a.im + b.im);
    }
    friend CNum operator-(const CNum& a, const CNum& b) {
        return CNum(a.re - b.re, a.im - b.im);
    }
    friend CNum operator*(const CNum& a, const CNum& b) {
        return CNum(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
    }
    friend CNum operator/(const CNum& a, const CNum& b) {
        if (b.im.is_zero()) return CNum(a.re / b.re, a.im / b.re);
        Num n = b.re * b.re + b.im * b.im;
        return CNum((a.re * b.re + a.im * b.im) / n,
                    (a.im * b.re - a.re * b.im) / n);
    }
    friend bool operator==(const CNum& a, const CNum& b) {
        return a.re == b.re && a.im == b.im;
    }
    friend bool near(const CNum& a, const CNum& b, double tol = kExponentMergeTol) {
        return near(a.re, b.re, tol) && near(a.im, b.im, tol);
    }
    friend int cmp(const CNum& a, const CNum& b) {
        int c = cmp(a.re, b.re);
        return c != 0 ? c : cmp(a.im, b.im);
    }
};

// Parses "7", "-3/4", "0.25", "1e-3". Exact mode turns decimal and
// scientific literals into exact rationals; float mode yields doubles.
Num parse_number(const std::string& text, bool exact_mode = true);

// Nearest rational with denominator <= max_den if it approximates x within
// tol; used to polish float results obtained from exact inputs.
std::optional<Rational> rationalize(double x, double tol = 1e-9,
                                    long long max_den = 10000);

}  // namespace afflab
