#include "afflab/numeric.hpp"

#include "afflab/errors.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>

namespace afflab {

std::string Num::str() const {
    if (exact_) {
        const auto num = boost::multiprecision::numerator(q_);
        const auto den = boost::multiprecision::denominator(q_);
        if (den == 1) return num.str();
        return num.str() + "/" + den.str();
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", d_);
    return buf;
}

Num parse_number(const std::string& text, bool exact_mode) {
    if (text.empty()) throw ParseError("empty numeric literal", 0);
    const std::size_t slash = text.find('/');
    if (slash != std::string::npos) {
        Num num = parse_number(text.substr(0, slash), exact_mode);
        Num den = parse_number(text.substr(slash + 1), exact_mode);
        if (den.is_zero()) throw ParseError("zero denominator in " + text, slash);
        return num / den;
    }
    if (!exact_mode) {
        char* end = nullptr;
        double d = std::strtod(text.c_str(), &end);
        if (end != text.c_str() + text.size())
            throw ParseError("bad numeric literal '" + text + "'",
                             std::size_t(end - text.c_str()));
        return Num::approx(d);
    }

    // Exact route: [-]digits[.digits][(e|E)[+-]digits]
    std::size_t i = 0;
    bool neg = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
        neg = text[i] == '-';
        ++i;
    }
    boost::multiprecision::cpp_int mant = 0;
    long frac_digits = 0;
    bool any = false;
    for (; i < text.size() && std::isdigit((unsigned char)text[i]); ++i) {
        mant = mant * 10 + (text[i] - '0');
        any = true;
    }
    if (i < text.size() && text[i] == '.') {
        ++i;
        for (; i < text.size() && std::isdigit((unsigned char)text[i]); ++i) {
            mant = mant * 10 + (text[i] - '0');
            ++frac_digits;
            any = true;
        }
    }
    long expo = 0;
    if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
        ++i;
        bool eneg = false;
        if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
            eneg = text[i] == '-';
            ++i;
        }
        bool edig = false;
        for (; i < text.size() && std::isdigit((unsigned char)text[i]); ++i) {
            expo = expo * 10 + (text[i] - '0');
            edig = true;
        }
        if (!edig) throw ParseError("missing exponent digits in '" + text + "'", i);
        if (eneg) expo = -expo;
    }
    if (!any || i != text.size())
        throw ParseError("bad numeric literal '" + text + "'", i);

    Rational value(mant);
    long shift = expo - frac_digits;
    if (shift > 0)
        value *= Rational(boost::multiprecision::pow(
            boost::multiprecision::cpp_int(10), unsigned(shift)));
    else if (shift < 0)
        value /= Rational(boost::multiprecision::pow(
            boost::multiprecision::cpp_int(10), unsigned(-shift)));
    if (neg) value = -value;
    return Num(value);
}

std::optional<Rational> rationalize(double x, double tol, long long max_den) {
    if (!std::isfinite(x)) return std::nullopt;
    // Continued fraction expansion with bounded denominators.
    double v = x;
    long long p0 = 1, q0 = 0, p1 = (long long)std::floor(v), q1 = 1;
    v -= std::floor(v);
    for (int it = 0; it < 64 && q1 <= max_den; ++it) {
        double approx = double(p1) / double(q1);
        if (std::abs(approx - x) <= tol * (1.0 + std::abs(x)))
            return Rational(p1, q1);
        if (v < 1e-15) break;
        v = 1.0 / v;
        double a = std::floor(v);
        if (a > 9e17) break;
        long long ai = (long long)a;
        long long p2 = ai * p1 + p0, q2 = ai * q1 + q0;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        v -= a;
    }
    if (q1 != 0 && q1 <= max_den &&
        std::abs(double(p1) / double(q1) - x) <= tol * (1.0 + std::abs(x)))
        return Rational(p1, q1);
    return std::nullopt;
}

}  // namespace afflab
