#include "afflab/catalogue.hpp"

#include "afflab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace afflab {

namespace {


ExpPoly ep_exp(const Num& a, const Num& b) { return ExpPoly::exponential(a, b); }
ExpPoly ep_one() { return ExpPoly::constant(Num(1)); }

}  // namespace

std::string CanonicalLabel::str() const {
    std::ostringstream os;
    os << family_name(family);
    if (!params.empty()) {
        os << "(";
        for (std::size_t k = 0; k < params.size(); ++k)
            os << (k ? "," : "") << params[k].str();
        os << ")";
    }
    return os.str();
}

int family_rank(Family f) {
    switch (f) {
        case Family::M0_0: case Family::M1_0: case Family::M2_0:
        case Family::M3_0: case Family::M4_0: case Family::M5_0:
            return 0;
        case Family::M1_1: case Family::M2_1: case Family::M3_1:
        case Family::M4_1: case Family::M5_1: case Family::N:
            return 1;
        default:
            return 2;
    }
}

int family_param_count(Family f) {
    switch (f) {
        case Family::M2_1: case Family::M3_1: case Family::M4_1:
        case Family::M5_1: case Family::M3_2: case Family::M4_2:
            return 1;
        case Family::M1_2: case Family::M2_2:
            return 2;
        default:
            return 0;
    }
}

std::string family_name(Family f) {
    switch (f) {
        case Family::M0_0: return "M_0^0";
        case Family::M1_0: return "M_1^0";
        case Family::M2_0: return "M_2^0";
        case Family::M3_0: return "M_3^0";
        case Family::M4_0: return "M_4^0";
        case Family::M5_0: return "M_5^0";
        case Family::M1_1: return "M_1^1";
        case Family::M2_1: return "M_2^1";
        case Family::M3_1: return "M_3^1";
        case Family::M4_1: return "M_4^1";
        case Family::M5_1: return "M_5^1";
        case Family::M1_2: return "M_1^2";
        case Family::M2_2: return "M_2^2";
        case Family::M3_2: return "M_3^2";
        case Family::M4_2: return "M_4^2";
        case Family::N: return "N";
    }
    return "?";
}

Family parse_family(const std::string& name) {
    static const Family all[] = {
        Family::M0_0, Family::M1_0, Family::M2_0, Family::M3_0, Family::M4_0,
        Family::M5_0, Family::M1_1, Family::M2_1, Family::M3_1, Family::M4_1,
        Family::M5_1, Family::M1_2, Family::M2_2, Family::M3_2, Family::M4_2,
        Family::N};
    for (Family f : all)
        if (family_name(f) == name) return f;
    throw ParamDomainError("unknown family label '" + name + "'");
}

bool also_type_b(Family f) {
    return f == Family::M1_1 || f == Family::M2_1 || f == Family::M3_1 ||
           f == Family::M4_1;
}

void validate_params(Family f, const std::vector<Num>& params) {
    if (int(params.size()) != family_param_count(f))
        throw ParamDomainError(family_name(f) + " takes " +
                               std::to_string(family_param_count(f)) +
                               " parameter(s), got " +
                               std::to_string(params.size()));
    auto is = [](const Num& v, long long p, long long q = 1) {
        return v.is_exact() ? v == Num::ratio(p, q)
                            : std::abs(v.to_double() - double(p) / double(q)) < 1e-12;
    };
    switch (f) {
        case Family::M2_1:
        case Family::M3_1:
            if (is(params[0], 0) || is(params[0], -1))
                throw ParamDomainError(family_name(f) +
                                       " requires c1 not in {0,-1}");
            break;
        case Family::M3_2:
            if (is(params[0], 0))
                throw ParamDomainError("M_3^2 requires c2 != 0");
            break;
        case Family::M1_2: {
            const Num &a1 = params[0], &a2 = params[1];
            if (is(a1, 0) || is(a2, 0))
                throw ParamDomainError("M_1^2 requires a1*a2 != 0");
            if (is(a1 + a2, 1))
                throw ParamDomainError("M_1^2 requires a1+a2 != 1");
            break;
        }
        case Family::M2_2: {
            const Num &b1 = params[0], &b2 = params[1];
            if (is(b1, 1)) throw ParamDomainError("M_2^2 requires b1 != 1");
            if (is(b1, 0) && is(b2, 0))
                throw ParamDomainError("M_2^2 requires (b1,b2) != (0,0)");
            break;
        }
        case Family::M4_2:
            if (!is(params[0], 1) && !is(params[0], -1))
                throw ParamDomainError("M_4^2 takes the parameter +1 or -1");
            break;
        default:
            break;
    }
}

TypeAModel canonical_model(const CanonicalLabel& label) {
    validate_params(label.family, label.params);
    const auto& p = label.params;
    switch (label.family) {
        case Family::M0_0: return TypeAModel(0, 0, 0, 0, 0, 0);
        case Family::M1_0: return TypeAModel(1, 0, 0, 1, 0, 0);
        case Family::M2_0: return TypeAModel(-1, 0, 0, 0, 0, 1);
        case Family::M3_0: return TypeAModel(0, 0, 0, 0, 0, 1);
        case Family::M4_0: return TypeAModel(0, 0, 0, 0, 1, 0);
        case Family::M5_0: return TypeAModel(1, 0, 0, 1, -1, 0);
        case Family::M1_1: return TypeAModel(-1, 0, 1, 0, 0, 2);
        case Family::M2_1:
            return TypeAModel(-1, 0, p[0], 0, 0, Num(1) + p[0] + p[0]);
        case Family::M3_1:
            return TypeAModel(0, 0, p[0], 0, 0, Num(1) + p[0] + p[0]);
        case Family::M4_1: return TypeAModel(0, 0, 1, 0, p[0], 2);
        case Family::M5_1:
            return TypeAModel(1, 0, 0, 0, Num(1) + p[0] * p[0], p[0] + p[0]);
        case Family::M1_2: {
            const Num &a1 = p[0], &a2 = p[1];
            Num den = a1 + a2 - Num(1);
            return TypeAModel((a1 * a1 + a2 - Num(1)) / den,
                              (a1 * a1 - a1) / den,
                              (a1 * a2) / den,
                              (a1 * a2) / den,
                              (a2 * a2 - a2) / den,
                              (a1 + a2 * a2 - Num(1)) / den);
        }
        case Family::M2_2: {
            const Num &b1 = p[0], &b2 = p[1];
            return TypeAModel(Num(1) + b1, 0, b2, 1,
                              (Num(1) + b2 * b2) / (b1 - Num(1)), 0);
        }
        case Family::M3_2: return TypeAModel(2, 0, 0, 1, p[0], 1);
        case Family::M4_2: return TypeAModel(2, 0, 0, 1, p[0], 0);
        case Family::N:
            throw ParamDomainError("N is not a constant-coefficient model");
    }
    throw ParamDomainError("bad family");
}

Connection canonical_connection(const CanonicalLabel& label) {
    if (label.family == Family::N) return Connection::geometry_n();
    return Connection::lift(canonical_model(label));
}

FuncSpan q_catalogue(const CanonicalLabel& label) {
    validate_params(label.family, label.params);
    const auto& p = label.params;
    std::vector<ExpPoly> basis;
    switch (label.family) {
        case Family::M0_0:
            basis = {ep_one(), ExpPoly::x1(), ExpPoly::x2()};
            break;
        case Family::M1_0:
            basis = {ep_one(), ep_exp(1, 0), ExpPoly::x2() * ep_exp(1, 0)};
            break;
        case Family::M2_0:
            basis = {ep_one(), ep_exp(0, 1), ep_exp(-1, 0)};
            break;
        case Family::M3_0:
            basis = {ep_one(), ExpPoly::x1(), ep_exp(0, 1)};
            break;
        case Family::M4_0:
            basis = {ep_one(), ExpPoly::x2(),
                     ExpPoly::monomial(Num(1), 0, 2) + ExpPoly::monomial(Num(2), 1, 0)};
            break;
        case Family::M5_0:
            basis = {ep_one(), ep_exp(1, 0) * ExpPoly::cosine(0, 1),
                     ep_exp(1, 0) * ExpPoly::sine(0, 1)};
            break;
        case Family::M1_1: {
            ExpPoly g = ep_exp(0, 1);
            basis = {g, ExpPoly::x2() * g, ep_exp(-1, 1)};
            break;
        }
        case Family::M2_1: {
            ExpPoly g = ep_exp(0, p[0]);
            basis = {g, ep_exp(0, p[0] + Num(1)), ep_exp(-1, p[0])};
            break;
        }
        case Family::M3_1: {
            ExpPoly g = ep_exp(0, p[0]);
            basis = {g, ep_exp(0, p[0] + Num(1)), ExpPoly::x1() * g};
            break;
        }
        case Family::M4_1: {
            ExpPoly g = ep_exp(0, 1);
            ExpPoly quad = ExpPoly::monomial(p[0], 0, 2) + ExpPoly::monomial(Num(2), 1, 0);
            basis = {g, ExpPoly::x2() * g, quad * g};
            break;
        }
        case Family::M5_1:
            basis = {ep_exp(0, p[0]) * ExpPoly::cosine(0, 1),
                     ep_exp(0, p[0]) * ExpPoly::sine(0, 1), ep_exp(1, 0)};
            break;
        case Family::M1_2:
            basis = {ep_exp(1, 0), ep_exp(0, 1), ep_exp(p[0], p[1])};
            break;
        case Family::M2_2:
            basis = {ep_exp(1, 0) * ExpPoly::cosine(0, 1),
                     ep_exp(1, 0) * ExpPoly::sine(0, 1), ep_exp(p[0], p[1])};
            break;
        case Family::M3_2: {
            ExpPoly g = ep_exp(1, 0);
            ExpPoly lin = ExpPoly::x1() - ExpPoly::monomial(p[0], 0, 1);
            basis = {g, lin * g, ep_exp(1, 1)};
            break;
        }
        case Family::M4_2: {
            ExpPoly g = ep_exp(1, 0);
            ExpPoly quad = ExpPoly::monomial(Num(2), 1, 0) +
                           ExpPoly::monomial(p[0], 0, 2);
            basis = {g, ExpPoly::x2() * g, quad * g};
            break;
        }
        case Family::N:
            basis = {ExpPoly::cosine(0, 1), ExpPoly::sine(0, 1), ExpPoly::x1()};
            break;
    }
    FuncSpan span = FuncSpan::canonicalize(std::move(basis));
    if (span.dim() != 3)
        throw DimensionError("catalogue span for " + label.str() +
                             " has dimension " + std::to_string(span.dim()));
    return span;
}

std::vector<Num> canonicalize_params(Family f, const std::vector<Num>& params) {
    validate_params(f, params);
    switch (f) {
        case Family::M2_1: {
            // M_2^1(c1) and M_2^1(-1-c1) are linearly equivalent.
            const Num& c1 = params[0];
            if (c1.to_double() >= -0.5) return {c1};
            return {Num(-1) - c1};
        }
        case Family::M4_1: {
            // M_4^1(c) ~ M_4^1(s*c) for every nonzero scale s.
            return {params[0].is_zero() ? Num(0) : Num(1)};
        }
        case Family::M5_1: {
            const Num& c = params[0];
            return {c.to_double() < 0 ? -c : c};
        }
        case Family::M2_2: {
            const Num& b2 = params[1];
            return {params[0], b2.to_double() < 0 ? -b2 : b2};
        }
        case Family::M1_2: {
            const Num &a1 = params[0], &a2 = params[1];
            Num one(1);
            std::vector<std::vector<Num>> orbit = {
                {a1, a2},
                {a2, a1},
                {-a1 / a2, one / a2},
                {one / a2, -a1 / a2},
                {-a2 / a1, one / a1},
                {one / a1, -a2 / a1},
            };
            auto lex_less = [](const std::vector<Num>& x, const std::vector<Num>& y) {
                double d0 = x[0].to_double() - y[0].to_double();
                if (std::abs(d0) > 1e-9) return d0 < 0;
                return x[1].to_double() < y[1].to_double();
            };
            return *std::max_element(orbit.begin(), orbit.end(), lex_less);
        }
        default:
            return params;
    }
}

}  // namespace afflab
