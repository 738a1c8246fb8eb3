#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "afflab/errors.hpp"
#include "afflab/func_span.hpp"

#include <random>

using namespace afflab;

namespace {

ExpPoly P(const std::string& s) { return ep_parse(s); }

FuncSpan S(std::initializer_list<const char*> fns) {
    std::vector<ExpPoly> v;
    for (const char* f : fns) v.push_back(P(f));
    return FuncSpan::canonicalize(std::move(v));
}

}  // namespace

TEST_CASE("canonicalize computes rank") {
    CHECK(S({"1", "x1", "1+x1"}).dim() == 2);
    CHECK(S({"1", "exp(x2)", "exp(-x1)"}).dim() == 3);
    // sin/cos recombinations stay rank 2 over the complex term keys
    CHECK(S({"sin(x2)", "cos(x2)", "2*cos(x2)-3*sin(x2)", "sin(x2)+cos(x2)"}).dim() == 2);
    CHECK(FuncSpan::canonicalize({}).dim() == 0);
}

TEST_CASE("span_equal is mutual containment") {
    CHECK(span_equal(S({"1", "x1", "x2"}), S({"1+x1", "x1-x2", "x2"})));
    CHECK(!span_equal(S({"1", "x1", "exp(x2)"}), S({"1", "exp(x2)", "exp(-x1)"})));
    // distributing an exponential factor over a span
    FuncSpan lhs = S({"1", "exp(x2)", "x1"}).scaled_exp(Num(0), Num::ratio(1, 3));
    FuncSpan rhs = S({"exp(1/3*x2)", "exp(4/3*x2)", "x1*exp(1/3*x2)"});
    CHECK(span_equal(lhs, rhs));
}

TEST_CASE("span_equal is an equivalence relation on a random family") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> pick(0, 2), coef(-3, 3);
    std::vector<std::vector<ExpPoly>> gens = {
        {P("1"), P("x1"), P("x2")},
        {P("exp(x1)"), P("exp(x2)"), P("exp(2*x1+x2)")},
        {P("exp(x2)"), P("x2*exp(x2)"), P("exp(x2-x1)")},
    };
    std::vector<FuncSpan> spans;
    for (int k = 0; k < 9; ++k) {
        const auto& g = gens[k % 3];
        // random invertible recombination of the generators
        std::vector<ExpPoly> basis;
        for (int r = 0; r < 3; ++r) {
            ExpPoly f = g[r];
            f = f + g[(r + 1) % 3].scaled(Num(coef(rng)));
            basis.push_back(f);
        }
        spans.push_back(FuncSpan::canonicalize(std::move(basis)));
    }
    for (const auto& a : spans) CHECK(span_equal(a, a));  // reflexive
    for (std::size_t i = 0; i < spans.size(); ++i)
        for (std::size_t j = 0; j < spans.size(); ++j) {
            bool ij = span_equal(spans[i], spans[j]);
            CHECK(ij == span_equal(spans[j], spans[i]));  // symmetric
            if (!ij) continue;
            for (std::size_t k = 0; k < spans.size(); ++k)
                if (span_equal(spans[j], spans[k]))
                    CHECK(span_equal(spans[i], spans[k]));  // transitive
        }
    CHECK(span_equal(spans[0], spans[3]));
    CHECK(!span_equal(spans[0], spans[1]));
}

TEST_CASE("mixed exact/float spans merge exponent keys") {
    std::vector<ExpPoly> a{ExpPoly::exponential(Num::approx(1.0 / 3 + 4e-11), 0)};
    std::vector<ExpPoly> b{ExpPoly::exponential(Num::ratio(1, 3), 0)};
    CHECK(span_equal(FuncSpan::canonicalize(a), FuncSpan::canonicalize(b)));
}

TEST_CASE("factor_affine_chart exposes the constant function") {
    auto fac = factor_affine_chart(S({"1", "x1", "x2"}));
    CHECK(fac.w1.is_zero());
    CHECK(fac.w2.is_zero());
    // the two charts span the linear functions
    FuncSpan charts = FuncSpan::canonicalize({fac.phi1, fac.phi2, P("1")});
    CHECK(span_equal(charts, S({"1", "x1", "x2"})));

    // e^{x2} S(1, x2, e^{-x1}): both w=(0,1) and w=(-1,1) expose a constant
    FuncSpan q11 = S({"exp(x2)", "x2*exp(x2)", "exp(x2-x1)"});
    auto fac2 = factor_affine_chart(q11);
    CHECK(q11.contains(ExpPoly::exponential(fac2.w1, fac2.w2)));
    FuncSpan normalized = q11.scaled_exp(-fac2.w1, -fac2.w2);
    CHECK(normalized.contains(ExpPoly::constant(Num(1))));
    CHECK(normalized.contains(fac2.phi1));
    CHECK(normalized.contains(fac2.phi2));

    CHECK_THROWS_AS(factor_affine_chart(S({"1", "x1"})), FactorError);
}
