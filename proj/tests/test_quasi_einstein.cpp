#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "afflab/catalogue.hpp"
#include "afflab/errors.hpp"
#include "afflab/quasi_einstein.hpp"

#include <random>

using namespace afflab;

namespace {

std::mt19937 rng(4242);

TypeAModel random_model() {
    std::uniform_int_distribution<int> num(-9, 9), den(1, 7);
    TypeAModel m;
    for (auto& g : m.gamma) g = Num::ratio(num(rng), den(rng));
    return m;
}

}  // namespace

TEST_CASE("qe_apply: catalogue annihilation cases") {
    Connection m30 = Connection::lift(TypeAModel(0, 0, 0, 0, 0, 1));
    QeResidual r1 = qe_apply(m30, ExpPoly::exponential(0, 1));
    CHECK(r1.exact_zero);

    Connection m11 = Connection::lift(TypeAModel(-1, 0, 1, 0, 0, 2));
    QeResidual r2 = qe_apply(m11, ExpPoly::exponential(-1, 1));
    CHECK(r2.exact_zero);

    Connection m00 = Connection::lift(TypeAModel(0, 0, 0, 0, 0, 0));
    QeResidual r3 = qe_apply(m00, ExpPoly::exponential(1, 0));
    CHECK(!r3.exact_zero);
    CHECK(r3.tensor.r11 == ExpPoly::exponential(1, 0));

    QeResidual r4 = qe_apply(Connection::geometry_n(), ExpPoly::x1());
    CHECK(r4.exact_zero);
}

TEST_CASE("qe_member mirrors qe_apply") {
    Connection m30 = Connection::lift(TypeAModel(0, 0, 0, 0, 0, 1));
    Connection m11 = Connection::lift(TypeAModel(-1, 0, 1, 0, 0, 2));
    Connection m00 = Connection::lift(TypeAModel(0, 0, 0, 0, 0, 0));
    CHECK(qe_member(m30, ep_parse("exp(x2)")));
    CHECK(qe_member(m11, ep_parse("exp(x2-x1)")));
    CHECK(!qe_member(m00, ep_parse("exp(x1)")));
    // the completion geometry N
    Connection n = Connection::geometry_n();
    CHECK(qe_member(n, ep_parse("cos(x2)")));
    CHECK(qe_member(n, ep_parse("sin(x2)")));
    CHECK(qe_member(n, ep_parse("x1")));
}

TEST_CASE("qe_apply is linear in f") {
    Connection conn = Connection::lift(random_model());
    ExpPoly f = ep_parse("x2*exp(x1)"), g = ep_parse("x1^2 + exp(x2)");
    Num alpha = Num::ratio(3, 2), beta = Num(-2);
    QeResidual lhs = qe_apply(conn, f.scaled(alpha) + g.scaled(beta));
    QeResidual rf = qe_apply(conn, f), rg = qe_apply(conn, g);
    CHECK(lhs.tensor.r11 == rf.tensor.r11.scaled(alpha) + rg.tensor.r11.scaled(beta));
    CHECK(lhs.tensor.r12 == rf.tensor.r12.scaled(alpha) + rg.tensor.r12.scaled(beta));
    CHECK(lhs.tensor.r22 == rf.tensor.r22.scaled(alpha) + rg.tensor.r22.scaled(beta));
}

TEST_CASE("qe_solve: flat plane") {
    FuncSpan q = qe_solve_type_a(TypeAModel(0, 0, 0, 0, 0, 0));
    CHECK(q.dim() == 3);
    CHECK(span_equal(q, q_catalogue({Family::M0_0})));
}

TEST_CASE("qe_solve: complex pair model M_5^0") {
    TypeAModel m50(1, 0, 0, 1, -1, 0);
    QSolveResult res = qe_solve_detailed(m50);
    CHECK(res.span.dim() == 3);
    CHECK(span_equal(res.span, q_catalogue({Family::M5_0})));
    bool has_pair = false;
    for (const auto& r : res.roots) has_pair = has_pair || r.complex_pair;
    CHECK(has_pair);
}

TEST_CASE("qe_solve: generic model solutions are members") {
    TypeAModel m(1, 1, 1, 1, 1, 1);
    FuncSpan q = qe_solve_type_a(m);
    CHECK(q.dim() == 3);
    Connection conn = Connection::lift(m);
    for (const auto& f : q.basis()) CHECK(qe_member(conn, f));
}

TEST_CASE("qe_solve: dimension is 3 for 500 random rational models") {
    for (int k = 0; k < 500; ++k) {
        TypeAModel m = random_model();
        FuncSpan q = qe_solve_type_a(m);
        CHECK(q.dim() == 3);
    }
}

TEST_CASE("q_catalogue literal spans") {
    FuncSpan q41 = q_catalogue({Family::M4_1, {Num(2)}});
    std::vector<ExpPoly> expect = {
        ep_parse("exp(x2)"), ep_parse("x2*exp(x2)"),
        ep_parse("(2*x2^2+2*x1)*exp(x2)")};
    CHECK(span_equal(q41, FuncSpan::canonicalize(expect)));

    CHECK_THROWS_AS(q_catalogue({Family::M2_1, {Num(0)}}), ParamDomainError);
    CHECK_THROWS_AS(q_catalogue({Family::M2_1, {Num(-1)}}), ParamDomainError);

    FuncSpan q42 = q_catalogue({Family::M4_2, {Num(1)}});
    std::vector<ExpPoly> expect42 = {ep_parse("exp(x1)"), ep_parse("x2*exp(x1)"),
                                     ep_parse("(2*x1+x2^2)*exp(x1)")};
    CHECK(span_equal(q42, FuncSpan::canonicalize(expect42)));
}

TEST_CASE("catalogue conformance on a parameter sample") {
    std::vector<CanonicalLabel> labels = {
        {Family::M0_0}, {Family::M1_0}, {Family::M2_0}, {Family::M3_0},
        {Family::M4_0}, {Family::M5_0}, {Family::M1_1},
        {Family::M2_1, {Num::ratio(1, 3)}}, {Family::M3_1, {Num(-2)}},
        {Family::M4_1, {Num(0)}}, {Family::M4_1, {Num(2)}},
        {Family::M5_1, {Num(1)}}, {Family::M1_2, {Num(2), Num(2)}},
        {Family::M2_2, {Num(-1), Num(1)}}, {Family::M3_2, {Num(2)}},
        {Family::M4_2, {Num(-1)}},
    };
    for (const auto& label : labels) {
        CAPTURE(label.str());
        TypeAModel m = canonical_model(label);
        Connection conn = Connection::lift(m);
        FuncSpan qc = q_catalogue(label);
        for (const auto& f : qc.given()) {
            QeResidual r = qe_apply(conn, f);
            CHECK(r.exact_zero);
        }
        FuncSpan solved = qe_solve_type_a(m);
        CHECK(span_equal(solved, qc));
    }
}
