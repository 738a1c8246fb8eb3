#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "afflab/catalogue.hpp"
#include "afflab/connection.hpp"

#include <random>

using namespace afflab;

namespace {

std::mt19937 rng(91);

TypeAModel random_model() {
    std::uniform_int_distribution<int> num(-9, 9), den(1, 7);
    TypeAModel m;
    for (auto& g : m.gamma) g = Num::ratio(num(rng), den(rng));
    return m;
}

}  // namespace

TEST_CASE("ricci_type_a closed form") {
    auto check = [](const TypeAModel& m, Num r11, Num r12, Num r22) {
        auto v = ricci_type_a(m).constant_values();
        CHECK(v[0] == r11);
        CHECK(v[1] == r12);
        CHECK(v[2] == r22);
    };
    check(TypeAModel(-1, 0, 1, 0, 0, 2), Num(0), Num(0), Num(1));  // M_1^1
    check(TypeAModel(0, 0, 0, 0, 0, 0), Num(0), Num(0), Num(0));
    check(TypeAModel(0, 0, 0, 1, Num::ratio(-1, 2), 0), Num(-1), Num(0),
          Num::ratio(1, 2));  // M_2^2(-1,0)
    for (int c : {0, 1, 3}) {
        TypeAModel m51(1, 0, 0, 0, 1 + c * c, 2 * c);
        check(m51, Num(0), Num(0), Num(1 + c * c));
    }
}

TEST_CASE("ricci_general agrees with the Type A closed form") {
    TypeAModel m11(-1, 0, 1, 0, 0, 2);
    SymBilinear general = ricci_general(Connection::lift(m11));
    SymBilinear direct = ricci_type_a(m11);
    CHECK(general.r11 == direct.r11);
    CHECK(general.r12 == direct.r12);
    CHECK(general.r21 == direct.r21);
    CHECK(general.r22 == direct.r22);
    CHECK(general.symmetric());
}

TEST_CASE("ricci_general on the completion geometry N and on zero") {
    SymBilinear rho = ricci_general(Connection::geometry_n());
    CHECK(rho.r11.is_zero());
    CHECK(rho.r12.is_zero());
    CHECK(rho.r21.is_zero());
    CHECK(rho.r22 == ExpPoly::constant(Num(1)));
    CHECK(ricci_general(Connection()).is_zero());
}

TEST_CASE("ricci_general equals ricci_type_a and is symmetric, random models") {
    for (int k = 0; k < 40; ++k) {
        TypeAModel m = random_model();
        SymBilinear general = ricci_general(Connection::lift(m));
        SymBilinear direct = ricci_type_a(m);
        CHECK(general.r11 == direct.r11);
        CHECK(general.r12 == direct.r12);
        CHECK(general.r22 == direct.r22);
        CHECK(general.r12 == general.r21);
    }
}

TEST_CASE("curvature_apply") {
    Connection n = Connection::geometry_n();
    std::uniform_real_distribution<double> u(-2, 2);
    for (int k = 0; k < 100; ++k) {
        std::array<double, 2> xi{u(rng), u(rng)}, eta{u(rng), u(rng)},
            p{u(rng), u(rng)};
        auto out = curvature_apply(n, p, xi, xi, eta);
        CHECK(std::abs(out[0]) < 1e-12);
        CHECK(std::abs(out[1]) < 1e-12);
    }
    auto r = curvature_apply(n, {3, 0}, {1, 0}, {0, 1}, {0, 1});
    CHECK(r[0] == doctest::Approx(1.0));
    CHECK(r[1] == doctest::Approx(0.0));

    Connection flat = Connection::lift(TypeAModel(0, 0, 0, 0, 0, 0));
    auto z = curvature_apply(flat, {1, 2}, {1, 0}, {0, 1}, {1, 1});
    CHECK(z[0] == 0.0);
    CHECK(z[1] == 0.0);
}

TEST_CASE("hessian") {
    Connection m30 = Connection::lift(TypeAModel(0, 0, 0, 0, 0, 1));
    SymBilinear h = hessian(m30, ExpPoly::exponential(0, 1));
    CHECK(h.is_zero());

    TypeAModel any = random_model();
    CHECK(hessian(Connection::lift(any), ExpPoly::constant(Num(1))).is_zero());

    Connection flat = Connection::lift(TypeAModel(0, 0, 0, 0, 0, 0));
    SymBilinear hx = hessian(flat, ExpPoly::monomial(Num(1), 1, 1));
    CHECK(hx.r11.is_zero());
    CHECK(hx.r22.is_zero());
    CHECK(hx.r12 == ExpPoly::constant(Num(1)));
    CHECK(hx.r21 == ExpPoly::constant(Num(1)));
}

TEST_CASE("hessian is linear in f") {
    Connection conn = Connection::lift(random_model());
    for (int k = 0; k < 20; ++k) {
        Num alpha = Num::ratio(rng() % 7 - 3, 1 + rng() % 4);
        Num beta = Num::ratio(rng() % 7 - 3, 1 + rng() % 4);
        ExpPoly f = ExpPoly::exponential(1, 0) * ExpPoly::x2();
        ExpPoly g = ExpPoly::monomial(Num(1), 0, 2) + ExpPoly::exponential(0, 1);
        SymBilinear lhs = hessian(conn, f.scaled(alpha) + g.scaled(beta));
        SymBilinear hf = hessian(conn, f), hg = hessian(conn, g);
        CHECK(lhs.r11 == hf.r11.scaled(alpha) + hg.r11.scaled(beta));
        CHECK(lhs.r12 == hf.r12.scaled(alpha) + hg.r12.scaled(beta));
        CHECK(lhs.r22 == hf.r22.scaled(alpha) + hg.r22.scaled(beta));
    }
}

TEST_CASE("ricci_rank") {
    CHECK(ricci_rank(TypeAModel(0, 0, 0, 0, 0, 0)) == 0);
    CHECK(ricci_rank(TypeAModel(0, 0, Num::ratio(-1, 2), 0, 0, 0)) == 1);
    CHECK(ricci_rank(TypeAModel(0, 0, 0, 1, Num::ratio(-1, 2), 0)) == 2);
    // float path
    TypeAModel f(Num::approx(0.0), Num::approx(0.0), Num::approx(-0.5),
                 Num::approx(0.0), Num::approx(0.0), Num::approx(0.0));
    CHECK(ricci_rank(f) == 1);
}

TEST_CASE("flat catalogue models have vanishing Ricci") {
    for (Family fam : {Family::M0_0, Family::M1_0, Family::M2_0, Family::M3_0,
                       Family::M4_0, Family::M5_0}) {
        TypeAModel m = canonical_model(CanonicalLabel(fam));
        CHECK(ricci_type_a(m).is_zero());
        CHECK(ricci_rank(m) == 0);
    }
}

TEST_CASE("catalogue rank matches the family superscript") {
    CHECK(ricci_rank(canonical_model({Family::M1_1})) == 1);
    CHECK(ricci_rank(canonical_model({Family::M3_1, {Num::ratio(-1, 2)}})) == 1);
    CHECK(ricci_rank(canonical_model({Family::M2_2, {Num(-1), Num(0)}})) == 2);
    CHECK(ricci_rank(canonical_model({Family::M1_2, {Num(2), Num(2)}})) == 2);
}

TEST_CASE("canonical models match the published tuples") {
    CHECK(models_equal(canonical_model({Family::M3_1, {Num::ratio(-1, 2)}}),
                       TypeAModel(0, 0, Num::ratio(-1, 2), 0, 0, 0)));
    CHECK(models_equal(canonical_model({Family::M2_2, {Num(-1), Num(0)}}),
                       TypeAModel(0, 0, 0, 1, Num::ratio(-1, 2), 0)));
    CHECK(models_equal(
        canonical_model({Family::M1_2, {Num(2), Num(2)}}),
        TypeAModel(Num::ratio(5, 3), Num::ratio(2, 3), Num::ratio(4, 3),
                   Num::ratio(4, 3), Num::ratio(2, 3), Num::ratio(5, 3))));
}

TEST_CASE("type B overlap flags") {
    CHECK(also_type_b(Family::M1_1));
    CHECK(also_type_b(Family::M2_1));
    CHECK(also_type_b(Family::M3_1));
    CHECK(also_type_b(Family::M4_1));
    CHECK(!also_type_b(Family::M5_1));
    CHECK(!also_type_b(Family::M0_0));
    CHECK(!also_type_b(Family::M2_2));
}
