#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "fbl/porous.hpp"
#include "fbl/stability.hpp"

using namespace fbl;
using std::numbers::pi;

TEST_CASE("porous interface matrix rows") {
    InterfaceSystem sys = build_porous_system(PorousParams{});
    // row 4: heat flux jump K+ T+_n - K- T-_n + s_n
    std::array<Rational, 8> row4{Rational(1), Rational(-1), Rational(0), Rational(1),
                                 Rational(0), Rational(0), Rational(0), Rational(0)};
    std::array<Rational, 8> row5{Rational(0), Rational(-1), Rational(1), Rational(-1),
                                 Rational(0), Rational(0), Rational(0), Rational(0)};
    for (int j = 0; j < 8; ++j) {
        CHECK(sys.G.at(3, j) == row4[static_cast<size_t>(j)]);
        CHECK(sys.G.at(4, j) == row5[static_cast<size_t>(j)]);
    }
    for (const Rational& bi : sys.b) CHECK(bi == 0);
    ClassReport rep = classify(sys);
    CHECK(rep.label == 'C');
    CHECK(rep.tilde);
}

TEST_CASE("flat base state for the reference data") {
    FlatBaseState flat = flat_base_state(PorousParams{});
    CHECK(flat.y0 == Rational(1));
    CHECK(flat.base.q == std::array<Rational, 3>{Rational(1), Rational(-1), Rational(11)});
    std::vector<Rational> r1{Rational(2), Rational(1), Rational(0), Rational(-1)};
    std::vector<Rational> r0{Rational(11), Rational(11), Rational(11), Rational(0)};
    for (int i = 0; i < 4; ++i) {
        CHECK(flat.base.U0[static_cast<size_t>(i)] == r1[static_cast<size_t>(i)]);
        CHECK(flat.base.U0[static_cast<size_t>(4 + i)] == r0[static_cast<size_t>(i)]);
    }
}

TEST_CASE("flat base state scaling with the mean flux") {
    PorousParams doubled;
    doubled.flux_mean = Rational(4);
    CHECK(flat_base_state(doubled).y0 == make_rational(1, 2));

    PorousParams zero;
    zero.flux_mean = Rational(0);
    CHECK_THROWS_AS(flat_base_state(zero), NoFlatStateError);
}

TEST_CASE("exact field values at reference points") {
    PorousParams p;
    FieldValues at_origin = exact_fields(0.0, 1.0, p);
    CHECK(at_origin.t_minus == Catch::Approx(11.0).margin(1e-14));
    CHECK(at_origin.s == Catch::Approx(0.0).margin(1e-14));

    FieldValues top = exact_fields(pi / 2, 2.0, p);
    CHECK(top.t_plus == Catch::Approx(13.0 + std::tanh(2.0) / 2.0).epsilon(1e-13));

    std::mt19937 rng(5);
    std::uniform_real_distribution<double> ux(0.0, 2 * pi), uy(0.0, 2.0);
    for (int k = 0; k < 25; ++k) CHECK(exact_fields(ux(rng), uy(rng), p).p == 11.0);
}

TEST_CASE("exact fields require equal conductivities") {
    PorousParams p;
    p.K_plus = Rational(2);
    CHECK_THROWS_AS(exact_fields(0.0, 1.0, p), ParamMismatchError);
    CHECK_THROWS_AS(exact_interface(0.0, p), ParamMismatchError);
}

TEST_CASE("exact interface heights") {
    PorousParams p;
    CHECK(exact_interface(0.0, p) == Catch::Approx(1.0).margin(1e-13));
    CHECK(exact_interface(pi, p) == Catch::Approx(1.0).margin(1e-12));
    double y = exact_interface(pi / 2, p, 1e-12);
    CHECK(std::abs(interface_relation(pi / 2, y, p)) <= 1e-12);
    CHECK(y == Catch::Approx(0.929).margin(5e-4));
}

TEST_CASE("interface consistency: s vanishes on the computed interface curve") {
    PorousParams p;
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> ux(0.0, 2 * pi);
    for (int k = 0; k < 100; ++k) {
        double x = ux(rng);
        double y = exact_interface(x, p, 1e-13);
        CHECK(std::abs(exact_fields(x, y, p).s) < 1e-12);
    }
}

TEST_CASE("interface-condition residuals of the exact solution vanish analytically") {
    PorousParams p;
    for (int k = 0; k < 32; ++k) {
        double x = 2 * pi * k / 32.0;
        double y = exact_interface(x, p, 1e-13);
        double slope = exact_interface_slope(x, p);
        FieldValues f = exact_fields(x, y, p);
        FieldGradients g = exact_field_gradients(x, y, p);
        // unnormalized normal (-h', 1)
        auto ddn = [&](double gx, double gy) { return -slope * gx + gy; };
        double kp = to_double(p.K_plus), km = to_double(p.K_minus);
        CHECK(std::abs(f.s) < 1e-12);                      // s = 0
        CHECK(std::abs(f.t_plus - f.t_minus) < 1e-12);     // [T] = 0
        CHECK(std::abs(f.t_minus - f.p) < 1e-12);          // P = T-
        CHECK(std::abs(kp * ddn(g.t_plus_x, g.t_plus_y) - km * ddn(g.t_minus_x, g.t_minus_y) +
                       ddn(g.s_x, g.s_y)) < 1e-12);        // heat flux jump
        CHECK(std::abs(ddn(g.p_x, g.p_y) - ddn(g.t_minus_x, g.t_minus_y) - ddn(g.s_x, g.s_y)) <
              1e-12);                                      // mass conservation
    }
}

TEST_CASE("discrete harmonicity of the exact fields at second order") {
    PorousParams p;
    auto residual = [&](int n, double ylo, double yhi, int which) {
        double dx = 2 * pi / n;
        double dy = (yhi - ylo) / (n - 1);
        double worst = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 1; j < n - 1; ++j) {
                double x = i * dx, y = ylo + j * dy;
                auto f = [&](double xx, double yy) {
                    FieldValues v = exact_fields(xx, yy, p);
                    return which == 0 ? v.t_plus : which == 1 ? v.t_minus : v.s;
                };
                double lap = (f(x + dx, y) - 2 * f(x, y) + f(x - dx, y)) / (dx * dx) +
                             (f(x, y + dy) - 2 * f(x, y) + f(x, y - dy)) / (dy * dy);
                worst = std::max(worst, std::abs(lap));
            }
        return worst;
    };
    for (int which = 0; which < 3; ++which) {
        double ylo = which == 0 ? 1.0 : 0.0, yhi = which == 0 ? 2.0 : 1.0;
        double r16 = residual(16, ylo, yhi, which);
        double r32 = residual(32, ylo, yhi, which);
        double r64 = residual(64, ylo, yhi, which);
        double order1 = std::log2(r16 / r32), order2 = std::log2(r32 / r64);
        CHECK(order1 > 1.8);
        CHECK(order1 < 2.2);
        CHECK(order2 > 1.8);
        CHECK(order2 < 2.2);
    }
}

TEST_CASE("well-posedness of the instantiated case via the derived fluxes") {
    PorousParams p;
    FlatBaseState flat = flat_base_state(p);
    InterfaceSystem sys = build_porous_system(p);
    WellPosednessForm form = wellposedness_form(sys, flat.base.q, SpectralMode::d2());
    CHECK(form.poly == Poly::monomial(Rational(-4), 1));
    CHECK(form.well_posed());
}
