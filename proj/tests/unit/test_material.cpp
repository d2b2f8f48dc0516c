#include <doctest.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "stefanlie/config.hpp"
#include "stefanlie/errors.hpp"
#include "stefanlie/material.hpp"
#include "support.hpp"

using namespace stefanlie;
using stefanlie::testing::rel;

TEST_CASE("Kirchhoff round trip over 1000 random temperatures") {
    const MaterialSpec al = MaterialSpec::aluminium();
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> T(al.Tinf, al.temperature_cap());
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double t = T(rng);
        for (Phase p : {Phase::liquid, Phase::solid}) {
            const double back = kirchhoff_inverse(al, p, kirchhoff_forward(al, p, t));
            worst = std::max(worst, rel(back, t));
        }
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("Kirchhoff forward matches the closed-form enthalpies") {
    const MaterialSpec al = MaterialSpec::aluminium();
    for (double t : {300.0, 933.0, 2500.0}) {
        CHECK(rel(kirchhoff_forward(al, Phase::liquid, t), al.rho * al.c1 * t) < 1e-14);
        CHECK(rel(kirchhoff_forward(al, Phase::solid, t), al.rho * (al.c2_a * t + 0.5 * al.c2_b * t * t)) < 1e-14);
    }
}

TEST_CASE("general specific-heat law goes through quadrature") {
    const auto law = SpecificHeat::general([](double T) { return 500.0 + 0.2 * T; });
    const double u = enthalpy(law, 2000.0, 800.0);
    CHECK(rel(u, 2000.0 * (500.0 * 800.0 + 0.1 * 800.0 * 800.0)) < 1e-10);
    CHECK(rel(temperature_from_enthalpy(law, 2000.0, u, 5000.0), 800.0) < 1e-10);
}

TEST_CASE("transformed aluminium problem matches the substitution formulas") {
    const MaterialSpec al = MaterialSpec::aluminium();
    const TransformedBVP b = build_transformed_bvp(al, TimeLaw::steady);
    const double rc1 = al.rho * al.c1;
    CHECK(rel(b.u_m, rc1 * al.Tm) < 1e-14);
    CHECK(rel(b.v_m, al.rho * (al.c2_a * al.Tm + 0.5 * al.c2_b * al.Tm * al.Tm)) < 1e-14);
    CHECK(rel(b.v_inf, al.rho * (al.c2_a * al.Tinf + 0.5 * al.c2_b * al.Tinf * al.Tinf)) < 1e-14);
    CHECK(rel(b.H1(b.u_m), al.rho * al.Lv) < 1e-14);
    CHECK(rel(b.H2, al.rho * al.Lm) < 1e-14);
    CHECK(rel(b.u_cap, rc1 * 1.5 * al.Tv) < 1e-14);
    CHECK(rel(b.d1(b.u_m), al.lambda1 / rc1) < 1e-14);

    // d2 in v agrees with lambda2 / (rho c2(T)) at the same state
    for (double T : {300.0, 600.0, 933.0}) {
        const double v = kirchhoff_forward(al, Phase::solid, T);
        CHECK(rel(b.d2(v), al.lambda2 / (al.rho * al.solid_heat(T))) < 1e-12);
    }

    const double t_star = al.A * al.Lv / al.R;
    for (double T : {1000.0, 2793.0, 4000.0}) {
        const double u = rc1 * T;
        const double q = 0.64 / std::pow(11600.0, 0.4) * al.q0 / std::pow(rc1, 0.4) * std::pow(u, 0.4);
        const double h = al.Pa * std::sqrt(al.c1 * al.A) / std::sqrt(2.0 * std::numbers::pi * al.R * al.rho) *
                         std::exp(t_star / al.Tv) / std::sqrt(u) * std::exp(-rc1 * t_star / u);
        CHECK(rel(b.q_of_u(u), q) < 1e-12);
        CHECK(rel(b.h_of_u(u), h) < 1e-12);
    }
}

TEST_CASE("time laws divide by sqrt(t)") {
    const TransformedBVP b = build_transformed_bvp(MaterialSpec::aluminium(), TimeLaw::inverse_sqrt);
    const double u = 1.3 * b.u_m;
    CHECK(rel(b.q(4.0, u), 0.5 * b.q_of_u(u)) < 1e-15);
    CHECK(rel(b.h(0.25, u), 2.0 * b.h_of_u(u)) < 1e-15);
}

TEST_CASE("aluminium satisfies every construction invariant, h increasing on a 1e4 grid") {
    const TransformedBVP b = build_transformed_bvp(MaterialSpec::aluminium(), TimeLaw::steady);
    CHECK(bvp_invariant_violations(b).empty());
    CHECK_NOTHROW(check_h_increasing(b));
}

TEST_CASE("non-monotone evaporation law is reported with its interval") {
    TransformedBVP b = testing::constant_bvp([](double) { return 1.0; },
                                             [](double u) { return (u - 3.0) * (u - 3.0); });
    CHECK_THROWS_AS(check_h_increasing(b), ConstructionError);
    CHECK_FALSE(bvp_invariant_violations(b).empty());
}

TEST_CASE("material validation rejects broken constants") {
    MaterialSpec bad = MaterialSpec::aluminium();
    bad.Tinf = 1000.0;  // above Tm
    CHECK_THROWS_AS(bad.validate(), ConstructionError);
    bad = MaterialSpec::aluminium();
    bad.c2_b = -2.0;  // c2 negative at Tm
    CHECK_THROWS_AS(bad.validate(), ConstitutiveError);
}

TEST_CASE("shipped aluminium config parses to the built-in constants") {
    const MaterialSpec file = load_material(STEFANLIE_DATA_DIR "/aluminium.cfg");
    CHECK(format_material(file) == format_material(MaterialSpec::aluminium()));
}

TEST_CASE("config round trip and error paths") {
    const MaterialSpec al = MaterialSpec::aluminium();
    std::istringstream text(format_material(al));
    CHECK(format_material(material_from_entries(parse_key_value(text))) == format_material(al));

    std::istringstream dup("rho = 1\nrho = 2\n");
    CHECK_THROWS_AS(parse_key_value(dup), ConfigError);
    std::istringstream junk("this line has no equals sign\n");
    CHECK_THROWS_AS(parse_key_value(junk), ConfigError);

    std::istringstream unknown(format_material(al) + "colour = 3\n");
    CHECK_THROWS_AS(material_from_entries(parse_key_value(unknown)), ConfigError);
    std::istringstream nan_value("rho = heavy\n");
    CHECK_THROWS_AS(material_from_entries(parse_key_value(nan_value)), ConfigError);
    CHECK_THROWS_AS(load_material("/definitely/not/here.cfg"), ConfigError);

    MaterialSpec s = al;
    CHECK(set_material_field(s, "q0", 5e10));
    CHECK(s.q0 == 5e10);
    CHECK_FALSE(set_material_field(s, "nope", 1.0));
}
