#include <doctest.h>

#include <cmath>
#include <string>

#include "stefanlie/classify.hpp"
#include "stefanlie/errors.hpp"
#include "stefanlie/group_action.hpp"
#include "stefanlie/invariance.hpp"
#include "stefanlie/travelling_wave.hpp"
#include "support.hpp"

using namespace stefanlie;
using stefanlie::testing::rel;
using Comp = GroupAction::Component;

namespace {

std::vector<GroupAction> sample_actions() {
    using C = AffineComponent;
    return {GroupAction::affine("shift", FamilyKind::translation, C{1, 0}, C{0.5, 0}, {}),
            GroupAction::affine("dil", FamilyKind::scaling, C{0, 2}, C{0, 1}, C{0, -0.7}, C{0, 1.3}),
            GroupAction::affine("mixed", FamilyKind::scaling_with_shift, C{0, 2}, C{1, 1}, C{2, 0}, C{0.5, 0.2}),
            GroupAction::conformal("conf", 3.0, 1.5),
            GroupAction::superposition("sup", HeatSolution::kernel(0.8), Comp::u)};
}

bool near(const Point& a, const Point& b, double tol) {
    const auto close = [tol](double x, double y) { return std::abs(x - y) <= tol * (1.0 + std::abs(y)); };
    return close(a.t, b.t) && close(a.x, b.x) && close(a.u, b.u) && close(a.v, b.v) && a.S1 == b.S1 && a.S2 == b.S2;
}

const InvarianceReport& report_of(const RodClassification& c, const std::string& id) {
    for (const auto& r : c.reports)
        if (r.family == id) return r;
    throw std::runtime_error("no report for " + id);
}

}  // namespace

TEST_CASE("group law and identity") {
    const Point p{1.2, 0.4, 1.7, 0.9, 0.3, -0.2};
    for (const auto& g : sample_actions()) {
        CAPTURE(g.id());
        CHECK(near(g.apply(p, 0.0), p, 1e-15));
        for (double a : {-0.3, 0.1, 0.25}) {
            for (double b : {-0.2, 0.15}) {
                CHECK(near(g.apply(g.apply(p, a), b), g.apply(p, a + b), 1e-12));
            }
        }
    }
}

TEST_CASE("second prolongation agrees with differentiating the transformed graph") {
    // w(t, x) = e^{-t} sin(x) + x^2 t, an arbitrary smooth graph
    const auto w = [](double t, double x) { return std::exp(-t) * std::sin(x) + x * x * t; };
    const double t0 = 1.1, x0 = 0.6;
    const Jet jet{t0, x0, w(t0, x0), -std::exp(-t0) * std::sin(x0) + x0 * x0,
                  std::exp(-t0) * std::cos(x0) + 2 * x0 * t0, -std::exp(-t0) * std::sin(x0) + 2 * t0};

    for (const auto& g : sample_actions()) {
        for (double eps : {-0.2, 0.3}) {
            CAPTURE(g.id());
            CAPTURE(eps);
            const Jet img = g.prolong(jet, Comp::u, eps, 2);
            // w*(t*, x*): pull back through the inverse element, push the value forward
            const auto wstar = [&](double ts, double xs) {
                const BaseMap inv = g.base(ts, xs, -eps);
                const DependentMap m = g.dependent(Comp::u, inv.t, inv.x, eps);
                return m.A * w(inv.t, inv.x) + m.B;
            };
            const auto dt = [&](double h) { return (wstar(img.t + h, img.x) - wstar(img.t - h, img.x)) / (2 * h); };
            const auto dx = [&](double h) { return (wstar(img.t, img.x + h) - wstar(img.t, img.x - h)) / (2 * h); };
            const auto dxx = [&](double h) {
                return (wstar(img.t, img.x + h) - 2 * wstar(img.t, img.x) + wstar(img.t, img.x - h)) / (h * h);
            };
            // Richardson: O(h^4) truncation
            const auto rich = [](const auto& f) { return (4 * f(1e-3) - f(2e-3)) / 3; };
            CHECK(std::abs(wstar(img.t, img.x) - img.w) < 1e-12 * (1 + std::abs(img.w)));
            CHECK(std::abs(rich(dt) - img.w_t) < 1e-7 * (1 + std::abs(img.w_t)));
            CHECK(std::abs(rich(dx) - img.w_x) < 1e-7 * (1 + std::abs(img.w_x)));
            CHECK(std::abs(rich(dxx) - img.w_xx) < 1e-7 * (1 + std::abs(img.w_xx)));
        }
    }
}

TEST_CASE("linear heat equation is invariant under its classical generators") {
    const PdeSpec heat = PdeSpec::nonlinear_heat(Diffusivity::constant(0.8));
    const auto jets = sample_pde_jets(heat, 12, 7);
    for (const auto& g : sample_actions()) {
        if (g.id() == "dil" || g.id() == "mixed" || g.id() == "conf") continue;
        CAPTURE(g.id());
        CHECK(check_pde_invariance(g, Comp::u, heat, jets).pass);
    }
}

TEST_CASE("explicit x-dependence breaks x-translation at first order in eps") {
    PdeSpec pde;
    pde.name = "w_t = w_xx + x w";
    pde.rhs = [](double x, double w, double, double wxx) { return wxx + x * w; };
    pde.scale = [](double x, double w, double, double wxx) { return std::abs(wxx) + std::abs(x * w); };
    const auto jets = sample_pde_jets(pde, 12, 11);
    const auto shift = GroupAction::affine("Px", FamilyKind::translation, {}, AffineComponent{1, 0}, {});
    const ItemVerdict v = check_pde_invariance(shift, Comp::u, pde, jets);
    CHECK_FALSE(v.pass);
    double small = 0.0, big = 0.0;
    for (const auto& r : v.records) {
        if (r.eps == 0.01) small = r.residual;
        if (r.eps == 0.1) big = r.residual;
    }
    CHECK(small > 1e-4);
    CHECK(big / small > 5.0);
    CHECK(big / small < 20.0);

    const auto time = GroupAction::affine("Pt", FamilyKind::translation, AffineComponent{1, 0}, {}, {});
    CHECK(check_pde_invariance(time, Comp::u, pde, jets).pass);
}

TEST_CASE("contract, sampling and local-validity errors") {
    const PdeSpec heat = PdeSpec::nonlinear_heat(Diffusivity::constant(1.0));
    const auto g = sample_actions()[0];
    CHECK_THROWS_AS(check_pde_invariance(g, Comp::u, heat, sample_pde_jets(heat, 3, 1), kEpsGrid, 1e-6, 1),
                    ContractError);

    BoundaryCondition off;
    off.name = "u = 1 at x = 0";
    off.kind = ManifoldKind::fixed_curve;
    off.curve = [](double, double x) { return x; };
    off.residuals = [](const BoundarySample& s) { return std::vector<double>{s.w[0] - 1.0}; };
    off.sampler = [](int, double) {
        BoundarySample s;
        s.w[0] = 2.0;
        return s;
    };
    CHECK_THROWS_AS(check_boundary_invariance(g, off), SamplingError);
    off.sampler = [](int, double) -> BoundarySample { throw DomainError("outside"); };
    CHECK_THROWS_AS(check_boundary_invariance(g, off), SamplingError);

    const auto conf = GroupAction::conformal("conf");
    CHECK_THROWS_AS(conf.base(1.0, 2.0, 0.6), LocalValidityError);
    CHECK_NOTHROW(conf.base(1.0, 2.0, 0.6, false));
    CHECK_THROWS_AS(check_infinity_invariance(g, off), PreconditionError);
}

TEST_CASE("power-law rod truth table") {
    struct Row {
        double k, gamma, q0;
        int row;
    };
    const Row rows[] = {{1, 0, 0, 1},        {-4.0 / 3.0, 0, 0, 1}, {-2, 1, 0, 1},   {2, 3, 0, 1},
                        {1, 0, 1, 2},        {-4.0 / 3.0, 0, 1, 2}, {-1, 0, 2, 2},   {-2, 0, 1, 2},
                        {-2, 1, 1, 3},       {-2, 2.5, -0.5, 3},    {1, 1, 1, 0},    {-4.0 / 3.0, 1, 1, 0}};
    for (const auto& r : rows) {
        CAPTURE(r.k);
        CAPTURE(r.gamma);
        CAPTURE(r.q0);
        const RodClassification c = classify_rod_bvp(r.k, r.gamma, r.q0);
        CHECK(c.row == r.row);
        // x-translation never preserves the boundary x = 0
        const auto& t2 = report_of(c, "T2");
        CHECK_FALSE(t2.pass);
        CHECK(t2.items[1].note == "boundary curve not preserved");
    }
    CHECK_THROWS_AS(classify_rod_bvp(0.0, 0.0, 1.0), PreconditionError);
}

TEST_CASE("conformal family at k = -4/3 keeps the equation but not the boundaries") {
    const RodClassification c = classify_rod_bvp(-4.0 / 3.0, 0.0, 1.0);
    const auto& t5 = report_of(c, "T5");
    CHECK(t5.items[0].pass);
    CHECK_FALSE(t5.items[1].pass);
    CHECK_FALSE(t5.items[2].pass);
    CHECK_FALSE(t5.pass);
}

TEST_CASE("rod constraints are discovered for the failing families") {
    const RodClassification c = classify_rod_bvp(1.0, 0.0, 1.0);
    bool q0_constraint = false;
    for (const auto& s : c.constraints) q0_constraint = q0_constraint || s.find("q0 = 0") != std::string::npos;
    CHECK(q0_constraint);
}

TEST_CASE("Stefan class rows") {
    const auto one = [](double, double u) { return 1.0 + u; };
    const auto steady_h = [](double, double u) { return 0.1 * u * u; };
    CHECK(classify_stefan_bvp(one, steady_h).row == 2);
    CHECK(classify_stefan_bvp([](double t, double u) { return (1.0 + u) / std::sqrt(t); },
                              [](double t, double u) { return 0.1 * u * u / std::sqrt(t); })
              .row == 3);
    CHECK(classify_stefan_bvp([](double t, double u) { return (1.0 + u) * std::exp(-t); }, steady_h).row == 1);
    // counterexamples: neither a time shift nor the dilation survives
    CHECK(classify_stefan_bvp([](double t, double u) { return (1.0 + u) * t; }, steady_h).row == 1);
    CHECK(classify_stefan_bvp([](double t, double u) { return (1.0 + u) / std::sqrt(t); }, steady_h).row == 1);
}

TEST_CASE("every listed generator of the decoupled equations checks out") {
    for (int id = 1; id <= 8; ++id) {
        CAPTURE(id);
        for (const auto& r : verify_table2_generators(id)) {
            CAPTURE(r.generator);
            CHECK(r.pass);
        }
    }
    CHECK_THROWS_AS(table2_case(9), PreconditionError);
}

TEST_CASE("equivalence transformation rescales the travelling wave") {
    const TransformedBVP b = build_transformed_bvp(MaterialSpec::aluminium(), TimeLaw::steady);
    const TravellingWaveSolution s = solve_travelling_wave(b);
    EquivalenceParams p;
    p.e0 = 2.0;
    p.e1 = 3.0;
    p.e2 = p.e3 = 1.5;
    p.u0 = p.v0 = 0.1 * b.u_m;
    const TravellingWaveSolution t = solve_travelling_wave(equivalence_transform(b, p));
    CHECK(rel(t.mu, p.e1 / p.e0 * s.mu) < 1e-8);
    CHECK(rel(t.delta, p.e1 * s.delta) < 1e-8);
    CHECK(rel(t.u_s, p.e2 * s.u_s + p.u0) < 1e-8);

    EquivalenceParams bad;
    bad.e2 = 1.0;
    bad.e3 = 2.0;
    CHECK_THROWS_AS(equivalence_transform(b, bad), PreconditionError);
    bad = {};
    bad.e0 = -1.0;
    CHECK_THROWS_AS(equivalence_transform(b, bad), PreconditionError);
    bad = {};
    bad.t0 = 1.0;
    CHECK_THROWS_AS(equivalence_transform(build_transformed_bvp(MaterialSpec::aluminium(), TimeLaw::inverse_sqrt), bad),
                    PreconditionError);
}
