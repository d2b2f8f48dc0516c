#include <doctest.h>

#include <cmath>
#include <numbers>

#include "stefanlie/errors.hpp"
#include "stefanlie/numerics.hpp"

using namespace stefanlie;
using namespace stefanlie::numerics;

TEST_CASE("bracketed_root finds the Dottie number") {
    const auto r = bracketed_root([](double x) { return std::cos(x) - x; }, 0.0, 1.0, 1e-14);
    CHECK(r.root == doctest::Approx(0.7390851332151607).epsilon(1e-14));
}

TEST_CASE("bracketed_root on a cubic with a distant bracket") {
    // (x - 2)(x^2 + 1): single real root at 2.
    const auto f = [](double x) { return (x - 2.0) * (x * x + 1.0); };
    const auto r = bracketed_root(f, -10.0, 50.0, 1e-14);
    CHECK(std::abs(r.root - 2.0) < 1e-12);
}

TEST_CASE("bracketed_root accepts an endpoint root and rejects no sign change") {
    CHECK(bracketed_root([](double x) { return x - 1.0; }, 1.0, 3.0).root == 1.0);
    CHECK_THROWS(bracketed_root([](double x) { return x * x + 1.0; }, -1.0, 1.0));
}

TEST_CASE("adaptive_simpson integrates a cubic exactly") {
    // antiderivative x^4/4 - x^2 + x, so the integral over [0, 2] is 2
    const double I = adaptive_simpson([](double x) { return x * x * x - 2.0 * x + 1.0; }, 0.0, 2.0);
    CHECK(std::abs(I - 2.0) < 1e-13);
}

TEST_CASE("adaptive_simpson on a smooth transcendental integrand") {
    const double I = adaptive_simpson([](double x) { return std::exp(-x * x); }, 0.0, 3.0, 1e-12);
    CHECK(std::abs(I - 0.5 * std::sqrt(std::numbers::pi) * std::erf(3.0)) < 1e-11);
}

TEST_CASE("integrate_dopri follows the harmonic oscillator") {
    const Rhs2 rhs = [](double, const Vec2& y) { return Vec2{y[1], -y[0]}; };
    OdeOptions o;
    o.rtol = 1e-11;
    o.atol = 1e-13;
    const auto nodes = integrate_dopri(rhs, 0.0, {1.0, 0.0}, std::numbers::pi, o);
    CHECK(nodes.front().t == 0.0);
    CHECK(nodes.back().t == doctest::Approx(std::numbers::pi).epsilon(1e-15));
    CHECK(std::abs(nodes.back().y[0] + 1.0) < 1e-9);
    CHECK(std::abs(nodes.back().y[1]) < 1e-9);
}

TEST_CASE("integrate_dopri runs backwards and honours the admissible guard") {
    const Rhs2 rhs = [](double, const Vec2& y) { return Vec2{y[0], 0.0}; };
    const auto back = integrate_dopri(rhs, 1.0, {std::exp(1.0), 0.0}, 0.0);
    CHECK(std::abs(back.back().y[0] - 1.0) < 1e-9);

    OdeOptions o;
    o.admissible = [](double, const Vec2& y) { return y[0] < 2.0; };
    CHECK_THROWS_AS(integrate_dopri(rhs, 0.0, {1.0, 0.0}, 5.0, o), IntegrationError);
}

TEST_CASE("MonotoneCubic preserves monotone data and clamps outside") {
    const MonotoneCubic m({0.0, 1.0, 2.0, 3.0}, {0.0, 0.1, 5.0, 5.1});
    double prev = m(0.0);
    for (int i = 1; i <= 300; ++i) {
        const double y = m(0.01 * i);
        CHECK(y >= prev);
        prev = y;
    }
    CHECK(m(-1.0) == 0.0);
    CHECK(m(10.0) == 5.1);
    CHECK(m(2.0) == doctest::Approx(5.0));
}

TEST_CASE("CubicHermite reproduces a cubic with exact slopes") {
    const auto f = [](double x) { return 1.0 - 2.0 * x + 0.5 * x * x * x; };
    const auto df = [](double x) { return -2.0 + 1.5 * x * x; };
    std::vector<double> x{0.0, 0.7, 1.5, 3.0}, y, dy;
    for (double xi : x) {
        y.push_back(f(xi));
        dy.push_back(df(xi));
    }
    const CubicHermite h(x, y, dy);
    for (double t : {0.1, 0.69, 1.2, 2.9}) {
        CHECK(std::abs(h.value(t) - f(t)) < 1e-13);
        CHECK(std::abs(h.derivative(t) - df(t)) < 1e-12);
    }
}

TEST_CASE("one_sided_derivative is exact for quadratics on uneven spacing") {
    const auto f = [](double x) { return 3.0 * x * x - x + 2.0; };
    const double d = one_sided_derivative(1.0, f(1.0), 1.3, f(1.3), 2.1, f(2.1));
    CHECK(std::abs(d - 5.0) < 1e-12);
}
