#pragma once

#include <array>
#include <functional>
#include <limits>
#include <span>
#include <vector>

// Small numerical kernels shared by the solvers: bracketed root finding,
// adaptive Simpson quadrature, an embedded Dormand-Prince 5(4) integrator for
// two-component systems, and two piecewise-cubic interpolants.
namespace stefanlie::numerics {

using ScalarFn = std::function<double(double)>;

struct RootResult {
    double root = 0.0;
    double f_root = 0.0;
    int iterations = 0;
};

// Refines a root of f inside [a, b]; f(a) and f(b) must differ in sign (or
// one of them vanish). Secant (Illinois-weighted regula falsi) steps are
// taken while they shrink the bracket fast enough, bisection otherwise.
// Stops when the bracket width is below 2*(abs_tol + rel_tol*|x|).
RootResult bracketed_root(const ScalarFn& f, double a, double b, double rel_tol = 1e-12,
                          double abs_tol = 0.0, int max_iter = 400);

// Same as above with the endpoint values already known.
RootResult bracketed_root(const ScalarFn& f, double a, double fa, double b, double fb,
                          double rel_tol, double abs_tol, int max_iter = 400);

// Adaptive Simpson quadrature of f over [a, b] with Richardson correction.
double adaptive_simpson(const ScalarFn& f, double a, double b, double rel_tol = 1e-10,
                        int max_depth = 48);

// ---------------------------------------------------------------------------
// ODE integration
// ---------------------------------------------------------------------------

using Vec2 = std::array<double, 2>;
using Rhs2 = std::function<Vec2(double, const Vec2&)>;

struct OdeOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    double h_init = 0.0;  // 0 selects an automatic initial step
    double h_max = std::numeric_limits<double>::infinity();
    long max_steps = 2'000'000;
    // Optional guard on the state; returning false aborts with IntegrationError.
    std::function<bool(double, const Vec2&)> admissible;
};

// One accepted node of the trajectory, with the derivative for Hermite output.
struct OdeNode {
    double t;
    Vec2 y;
    Vec2 dy;
};

// Integrates y' = rhs(t, y) from t0 to t1 (t1 may be smaller than t0) with the
// Dormand-Prince 5(4) embedded pair and returns every accepted node, first and
// last included. Throws IntegrationError when the step size underflows, the
// state leaves the admissible set, or the step budget is exhausted.
std::vector<OdeNode> integrate_dopri(const Rhs2& rhs, double t0, const Vec2& y0, double t1,
                                     const OdeOptions& options = {});

// ---------------------------------------------------------------------------
// Interpolation
// ---------------------------------------------------------------------------

// Fritsch-Carlson monotone cubic through strictly increasing abscissae.
// Evaluation outside the node range clamps to the end values.
class MonotoneCubic {
public:
    MonotoneCubic() = default;
    MonotoneCubic(std::vector<double> x, std::vector<double> y);

    double operator()(double x) const;
    double front_x() const { return x_.front(); }
    double back_x() const { return x_.back(); }
    bool empty() const { return x_.empty(); }

private:
    std::vector<double> x_;
    std::vector<double> y_;
    std::vector<double> m_;
};

// Cubic Hermite interpolant with caller-supplied slopes (dense ODE output).
class CubicHermite {
public:
    CubicHermite() = default;
    CubicHermite(std::vector<double> x, std::vector<double> y, std::vector<double> dy);

    double value(double x) const;
    double derivative(double x) const;
    double front_x() const { return x_.front(); }
    double back_x() const { return x_.back(); }
    std::span<const double> nodes() const { return x_; }
    std::span<const double> values() const { return y_; }

private:
    std::size_t segment(double x) const;

    std::vector<double> x_;
    std::vector<double> y_;
    std::vector<double> dy_;
};

// Derivative at x[0] of the quadratic through three distinct points.
double one_sided_derivative(double x0, double y0, double x1, double y1, double x2, double y2);

}  // namespace stefanlie::numerics
