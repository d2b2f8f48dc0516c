#include "stefanlie/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "stefanlie/errors.hpp"

namespace stefanlie::numerics {

// -------------------------------------------------------------
// Root finding
// -------------------------------------------------------------

RootResult bracketed_root(const ScalarFn& f, double a, double b, double rel_tol, double abs_tol,
                          int max_iter) {
    return bracketed_root(f, a, f(a), b, f(b), rel_tol, abs_tol, max_iter);
}

RootResult bracketed_root(const ScalarFn& f, double a, double fa, double b, double fb,
                          double rel_tol, double abs_tol, int max_iter) {
    if (fa == 0.0) return {a, fa, 0};
    if (fb == 0.0) return {b, fb, 0};
    if (!std::isfinite(fa) || !std::isfinite(fb) || std::signbit(fa) == std::signbit(fb)) {
        std::ostringstream msg;
        msg << "bracketed_root: no sign change on [" << a << ", " << b << "] (f = " << fa << ", "
            << fb << ")";
        throw DomainError(msg.str());
    }

    int side = 0;  // which end was retained on the previous step, for Illinois weighting
    double width_two_steps_ago = std::abs(b - a);
    double width_prev = width_two_steps_ago;
    for (int it = 1; it <= max_iter; ++it) {
        double x;
        const double width = std::abs(b - a);
        const bool stalled = width > 0.5 * width_two_steps_ago;
        if (!stalled || it <= 2) {
            x = (a * fb - b * fa) / (fb - fa);
            if (!(x > std::min(a, b) && x < std::max(a, b))) x = 0.5 * (a + b);
        } else {
            x = 0.5 * (a + b);
        }
        const double fx = f(x);
        if (!std::isfinite(fx)) {
            throw DomainError("bracketed_root: non-finite function value at " + std::to_string(x));
        }
        if (fx == 0.0) return {x, fx, it};

        if (std::signbit(fx) == std::signbit(fb)) {
            b = x;
            fb = fx;
            if (side == -1) fa *= 0.5;
            side = -1;
        } else {
            a = x;
            fa = fx;
            if (side == +1) fb *= 0.5;
            side = +1;
        }
        width_two_steps_ago = width_prev;
        width_prev = width;

        const double tol = 2.0 * (abs_tol + rel_tol * std::abs(x));
        if (std::abs(b - a) <= tol) {
            const double best = std::abs(fa) < std::abs(fb) ? a : b;
            return {best, f(best), it};
        }
    }
    throw ConvergenceError("bracketed_root: iteration budget exhausted");
}

// -------------------------------------------------------------
// Quadrature
// -------------------------------------------------------------

namespace {

double simpson_step(const ScalarFn& f, double a, double fa, double m, double fm, double b,
                    double fb, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return simpson_step(f, a, fa, lm, flm, m, fm, left, 0.5 * tol, depth - 1) +
           simpson_step(f, m, fm, rm, frm, b, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const ScalarFn& f, double a, double b, double rel_tol, int max_depth) {
    if (a == b) return 0.0;
    const double fa = f(a);
    const double fb = f(b);
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);

    // A coarse composite estimate sets the absolute scale for the tolerance.
    double coarse = 0.0;
    constexpr int kPanels = 8;
    const double h = (b - a) / kPanels;
    for (int i = 0; i < kPanels; ++i) {
        const double x0 = a + i * h;
        coarse += h / 6.0 * (f(x0) + 4.0 * f(x0 + 0.5 * h) + f(x0 + h));
    }
    const double scale = std::max(std::abs(coarse), std::abs(whole));
    const double tol = std::max(rel_tol * scale, std::numeric_limits<double>::min());
    return simpson_step(f, a, fa, m, fm, b, fb, whole, tol, max_depth);
}

// -------------------------------------------------------------
// Dormand-Prince 5(4)
// -------------------------------------------------------------

namespace {

constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// b - b_hat, the embedded error weights
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

Vec2 axpy(const Vec2& y, double h, std::initializer_list<std::pair<double, const Vec2*>> terms) {
    Vec2 out = y;
    for (const auto& [w, k] : terms) {
        out[0] += h * w * (*k)[0];
        out[1] += h * w * (*k)[1];
    }
    return out;
}

bool finite(const Vec2& y) { return std::isfinite(y[0]) && std::isfinite(y[1]); }

}  // namespace

std::vector<OdeNode> integrate_dopri(const Rhs2& rhs, double t0, const Vec2& y0, double t1,
                                     const OdeOptions& options) {
    std::vector<OdeNode> nodes;
    Vec2 y = y0;
    double t = t0;
    Vec2 k1 = rhs(t, y);
    nodes.push_back({t, y, k1});
    if (t1 == t0) return nodes;

    const double dir = t1 > t0 ? 1.0 : -1.0;
    const double span = std::abs(t1 - t0);
    double h = options.h_init > 0.0 ? options.h_init : span * 1e-4;
    h = std::min({h, options.h_max, span});

    for (long step = 0; step < options.max_steps; ++step) {
        const double remaining = std::abs(t1 - t);
        if (remaining <= 1e-14 * span) break;
        h = std::min(h, remaining);
        const double hs = dir * h;

        const Vec2 k2 = rhs(t + c2 * hs, axpy(y, hs, {{a21, &k1}}));
        const Vec2 k3 = rhs(t + c3 * hs, axpy(y, hs, {{a31, &k1}, {a32, &k2}}));
        const Vec2 k4 = rhs(t + c4 * hs, axpy(y, hs, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
        const Vec2 k5 =
            rhs(t + c5 * hs, axpy(y, hs, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
        const Vec2 k6 = rhs(t + hs, axpy(y, hs, {{a61, &k1}, {a62, &k2}, {a63, &k3},
                                                 {a64, &k4}, {a65, &k5}}));
        const Vec2 y_new =
            axpy(y, hs, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
        const Vec2 k7 = rhs(t + hs, y_new);

        double err = 0.0;
        bool ok = finite(y_new) && finite(k7);
        if (ok) {
            for (int i = 0; i < 2; ++i) {
                const double e = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                       e6 * k6[i] + e7 * k7[i]);
                const double sc =
                    options.atol + options.rtol * std::max(std::abs(y[i]), std::abs(y_new[i]));
                err = std::max(err, std::abs(e) / sc);
            }
        }

        if (ok && err <= 1.0) {
            t = (std::abs(t1 - (t + hs)) <= 1e-14 * span) ? t1 : t + hs;
            y = y_new;
            k1 = k7;
            if (options.admissible && !options.admissible(t, y)) {
                throw IntegrationError("integrate_dopri: state left the admissible set", t);
            }
            nodes.push_back({t, y, k1});
            const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
            h = std::min(h * factor, options.h_max);
        } else {
            const double factor = ok ? std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9) : 0.25;
            h *= factor;
        }
        if (h < 1e-15 * std::max(1.0, std::abs(t))) {
            throw IntegrationError("integrate_dopri: step size underflow (possible blow-up)", t);
        }
    }
    if (nodes.back().t != t1) {
        throw IntegrationError("integrate_dopri: step budget exhausted", t);
    }
    return nodes;
}

// -------------------------------------------------------------
// Interpolation
// -------------------------------------------------------------

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n) throw DomainError("MonotoneCubic: need at least two nodes");
    std::vector<double> delta(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double dx = x_[i + 1] - x_[i];
        if (!(dx > 0.0)) throw DomainError("MonotoneCubic: abscissae must increase strictly");
        delta[i] = (y_[i + 1] - y_[i]) / dx;
    }
    m_.assign(n, 0.0);
    m_.front() = delta.front();
    m_.back() = delta.back();
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (delta[i - 1] * delta[i] <= 0.0) {
            m_[i] = 0.0;
        } else {
            // Weighted harmonic mean (Fritsch-Butland), monotone by construction.
            const double h0 = x_[i] - x_[i - 1];
            const double h1 = x_[i + 1] - x_[i];
            const double w1 = 2.0 * h1 + h0;
            const double w2 = h1 + 2.0 * h0;
            m_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
    }
}

double MonotoneCubic::operator()(double x) const {
    if (x <= x_.front()) return y_.front();
    if (x >= x_.back()) return y_.back();
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
    const double h = x_[i + 1] - x_[i];
    const double s = (x - x_[i]) / h;
    const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
    const double h10 = s * (1 - s) * (1 - s);
    const double h01 = s * s * (3 - 2 * s);
    const double h11 = s * s * (s - 1);
    return h00 * y_[i] + h10 * h * m_[i] + h01 * y_[i + 1] + h11 * h * m_[i + 1];
}

CubicHermite::CubicHermite(std::vector<double> x, std::vector<double> y, std::vector<double> dy)
    : x_(std::move(x)), y_(std::move(y)), dy_(std::move(dy)) {
    if (x_.size() < 2 || y_.size() != x_.size() || dy_.size() != x_.size()) {
        throw DomainError("CubicHermite: inconsistent node arrays");
    }
    for (std::size_t i = 0; i + 1 < x_.size(); ++i) {
        if (!(x_[i + 1] > x_[i])) throw DomainError("CubicHermite: abscissae must increase strictly");
    }
}

std::size_t CubicHermite::segment(double x) const {
    if (x <= x_.front()) return 0;
    if (x >= x_.back()) return x_.size() - 2;
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    return static_cast<std::size_t>(it - x_.begin()) - 1;
}

double CubicHermite::value(double x) const {
    const std::size_t i = segment(x);
    const double h = x_[i + 1] - x_[i];
    const double s = (x - x_[i]) / h;
    const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
    const double h10 = s * (1 - s) * (1 - s);
    const double h01 = s * s * (3 - 2 * s);
    const double h11 = s * s * (s - 1);
    return h00 * y_[i] + h10 * h * dy_[i] + h01 * y_[i + 1] + h11 * h * dy_[i + 1];
}

double CubicHermite::derivative(double x) const {
    const std::size_t i = segment(x);
    const double h = x_[i + 1] - x_[i];
    const double s = (x - x_[i]) / h;
    const double d00 = 6 * s * s - 6 * s;
    const double d10 = 3 * s * s - 4 * s + 1;
    const double d01 = -6 * s * s + 6 * s;
    const double d11 = 3 * s * s - 2 * s;
    return (d00 * y_[i] + d01 * y_[i + 1]) / h + d10 * dy_[i] + d11 * dy_[i + 1];
}

double one_sided_derivative(double x0, double y0, double x1, double y1, double x2, double y2) {
    const double h1 = x1 - x0;
    const double h2 = x2 - x0;
    // Lagrange derivative at x0 of the interpolating parabola.
    const double w0 = -(h1 + h2) / (h1 * h2);
    const double w1 = h2 / (h1 * (h2 - h1));
    const double w2 = -h1 / (h2 * (h2 - h1));
    return w0 * y0 + w1 * y1 + w2 * y2;
}

}  // namespace stefanlie::numerics
