#include "stefanlie/group_action.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "stefanlie/errors.hpp"

namespace stefanlie {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string number(double c) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", c);
    return buf;
}

// Renders (c0 + c1 z) d_z.
std::string term(const AffineComponent& c, const char* z) {
    if (c.identity()) return {};
    std::string coeff;
    if (c.c0 != 0.0 && c.c1 != 0.0) {
        coeff = "(" + number(c.c0) + " + " + number(c.c1) + z + ") ";
    } else if (c.c1 != 0.0) {
        coeff = (c.c1 == 1.0 ? std::string() : number(c.c1)) + z + " ";
    } else {
        coeff = c.c0 == 1.0 ? std::string() : number(c.c0) + " ";
    }
    return coeff + "d_" + z;
}

void append(std::string& out, const std::string& t) {
    if (t.empty()) return;
    if (!out.empty()) out += " + ";
    out += t;
}

}  // namespace

const char* to_string(FamilyKind kind) {
    switch (kind) {
        case FamilyKind::translation: return "translation";
        case FamilyKind::scaling: return "scaling";
        case FamilyKind::scaling_with_shift: return "scaling_with_shift";
        case FamilyKind::conformal: return "conformal";
        case FamilyKind::linear_superposition: return "linear_superposition";
    }
    return "?";
}

double AffineComponent::flow(double z, double eps) const {
    if (c1 == 0.0) return z + c0 * eps;
    return z * std::exp(c1 * eps) + c0 * std::expm1(c1 * eps) / c1;
}

double AffineComponent::rate(double eps) const { return std::exp(c1 * eps); }

HeatSolution HeatSolution::kernel(double k) {
    HeatSolution h;
    h.name = "heat_kernel";
    h.k = k;
    h.value = [k](double t, double x) { return std::exp(-x * x / (4.0 * k * t)) / std::sqrt(4.0 * kPi * k * t); };
    h.d_t = [k, v = h.value](double t, double x) { return (x * x / (4.0 * k * t * t) - 0.5 / t) * v(t, x); };
    h.d_x = [k, v = h.value](double t, double x) { return -x / (2.0 * k * t) * v(t, x); };
    h.d_xx = [k, v = h.value](double t, double x) {
        return (x * x / (4.0 * k * k * t * t) - 1.0 / (2.0 * k * t)) * v(t, x);
    };
    return h;
}

HeatSolution HeatSolution::quadratic(double k) {
    HeatSolution h;
    h.name = "x^2+2kt";
    h.k = k;
    h.value = [k](double t, double x) { return x * x + 2.0 * k * t; };
    h.d_t = [k](double, double) { return 2.0 * k; };
    h.d_x = [](double, double x) { return 2.0 * x; };
    h.d_xx = [](double, double) { return 2.0; };
    return h;
}

// ---- construction ----

GroupAction GroupAction::affine(std::string id, FamilyKind kind, AffineComponent t, AffineComponent x,
                                AffineComponent u, AffineComponent v) {
    GroupAction g;
    g.id_ = std::move(id);
    g.kind_ = kind;
    g.shape_ = Shape::affine;
    g.ct_ = t;
    g.cx_ = x;
    g.cu_ = u;
    g.cv_ = v;
    return g;
}

GroupAction GroupAction::conformal(std::string id, double u_power, double v_power) {
    GroupAction g;
    g.id_ = std::move(id);
    g.kind_ = FamilyKind::conformal;
    g.shape_ = Shape::conformal;
    g.pu_ = u_power;
    g.pv_ = v_power;
    return g;
}

GroupAction GroupAction::superposition(std::string id, HeatSolution alpha, Component target) {
    GroupAction g;
    g.id_ = std::move(id);
    g.kind_ = FamilyKind::linear_superposition;
    g.shape_ = Shape::superposition;
    g.alpha_ = std::move(alpha);
    g.target_ = target;
    return g;
}

std::string GroupAction::generator() const {
    std::string out;
    switch (shape_) {
        case Shape::affine:
            append(out, term(ct_, "t"));
            append(out, term(cx_, "x"));
            append(out, term(cu_, "u"));
            append(out, term(cv_, "v"));
            return out.empty() ? "0" : out;
        case Shape::conformal:
            out = "x^2 d_x";
            if (pu_ != 0.0) out += " - " + number(pu_) + "xu d_u";
            if (pv_ != 0.0) out += " - " + number(pv_) + "xv d_v";
            return out;
        case Shape::superposition:
            return alpha_.name + (target_ == Component::u ? " d_u" : " d_v");
    }
    return out;
}

// ---- maps ----

BaseMap GroupAction::base(double t, double x, double eps, bool checked) const {
    BaseMap m;
    switch (shape_) {
        case Shape::affine:
            m.t = ct_.flow(t, eps);
            m.t_t = ct_.rate(eps);
            m.x = cx_.flow(x, eps);
            m.x_x = cx_.rate(eps);
            break;
        case Shape::conformal: {
            const double s = 1.0 - eps * x;
            if (checked && !(s > 0.0)) {
                std::ostringstream msg;
                msg << id_ << ": 1 - eps x = " << s << " <= 0 at x = " << x << ", eps = " << eps;
                throw LocalValidityError(msg.str());
            }
            m.t = t;
            m.x = x / s;
            m.x_x = 1.0 / (s * s);
            m.x_xx = 2.0 * eps / (s * s * s);
            break;
        }
        case Shape::superposition:
            m.t = t;
            m.x = x;
            break;
    }
    return m;
}

DependentMap GroupAction::dependent(Component c, double t, double x, double eps) const {
    DependentMap m;
    switch (shape_) {
        case Shape::affine: {
            const AffineComponent& a = c == Component::u ? cu_ : cv_;
            m.A = a.rate(eps);
            m.B = a.flow(0.0, eps);
            break;
        }
        case Shape::conformal: {
            const double p = c == Component::u ? pu_ : pv_;
            const double s = 1.0 - eps * x;
            m.A = std::pow(s, p);
            m.A_x = -p * eps * std::pow(s, p - 1.0);
            m.A_xx = p * (p - 1.0) * eps * eps * std::pow(s, p - 2.0);
            break;
        }
        case Shape::superposition:
            if (c == target_) {
                m.B = eps * alpha_.value(t, x);
                m.B_t = eps * alpha_.d_t(t, x);
                m.B_x = eps * alpha_.d_x(t, x);
                m.B_xx = eps * alpha_.d_xx(t, x);
            }
            break;
    }
    return m;
}

Point GroupAction::apply(const Point& p, double eps, bool checked) const {
    const BaseMap b = base(p.t, p.x, eps, checked);
    const DependentMap mu = dependent(Component::u, p.t, p.x, eps);
    const DependentMap mv = dependent(Component::v, p.t, p.x, eps);
    return {b.t, b.x, mu.A * p.u + mu.B, mv.A * p.v + mv.B, p.S1, p.S2};
}

Jet GroupAction::prolong(const Jet& jet, Component c, double eps, int order) const {
    if (order < 1 || order > 2) throw ProlongationError("prolong: supported orders are 1 and 2");
    const BaseMap b = base(jet.t, jet.x, eps);
    const DependentMap m = dependent(c, jet.t, jet.x, eps);
    const double det = b.t_t * b.x_x - b.t_x * b.x_t;
    if (!(std::abs(det) > 0.0) || !std::isfinite(det)) {
        throw ProlongationError(id_ + ": singular Jacobian of (t*, x*)");
    }
    const double Dt = m.A_t * jet.w + m.B_t + m.A * jet.w_t;
    const double Dx = m.A_x * jet.w + m.B_x + m.A * jet.w_x;

    Jet out;
    out.t = b.t;
    out.x = b.x;
    out.w = m.A * jet.w + m.B;
    out.w_t = (Dt * b.x_x - Dx * b.x_t) / det;
    out.w_x = (b.t_t * Dx - b.t_x * Dt) / det;
    if (order == 2) {
        if (b.t_x != 0.0 || b.x_t != 0.0) {
            throw ProlongationError(id_ + ": second prolongation needs t* = T(t), x* = X(x)");
        }
        const double Dxx = m.A_xx * jet.w + m.B_xx + 2.0 * m.A_x * jet.w_x + m.A * jet.w_xx;
        out.w_xx = (Dxx * b.x_x - Dx * b.x_xx) / (b.x_x * b.x_x * b.x_x);
    }
    return out;
}

double GroupAction::transform_velocity(double t, double x, double V, double eps) const {
    const BaseMap b = base(t, x, eps);
    const double det = b.t_t * b.x_x - b.t_x * b.x_t;
    if (!(std::abs(det) > 0.0)) throw ProlongationError(id_ + ": singular Jacobian of (t*, x*)");
    // S = x - s(t): S_x = 1, S_t = -V.
    const double S_t = -V, S_x = 1.0;
    const double St = (S_t * b.x_x - S_x * b.x_t) / det;
    const double Sx = (b.t_t * S_x - b.t_x * S_t) / det;
    if (Sx == 0.0) throw ProlongationError(id_ + ": transformed front is vertical");
    return -St / Sx;
}

}  // namespace stefanlie
