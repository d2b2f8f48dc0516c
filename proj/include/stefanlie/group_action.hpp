#pragma once

#include <array>
#include <functional>
#include <string>

namespace stefanlie {

enum class FamilyKind { translation, scaling, scaling_with_shift, conformal, linear_superposition };

const char* to_string(FamilyKind kind);

// Point of the extended space (t, x, u, v, S1, S2). The free-boundary
// functions are carried along unchanged by every action.
struct Point {
    double t = 0.0;
    double x = 0.0;
    double u = 0.0;
    double v = 0.0;
    double S1 = 0.0;
    double S2 = 0.0;
};

// Second-order jet of one dependent variable at (t, x).
struct Jet {
    double t = 0.0;
    double x = 0.0;
    double w = 0.0;
    double w_t = 0.0;
    double w_x = 0.0;
    double w_xx = 0.0;
};

// One generator component (c0 + c1 z) d/dz and its flow
// z* = z e^{c1 eps} + c0 (e^{c1 eps} - 1)/c1  (z + c0 eps when c1 = 0).
struct AffineComponent {
    double c0 = 0.0;
    double c1 = 0.0;

    double flow(double z, double eps) const;
    double rate(double eps) const;  // dz*/dz
    bool identity() const { return c0 == 0.0 && c1 == 0.0; }
};

// A solution of the linear heat equation alpha_t = k alpha_xx with its partials.
struct HeatSolution {
    std::string name;
    double k = 1.0;
    std::function<double(double, double)> value;
    std::function<double(double, double)> d_t;
    std::function<double(double, double)> d_x;
    std::function<double(double, double)> d_xx;

    // e^{-x^2/(4kt)} / sqrt(4 pi k t)
    static HeatSolution kernel(double k);
    // x^2 + 2 k t
    static HeatSolution quadratic(double k);
};

// Base-coordinate map t* = T(t), x* = X(t, x) with first partials and X_xx.
struct BaseMap {
    double t = 0.0, x = 0.0;
    double t_t = 1.0, t_x = 0.0;
    double x_t = 0.0, x_x = 1.0;
    double x_xx = 0.0;
};

// Dependent map w* = A(t,x) w + B(t,x) with partials in the original (t, x).
struct DependentMap {
    double A = 1.0, B = 0.0;
    double A_t = 0.0, A_x = 0.0, A_xx = 0.0;
    double B_t = 0.0, B_x = 0.0, B_xx = 0.0;
};

// One-parameter group of point transformations acting on (t, x, u, v) with
// S1, S2 left unchanged. Three constructions cover the catalogs used here:
// affine flows of (c0 + c1 z) d/dz components, the projective family
// x^2 d/dx - p x u d/du - p x v d/dv, and superposition w -> w + eps alpha(t,x).
class GroupAction {
public:
    enum class Component { u, v };

    GroupAction() = default;

    static GroupAction affine(std::string id, FamilyKind kind, AffineComponent t, AffineComponent x,
                              AffineComponent u, AffineComponent v = {});
    static GroupAction conformal(std::string id, double u_power = 3.0, double v_power = 3.0);
    static GroupAction superposition(std::string id, HeatSolution alpha, Component target);

    const std::string& id() const { return id_; }
    FamilyKind kind() const { return kind_; }
    // Short rendering of the generator, e.g. "2t d_t + x d_x".
    std::string generator() const;

    // Throws LocalValidityError outside the local domain (conformal pole)
    // unless checked is false, in which case the analytic formula is used as is.
    BaseMap base(double t, double x, double eps, bool checked = true) const;
    DependentMap dependent(Component c, double t, double x, double eps) const;

    Point apply(const Point& p, double eps, bool checked = true) const;

    // Transformed jet of one dependent variable. order 1 fills w_t, w_x;
    // order 2 also w_xx. Throws ProlongationError on a singular Jacobian.
    Jet prolong(const Jet& jet, Component c, double eps, int order = 2) const;

    // Velocity V = -S_t/S_x of a free surface through (t, x), transformed
    // with S* = S.
    double transform_velocity(double t, double x, double V, double eps) const;

private:
    enum class Shape { affine, conformal, superposition };

    std::string id_;
    FamilyKind kind_ = FamilyKind::translation;
    Shape shape_ = Shape::affine;
    AffineComponent ct_, cx_, cu_, cv_;
    double pu_ = 0.0, pv_ = 0.0;
    HeatSolution alpha_;
    Component target_ = Component::u;
};

}  // namespace stefanlie
