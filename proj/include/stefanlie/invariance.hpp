#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "stefanlie/group_action.hpp"

namespace stefanlie {

// Default group-parameter grid and tolerances of the invariance checks.
inline const std::vector<double> kEpsGrid{-0.5, -0.25, -0.1, -0.01, 0.01, 0.1, 0.25, 0.5};
constexpr double kPdeTolerance = 1e-6;
constexpr double kBoundaryTolerance = 1e-8;

// ---- governing equations ----

// Diffusivity d(w) with its derivative.
struct Diffusivity {
    std::string name;
    std::function<double(double)> d;
    std::function<double(double)> dd;
    double w_lo = 0.5, w_hi = 2.0;  // sampling range of w

    static Diffusivity constant(double k);
    static Diffusivity power(double n);        // w^n, w > 0
    static Diffusivity exponential();          // e^w
    static Diffusivity generic(std::function<double(double)> d, std::function<double(double)> dd,
                               std::string name);
};

// Evolution equation w_t = F(x, w, w_x, w_xx).
struct PdeSpec {
    std::string name;
    int order = 2;
    std::function<double(double x, double w, double w_x, double w_xx)> rhs;
    // Sum of the magnitudes of the terms of F; |F| when unset.
    std::function<double(double x, double w, double w_x, double w_xx)> scale;
    double w_lo = 0.5, w_hi = 2.0;

    // w_t = (d(w) w_x)_x
    static PdeSpec nonlinear_heat(const Diffusivity& d);
};

// Jets on the PDE manifold: (t, x, w, w_x, w_xx) drawn uniformly with
// w_t = F solved for. Deterministic for a given seed.
std::vector<Jet> sample_pde_jets(const PdeSpec& pde, int count, std::uint64_t seed,
                                 double t_lo = 0.5, double t_hi = 2.0, double x_lo = 0.1,
                                 double x_hi = 1.0);

// ---- boundary conditions ----

enum class ManifoldKind { fixed_curve, free_surface, infinity };

const char* to_string(ManifoldKind kind);

// A manifold point with the data a boundary condition can depend on.
struct BoundarySample {
    double t = 0.0;
    double x = 0.0;
    std::array<double, 2> w{};    // u, v
    std::array<double, 2> w_x{};  // u_x, v_x
    std::array<double, 2> w_t{};  // only needed when x* depends on t
    double V = 0.0;               // front velocity, free surfaces only
};

struct BoundaryCondition {
    std::string name;
    ManifoldKind kind = ManifoldKind::fixed_curve;
    int order = 1;  // highest x-derivative involved
    // fixed_curve: s(t, x) = 0 describes the boundary
    std::function<double(double t, double x)> curve;
    // Normalised residuals of the condition; all vanish on the manifold.
    std::function<std::vector<double>(const BoundarySample&)> residuals;
    // Signed, unnormalised form of the first residual (used to fit
    // parameter constraints); optional.
    std::function<double(const BoundarySample&)> raw_residual;
    // Produces the n-th manifold sample (n = 0, 1, ...). For infinity
    // conditions the sample is taken at the given x.
    std::function<BoundarySample(int n, double x)> sampler;
};

// Image of a manifold sample under the action; free-surface velocity
// transformed with S* = S.
BoundarySample transform_sample(const GroupAction& action, const BoundarySample& s, double eps,
                                bool checked = true);

// ---- reports ----

struct ResidualRecord {
    std::string family;
    std::string item;
    std::string condition;
    double eps = 0.0;
    double residual = 0.0;
};

// Verdict of one invariance item: (a) equations, (b) fixed
// boundaries, (c) free boundaries, (d) conditions at infinity.
struct ItemVerdict {
    char item = 'a';
    std::string condition;
    bool pass = false;
    double max_residual = 0.0;
    std::string note;
    std::vector<ResidualRecord> records;
};

struct InvarianceReport {
    std::string family;
    std::string generator;
    std::vector<ItemVerdict> items;
    std::vector<std::string> constraints;
    bool pass = false;

    // pass <- every item passes
    void finalize();
    std::vector<ResidualRecord> records() const;
};

// (a) Maps each jet through the second prolongation and evaluates the PDE
// at the image, normalised by |w*_t| + |F*|. Passes when the maximum over
// jets and eps is at most tol. Throws ContractError when the action's
// prolongation order is below the PDE order.
ItemVerdict check_pde_invariance(const GroupAction& action, GroupAction::Component component,
                                 const PdeSpec& pde, const std::vector<Jet>& jets,
                                 const std::vector<double>& eps_grid = kEpsGrid,
                                 double tol = kPdeTolerance, int prolongation_order = 2);

// (b)/(c) Transforms sampled manifold points (S* = S for free surfaces,
// velocity transformed through the Jacobian) and evaluates curve
// membership and the condition residuals at the image.
ItemVerdict check_boundary_invariance(const GroupAction& action, const BoundaryCondition& condition,
                                      int samples = 16, const std::vector<double>& eps_grid = kEpsGrid,
                                      double tol = kBoundaryTolerance);

// (d) Follows x_n = 10^n, n = 1..8: passes when x_n* grows monotonically
// without bound and the transformed residual decays to tol.
ItemVerdict check_infinity_invariance(const GroupAction& action, const BoundaryCondition& condition,
                                      const std::vector<double>& eps_grid = kEpsGrid,
                                      double tol = kBoundaryTolerance);

}  // namespace stefanlie
