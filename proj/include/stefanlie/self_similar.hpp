#pragma once

#include <array>
#include <optional>
#include <vector>

#include "stefanlie/errors.hpp"
#include "stefanlie/material.hpp"
#include "stefanlie/numerics.hpp"

namespace stefanlie {

// Similarity solution u(x/sqrt t), v(x/sqrt t) with fronts s_k = omega_k sqrt t.
struct SelfSimilarSolution {
    double omega1 = 0.0;     // surface, m/s^{1/2}
    double omega2 = 0.0;     // melting front
    double omega_max = 0.0;  // truncation of the solid tail
    double u1 = 0.0;         // surface enthalpy, J/m^3
    double bc_residual = 0.0;
    std::array<double, 3> residuals{};
    int iterations = 0;
    std::vector<double> residual_history;

    numerics::CubicHermite u_profile;  // over [omega1, omega2]
    numerics::CubicHermite v_profile;  // over [omega2, omega_max]
    double v_inf = 0.0;

    Phase phase_at(double omega) const { return omega <= omega2 ? Phase::liquid : Phase::solid; }
    // Enthalpy at similarity coordinate omega >= omega1; v_inf beyond omega_max.
    double enthalpy(double omega) const;
};

struct SelfSimilarOptions {
    std::optional<double> u1_guess;
    std::optional<double> omega2_guess;
    double tail_widths = 10.0;  // omega_max = omega2 + tail_widths * sqrt(2 d2(v_inf))
    double tolerance = 1e-8;
    int max_iterations = 100;
    double ode_rtol = 1e-10;
};

// Newton stagnation or iteration budget exhausted; carries the best iterate.
class ShootingError : public ConvergenceError {
public:
    ShootingError(const std::string& what, double best_u1, double best_omega2,
                  std::vector<double> history)
        : ConvergenceError(what), best_u1(best_u1), best_omega2(best_omega2),
          history(std::move(history)) {}
    double best_u1;
    double best_omega2;
    std::vector<double> history;
};

// First-order form of d/domega(d(w) w') + (omega/2) w' = 0 with p = d(w) w':
// returns (p/d(w), -(omega/2) p/d(w)).
numerics::Vec2 ss_rhs(const TransformedBVP& bvp, Phase phase, double omega,
                      const numerics::Vec2& state);

// Shoots from the surface (slope from the flux condition) to omega2, crosses
// the front with the Stefan balance, and integrates the solid to omega_max.
// Residuals, each normalised: surface kinematics omega1/2 - h(u1), u(omega2)
// - u_m, and v(omega_max) - v_inf.
std::array<double, 3> shoot_residuals(const TransformedBVP& bvp, double omega1, double omega2,
                                      double u1_guess, const SelfSimilarOptions& options = {});

// Damped Newton on (u1, omega2) with omega1 = 2 h(u1). Requires the
// inverse-sqrt time law and v_m != v_inf.
SelfSimilarSolution solve_self_similar(const TransformedBVP& bvp,
                                       const SelfSimilarOptions& options = {});

// Front position of the constant-diffusivity two-phase problem driven by the
// surface flux Q/sqrt(t) from a fixed surface; used as an initial guess.
std::optional<double> neumann_flux_front(double flux, double d1, double d2, double Vm, double H2);

}  // namespace stefanlie
