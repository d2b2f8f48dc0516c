#pragma once

#include <memory>

#include "stefanlie/material.hpp"
#include "stefanlie/numerics.hpp"

namespace stefanlie {

// Maps the linearising coordinate eta to the physical moving-frame coordinate
// xi (and back) for one solved travelling wave. xi(eta) is the integral of
// d1(U + u_m) on [0, delta*] and delta + integral of d2(V + v_inf) beyond.
class WaveCoordinates;

// Plane-wave solution u(x - mu t), v(x - mu t). All quantities SI.
struct TravellingWaveSolution {
    double mu = 0.0;          // front velocity, m/s
    double u_s = 0.0;         // surface enthalpy h^{-1}(mu), J/m^3
    double delta_star = 0.0;  // liquid thickness in eta
    double delta = 0.0;       // physical liquid thickness, m
    double C1 = 0.0, C2 = 0.0, C3 = 0.0, C4 = 0.0;  // U = C1 + C2 e^{-mu eta}, V = C3 + C4 e^{-mu eta}
    double Vm = 0.0;          // v_m - v_inf
    double K = 0.0;           // Vm + H2
    double u_m = 0.0;
    double v_inf = 0.0;
    double residual = 0.0;    // relative velocity-equation residual at the root
    int sign_changes = 0;     // > 1 means several roots; the smallest was returned

    bool multiple_roots() const { return sign_changes > 1; }

    std::shared_ptr<const WaveCoordinates> coordinates;
};

// Velocity equation parametrised by the surface enthalpy u_s (mu = h(u_s)):
// q(u_s)/h(u_s) - H1(u_s) - u_s - (Vm - u_m + H2).
double velocity_residual(const TransformedBVP& bvp, double u_s);

// Brackets the velocity equation on (u_m, u_cap], refines the smallest root
// and assembles profile constants. Requires a steady time law and an
// increasing evaporation law.
TravellingWaveSolution solve_travelling_wave(const TransformedBVP& bvp);

struct TransformedValue {
    Phase phase;
    double value;  // U (liquid) or V (solid), offsets from u_m / v_inf
};

// U(eta) on [0, delta*], V(eta) beyond.
TransformedValue profile_transformed(const TravellingWaveSolution& sol, double eta);

struct EnthalpyValue {
    Phase phase;
    double eta;
    double enthalpy;  // absolute u or v, J/m^3
};

// Enthalpy at moving-frame coordinate xi >= 0 measured from the surface.
EnthalpyValue profile_enthalpy(const TravellingWaveSolution& sol, double xi);

// Temperature at moving-frame coordinate xi >= 0.
double profile_physical(const TravellingWaveSolution& sol, const MaterialSpec& spec, double xi);

// Physical coordinate of a given eta, and its inverse.
double xi_of_eta(const TravellingWaveSolution& sol, double eta);
double eta_of_xi(const TravellingWaveSolution& sol, double xi);

}  // namespace stefanlie
