#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "stefanlie/material.hpp"
#include "stefanlie/self_similar.hpp"
#include "stefanlie/travelling_wave.hpp"

namespace stefanlie {

// Front-tracking state: liquid nodes on [s1, s2] (uniform in the Landau
// coordinate), solid nodes on [s2, x_max] (exponentially stretched away from
// the front). u[0] is the surface node, u.back() = u_m, v[0] = v_m and
// v.back() = v_inf.
struct FrontTrackedState {
    double t = 0.0;
    double s1 = 0.0;
    double s2 = 0.0;
    double x_max = 0.0;
    double beta = 0.0;  // solid stretching, 0 = uniform
    double dx0 = 0.0;   // initial liquid spacing, sets the collapse threshold
    std::vector<double> u;
    std::vector<double> v;
    std::vector<double> solid_f;  // solid_map(j / n_solid), cached

    int n_liquid() const { return static_cast<int>(u.size()) - 1; }
    int n_solid() const { return static_cast<int>(v.size()) - 1; }
    double liquid_x(int i) const;
    double solid_x(int j) const;
    double solid_map(double zeta) const;  // f(zeta) in x = s2 + (x_max - s2) f(zeta)
};

struct GridSpec {
    int n_liquid = 40;
    int n_solid = 0;  // 0 selects 4 * n_liquid
    double cfl = 0.4;
    double x_max = 0.0;  // 0 selects s2(0) + 20 sqrt(d2(v_inf) t_end)
    double snapshot_interval = 0.0;  // s; validations keep snapshots when > 0
};

// Builds a state from enthalpy fields given as functions of x. The solid
// stretching is chosen so the first solid spacing equals the liquid one.
FrontTrackedState make_state(double t, double s1, double s2, double x_max, const GridSpec& grid,
                             const std::function<double(double)>& u_of_x,
                             const std::function<double(double)>& v_of_x);

// Largest dt allowed by dt <= cfl * dx^2 / max d on both subgrids.
double stable_dt(const FrontTrackedState& s, const TransformedBVP& bvp, double cfl = 0.4);

struct StepDiagnostics {
    double V1 = 0.0;
    double V2 = 0.0;
    double energy_rate = 0.0;  // boundary and latent terms of d/dt of total enthalpy
    double absorbed = 0.0;     // |q| at the surface
};

// Explicit Euler step of the moving-grid scheme. Throws StepError when dt
// exceeds the CFL bound or when the liquid layer collapses to two initial
// spacings.
FrontTrackedState step(const FrontTrackedState& s, const TransformedBVP& bvp, double dt,
                       StepDiagnostics* diagnostics = nullptr);

// Trapezoidal integral of u over [s1, s2] plus v over [s2, x_max].
double total_enthalpy(const FrontTrackedState& s);

struct Snapshot {
    double t = 0.0;
    double s1 = 0.0;
    double s2 = 0.0;
    std::vector<double> x;
    std::vector<Phase> phase;
    std::vector<double> enthalpy;
};

Snapshot take_snapshot(const FrontTrackedState& s);

struct RunResult {
    FrontTrackedState final_state;
    std::vector<double> t, s1, s2;
    std::vector<Snapshot> snapshots;
    long steps = 0;
    double dt = 0.0;
    // Largest windowed mismatch (every 100 steps) between the change of the
    // total enthalpy and the integrated boundary terms, relative to the
    // energy absorbed in the window.
    double conservation_defect = 0.0;
    // Largest excursion of nodal enthalpies outside [u_m, u_cap] and the
    // solid range, relative to the phase's range.
    double bound_violation = 0.0;
};

// Steps a state to t_end with dt = 0.9 times the cfl-limited step, refreshed
// every 100 steps; the last step is shortened to land on t_end.
// snapshot_interval > 0 stores snapshots on that time grid.
RunResult run_oracle(FrontTrackedState state, const TransformedBVP& bvp, double t_end,
                     const GridSpec& grid, double snapshot_interval = 0.0);

struct TravellingWaveReport {
    int n_liquid = 0;
    double mu = 0.0;
    double velocity_s1 = 0.0;       // fitted surface velocity
    double velocity_s2 = 0.0;       // fitted melting-front velocity
    double velocity_error = 0.0;    // max relative deviation from mu
    double profile_drift = 0.0;     // relative L-inf drift in the moving frame
    double thickness_drift = 0.0;   // |(s2 - s1) - delta| / delta at t_end
    double conservation_defect = 0.0;
    double bound_violation = 0.0;
    long steps = 0;
    std::vector<Snapshot> snapshots;
};

// Seeds the oracle with the exact wave (surface at 0) and runs to t_end.
// Drift is measured in temperature relative to T_surface - T_inf when a
// material is given, otherwise in enthalpy relative to each phase's range.
TravellingWaveReport validate_travelling_wave(const TransformedBVP& bvp, const TravellingWaveSolution& sol,
                                              double t_end, const GridSpec& grid,
                                              const MaterialSpec* spec = nullptr);

struct SelfSimilarReport {
    int n_liquid = 0;
    double omega1 = 0.0, omega2 = 0.0;          // shooting values
    double omega1_fit = 0.0, omega2_fit = 0.0;  // least squares s = omega sqrt(t)
    double omega1_error = 0.0, omega2_error = 0.0;
    double exponent1 = 0.0, exponent2 = 0.0;    // log-log slopes of s_k(t)
    double conservation_defect = 0.0;
    double bound_violation = 0.0;
    long steps = 0;
    std::vector<Snapshot> snapshots;
};

SelfSimilarReport validate_self_similar(const TransformedBVP& bvp, const SelfSimilarSolution& sol, double t0,
                                        double t_end, const GridSpec& grid);

}  // namespace stefanlie
