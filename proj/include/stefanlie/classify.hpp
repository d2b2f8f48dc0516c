#pragma once

#include <functional>
#include <string>
#include <vector>

#include "stefanlie/group_action.hpp"
#include "stefanlie/invariance.hpp"
#include "stefanlie/material.hpp"

namespace stefanlie {

// ---- power-law rod: u_t = (u^k u_x)_x, u^k u_x = q0 cos(gamma t) at x = 0, u -> 0 at infinity ----

struct RodBvp {
    double k = 1.0;
    double gamma = 0.0;
    double q0 = 0.0;

    PdeSpec pde() const;
    BoundaryCondition flux() const;
    BoundaryCondition far_field() const;
};

// Candidate family built for a given power k (the catalog depends on k).
struct RodFamily {
    std::string id;
    std::function<GroupAction(double k)> make;
};

// T1..T4, the lambda-combinations T_a on the grid lambda2 in {-2..2},
// lambda3, lambda4 in {-2,-1,1,2}, the member with lambda3/lambda4 = k + 2,
// and the conformal T5 when k = -4/3.
std::vector<RodFamily> rod_catalog(double k);

InvarianceReport check_rod_family(const RodBvp& rod, const RodFamily& family);

struct RodClassification {
    int row = 0;  // 1..3, 0 when no row matches
    std::vector<InvarianceReport> reports;
    std::vector<std::string> passing;
    std::vector<std::string> constraints;
};

// Runs every catalog family through equations, the flux boundary and the
// far-field condition. The row logic: T1, T3 and T4 all invariant -> 1;
// T1 and the (k+2) t d_t + (k+1) x d_x + u d_u member -> 2; T4 without T1 -> 3.
RodClassification classify_rod_bvp(double k, double gamma, double q0);

// ---- Stefan class in enthalpy variables ----

// Data of the two-phase BVP with explicitly time-dependent flux and
// evaporation laws q(t,u), h(t,u).
struct StefanBoundaryData {
    Diffusivity d1;
    Diffusivity d2;
    std::function<double(double)> H1;
    double H2 = 1.0;
    std::function<double(double, double)> q;
    std::function<double(double, double)> h;
    double u_m = 1.0;
    double v_m = 0.8;
    double v_inf = 0.2;
    double u_lo = 1.2, u_hi = 2.0;  // surface enthalpies sampled

    // Generic nonlinear diffusivities and latent heats with the given q and h.
    static StefanBoundaryData generic(std::function<double(double, double)> q,
                                      std::function<double(double, double)> h);
};

BoundaryCondition surface_condition(const StefanBoundaryData& data);
BoundaryCondition melting_condition(const StefanBoundaryData& data);
BoundaryCondition far_field_condition(const StefanBoundaryData& data);

// x-translation, t-translation, the dilation t e^{2 eps}, x e^{eps} and the
// dilation composed with an x-shift; S1, S2 unchanged by all of them.
std::vector<GroupAction> stefan_catalog();

InvarianceReport check_stefan_family(const StefanBoundaryData& data, const GroupAction& action);

struct StefanClassification {
    int row = 0;
    std::vector<InvarianceReport> reports;
    std::vector<std::string> passing;
};

// Row 3 when the dilation is admitted, row 2 when the time translation is,
// row 1 when only the space translation is.
StefanClassification classify_stefan_bvp(const StefanBoundaryData& data);
StefanClassification classify_stefan_bvp(std::function<double(double, double)> q,
                                         std::function<double(double, double)> h);

// ---- generators of the decoupled equations ----

struct Table2Case {
    int id = 0;
    Diffusivity d1;
    Diffusivity d2;
    std::vector<GroupAction> generators;
};

// Cases 1..8. Throws PreconditionError otherwise.
Table2Case table2_case(int id);

// Checks every listed generator on both equations; one report per generator.
std::vector<InvarianceReport> verify_table2_generators(int case_id);

// ---- equivalence transformations ----

// t -> e0 t + t0, x -> e1 x + x0, u -> e2 u + u0, v -> e3 v + v0, S_k -> S_k.
struct EquivalenceParams {
    double e0 = 1.0, e1 = 1.0, e2 = 1.0, e3 = 1.0;
    double t0 = 0.0, x0 = 0.0, u0 = 0.0, v0 = 0.0;
};

// Rebuilds the BVP in the new variables. The class is only preserved for
// e0 > 0, e1 > 0, e2 = e3 > 0 and, for the inverse-sqrt law, t0 = 0;
// anything else throws PreconditionError.
TransformedBVP equivalence_transform(const TransformedBVP& bvp, const EquivalenceParams& p);

}  // namespace stefanlie
