#include "stefanlie/material.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "stefanlie/errors.hpp"
#include "stefanlie/numerics.hpp"

namespace stefanlie {

const char* to_string(Phase phase) { return phase == Phase::liquid ? "liquid" : "solid"; }

const char* to_string(TimeLaw law) {
    return law == TimeLaw::steady ? "steady" : "inverse_sqrt";
}

// -------------------------------------------------------------
// Specific heat laws
// -------------------------------------------------------------

SpecificHeat SpecificHeat::constant(double c) {
    SpecificHeat law;
    law.kind_ = Kind::constant;
    law.a_ = c;
    return law;
}

SpecificHeat SpecificHeat::linear(double a, double b) {
    if (b == 0.0) return constant(a);
    SpecificHeat law;
    law.kind_ = Kind::linear;
    law.a_ = a;
    law.b_ = b;
    return law;
}

SpecificHeat SpecificHeat::general(std::function<double(double)> c) {
    SpecificHeat law;
    law.kind_ = Kind::general;
    law.law_ = std::move(c);
    return law;
}

double SpecificHeat::operator()(double T) const {
    switch (kind_) {
        case Kind::constant: return a_;
        case Kind::linear: return a_ + b_ * T;
        case Kind::general: return law_(T);
    }
    return 0.0;
}

namespace {

void require_positive_heat(const SpecificHeat& law, double T) {
    auto fail = [&](double at) {
        std::ostringstream msg;
        msg << "specific heat is non-positive at T = " << at << " K (required positive on [0, "
            << T << "])";
        throw ConstitutiveError(msg.str());
    };
    switch (law.kind()) {
        case SpecificHeat::Kind::constant:
            if (!(law.a() > 0.0)) fail(0.0);
            break;
        case SpecificHeat::Kind::linear:
            if (!(law(0.0) > 0.0)) fail(0.0);
            if (!(law(T) > 0.0)) fail(T);
            break;
        case SpecificHeat::Kind::general: {
            constexpr int kSamples = 256;
            for (int i = 0; i <= kSamples; ++i) {
                const double s = T * i / kSamples;
                if (!(law(s) > 0.0)) fail(s);
            }
            break;
        }
    }
}

}  // namespace

double enthalpy(const SpecificHeat& law, double rho, double T) {
    if (!(T >= 0.0)) throw DomainError("enthalpy: temperature must be non-negative");
    require_positive_heat(law, T);
    switch (law.kind()) {
        case SpecificHeat::Kind::constant: return rho * law.a() * T;
        case SpecificHeat::Kind::linear: return rho * (law.a() * T + 0.5 * law.b() * T * T);
        case SpecificHeat::Kind::general:
            return rho * numerics::adaptive_simpson(
                             [&](double s) {
                                 const double c = law(s);
                                 if (!(c > 0.0)) require_positive_heat(SpecificHeat::constant(c), s);
                                 return c;
                             },
                             0.0, T, 1e-13);
    }
    return 0.0;
}

double temperature_from_enthalpy(const SpecificHeat& law, double rho, double u, double T_cap) {
    const double u_max = enthalpy(law, rho, T_cap);
    if (!(u >= 0.0) || u > u_max * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "enthalpy " << u << " J/m^3 outside the image [0, " << u_max
            << "] of the Kirchhoff map on [0, " << T_cap << "] K";
        throw DomainError(msg.str());
    }
    switch (law.kind()) {
        case SpecificHeat::Kind::constant: return u / (rho * law.a());
        case SpecificHeat::Kind::linear: {
            // Positive root of (b/2) T^2 + a T - u/rho = 0 in the cancellation-free form.
            const double w = u / rho;
            const double a = law.a();
            return 2.0 * w / (a + std::sqrt(a * a + 2.0 * law.b() * w));
        }
        case SpecificHeat::Kind::general: {
            auto g = [&](double T) { return enthalpy(law, rho, T) - u; };
            return numerics::bracketed_root(g, 0.0, -u, T_cap, u_max - u, 1e-14, 0.0).root;
        }
    }
    return 0.0;
}

// -------------------------------------------------------------
// Material data
// -------------------------------------------------------------

MaterialSpec MaterialSpec::aluminium() {
    MaterialSpec al;
    al.lambda1 = 240.0;
    al.lambda2 = 240.0;
    al.rho = 2545.0;
    al.c1 = 1086.0;
    al.c2_a = 752.2;
    al.c2_b = 0.473;
    al.Lm = 0.64e6;
    al.Lv = 10.8e6;
    al.Tv = 2793.0;
    al.Tm = 933.0;
    al.Tinf = 300.0;
    al.chi0 = 0.64;
    al.chi_p = 0.4;
    al.chi_Tref = 11600.0;
    al.q0 = 1e10;
    return al;
}

void MaterialSpec::validate() const {
    const std::pair<const char*, double> positive[] = {
        {"lambda1", lambda1}, {"lambda2", lambda2}, {"rho", rho}, {"c1", c1},
        {"Lm", Lm},           {"Lv", Lv},           {"Tv", Tv},   {"Tm", Tm},
        {"q0", q0},           {"A", A},             {"Pa", Pa},   {"R", R},
        {"chi_Tref", chi_Tref}};
    for (const auto& [name, value] : positive) {
        if (!(value > 0.0) || !std::isfinite(value)) {
            throw ConstructionError(std::string("material field ") + name + " must be positive");
        }
    }
    if (!(Tinf < Tm && Tm < Tv)) {
        throw ConstructionError("material temperatures must satisfy Tinf < Tm < Tv");
    }
    if (!(solid_heat(Tinf) > 0.0) || !(solid_heat(Tm) > 0.0)) {
        throw ConstitutiveError("solid specific heat c2(T) must be positive on [Tinf, Tm]");
    }
}

SpecificHeat MaterialSpec::heat_law(Phase phase) const {
    return phase == Phase::liquid ? SpecificHeat::constant(c1) : SpecificHeat::linear(c2_a, c2_b);
}

double MaterialSpec::absorption(double T) const { return chi0 * std::pow(T / chi_Tref, chi_p); }

double MaterialSpec::activation_temperature() const { return A * Lv / R; }

double MaterialSpec::boiling_velocity() const {
    return Pa * std::sqrt(A) / (rho * std::sqrt(2.0 * std::numbers::pi * R * Tv));
}

double MaterialSpec::evaporation_velocity(double T) const {
    // V* sqrt(Tv/T) exp(-T*/T) with V* = boiling_velocity * exp(T*/Tv); the
    // exponentials are combined so that T = Tv reproduces boiling_velocity exactly.
    const double t_star = activation_temperature();
    return boiling_velocity() * std::sqrt(Tv / T) * std::exp(t_star / Tv - t_star / T);
}

double kirchhoff_forward(const MaterialSpec& spec, Phase phase, double T) {
    return enthalpy(spec.heat_law(phase), spec.rho, T);
}

double kirchhoff_inverse(const MaterialSpec& spec, Phase phase, double u) {
    return temperature_from_enthalpy(spec.heat_law(phase), spec.rho, u, spec.temperature_cap());
}

// -------------------------------------------------------------
// Transformed BVP
// -------------------------------------------------------------

double TransformedBVP::q(double t, double u) const {
    const double base = q_of_u(u);
    return time_law == TimeLaw::steady ? base : base / std::sqrt(t);
}

double TransformedBVP::h(double t, double u) const {
    const double base = h_of_u(u);
    return time_law == TimeLaw::steady ? base : base / std::sqrt(t);
}

namespace {

std::string interval(double a, double b) {
    std::ostringstream os;
    os.precision(12);
    os << "[" << a << ", " << b << "]";
    return os.str();
}

}  // namespace

void check_h_increasing(const TransformedBVP& bvp, int grid_points) {
    const double du = (bvp.u_cap - bvp.u_m) / (grid_points - 1);
    double prev = bvp.h_of_u(bvp.u_m);
    for (int i = 1; i < grid_points; ++i) {
        const double u = i + 1 == grid_points ? bvp.u_cap : bvp.u_m + i * du;
        const double cur = bvp.h_of_u(u);
        if (!(cur > prev)) {
            throw ConstructionError("evaporation law h(u) is not strictly increasing on " +
                                    interval(u - du, u) + " J/m^3");
        }
        prev = cur;
    }
}

std::vector<std::string> bvp_invariant_violations(const TransformedBVP& bvp,
                                                  bool require_h_increasing, int grid_points) {
    std::vector<std::string> problems;
    if (!(bvp.u_cap > bvp.u_m)) problems.push_back("u_cap must exceed u_m");
    if (bvp.v_m == bvp.v_inf) problems.push_back("v_m must differ from v_inf");
    if (!(bvp.H2 > 0.0)) problems.push_back("H2 must be positive");
    if (!problems.empty()) return problems;

    const int n = std::max(grid_points, 2);
    bool d1_ok = true, q_ok = true, h_ok = true, h1_ok = true, d2_ok = true;
    for (int i = 0; i < n; ++i) {
        const double u = bvp.u_m + (bvp.u_cap - bvp.u_m) * i / (n - 1);
        d1_ok = d1_ok && bvp.d1(u) > 0.0;
        q_ok = q_ok && bvp.q_of_u(u) > 0.0;
        h_ok = h_ok && bvp.h_of_u(u) >= 0.0;
        h1_ok = h1_ok && bvp.H1(u) > 0.0;
        const double v = std::min(bvp.v_inf, bvp.v_m) + std::abs(bvp.Vm()) * i / (n - 1);
        d2_ok = d2_ok && bvp.d2(v) > 0.0;
    }
    if (!d1_ok) problems.push_back("d1(u) must be positive on [u_m, u_cap]");
    if (!d2_ok) problems.push_back("d2(v) must be positive between v_inf and v_m");
    if (!q_ok) problems.push_back("q(u) must be positive on [u_m, u_cap]");
    if (!h_ok) problems.push_back("h(u) must be non-negative on [u_m, u_cap]");
    if (!h1_ok) problems.push_back("H1(u) must be positive on [u_m, u_cap]");
    if (require_h_increasing) {
        try {
            check_h_increasing(bvp, n);
        } catch (const ConstructionError& e) {
            problems.emplace_back(e.what());
        }
    }
    return problems;
}

TransformedBVP build_transformed_bvp(const MaterialSpec& spec, TimeLaw time_law,
                                     std::optional<double> T_cap) {
    spec.validate();
    const double rho = spec.rho;
    const double rc1 = rho * spec.c1;

    TransformedBVP bvp;
    const double d1 = spec.lambda1 / rc1;
    bvp.d1 = [d1](double) { return d1; };
    bvp.d1_constant = d1;

    const double a2 = spec.c2_a;
    const double b2 = spec.c2_b;
    const double lam2 = spec.lambda2;
    bvp.d2 = [lam2, rho, a2, b2](double v) {
        return lam2 / rho / std::sqrt(a2 * a2 + 2.0 * (b2 / rho) * v);
    };
    if (b2 == 0.0) bvp.d2_constant = lam2 / (rho * a2);

    // Absorbed flux chi(T) q0 with the liquid temperature T = u / (rho c1).
    const double q_coeff = spec.chi0 * spec.q0 / std::pow(spec.chi_Tref * rc1, spec.chi_p);
    const double p = spec.chi_p;
    bvp.q_of_u = [q_coeff, p](double u) { return q_coeff * std::pow(u, p); };

    bvp.h_of_u = [spec, rc1](double u) { return spec.evaporation_velocity(u / rc1); };

    const double H1 = rho * spec.Lv;
    bvp.H1 = [H1](double) { return H1; };
    bvp.H2 = rho * spec.Lm;

    bvp.u_m = kirchhoff_forward(spec, Phase::liquid, spec.Tm);
    bvp.v_m = kirchhoff_forward(spec, Phase::solid, spec.Tm);
    bvp.v_inf = kirchhoff_forward(spec, Phase::solid, spec.Tinf);
    bvp.u_cap = kirchhoff_forward(spec, Phase::liquid, T_cap.value_or(spec.temperature_cap()));
    bvp.time_law = time_law;

    const auto problems = bvp_invariant_violations(bvp, true);
    if (!problems.empty()) throw ConstructionError(problems.front());
    return bvp;
}

}  // namespace stefanlie
