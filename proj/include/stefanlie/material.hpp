#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace stefanlie {

enum class Phase { liquid, solid };

const char* to_string(Phase phase);

// Specific heat law c(T) in J/(kg K). Constant and linear laws are recognised
// so that enthalpy integrals and their inverses use closed forms; anything
// else goes through adaptive quadrature.
class SpecificHeat {
public:
    enum class Kind { constant, linear, general };

    static SpecificHeat constant(double c);
    static SpecificHeat linear(double a, double b);
    static SpecificHeat general(std::function<double(double)> c);

    double operator()(double T) const;
    Kind kind() const { return kind_; }
    double a() const { return a_; }
    double b() const { return b_; }

private:
    Kind kind_ = Kind::constant;
    double a_ = 0.0;
    double b_ = 0.0;
    std::function<double(double)> law_;
};

// Raw constants of a metal, SI units throughout. Field names double as the
// keys of the material config file.
struct MaterialSpec {
    double lambda1 = 0.0;   // liquid conductivity, W/(m K)
    double lambda2 = 0.0;   // solid conductivity, W/(m K)
    double rho = 0.0;       // density (both phases), kg/m^3
    double c1 = 0.0;        // liquid specific heat, J/(kg K)
    double c2_a = 0.0;      // solid specific heat c2(T) = c2_a + c2_b*T
    double c2_b = 0.0;
    double Lm = 0.0;        // latent heat of melting, J/kg
    double Lv = 0.0;        // latent heat of evaporation, J/kg
    double Tv = 0.0;        // evaporation temperature, K
    double Tm = 0.0;        // melting temperature, K
    double Tinf = 0.0;      // far-field temperature, K
    double chi0 = 0.0;      // absorption chi(T) = chi0*(T/chi_Tref)^chi_p
    double chi_p = 0.0;
    double chi_Tref = 0.0;  // K
    double q0 = 0.0;        // pulse power, W/m^2
    double A = 26.98e-3;    // atomic weight, kg/mol
    double Pa = 101325.0;   // ambient pressure, Pa
    double R = 8.314;       // gas constant, J/(mol K)

    // Aluminium constants used for the laser-melting example.
    static MaterialSpec aluminium();

    // Throws ConstructionError / ConstitutiveError on a broken invariant.
    void validate() const;

    SpecificHeat heat_law(Phase phase) const;
    double solid_heat(double T) const { return c2_a + c2_b * T; }
    double absorption(double T) const;
    // T* = A Lv / R
    double activation_temperature() const;
    // Evaporation velocity at the boiling point, Pa sqrt(A) / (rho sqrt(2 pi R Tv)).
    double boiling_velocity() const;
    // Evaporation velocity V1(T) of the surface.
    double evaporation_velocity(double T) const;
    // Default working ceiling for temperatures, 1.5 Tv.
    double temperature_cap() const { return 1.5 * Tv; }
};

// Enthalpy per unit volume integral_0^T rho*c(s) ds.
double enthalpy(const SpecificHeat& law, double rho, double T);
// Inverse of enthalpy() on [0, T_cap].
double temperature_from_enthalpy(const SpecificHeat& law, double rho, double u, double T_cap);

// Goodman/Kirchhoff substitution of the given phase and its inverse.
double kirchhoff_forward(const MaterialSpec& spec, Phase phase, double T);
double kirchhoff_inverse(const MaterialSpec& spec, Phase phase, double u);

// q(t,u) = q(u) for steady, q(u)/sqrt(t) for inverse_sqrt; h likewise.
enum class TimeLaw { steady, inverse_sqrt };

const char* to_string(TimeLaw law);

// Two-phase free-boundary problem in enthalpy variables: liquid u on
// [s1, s2], solid v on [s2, inf), flux + evaporation at s1, Stefan balance at
// s2, v -> v_inf at infinity. Evaluators are pure and safe to share.
struct TransformedBVP {
    std::function<double(double)> d1;      // liquid diffusivity d1(u), m^2/s
    std::function<double(double)> d2;      // solid diffusivity d2(v), m^2/s
    std::function<double(double)> q_of_u;  // absorbed flux, W/m^2
    std::function<double(double)> h_of_u;  // evaporation velocity, m/s
    std::function<double(double)> H1;      // volumetric heat of evaporation H1(u), J/m^3
    double H2 = 0.0;                       // volumetric heat of melting H2(v_m), J/m^3
    double u_m = 0.0;
    double v_m = 0.0;
    double v_inf = 0.0;
    double u_cap = 0.0;
    TimeLaw time_law = TimeLaw::steady;
    // Set when the corresponding diffusivity is known to be constant.
    std::optional<double> d1_constant;
    std::optional<double> d2_constant;

    double q(double t, double u) const;
    double h(double t, double u) const;
    double Vm() const { return v_m - v_inf; }
};

// Lists every broken TransformedBVP invariant (empty when all hold). The
// evaporation law is only required to be strictly increasing when asked.
std::vector<std::string> bvp_invariant_violations(const TransformedBVP& bvp,
                                                  bool require_h_increasing = true,
                                                  int grid_points = 10000);

// Throws ConstructionError naming the first subinterval of [u_m, u_cap] on
// which h_of_u fails to increase.
void check_h_increasing(const TransformedBVP& bvp, int grid_points = 10000);

// Builds the enthalpy-variable BVP of a material. T_cap defaults to 1.5 Tv.
TransformedBVP build_transformed_bvp(const MaterialSpec& spec, TimeLaw time_law,
                                     std::optional<double> T_cap = std::nullopt);

}  // namespace stefanlie
