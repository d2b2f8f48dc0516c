#include "stefanlie/self_similar.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "stefanlie/travelling_wave.hpp"

namespace stefanlie {

namespace {

constexpr double kPi = 3.14159265358979323846;

double diffusivity(const TransformedBVP& bvp, Phase phase, double w) {
    return phase == Phase::liquid ? bvp.d1(w) : bvp.d2(w);
}

double tail_length(const TransformedBVP& bvp, const SelfSimilarOptions& options) {
    return options.tail_widths * std::sqrt(2.0 * bvp.d2(bvp.v_inf));
}

struct Shot {
    std::array<double, 3> residuals{};
    std::vector<numerics::OdeNode> liquid;
    std::vector<numerics::OdeNode> solid;
    double omega_max = 0.0;
};

Shot shoot(const TransformedBVP& bvp, double omega1, double omega2, double u1,
           const SelfSimilarOptions& options, bool dense) {
    if (!(omega1 < omega2)) throw PreconditionError("shoot_residuals: requires omega1 < omega2");
    if (!(u1 > bvp.u_m && u1 <= bvp.u_cap * (1.0 + 1e-12)))
        throw PreconditionError("shoot_residuals: u1 outside (u_m, u_cap]");

    Shot shot;
    shot.omega_max = omega2 + tail_length(bvp, options);

    numerics::OdeOptions ode;
    ode.rtol = options.ode_rtol;
    ode.atol = 0.0;
    ode.admissible = [](double, const numerics::Vec2& y) {
        return std::isfinite(y[0]) && std::isfinite(y[1]);
    };

    // Liquid: flux balance at the surface fixes the slope.
    const double p1 = 0.5 * bvp.H1(u1) * omega1 - bvp.q_of_u(u1);
    const auto liquid_rhs = [&](double w, const numerics::Vec2& y) {
        return ss_rhs(bvp, Phase::liquid, w, y);
    };
    if (dense) ode.h_max = (omega2 - omega1) / 256.0;
    ode.atol = 1e-14 * (std::abs(u1) + std::abs(p1));
    shot.liquid = numerics::integrate_dopri(liquid_rhs, omega1, {u1, p1}, omega2, ode);
    const numerics::Vec2 front = shot.liquid.back().y;

    // Solid: Stefan balance across the melting front.
    const double p2 = front[1] + 0.5 * bvp.H2 * omega2;
    const auto solid_rhs = [&](double w, const numerics::Vec2& y) {
        return ss_rhs(bvp, Phase::solid, w, y);
    };
    if (dense) ode.h_max = (shot.omega_max - omega2) / 1024.0;
    ode.atol = 1e-14 * (std::abs(bvp.v_m) + std::abs(p2));
    shot.solid = numerics::integrate_dopri(solid_rhs, omega2, {bvp.v_m, p2}, shot.omega_max, ode);
    const double v_end = shot.solid.back().y[0];

    const double h1 = bvp.h_of_u(u1);
    const double kin_scale = 0.5 * std::abs(omega1) + std::abs(h1);
    const double Vm = std::abs(bvp.Vm());
    shot.residuals[0] = kin_scale > 0.0 ? (0.5 * omega1 - h1) / kin_scale : 0.0;
    shot.residuals[1] = (front[0] - bvp.u_m) / (std::abs(u1 - bvp.u_m) + Vm);
    shot.residuals[2] = (v_end - bvp.v_inf) / Vm;
    return shot;
}

double max_abs(const std::array<double, 3>& r) {
    return std::max({std::abs(r[0]), std::abs(r[1]), std::abs(r[2])});
}

numerics::CubicHermite hermite(const std::vector<numerics::OdeNode>& nodes,
                               const TransformedBVP& bvp, Phase phase) {
    std::vector<double> x, y, dy;
    x.reserve(nodes.size());
    y.reserve(nodes.size());
    dy.reserve(nodes.size());
    for (const auto& n : nodes) {
        x.push_back(n.t);
        y.push_back(n.y[0]);
        dy.push_back(n.y[1] / diffusivity(bvp, phase, n.y[0]));
    }
    return numerics::CubicHermite(std::move(x), std::move(y), std::move(dy));
}

// First omega at which the liquid trajectory from (omega1, u1) reaches u_m.
std::optional<double> liquid_crossing(const TransformedBVP& bvp, double omega1, double u1,
                                      const SelfSimilarOptions& options) {
    const double p1 = 0.5 * bvp.H1(u1) * omega1 - bvp.q_of_u(u1);
    const double reach = 50.0 * std::sqrt(2.0 * bvp.d1(u1));
    numerics::OdeOptions ode;
    ode.rtol = options.ode_rtol;
    ode.atol = 1e-14 * (std::abs(u1) + std::abs(p1));
    ode.h_max = reach / 512.0;
    const auto u_at = [&](double w) {
        return numerics::integrate_dopri(
                   [&](double s, const numerics::Vec2& y) { return ss_rhs(bvp, Phase::liquid, s, y); },
                   omega1, {u1, p1}, w, ode)
                   .back()
                   .y[0] -
               bvp.u_m;
    };
    try {
        double lo = omega1, hi = omega1 + reach / 512.0;
        while (u_at(hi) > 0.0) {
            lo = hi;
            hi = omega1 + 2.0 * (hi - omega1);
            if (hi > omega1 + reach) return std::nullopt;
        }
        return numerics::bracketed_root(u_at, lo, hi, 1e-8).root;
    } catch (const Error&) {
        return std::nullopt;
    }
}

}  // namespace

double SelfSimilarSolution::enthalpy(double omega) const {
    if (omega < omega1) throw DomainError("SelfSimilarSolution::enthalpy: omega below the surface");
    if (omega <= omega2) return u_profile.value(omega);
    if (omega <= omega_max) return v_profile.value(omega);
    return v_inf;
}

numerics::Vec2 ss_rhs(const TransformedBVP& bvp, Phase phase, double omega,
                      const numerics::Vec2& state) {
    const double d = diffusivity(bvp, phase, state[0]);
    if (!(d > 0.0)) {
        std::ostringstream msg;
        msg << "degenerate diffusivity d(w) = " << d << " at omega = " << omega;
        throw IntegrationError(msg.str(), omega);
    }
    const double dw = state[1] / d;
    return {dw, -0.5 * omega * dw};
}

std::array<double, 3> shoot_residuals(const TransformedBVP& bvp, double omega1, double omega2,
                                      double u1_guess, const SelfSimilarOptions& options) {
    return shoot(bvp, omega1, omega2, u1_guess, options, false).residuals;
}

std::optional<double> neumann_flux_front(double flux, double d1, double d2, double Vm, double H2) {
    if (!(flux > 0.0 && d1 > 0.0 && d2 > 0.0)) return std::nullopt;
    // Liquid flux at the front minus solid flux minus latent heat uptake.
    const auto g = [=](double s) {
        const double l1 = s / (2.0 * std::sqrt(d1));
        const double l2 = s / (2.0 * std::sqrt(d2));
        const double solid = Vm * std::sqrt(d2 / kPi) * std::exp(-l2 * l2) / std::erfc(l2);
        return flux * std::exp(-l1 * l1) - solid - 0.5 * H2 * s;
    };
    double hi = 1e-3 * std::sqrt(d1);
    if (!(g(hi) > 0.0)) return std::nullopt;
    double lo = hi;
    for (int i = 0; i < 200 && g(hi) > 0.0; ++i) {
        lo = hi;
        hi *= 2.0;
    }
    if (g(hi) > 0.0) return std::nullopt;
    return numerics::bracketed_root(g, lo, hi, 1e-12).root;
}

SelfSimilarSolution solve_self_similar(const TransformedBVP& bvp, const SelfSimilarOptions& options) {
    if (bvp.time_law != TimeLaw::inverse_sqrt)
        throw PreconditionError("solve_self_similar: requires q(u)/sqrt(t), h(u)/sqrt(t) (inverse_sqrt time law)");
    if (bvp.v_m == bvp.v_inf) throw PreconditionError("solve_self_similar: requires v_m != v_inf");

    // ---- initial guess ----
    std::optional<TravellingWaveSolution> wave;
    if (!options.u1_guess || !options.omega2_guess) {
        TransformedBVP steady = bvp;
        steady.time_law = TimeLaw::steady;
        try {
            wave = solve_travelling_wave(steady);
        } catch (const Error&) {
        }
    }
    double u1 = options.u1_guess ? *options.u1_guess
               : wave            ? wave->u_s
                                 : bvp.u_m + 0.5 * (bvp.u_cap - bvp.u_m);
    double omega1 = 2.0 * bvp.h_of_u(u1);
    double omega2 = 0.0;
    if (options.omega2_guess) {
        omega2 = *options.omega2_guess;
    } else if (auto crossing = liquid_crossing(bvp, omega1, u1, options)) {
        omega2 = *crossing;
    } else {
        const double flux = bvp.q_of_u(u1) - 0.5 * bvp.H1(u1) * omega1;
        auto s = neumann_flux_front(flux, bvp.d1(u1), bvp.d2(bvp.v_inf), bvp.Vm(), bvp.H2);
        omega2 = omega1 + (s ? *s : wave ? wave->delta : std::sqrt(bvp.d1(u1)));
    }

    // ---- damped Newton ----
    // Iterates on (u1, gap = omega2 - omega1): omega1 = 2 h(u1) moves fast with
    // u1 when evaporation is steep, and the gap keeps the Jacobian well scaled.
    const auto evaluate = [&](double u, double gap) -> std::optional<std::array<double, 3>> {
        if (!(u > bvp.u_m && u <= bvp.u_cap) || !(gap > 0.0)) return std::nullopt;
        const double w1 = 2.0 * bvp.h_of_u(u);
        try {
            auto r = shoot(bvp, w1, w1 + gap, u, options, false).residuals;
            if (!std::isfinite(r[1]) || !std::isfinite(r[2])) return std::nullopt;
            return r;
        } catch (const Error&) {
            return std::nullopt;
        }
    };

    double gap = omega2 - omega1;
    auto current = evaluate(u1, gap);
    if (!current) {
        std::ostringstream msg;
        msg << "solve_self_similar: shooting fails at the initial guess u1 = " << u1
            << ", omega2 = " << omega2;
        throw ShootingError(msg.str(), u1, omega2, {});
    }
    std::vector<double> history{max_abs(*current)};
    double best_u1 = u1, best_gap = gap, best = history.back();
    int iter = 0;
    const double target = 1e-2 * options.tolerance;
    for (; iter < options.max_iterations && best > target; ++iter) {
        const auto& r = *current;
        const double du = 1e-7 * std::max(u1 - bvp.u_m, 1e-6 * (bvp.u_cap - bvp.u_m));
        const double dg = 1e-7 * gap;
        double u_probe = u1 + du;
        if (u_probe > bvp.u_cap) u_probe = u1 - du;
        const auto ru = evaluate(u_probe, gap);
        const auto rg = evaluate(u1, gap + dg);
        if (!ru || !rg) break;
        const double hu = u_probe - u1;
        const double J00 = ((*ru)[1] - r[1]) / hu, J01 = ((*rg)[1] - r[1]) / dg;
        const double J10 = ((*ru)[2] - r[2]) / hu, J11 = ((*rg)[2] - r[2]) / dg;
        const double det = J00 * J11 - J01 * J10;
        if (!(std::abs(det) > 0.0) || !std::isfinite(det)) break;
        const double step_u = -(J11 * r[1] - J01 * r[2]) / det;
        const double step_g = -(-J10 * r[1] + J00 * r[2]) / det;

        bool accepted = false;
        double lambda = 1.0;
        for (int halving = 0; halving < 40; ++halving, lambda *= 0.5) {
            const double u_try = u1 + lambda * step_u;
            const double g_try = gap + lambda * step_g;
            const auto r_try = evaluate(u_try, g_try);
            if (!r_try) continue;
            if (max_abs(*r_try) < max_abs(r) || max_abs(*r_try) <= target) {
                u1 = u_try;
                gap = g_try;
                current = r_try;
                accepted = true;
                break;
            }
        }
        history.push_back(max_abs(*current));
        if (history.back() < best) {
            best = history.back();
            best_u1 = u1;
            best_gap = gap;
        }
        if (!accepted) break;
    }
    const double best_omega2 = 2.0 * bvp.h_of_u(best_u1) + best_gap;

    if (!(best <= options.tolerance)) {
        std::ostringstream msg;
        msg << "solve_self_similar: no convergence after " << iter << " Newton iterations; best residual "
            << best << " at u1 = " << best_u1 << ", omega2 = " << best_omega2;
        throw ShootingError(msg.str(), best_u1, best_omega2, history);
    }

    // ---- dense profiles at the best iterate ----
    SelfSimilarSolution sol;
    sol.u1 = best_u1;
    sol.omega1 = 2.0 * bvp.h_of_u(best_u1);
    sol.omega2 = best_omega2;
    const Shot shot = shoot(bvp, sol.omega1, sol.omega2, sol.u1, options, true);
    sol.omega_max = shot.omega_max;
    sol.residuals = shot.residuals;
    sol.bc_residual = max_abs(shot.residuals);
    sol.iterations = iter;
    sol.residual_history = std::move(history);
    sol.u_profile = hermite(shot.liquid, bvp, Phase::liquid);
    sol.v_profile = hermite(shot.solid, bvp, Phase::solid);
    sol.v_inf = bvp.v_inf;
    if (sol.bc_residual > options.tolerance) {
        std::ostringstream msg;
        msg << "solve_self_similar: dense re-shoot residual " << sol.bc_residual << " above tolerance";
        throw ShootingError(msg.str(), best_u1, best_omega2, sol.residual_history);
    }
    return sol;
}

}  // namespace stefanlie
