#include "stefanlie/fd_oracle.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <sstream>

#include "stefanlie/errors.hpp"
#include "stefanlie/numerics.hpp"

namespace stefanlie {

// ---- grid ----

double FrontTrackedState::liquid_x(int i) const {
    const int n = n_liquid();
    return i == n ? s2 : s1 + (s2 - s1) * (double(i) / n);
}

double FrontTrackedState::solid_map(double zeta) const {
    return beta == 0.0 ? zeta : std::expm1(beta * zeta) / std::expm1(beta);
}

double FrontTrackedState::solid_x(int j) const {
    if (j == n_solid()) return x_max;
    return s2 + (x_max - s2) * solid_f[j];
}

namespace {

// Stretching for which the first solid spacing equals dx.
double stretching(double length, int m, double dx) {
    if (length / m <= dx) return 0.0;
    const auto first = [=](double b) { return length * std::expm1(b / m) / std::expm1(b) - dx; };
    double lo = 1e-9, hi = 1.0;
    while (first(hi) > 0.0) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e4) throw PreconditionError("make_state: solid grid too coarse for the liquid spacing");
    }
    return numerics::bracketed_root(first, lo, hi, 1e-14).root;
}

// Nodal first derivative on a nonuniform three-point stencil.
double central_derivative(double hm, double hp, double wm, double w, double wp) {
    return (hm * hm * (wp - w) + hp * hp * (w - wm)) / (hm * hp * (hm + hp));
}

struct Fronts {
    double V1, V2, ux_front, vx_front, vx_far;
};

Fronts front_velocities(const FrontTrackedState& s, const TransformedBVP& bvp) {
    const int n = s.n_liquid(), m = s.n_solid();
    Fronts f;
    f.V1 = bvp.h(s.t, s.u[0]);
    f.ux_front = numerics::one_sided_derivative(s.liquid_x(n), s.u[n], s.liquid_x(n - 1), s.u[n - 1],
                                                s.liquid_x(n - 2), s.u[n - 2]);
    f.vx_front = numerics::one_sided_derivative(s.solid_x(0), s.v[0], s.solid_x(1), s.v[1], s.solid_x(2), s.v[2]);
    f.vx_far = numerics::one_sided_derivative(s.solid_x(m), s.v[m], s.solid_x(m - 1), s.v[m - 1],
                                              s.solid_x(m - 2), s.v[m - 2]);
    f.V2 = (bvp.d2(bvp.v_m) * f.vx_front - bvp.d1(bvp.u_m) * f.ux_front) / bvp.H2;
    return f;
}

// Surface node from d1(u0) u_x = H1(u0) h(t,u0) - q(t,u0) with a one-sided
// second-order u_x through the two neighbouring nodes.
double surface_node(const FrontTrackedState& s, const TransformedBVP& bvp, double guess) {
    const double x0 = s.liquid_x(0), x1 = s.liquid_x(1), x2 = s.liquid_x(2);
    const double u1 = s.u[1], u2 = s.u[2];
    const auto g = [&](double u0) {
        const double ux = numerics::one_sided_derivative(x0, u0, x1, u1, x2, u2);
        return bvp.d1(u0) * ux - bvp.H1(u0) * bvp.h(s.t, u0) + bvp.q(s.t, u0);
    };
    const double scale = std::max({std::abs(guess), std::abs(u1), std::abs(bvp.u_m), 1.0});
    double w = 1e-6 * scale;
    double lo = guess - w, hi = guess + w;
    double glo = g(lo), ghi = g(hi);
    for (int i = 0; i < 200 && std::isfinite(glo) && std::isfinite(ghi) && !(glo >= 0.0 && ghi <= 0.0) &&
                    !(glo <= 0.0 && ghi >= 0.0);
         ++i) {
        w *= 2.0;
        if (glo < 0.0 && ghi < 0.0) {
            hi = lo;
            ghi = glo;
            lo -= w;
            glo = g(lo);
        } else {
            lo = hi;
            glo = ghi;
            hi += w;
            ghi = g(hi);
        }
    }
    if (!std::isfinite(glo) || !std::isfinite(ghi) || std::signbit(glo) == std::signbit(ghi)) {
        if (glo == 0.0) return lo;
        if (ghi == 0.0) return hi;
        std::ostringstream msg;
        msg << "surface flux condition has no bracketed root near u = " << guess << " at t = " << s.t;
        throw StepError(msg.str());
    }
    return numerics::bracketed_root(g, lo, glo, hi, ghi, 1e-14, 0.0).root;
}

}  // namespace

FrontTrackedState make_state(double t, double s1, double s2, double x_max, const GridSpec& grid,
                             const std::function<double(double)>& u_of_x,
                             const std::function<double(double)>& v_of_x) {
    const int n = grid.n_liquid;
    const int m = grid.n_solid > 0 ? grid.n_solid : 4 * grid.n_liquid;
    if (n < 3 || m < 3) throw PreconditionError("make_state: need at least 3 cells per phase");
    if (!(s1 < s2 && s2 < x_max)) throw PreconditionError("make_state: requires s1 < s2 < x_max");
    FrontTrackedState s;
    s.t = t;
    s.s1 = s1;
    s.s2 = s2;
    s.x_max = x_max;
    s.dx0 = (s2 - s1) / n;
    s.beta = stretching(x_max - s2, m, s.dx0);
    s.u.resize(n + 1);
    s.v.resize(m + 1);
    s.solid_f.resize(m + 1);
    for (int j = 0; j <= m; ++j) s.solid_f[j] = s.solid_map(double(j) / m);
    for (int i = 0; i <= n; ++i) s.u[i] = u_of_x(s.liquid_x(i));
    for (int j = 0; j <= m; ++j) s.v[j] = v_of_x(s.solid_x(j));
    return s;
}

namespace {

// Node coordinates and diffusivities of one state, evaluated once per step.
struct Nodes {
    std::vector<double> xl, xs, dl, ds;

    Nodes(const FrontTrackedState& s, const TransformedBVP& bvp) {
        const int n = s.n_liquid(), m = s.n_solid();
        xl.resize(n + 1);
        dl.resize(n + 1);
        xs.resize(m + 1);
        ds.resize(m + 1);
        for (int i = 0; i <= n; ++i) {
            xl[i] = s.liquid_x(i);
            dl[i] = bvp.d1(s.u[i]);
        }
        for (int j = 0; j <= m; ++j) {
            xs[j] = s.solid_x(j);
            ds[j] = bvp.d2(s.v[j]);
        }
    }

    double stable(double cfl) const {
        double bound = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i + 1 < xl.size(); ++i) {
            const double dx = xl[i + 1] - xl[i];
            bound = std::min(bound, cfl * dx * dx / std::max(dl[i], dl[i + 1]));
        }
        for (std::size_t j = 0; j + 1 < xs.size(); ++j) {
            const double dx = xs[j + 1] - xs[j];
            bound = std::min(bound, cfl * dx * dx / std::max(ds[j], ds[j + 1]));
        }
        return bound;
    }
};

// (d w_x)_x at node i with face diffusivities averaged from the nodes.
double divergence(const std::vector<double>& x, const std::vector<double>& d, const std::vector<double>& w,
                  std::size_t i) {
    const double Fp = 0.5 * (d[i] + d[i + 1]) * (w[i + 1] - w[i]) / (x[i + 1] - x[i]);
    const double Fm = 0.5 * (d[i - 1] + d[i]) * (w[i] - w[i - 1]) / (x[i] - x[i - 1]);
    return (Fp - Fm) / (0.5 * (x[i + 1] - x[i - 1]));
}

}  // namespace

double stable_dt(const FrontTrackedState& s, const TransformedBVP& bvp, double cfl) {
    return Nodes(s, bvp).stable(cfl);
}

FrontTrackedState step(const FrontTrackedState& s, const TransformedBVP& bvp, double dt,
                       StepDiagnostics* diagnostics) {
    const Nodes nodes(s, bvp);
    const double limit = nodes.stable(0.4);
    if (!(dt > 0.0) || dt > limit * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "step: dt = " << dt << " exceeds the CFL bound " << limit;
        throw StepError(msg.str());
    }
    const int n = s.n_liquid(), m = s.n_solid();
    const Fronts f = front_velocities(s, bvp);

    if (diagnostics) {
        const double u0 = s.u[0];
        const double q = bvp.q(s.t, u0);
        const double evap = (bvp.H1(u0) + u0) * f.V1;
        const double latent = (bvp.u_m - bvp.v_m - bvp.H2) * f.V2;
        const double far = nodes.ds[m] * f.vx_far;
        diagnostics->V1 = f.V1;
        diagnostics->V2 = f.V2;
        diagnostics->energy_rate = q - evap + latent + far;
        diagnostics->absorbed = std::abs(q);
    }

    FrontTrackedState next = s;
    next.t = s.t + dt;
    next.s1 = s.s1 + dt * f.V1;
    next.s2 = s.s2 + dt * f.V2;
    if (!(next.s2 - next.s1 > 2.0 * s.dx0)) {
        std::ostringstream msg;
        msg << "step: liquid layer collapsed (s2 - s1 = " << next.s2 - next.s1 << ") at t = " << next.t;
        throw StepError(msg.str());
    }
    if (!(next.s2 < s.x_max)) throw StepError("step: melting front reached x_max");

    const auto& xl = nodes.xl;
    const auto& xs = nodes.xs;
    for (int i = 1; i < n; ++i) {
        const double node_speed = f.V1 + (double(i) / n) * (f.V2 - f.V1);
        const double ux = central_derivative(xl[i] - xl[i - 1], xl[i + 1] - xl[i], s.u[i - 1], s.u[i], s.u[i + 1]);
        next.u[i] = s.u[i] + dt * (divergence(xl, nodes.dl, s.u, i) + ux * node_speed);
    }
    for (int j = 1; j < m; ++j) {
        const double node_speed = f.V2 * (1.0 - s.solid_f[j]);
        const double vx = central_derivative(xs[j] - xs[j - 1], xs[j + 1] - xs[j], s.v[j - 1], s.v[j], s.v[j + 1]);
        next.v[j] = s.v[j] + dt * (divergence(xs, nodes.ds, s.v, j) + vx * node_speed);
    }
    next.u[n] = bvp.u_m;
    next.v[0] = bvp.v_m;
    next.v[m] = bvp.v_inf;
    next.u[0] = surface_node(next, bvp, s.u[0]);
    return next;
}

double total_enthalpy(const FrontTrackedState& s) {
    double e = 0.0;
    for (int i = 0; i < s.n_liquid(); ++i)
        e += 0.5 * (s.u[i] + s.u[i + 1]) * (s.liquid_x(i + 1) - s.liquid_x(i));
    for (int j = 0; j < s.n_solid(); ++j)
        e += 0.5 * (s.v[j] + s.v[j + 1]) * (s.solid_x(j + 1) - s.solid_x(j));
    return e;
}

Snapshot take_snapshot(const FrontTrackedState& s) {
    Snapshot snap;
    snap.t = s.t;
    snap.s1 = s.s1;
    snap.s2 = s.s2;
    for (int i = 0; i <= s.n_liquid(); ++i) {
        snap.x.push_back(s.liquid_x(i));
        snap.phase.push_back(Phase::liquid);
        snap.enthalpy.push_back(s.u[i]);
    }
    for (int j = 0; j <= s.n_solid(); ++j) {
        snap.x.push_back(s.solid_x(j));
        snap.phase.push_back(Phase::solid);
        snap.enthalpy.push_back(s.v[j]);
    }
    return snap;
}

namespace {

double bound_excursion(const FrontTrackedState& s, const TransformedBVP& bvp) {
    const double urange = bvp.u_cap - bvp.u_m;
    const double vlo = std::min(bvp.v_m, bvp.v_inf), vhi = std::max(bvp.v_m, bvp.v_inf);
    const double vrange = std::max(vhi - vlo, 1e-300);
    double worst = 0.0;
    for (double u : s.u) worst = std::max({worst, (bvp.u_m - u) / urange, (u - bvp.u_cap) / urange});
    for (double v : s.v) worst = std::max({worst, (vlo - v) / vrange, (v - vhi) / vrange});
    return worst;
}

// Least-squares slope of y against x.
double slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = double(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

constexpr int kWindow = 100;
constexpr int kRecordEvery = 10;

}  // namespace

RunResult run_oracle(FrontTrackedState state, const TransformedBVP& bvp, double t_end, const GridSpec& grid,
                     double snapshot_interval) {
    RunResult out;
    const double cfl = std::min(grid.cfl, 0.4);
    double next_snapshot = state.t;
    double window_start_e = total_enthalpy(state);
    double window_flow = 0.0, window_scale = 0.0;
    auto record = [&](const FrontTrackedState& s) {
        out.t.push_back(s.t);
        out.s1.push_back(s.s1);
        out.s2.push_back(s.s2);
    };
    record(state);
    if (snapshot_interval > 0.0) {
        out.snapshots.push_back(take_snapshot(state));
        next_snapshot += snapshot_interval;
    }
    out.bound_violation = std::max(0.0, bound_excursion(state, bvp));

    double base_dt = 0.0;
    while (state.t < t_end) {
        // The grid drifts slowly; refreshing the bound once per window is enough
        // with the 0.9 margin, and step() rejects anything beyond it.
        if (out.steps % kWindow == 0) base_dt = 0.9 * stable_dt(state, bvp, cfl);
        double dt = base_dt;
        if (out.steps == 0) out.dt = dt;
        bool last = false;
        if (state.t + dt >= t_end) {
            dt = t_end - state.t;
            last = true;
        }
        StepDiagnostics diag;
        state = step(state, bvp, dt, &diag);
        if (last) state.t = t_end;
        ++out.steps;
        window_flow += diag.energy_rate * dt;
        window_scale += diag.absorbed * dt;
        out.bound_violation = std::max(out.bound_violation, bound_excursion(state, bvp));

        if (out.steps % kWindow == 0 || last) {
            const double e = total_enthalpy(state);
            const double defect = std::abs((e - window_start_e) - window_flow);
            const double denom = std::max(window_scale, std::abs(window_flow));
            if (denom > 0.0) out.conservation_defect = std::max(out.conservation_defect, defect / denom);
            window_start_e = e;
            window_flow = window_scale = 0.0;
        }
        if (out.steps % kRecordEvery == 0 || last) record(state);
        if (snapshot_interval > 0.0 && (state.t >= next_snapshot || last)) {
            out.snapshots.push_back(take_snapshot(state));
            while (next_snapshot <= state.t) next_snapshot += snapshot_interval;
        }
    }
    out.final_state = std::move(state);
    return out;
}

// ---- validations ----

TravellingWaveReport validate_travelling_wave(const TransformedBVP& bvp, const TravellingWaveSolution& sol,
                                              double t_end, const GridSpec& grid, const MaterialSpec* spec) {
    if (bvp.time_law != TimeLaw::steady)
        throw PreconditionError("validate_travelling_wave: requires the steady time law");
    const double x_max = grid.x_max > 0.0 ? grid.x_max : sol.delta + 20.0 * std::sqrt(bvp.d2(bvp.v_inf) * t_end);
    FrontTrackedState state = make_state(
        0.0, 0.0, sol.delta, x_max, grid,
        [&](double x) { return profile_enthalpy(sol, std::min(x, sol.delta)).enthalpy; },
        [&](double x) { return x <= sol.delta ? bvp.v_m : profile_enthalpy(sol, x).enthalpy; });
    RunResult run = run_oracle(state, bvp, t_end, grid, grid.snapshot_interval);
    const FrontTrackedState& s = run.final_state;

    TravellingWaveReport rep;
    rep.n_liquid = s.n_liquid();
    rep.mu = sol.mu;
    rep.velocity_s1 = slope(run.t, run.s1);
    rep.velocity_s2 = slope(run.t, run.s2);
    rep.velocity_error = std::max(std::abs(rep.velocity_s1 - sol.mu), std::abs(rep.velocity_s2 - sol.mu)) / sol.mu;
    rep.thickness_drift = std::abs((s.s2 - s.s1) - sol.delta) / sol.delta;
    rep.conservation_defect = run.conservation_defect;
    rep.bound_violation = run.bound_violation;
    rep.steps = run.steps;
    rep.snapshots = std::move(run.snapshots);

    // Drift in the frame attached to the computed surface.
    double drift = 0.0;
    const auto compare = [&](double x, Phase phase, double w) {
        const double xi = std::max(x - s.s1, 0.0);
        if (spec) {
            const double T_num = kirchhoff_inverse(*spec, phase, w);
            const double T_exact = profile_physical(sol, *spec, xi);
            const double range = kirchhoff_inverse(*spec, Phase::liquid, sol.u_s) - spec->Tinf;
            drift = std::max(drift, std::abs(T_num - T_exact) / range);
        } else {
            const EnthalpyValue e = profile_enthalpy(sol, xi);
            const double range = phase == Phase::liquid ? sol.u_s - sol.u_m : std::abs(sol.Vm);
            if (e.phase == phase) drift = std::max(drift, std::abs(w - e.enthalpy) / range);
        }
    };
    for (int i = 0; i <= s.n_liquid(); ++i) compare(s.liquid_x(i), Phase::liquid, s.u[i]);
    for (int j = 0; j <= s.n_solid(); ++j) compare(s.solid_x(j), Phase::solid, s.v[j]);
    rep.profile_drift = drift;
    return rep;
}

SelfSimilarReport validate_self_similar(const TransformedBVP& bvp, const SelfSimilarSolution& sol, double t0,
                                        double t_end, const GridSpec& grid) {
    if (bvp.time_law != TimeLaw::inverse_sqrt)
        throw PreconditionError("validate_self_similar: requires the inverse-sqrt time law");
    if (!(t0 > 0.0 && t_end > t0)) throw PreconditionError("validate_self_similar: requires 0 < t0 < t_end");
    const double r0 = std::sqrt(t0);
    const double s1 = sol.omega1 * r0, s2 = sol.omega2 * r0;
    const double x_max = grid.x_max > 0.0 ? grid.x_max : s2 + 20.0 * std::sqrt(bvp.d2(bvp.v_inf) * t_end);
    FrontTrackedState state = make_state(
        t0, s1, s2, x_max, grid,
        [&](double x) { return sol.u_profile.value(std::clamp(x / r0, sol.omega1, sol.omega2)); },
        [&](double x) {
            const double w = std::max(x / r0, sol.omega2);
            return w >= sol.omega_max ? sol.v_inf : sol.v_profile.value(w);
        });
    RunResult run = run_oracle(state, bvp, t_end, grid, grid.snapshot_interval);

    SelfSimilarReport rep;
    rep.n_liquid = state.n_liquid();
    rep.omega1 = sol.omega1;
    rep.omega2 = sol.omega2;
    double a1 = 0, a2 = 0, b = 0;
    std::vector<double> lt, l1, l2;
    for (std::size_t i = 0; i < run.t.size(); ++i) {
        const double rt = std::sqrt(run.t[i]);
        a1 += run.s1[i] * rt;
        a2 += run.s2[i] * rt;
        b += run.t[i];
        lt.push_back(std::log(run.t[i]));
        l1.push_back(std::log(run.s1[i]));
        l2.push_back(std::log(run.s2[i]));
    }
    rep.omega1_fit = a1 / b;
    rep.omega2_fit = a2 / b;
    rep.omega1_error = std::abs(rep.omega1_fit - sol.omega1) / sol.omega1;
    rep.omega2_error = std::abs(rep.omega2_fit - sol.omega2) / sol.omega2;
    rep.exponent1 = slope(lt, l1);
    rep.exponent2 = slope(lt, l2);
    rep.conservation_defect = run.conservation_defect;
    rep.bound_violation = run.bound_violation;
    rep.steps = run.steps;
    rep.snapshots = std::move(run.snapshots);
    return rep;
}

}  // namespace stefanlie
