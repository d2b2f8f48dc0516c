// One line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "stefanlie/classify.hpp"
#include "stefanlie/cli.hpp"
#include "stefanlie/fd_oracle.hpp"
#include "stefanlie/group_action.hpp"
#include "stefanlie/invariance.hpp"
#include "stefanlie/material.hpp"
#include "stefanlie/self_similar.hpp"
#include "stefanlie/travelling_wave.hpp"

using namespace stefanlie;
namespace fs = std::filesystem;

namespace {

// pinned tolerances
constexpr double kReferenceTol = 0.15;
constexpr double kBoundaryTol = 1e-9;
constexpr double kInteriorTol = 1e-6;
constexpr double kClosedFormTol = 1e-9;
constexpr double kFdVelocityTol = 0.02;
constexpr double kNeumannTol = 1e-6;
constexpr double kFdOmegaTol = 0.03;
constexpr double kGroupTol = 1e-12;
constexpr double kKirchhoffTol = 1e-10;
constexpr double kProlongTol = 1e-7;

struct Verdict {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
};

std::string fmt(const char* f, double a) {
    char buf[96];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

struct Wave {
    MaterialSpec spec;
    TransformedBVP bvp;
    TravellingWaveSolution sol;
    explicit Wave(double q0) {
        spec = MaterialSpec::aluminium();
        spec.q0 = q0;
        bvp = build_transformed_bvp(spec, TimeLaw::steady);
        sol = solve_travelling_wave(bvp);
    }
};

Verdict reference_case(double q0, double mu_ref, double delta_ref) {
    const Wave w(q0);
    Verdict v;
    v.detail = "mu = " + fmt("%.4f", w.sol.mu) + " m/s, delta = " + fmt("%.4e", w.sol.delta) + " m";
    v.require(rel(w.sol.mu, mu_ref) <= kReferenceTol, "mu off by " + fmt("%.1f%%", 100 * rel(w.sol.mu, mu_ref)));
    v.require(rel(w.sol.delta, delta_ref) <= kReferenceTol,
              "delta off by " + fmt("%.1f%%", 100 * rel(w.sol.delta, delta_ref)));
    return v;
}

// Explicit aluminium temperatures written from the constants alone.
double closed_form_T(const MaterialSpec& m, double mu, double u_s, double delta, double xi) {
    const double rc1 = m.rho * m.c1;
    const double K = (m.Tm - m.Tinf) * m.rho * m.solid_heat(0.5 * (m.Tm + m.Tinf)) + m.rho * m.Lm;
    if (xi <= delta) return m.Tm + ((K + u_s - rc1 * m.Tm) * std::exp(-mu * rc1 / m.lambda1 * xi) - K) / rc1;
    const double E = std::exp(-mu * m.rho * m.solid_heat(m.Tinf) / m.lambda2 * (xi - delta));
    const double mid = m.solid_heat(0.5 * (m.Tm + m.Tinf));
    return (m.Tinf * mid + (m.Tm - m.Tinf) * m.solid_heat(0.5 * m.Tinf) * E) / (mid - 0.5 * m.c2_b * (m.Tm - m.Tinf) * E);
}

Verdict residual_suite() {
    Verdict v;
    double worst_bc = 0.0, worst_int = 0.0, worst_cf = 0.0;
    for (double q0 : {1e10, 5e10}) {
        const Wave w(q0);
        const auto& s = w.sol;
        const auto& b = w.bvp;
        // boundaries, from the analytic eta-derivatives of the profiles
        const double U0 = s.u_s - s.u_m;
        const double dU0 = -s.mu * U0 * std::exp(s.mu * s.delta_star) / std::expm1(s.mu * s.delta_star);
        const double dUd = -s.mu * U0 / std::expm1(s.mu * s.delta_star);
        const double dVd = -s.mu * s.Vm;
        const double qs = b.q_of_u(s.u_s);
        worst_bc = std::max(worst_bc, std::abs(dU0 - (b.H1(s.u_s) * s.mu - qs)) / qs);
        worst_bc = std::max(worst_bc, std::abs(dUd - dVd + b.H2 * s.mu) / (b.H2 * s.mu));
        worst_bc = std::max(worst_bc, rel(profile_enthalpy(s, s.delta).enthalpy, b.u_m));
        worst_bc = std::max(worst_bc, rel(s.mu, b.h_of_u(s.u_s)));
        worst_bc = std::max(worst_bc, s.residual);

        // interior: U'' + mu U' = 0 by 4th-order differences
        const int n = 1000;
        const double h = (s.delta_star + 10.0 / s.mu) / n;
        const double scale = std::max(U0, std::abs(s.Vm)) * s.mu * s.mu;
        const auto f = [&](double x) { return profile_transformed(s, x).value; };
        for (int i = 2; i <= n - 2; ++i) {
            const double e = i * h;
            if (std::abs(e - s.delta_star) < 2.5 * h) continue;
            const double d1 = (-f(e + 2 * h) + 8 * f(e + h) - 8 * f(e - h) + f(e - 2 * h)) / (12 * h);
            const double d2 =
                (-f(e + 2 * h) + 16 * f(e + h) - 30 * f(e) + 16 * f(e - h) - f(e - 2 * h)) / (12 * h * h);
            worst_int = std::max(worst_int, std::abs(d2 + s.mu * d1) / scale);
        }

        for (int i = 0; i < 50; ++i) {
            const double xi = 5.0 * s.delta * i / 49.0;
            worst_cf = std::max(worst_cf, rel(profile_physical(s, w.spec, xi),
                                              closed_form_T(w.spec, s.mu, s.u_s, s.delta, xi)));
        }
    }
    v.detail = "boundary " + fmt("%.2e", worst_bc) + ", interior " + fmt("%.2e", worst_int) + ", closed form " +
               fmt("%.2e", worst_cf);
    v.require(worst_bc <= kBoundaryTol, "boundary residual");
    v.require(worst_int <= kInteriorTol, "interior residual");
    v.require(worst_cf <= kClosedFormTol, "closed-form mismatch");
    return v;
}

Verdict fd_cross_validation() {
    const Wave w(1e10);
    const double t_end = 10.0 * w.sol.delta / w.sol.mu;
    Verdict v;
    std::vector<double> errors;
    for (int n : {20, 40, 80}) {
        GridSpec g;
        g.n_liquid = n;
        const auto r = validate_travelling_wave(w.bvp, w.sol, t_end, g, &w.spec);
        errors.push_back(r.velocity_error);
        v.detail += (v.detail.empty() ? "" : ", ") + ("N=" + std::to_string(n) + ": " + fmt("%.2e", r.velocity_error));
    }
    v.require(errors.back() <= kFdVelocityTol, "finest-grid velocity error");
    v.require(errors[1] < errors[0] && errors[2] < errors[1], "convergence not monotone");
    return v;
}

const InvarianceReport* find(const RodClassification& c, const std::string& id) {
    for (const auto& r : c.reports)
        if (r.family == id) return &r;
    return nullptr;
}

Verdict rod_table() {
    struct Row {
        double k, gamma, q0;
        int row;
    };
    const Row rows[] = {{1, 0, 0, 1},  {-4.0 / 3.0, 0, 0, 1}, {-2, 1, 0, 1},     {2, 3, 0, 1},
                        {1, 0, 1, 2},  {-4.0 / 3.0, 0, 1, 2}, {-1, 0, 2, 2},     {-2, 0, 1, 2},
                        {-2, 1, 1, 3}, {-2, 2.5, -0.5, 3},    {1, 1, 1, 0},      {-4.0 / 3.0, 1, 1, 0}};
    Verdict v;
    int matched = 0;
    for (const auto& r : rows) {
        const RodClassification c = classify_rod_bvp(r.k, r.gamma, r.q0);
        const std::string tag = "(k=" + fmt("%g", r.k) + ", gamma=" + fmt("%g", r.gamma) + ", q0=" + fmt("%g", r.q0) + ")";
        bool ok = c.row == r.row;
        const auto* t2 = find(c, "T2");
        ok = ok && t2 && !t2->pass;
        if (r.q0 != 0.0) {
            const auto* t3 = find(c, "T3");
            ok = ok && t3 && !t3->pass;
        }
        if (std::abs(r.k + 4.0 / 3.0) < 1e-12) {
            const auto* t5 = find(c, "T5");
            ok = ok && t5 && !t5->pass;
        }
        v.require(ok, tag + " got row " + std::to_string(c.row));
        matched += ok;
    }
    v.detail = std::to_string(matched) + "/12 configurations" + (v.detail.empty() ? "" : ": " + v.detail);
    return v;
}

Verdict stefan_table() {
    using F = std::function<double(double, double)>;
    const F steady_h = [](double, double u) { return 0.1 * u * u; };
    struct Case {
        const char* name;
        F q, h;
        int row;
    };
    const std::vector<Case> cases{
        {"steady", [](double, double u) { return 1.0 + u; }, steady_h, 2},
        {"inverse-sqrt", [](double t, double u) { return (1.0 + u) / std::sqrt(t); },
         [](double t, double u) { return 0.1 * u * u / std::sqrt(t); }, 3},
        {"explicit-time", [](double t, double u) { return (1.0 + u) * std::exp(-t); }, steady_h, 1},
        {"linear-in-t", [](double t, double u) { return (1.0 + u) * t; }, steady_h, 1},
        {"mixed-laws", [](double t, double u) { return (1.0 + u) / std::sqrt(t); }, steady_h, 1}};
    Verdict v;
    int matched = 0;
    for (const auto& c : cases) {
        const int row = classify_stefan_bvp(c.q, c.h).row;
        v.require(row == c.row, std::string(c.name) + " got row " + std::to_string(row));
        matched += row == c.row;
    }
    v.detail = std::to_string(matched) + "/5 forms" + (v.detail.empty() ? "" : ": " + v.detail);
    return v;
}

Verdict generator_table() {
    Verdict v;
    int total = 0, passed = 0;
    double worst = 0.0;
    for (int id = 1; id <= 8; ++id) {
        for (const auto& r : verify_table2_generators(id)) {
            ++total;
            passed += r.pass;
            for (const auto& item : r.items) worst = std::max(worst, item.max_residual);
            v.require(r.pass, "case " + std::to_string(id) + ": " + r.generator);
        }
    }
    v.detail = std::to_string(passed) + "/" + std::to_string(total) + " generators, max residual " +
               fmt("%.2e", worst) + (v.detail.empty() ? "" : "; " + v.detail);
    return v;
}

Verdict self_similar_oracles() {
    Verdict v;
    // constant diffusivities, fixed surface (h = 0), flux Q / sqrt(t)
    TransformedBVP n;
    const double Q = 1.0, d1 = 1.0, d2 = 0.5;
    n.d1 = [=](double) { return d1; };
    n.d2 = [=](double) { return d2; };
    n.d1_constant = d1;
    n.d2_constant = d2;
    n.q_of_u = [=](double) { return Q; };
    n.h_of_u = [](double) { return 0.0; };
    n.H1 = [](double) { return 0.0; };
    n.H2 = 0.3;
    n.u_m = 1.0;
    n.v_m = 0.5;
    n.v_inf = 0.1;
    n.u_cap = 10.0;
    n.time_law = TimeLaw::inverse_sqrt;
    const double sp = std::sqrt(std::numbers::pi);
    const auto front = [&](double w) {
        const double l1 = w / (2 * std::sqrt(d1)), l2 = w / (2 * std::sqrt(d2));
        return Q * std::exp(-l1 * l1) - n.Vm() * std::sqrt(d2) * std::exp(-l2 * l2) / (sp * std::erfc(l2)) -
               0.5 * n.H2 * w;
    };
    double lo = 0.0, hi = 1.0;
    while (front(hi) > 0.0) hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (front(mid) > 0.0 ? lo : hi) = mid;
    }
    const double exact = 0.5 * (lo + hi);
    const double shot = solve_self_similar(n).omega2;
    v.require(std::abs(shot - exact) <= kNeumannTol, "classical root " + fmt("%.3e", std::abs(shot - exact)));

    const TransformedBVP al = build_transformed_bvp(MaterialSpec::aluminium(), TimeLaw::inverse_sqrt);
    const SelfSimilarSolution sol = solve_self_similar(al);
    GridSpec g;
    g.n_liquid = 16;
    const auto r = validate_self_similar(al, sol, 1e-3, 3e-3, g);
    v.require(r.omega2_error <= kFdOmegaTol, "fd omega2");
    v.detail = "classical root " + fmt("%.2e", std::abs(shot - exact)) + ", fd omega2 " + fmt("%.2e", r.omega2_error) +
               (v.detail.empty() ? "" : "; " + v.detail);
    return v;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Verdict properties() {
    Verdict v;
    using C = AffineComponent;
    const std::vector<GroupAction> actions{
        GroupAction::affine("shift", FamilyKind::translation, C{1, 0}, C{0.5, 0}, {}),
        GroupAction::affine("dil", FamilyKind::scaling, C{0, 2}, C{0, 1}, C{0, -0.7}, C{0, 1.3}),
        GroupAction::affine("mixed", FamilyKind::scaling_with_shift, C{0, 2}, C{1, 1}, C{2, 0}),
        GroupAction::conformal("conf", 3.0, 1.5),
        GroupAction::superposition("sup", HeatSolution::kernel(0.8), GroupAction::Component::u)};

    // group law and identity
    double group = 0.0;
    const Point p{1.2, 0.4, 1.7, 0.9, 0.3, -0.2};
    const auto dist = [](const Point& a, const Point& b) {
        return std::max({std::abs(a.t - b.t) / (1 + std::abs(b.t)), std::abs(a.x - b.x) / (1 + std::abs(b.x)),
                         std::abs(a.u - b.u) / (1 + std::abs(b.u)), std::abs(a.v - b.v) / (1 + std::abs(b.v)),
                         std::abs(a.S1 - b.S1), std::abs(a.S2 - b.S2)});
    };
    for (const auto& g : actions) {
        group = std::max(group, dist(g.apply(p, 0.0), p));
        for (double a : {-0.3, 0.1, 0.25})
            for (double b : {-0.2, 0.15}) group = std::max(group, dist(g.apply(g.apply(p, a), b), g.apply(p, a + b)));
    }
    v.require(group <= kGroupTol, "group law");

    // Kirchhoff round trips
    const MaterialSpec m = MaterialSpec::aluminium();
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> T(m.Tinf, m.temperature_cap());
    double kirch = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double t = T(rng);
        for (Phase ph : {Phase::liquid, Phase::solid})
            kirch = std::max(kirch, rel(kirchhoff_inverse(m, ph, kirchhoff_forward(m, ph, t)), t));
    }
    v.require(kirch <= kKirchhoffTol, "Kirchhoff round trip");

    // prolongation against Richardson-extrapolated differences of the image graph
    const auto w = [](double t, double x) { return std::exp(-t) * std::sin(x) + x * x * t; };
    const double t0 = 1.1, x0 = 0.6;
    const Jet jet{t0, x0, w(t0, x0), -std::exp(-t0) * std::sin(x0) + x0 * x0,
                  std::exp(-t0) * std::cos(x0) + 2 * x0 * t0, -std::exp(-t0) * std::sin(x0) + 2 * t0};
    double prolong = 0.0;
    for (const auto& g : actions) {
        for (double eps : {-0.2, 0.3}) {
            const Jet img = g.prolong(jet, GroupAction::Component::u, eps, 2);
            const auto ws = [&](double ts, double xs) {
                const BaseMap inv = g.base(ts, xs, -eps);
                const DependentMap dm = g.dependent(GroupAction::Component::u, inv.t, inv.x, eps);
                return dm.A * w(inv.t, inv.x) + dm.B;
            };
            const auto dt = [&](double h) { return (ws(img.t + h, img.x) - ws(img.t - h, img.x)) / (2 * h); };
            const auto dx = [&](double h) { return (ws(img.t, img.x + h) - ws(img.t, img.x - h)) / (2 * h); };
            const auto dxx = [&](double h) {
                return (ws(img.t, img.x + h) - 2 * ws(img.t, img.x) + ws(img.t, img.x - h)) / (h * h);
            };
            const double h = 2e-3;
            const auto rich = [h](const auto& f) { return (4 * f(0.5 * h) - f(h)) / 3; };
            prolong = std::max({prolong, std::abs(rich(dt) - img.w_t) / (1 + std::abs(img.w_t)),
                                std::abs(rich(dx) - img.w_x) / (1 + std::abs(img.w_x)),
                                std::abs(rich(dxx) - img.w_xx) / (1 + std::abs(img.w_xx))});
        }
    }
    v.require(prolong <= kProlongTol, "prolongation");

    // h increasing on the aluminium range
    bool monotone = true;
    try {
        check_h_increasing(build_transformed_bvp(m, TimeLaw::steady));
    } catch (const Error&) {
        monotone = false;
    }
    v.require(monotone, "h not increasing");

    // byte-identical reruns of the CLI and of an oracle run
    const fs::path root = fs::temp_directory_path() / "stefanlie_acceptance";
    fs::remove_all(root);
    std::ostringstream sink;
    bool same = true;
    for (const char* cmd : {"solve-tw", "solve-ss"}) {
        for (const char* run : {"a", "b"}) {
            cli::RunConfig c;
            c.command = cmd;
            c.out_dir = root / run;
            same = same && cli::run(c, sink, sink) == cli::ok;
        }
    }
    for (const char* f : {"tw_profile.csv", "tw_summary.csv", "ss_profile.csv", "ss_summary.csv"})
        same = same && !slurp(root / "a" / f).empty() && slurp(root / "a" / f) == slurp(root / "b" / f);
    fs::remove_all(root);
    const Wave wave(1e10);
    GridSpec g;
    g.n_liquid = 10;
    const double t_end = 3.0 * wave.sol.delta / wave.sol.mu;
    const auto r1 = validate_travelling_wave(wave.bvp, wave.sol, t_end, g);
    const auto r2 = validate_travelling_wave(wave.bvp, wave.sol, t_end, g);
    same = same && r1.steps == r2.steps && r1.velocity_s1 == r2.velocity_s1 && r1.profile_drift == r2.profile_drift;
    v.require(same, "reruns differ");

    v.detail = "group " + fmt("%.1e", group) + ", Kirchhoff " + fmt("%.1e", kirch) + ", prolongation " +
               fmt("%.1e", prolong) + (v.detail.empty() ? "" : "; " + v.detail);
    return v;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        double budget_s;
        std::function<Verdict()> check;
    };
    const std::vector<Criterion> criteria{
        {1, "aluminium wave, q0 = 1e10", 1.0, [] { return reference_case(1e10, 0.10, 9.60e-4); }},
        {2, "aluminium wave, q0 = 5e10", 1.0, [] { return reference_case(5e10, 0.54, 2.23e-4); }},
        {3, "exact-solution residuals", 1.0, residual_suite},
        {4, "FD cross-validation", 60.0, fd_cross_validation},
        {5, "rod truth table", 10.0, rod_table},
        {6, "Stefan class truth table", 10.0, stefan_table},
        {7, "decoupled-equation generators", 10.0, generator_table},
        {8, "self-similar oracles", 60.0, self_similar_oracles},
        {9, "property suites", 30.0, properties},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.check();
        } catch (const std::exception& e) {
            v.pass = false;
            v.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (secs > c.budget_s) {
            v.pass = false;
            v.detail += "; over time budget";
        }
        failures += !v.pass;
        std::printf("criterion %d %s: %s (%s) [%.2f s / %.0f s]\n", c.id, c.name, v.pass ? "PASS" : "FAIL",
                    v.detail.c_str(), secs, c.budget_s);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
