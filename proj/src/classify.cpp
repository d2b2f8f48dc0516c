#include "stefanlie/classify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "stefanlie/errors.hpp"
#include "stefanlie/numerics.hpp"

namespace stefanlie {

namespace {

constexpr int kJets = 12;
constexpr int kBoundarySamples = 16;
constexpr std::uint64_t kJetSeed = 20240611;

double normalised(double lhs, double rhs, double scale) {
    return scale > 0.0 ? (lhs - rhs) / scale : 0.0;
}

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

bool passes(const std::vector<InvarianceReport>& reports, const std::string& id) {
    for (const auto& r : reports)
        if (r.family == id) return r.pass;
    return false;
}

InvarianceReport start_report(const GroupAction& action) {
    InvarianceReport r;
    r.family = action.id();
    r.generator = action.generator();
    return r;
}

}  // namespace

// ---- rod ----

PdeSpec RodBvp::pde() const { return PdeSpec::nonlinear_heat(Diffusivity::power(k)); }

BoundaryCondition RodBvp::flux() const {
    BoundaryCondition c;
    c.name = "u^k u_x = q0 cos(gamma t) at x = 0";
    c.kind = ManifoldKind::fixed_curve;
    c.curve = [](double, double x) { return x; };
    const double k_ = k, g = gamma, q = q0;
    c.raw_residual = [=](const BoundarySample& s) {
        return std::pow(s.w[0], k_) * s.w_x[0] - q * std::cos(g * s.t);
    };
    c.residuals = [=](const BoundarySample& s) {
        const double lhs = std::pow(s.w[0], k_) * s.w_x[0];
        const double rhs = q * std::cos(g * s.t);
        return std::vector<double>{normalised(lhs, rhs, std::abs(lhs) + std::abs(rhs))};
    };
    c.sampler = [=](int n, double) {
        std::mt19937_64 rng(1000 + n);
        std::uniform_real_distribution<double> ut(0.5, 2.0), uu(0.5, 2.0);
        BoundarySample s;
        s.t = ut(rng);
        s.x = 0.0;
        s.w[0] = uu(rng);
        s.w_x[0] = q * std::cos(g * s.t) / std::pow(s.w[0], k_);
        return s;
    };
    return c;
}

BoundaryCondition RodBvp::far_field() const {
    BoundaryCondition c;
    c.name = "u = 0 at x = +inf";
    c.kind = ManifoldKind::infinity;
    c.residuals = [](const BoundarySample& s) { return std::vector<double>{s.w[0]}; };
    c.sampler = [](int, double x) {
        BoundarySample s;
        s.t = 1.0;
        s.x = x;
        return s;
    };
    return c;
}

std::vector<RodFamily> rod_catalog(double k) {
    using C = AffineComponent;
    std::vector<RodFamily> out;
    out.push_back({"T1", [](double) { return GroupAction::affine("T1", FamilyKind::translation, C{1, 0}, {}, {}); }});
    out.push_back({"T2", [](double) { return GroupAction::affine("T2", FamilyKind::translation, {}, C{1, 0}, {}); }});
    out.push_back({"T3", [](double) { return GroupAction::affine("T3", FamilyKind::scaling, C{0, 2}, C{0, 1}, {}); }});
    out.push_back({"T4", [](double kk) { return GroupAction::affine("T4", FamilyKind::scaling, {}, C{0, kk}, C{0, 2}); }});
    for (int l2 = -2; l2 <= 2; ++l2) {
        for (int l3 : {-2, -1, 1, 2}) {
            for (int l4 : {-2, -1, 1, 2}) {
                char id[48];
                std::snprintf(id, sizeof id, "Ta(%d,%d,%d)", l2, l3, l4);
                const std::string name = id;
                out.push_back({name, [=](double kk) {
                                   return GroupAction::affine(
                                       name, l2 != 0 ? FamilyKind::scaling_with_shift : FamilyKind::scaling,
                                       C{0, 2.0 * l3}, C{double(l2), l3 + kk * l4}, C{0, 2.0 * l4});
                               }});
            }
        }
    }
    out.push_back({"Tk", [](double kk) {
                       return GroupAction::affine("Tk", FamilyKind::scaling, C{0, kk + 2}, C{0, kk + 1}, C{0, 1});
                   }});
    if (std::abs(k + 4.0 / 3.0) < 1e-12) {
        out.push_back({"T5", [](double) { return GroupAction::conformal("T5", 3.0, 0.0); }});
    }
    return out;
}

InvarianceReport check_rod_family(const RodBvp& rod, const RodFamily& family) {
    const GroupAction action = family.make(rod.k);
    InvarianceReport report = start_report(action);
    const PdeSpec pde = rod.pde();
    report.items.push_back(check_pde_invariance(action, GroupAction::Component::u, pde,
                                                sample_pde_jets(pde, kJets, kJetSeed)));
    report.items.push_back(check_boundary_invariance(action, rod.flux(), kBoundarySamples));
    report.items.push_back(check_infinity_invariance(action, rod.far_field()));
    report.finalize();
    return report;
}

namespace {

// Signed flux residual of a family at one manifold point and eps = 0.1,
// as a function of (k, q0).
double flux_defect(const RodFamily& family, double k, double gamma, double q0) {
    const RodBvp rod{k, gamma, q0};
    const BoundaryCondition c = rod.flux();
    BoundarySample s;
    s.t = 1.3;
    s.w[0] = 1.1;
    s.w_x[0] = q0 * std::cos(gamma * s.t) / std::pow(s.w[0], k);
    return c.raw_residual(transform_sample(family.make(k), s, 0.1));
}

// Fits the flux defect against q0 and scans it over k; reports the
// parameter values at which it vanishes.
std::vector<std::string> discover_constraints(const RodFamily& family, const RodBvp& rod) {
    std::vector<std::string> found;
    const double Q = rod.q0 != 0.0 ? std::abs(rod.q0) : 1.0;
    const double r0 = flux_defect(family, rod.k, rod.gamma, 0.0);
    const double r1 = flux_defect(family, rod.k, rod.gamma, Q);
    const double r2 = flux_defect(family, rod.k, rod.gamma, 2.0 * Q);
    const double rm = flux_defect(family, rod.k, rod.gamma, -Q);
    const double size = std::abs(r1) + std::abs(r2);
    if (size > 1e-12 && std::abs(r0) <= 1e-12 * size && std::abs(r2 - 2.0 * r1) <= 1e-9 * size &&
        std::abs(rm + r1) <= 1e-9 * size) {
        found.push_back(family.id + ": flux defect linear in q0, invariant only if q0 = 0");
    }

    const auto defect_k = [&](double kk) { return flux_defect(family, kk, rod.gamma, Q); };
    std::vector<double> roots;
    double prev_k = -6.0, prev = defect_k(prev_k);
    for (int i = 1; i <= 48; ++i) {
        const double kk = -6.0 + 0.25 * i;
        if (kk == 0.0) continue;  // the rod law needs k != 0
        const double cur = defect_k(kk);
        if (cur == 0.0) {
            roots.push_back(kk);
        } else if (prev != 0.0 && std::signbit(prev) != std::signbit(cur)) {
            roots.push_back(numerics::bracketed_root(defect_k, prev_k, prev, kk, cur, 1e-12, 1e-14).root);
        }
        prev_k = kk;
        prev = cur;
    }
    if (!roots.empty() && roots.size() < 4) {
        std::string s = family.id + ": flux defect vanishes only at k =";
        for (double r : roots) s += fmt(" %.6g", r);
        found.push_back(s);
    }
    return found;
}

}  // namespace

RodClassification classify_rod_bvp(double k, double gamma, double q0) {
    if (k == 0.0) throw PreconditionError("classify_rod_bvp: requires k != 0");
    const RodBvp rod{k, gamma, q0};
    RodClassification out;
    const auto catalog = rod_catalog(k);
    for (const auto& family : catalog) {
        out.reports.push_back(check_rod_family(rod, family));
        auto& report = out.reports.back();
        if (report.pass) {
            out.passing.push_back(family.id);
        } else if (family.id == "T1" || family.id == "T3" || family.id == "T4") {
            const bool flux_failed = !report.items[1].pass;
            if (flux_failed && report.items[1].note.empty()) {
                report.constraints = discover_constraints(family, rod);
                out.constraints.insert(out.constraints.end(), report.constraints.begin(), report.constraints.end());
            }
        }
    }
    const bool t1 = passes(out.reports, "T1");
    const bool t3 = passes(out.reports, "T3");
    const bool t4 = passes(out.reports, "T4");
    const bool tk = passes(out.reports, "Tk");
    if (t1 && t3 && t4) out.row = 1;
    else if (t1 && tk) out.row = 2;
    else if (t4 && !t1) out.row = 3;
    else out.row = 0;
    return out;
}

// ---- Stefan class ----

StefanBoundaryData StefanBoundaryData::generic(std::function<double(double, double)> q,
                                               std::function<double(double, double)> h) {
    StefanBoundaryData d;
    d.d1 = Diffusivity::generic([](double u) { return 1.0 + 0.5 * u * u; }, [](double u) { return u; },
                                "1+u^2/2");
    d.d2 = Diffusivity::generic([](double v) { return 1.0 / (1.0 + v * v); },
                                [](double v) { return -2.0 * v / ((1.0 + v * v) * (1.0 + v * v)); },
                                "1/(1+v^2)");
    d.H1 = [](double u) { return 2.0 + 0.3 * u; };
    d.H2 = 1.5;
    d.q = std::move(q);
    d.h = std::move(h);
    return d;
}

BoundaryCondition surface_condition(const StefanBoundaryData& data) {
    BoundaryCondition c;
    c.name = "d1 u_x = H1 V1 - q, V1 = h at S1 = 0";
    c.kind = ManifoldKind::free_surface;
    c.residuals = [data](const BoundarySample& s) {
        const double u = s.w[0];
        const double flux = data.d1.d(u) * s.w_x[0];
        const double latent = data.H1(u) * s.V;
        const double q = data.q(s.t, u);
        const double h = data.h(s.t, u);
        return std::vector<double>{
            normalised(flux, latent - q, std::abs(flux) + std::abs(latent) + std::abs(q)),
            normalised(s.V, h, std::abs(s.V) + std::abs(h))};
    };
    c.sampler = [data](int n, double) {
        std::mt19937_64 rng(2000 + n);
        std::uniform_real_distribution<double> ut(0.75, 2.0), ux(0.1, 1.0), uu(data.u_lo, data.u_hi);
        BoundarySample s;
        s.t = ut(rng);
        s.x = ux(rng);
        s.w[0] = uu(rng);
        s.w[1] = data.v_m;
        s.V = data.h(s.t, s.w[0]);
        s.w_x[0] = (data.H1(s.w[0]) * s.V - data.q(s.t, s.w[0])) / data.d1.d(s.w[0]);
        return s;
    };
    return c;
}

BoundaryCondition melting_condition(const StefanBoundaryData& data) {
    BoundaryCondition c;
    c.name = "d2(v_m) v_x = d1(u_m) u_x + H2 V2, u = u_m, v = v_m at S2 = 0";
    c.kind = ManifoldKind::free_surface;
    const double scale = std::max({std::abs(data.u_m), std::abs(data.v_m), std::abs(data.v_m - data.v_inf)});
    c.residuals = [data, scale](const BoundarySample& s) {
        const double solid = data.d2.d(data.v_m) * s.w_x[1];
        const double liquid = data.d1.d(data.u_m) * s.w_x[0];
        const double latent = data.H2 * s.V;
        return std::vector<double>{
            normalised(solid, liquid + latent, std::abs(solid) + std::abs(liquid) + std::abs(latent)),
            (s.w[0] - data.u_m) / scale, (s.w[1] - data.v_m) / scale};
    };
    c.sampler = [data](int n, double) {
        std::mt19937_64 rng(3000 + n);
        std::uniform_real_distribution<double> ut(0.75, 2.0), ux(0.1, 1.0), ud(-1.0, 1.0), uV(0.1, 1.0);
        BoundarySample s;
        s.t = ut(rng);
        s.x = ux(rng);
        s.w = {data.u_m, data.v_m};
        s.w_x[0] = ud(rng);
        s.V = uV(rng);
        s.w_x[1] = (data.d1.d(data.u_m) * s.w_x[0] + data.H2 * s.V) / data.d2.d(data.v_m);
        return s;
    };
    return c;
}

BoundaryCondition far_field_condition(const StefanBoundaryData& data) {
    BoundaryCondition c;
    c.name = "v = v_inf at x = +inf";
    c.kind = ManifoldKind::infinity;
    const double scale = std::abs(data.v_m - data.v_inf);
    c.residuals = [data, scale](const BoundarySample& s) {
        return std::vector<double>{(s.w[1] - data.v_inf) / scale};
    };
    c.sampler = [data](int, double x) {
        BoundarySample s;
        s.t = 1.0;
        s.x = x;
        s.w = {data.u_m, data.v_inf};
        return s;
    };
    return c;
}

std::vector<GroupAction> stefan_catalog() {
    using C = AffineComponent;
    return {GroupAction::affine("Px", FamilyKind::translation, {}, C{1, 0}, {}),
            GroupAction::affine("Pt", FamilyKind::translation, C{1, 0}, {}, {}),
            GroupAction::affine("D", FamilyKind::scaling, C{0, 2}, C{0, 1}, {}),
            GroupAction::affine("D+Px", FamilyKind::scaling_with_shift, C{0, 2}, C{1, 1}, {})};
}

InvarianceReport check_stefan_family(const StefanBoundaryData& data, const GroupAction& action) {
    InvarianceReport report = start_report(action);
    const PdeSpec pu = PdeSpec::nonlinear_heat(data.d1);
    const PdeSpec pv = PdeSpec::nonlinear_heat(data.d2);
    report.items.push_back(check_pde_invariance(action, GroupAction::Component::u, pu,
                                                sample_pde_jets(pu, kJets, kJetSeed)));
    report.items.push_back(check_pde_invariance(action, GroupAction::Component::v, pv,
                                                sample_pde_jets(pv, kJets, kJetSeed + 1)));
    report.items.push_back(check_boundary_invariance(action, surface_condition(data), kBoundarySamples));
    report.items.push_back(check_boundary_invariance(action, melting_condition(data), kBoundarySamples));
    report.items.push_back(check_infinity_invariance(action, far_field_condition(data)));
    report.finalize();
    return report;
}

StefanClassification classify_stefan_bvp(const StefanBoundaryData& data) {
    StefanClassification out;
    for (const auto& action : stefan_catalog()) {
        out.reports.push_back(check_stefan_family(data, action));
        if (out.reports.back().pass) out.passing.push_back(action.id());
    }
    if (passes(out.reports, "D")) out.row = 3;
    else if (passes(out.reports, "Pt")) out.row = 2;
    else if (passes(out.reports, "Px")) out.row = 1;
    return out;
}

StefanClassification classify_stefan_bvp(std::function<double(double, double)> q,
                                         std::function<double(double, double)> h) {
    return classify_stefan_bvp(StefanBoundaryData::generic(std::move(q), std::move(h)));
}

// ---- decoupled equations ----

Table2Case table2_case(int id) {
    using C = AffineComponent;
    using Comp = GroupAction::Component;
    const Diffusivity g1 = Diffusivity::generic([](double u) { return 1.0 + 0.5 * u * u; },
                                                [](double u) { return u; }, "1+u^2/2");
    const Diffusivity g2 = Diffusivity::generic([](double v) { return 1.0 / (1.0 + v * v); },
                                                [](double v) { return -2.0 * v / ((1.0 + v * v) * (1.0 + v * v)); },
                                                "1/(1+v^2)");
    const double k1 = 0.7, k2 = 1.3, n = 0.5, m = 1.5;

    Table2Case tc;
    tc.id = id;
    tc.generators = {GroupAction::affine("d_t", FamilyKind::translation, C{1, 0}, {}, {}),
                     GroupAction::affine("d_x", FamilyKind::translation, {}, C{1, 0}, {}),
                     GroupAction::affine("2t d_t + x d_x", FamilyKind::scaling, C{0, 2}, C{0, 1}, {})};
    auto add = [&](GroupAction g) { tc.generators.push_back(std::move(g)); };
    switch (id) {
        case 1:
            tc.d1 = g1;
            tc.d2 = g2;
            break;
        case 2:
            tc.d1 = Diffusivity::constant(k1);
            tc.d2 = g2;
            add(GroupAction::affine("u d_u", FamilyKind::scaling, {}, {}, C{0, 1}));
            add(GroupAction::superposition("alpha d_u (kernel)", HeatSolution::kernel(k1), Comp::u));
            add(GroupAction::superposition("alpha d_u (quadratic)", HeatSolution::quadratic(k1), Comp::u));
            break;
        case 3:
            tc.d1 = g1;
            tc.d2 = Diffusivity::constant(k2);
            add(GroupAction::affine("v d_v", FamilyKind::scaling, {}, {}, {}, C{0, 1}));
            add(GroupAction::superposition("beta d_v (kernel)", HeatSolution::kernel(k2), Comp::v));
            add(GroupAction::superposition("beta d_v (quadratic)", HeatSolution::quadratic(k2), Comp::v));
            break;
        case 4:
            tc.d1 = Diffusivity::exponential();
            tc.d2 = Diffusivity::exponential();
            add(GroupAction::affine("x d_x + 2 d_u + 2 d_v", FamilyKind::scaling_with_shift, {}, C{0, 1}, C{2, 0}, C{2, 0}));
            break;
        case 5:
            tc.d1 = Diffusivity::exponential();
            tc.d2 = Diffusivity::power(m);
            add(GroupAction::affine("x d_x + 2 d_u + (2/m) v d_v", FamilyKind::scaling_with_shift, {}, C{0, 1},
                                    C{2, 0}, C{0, 2.0 / m}));
            break;
        case 6:
            tc.d1 = Diffusivity::power(n);
            tc.d2 = Diffusivity::exponential();
            add(GroupAction::affine("x d_x + (2/n) u d_u + 2 d_v", FamilyKind::scaling_with_shift, {}, C{0, 1},
                                    C{0, 2.0 / n}, C{2, 0}));
            break;
        case 7:
            tc.d1 = Diffusivity::power(n);
            tc.d2 = Diffusivity::power(m);
            add(GroupAction::affine("x d_x + (2/n) u d_u + (2/m) v d_v", FamilyKind::scaling, {}, C{0, 1},
                                    C{0, 2.0 / n}, C{0, 2.0 / m}));
            break;
        case 8:
            tc.d1 = Diffusivity::power(-4.0 / 3.0);
            tc.d2 = Diffusivity::power(-4.0 / 3.0);
            add(GroupAction::affine("x d_x - 3/2 u d_u - 3/2 v d_v", FamilyKind::scaling, {}, C{0, 1}, C{0, -1.5},
                                    C{0, -1.5}));
            add(GroupAction::conformal("x^2 d_x - 3xu d_u - 3xv d_v", 3.0, 3.0));
            break;
        default:
            throw PreconditionError("table2_case: case must be in 1..8");
    }
    return tc;
}

std::vector<InvarianceReport> verify_table2_generators(int case_id) {
    const Table2Case tc = table2_case(case_id);
    const PdeSpec pu = PdeSpec::nonlinear_heat(tc.d1);
    const PdeSpec pv = PdeSpec::nonlinear_heat(tc.d2);
    const auto ju = sample_pde_jets(pu, kJets, kJetSeed);
    const auto jv = sample_pde_jets(pv, kJets, kJetSeed + 1);
    std::vector<InvarianceReport> out;
    for (const auto& g : tc.generators) {
        InvarianceReport r = start_report(g);
        r.items.push_back(check_pde_invariance(g, GroupAction::Component::u, pu, ju));
        r.items.push_back(check_pde_invariance(g, GroupAction::Component::v, pv, jv));
        r.finalize();
        out.push_back(std::move(r));
    }
    return out;
}

// ---- equivalence transformations ----

TransformedBVP equivalence_transform(const TransformedBVP& bvp, const EquivalenceParams& p) {
    if (!(p.e0 > 0.0 && p.e1 > 0.0 && p.e2 > 0.0 && p.e2 == p.e3)) {
        throw PreconditionError("equivalence_transform: the class is preserved only for e0 > 0, e1 > 0, e2 = e3 > 0");
    }
    if (bvp.time_law == TimeLaw::inverse_sqrt && p.t0 != 0.0) {
        throw PreconditionError("equivalence_transform: a time shift leaves the q(u)/sqrt(t) class");
    }
    const double diff = p.e1 * p.e1 / p.e0;
    const double time = bvp.time_law == TimeLaw::steady ? p.e0 : std::sqrt(p.e0);
    const double qf = p.e1 * p.e2 / time;
    const double hf = p.e1 / time;
    const auto back_u = [e2 = p.e2, u0 = p.u0](double u) { return (u - u0) / e2; };
    const auto back_v = [e3 = p.e3, v0 = p.v0](double v) { return (v - v0) / e3; };

    TransformedBVP out;
    out.d1 = [d = bvp.d1, diff, back_u](double u) { return diff * d(back_u(u)); };
    out.d2 = [d = bvp.d2, diff, back_v](double v) { return diff * d(back_v(v)); };
    out.q_of_u = [q = bvp.q_of_u, qf, back_u](double u) { return qf * q(back_u(u)); };
    out.h_of_u = [h = bvp.h_of_u, hf, back_u](double u) { return hf * h(back_u(u)); };
    out.H1 = [H = bvp.H1, e2 = p.e2, back_u](double u) { return e2 * H(back_u(u)); };
    out.H2 = p.e2 * bvp.H2;
    out.u_m = p.e2 * bvp.u_m + p.u0;
    out.v_m = p.e3 * bvp.v_m + p.v0;
    out.v_inf = p.e3 * bvp.v_inf + p.v0;
    out.u_cap = p.e2 * bvp.u_cap + p.u0;
    out.time_law = bvp.time_law;
    if (bvp.d1_constant) out.d1_constant = diff * *bvp.d1_constant;
    if (bvp.d2_constant) out.d2_constant = diff * *bvp.d2_constant;
    return out;
}

}  // namespace stefanlie
