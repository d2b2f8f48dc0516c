#include "stefanlie/travelling_wave.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <vector>

#include "stefanlie/errors.hpp"

namespace stefanlie {

// -------------------------------------------------------------
// Coordinate maps
// -------------------------------------------------------------

namespace {

constexpr int kTableNodes = 2048;
// The solid table stops where V has decayed by e^-40; beyond it xi grows
// linearly with slope d2(v_inf).
constexpr double kSolidDecay = 40.0;

// xi(eta) = xi0 + integral_{eta0}^{eta} rate, tabulated on [eta0, eta1] with a
// linear tail of slope rate(eta1) beyond. The inverse starts from a monotone
// cubic fit of the table and is polished by Newton on the exact integral.
class CumulativeMap {
public:
    CumulativeMap() = default;
    CumulativeMap(std::function<double(double)> rate, double eta0, double eta1, double xi0,
                  std::optional<double> constant_rate)
        : rate_(std::move(rate)), eta0_(eta0), eta1_(eta1), xi0_(xi0), constant_(constant_rate) {
        if (constant_) return;
        eta_.resize(kTableNodes);
        xi_.resize(kTableNodes);
        const double h = (eta1_ - eta0_) / (kTableNodes - 1);
        eta_[0] = eta0_;
        xi_[0] = xi0_;
        for (int i = 1; i < kTableNodes; ++i) {
            eta_[i] = i + 1 == kTableNodes ? eta1_ : eta0_ + i * h;
            xi_[i] = xi_[i - 1] + numerics::adaptive_simpson(rate_, eta_[i - 1], eta_[i], 1e-14);
        }
        tail_rate_ = rate_(eta1_);
        inverse_ = numerics::MonotoneCubic(xi_, eta_);
    }

    double xi(double eta) const {
        if (constant_) return xi0_ + *constant_ * (eta - eta0_);
        if (eta >= eta1_) return xi_.back() + tail_rate_ * (eta - eta1_);
        const double h = (eta1_ - eta0_) / (kTableNodes - 1);
        auto i = static_cast<std::size_t>(std::floor((eta - eta0_) / h));
        i = std::min<std::size_t>(i, kTableNodes - 2);
        return xi_[i] + numerics::adaptive_simpson(rate_, eta_[i], eta, 1e-14);
    }

    double eta(double xi) const {
        if (constant_) return eta0_ + (xi - xi0_) / *constant_;
        if (xi >= xi_.back()) return eta1_ + (xi - xi_.back()) / tail_rate_;
        double e = inverse_(xi);
        for (int it = 0; it < 4; ++it) {
            const double step = (this->xi(e) - xi) / rate_(e);
            e -= step;
            if (std::abs(step) <= 1e-15 * std::max(std::abs(e), eta1_ - eta0_)) break;
        }
        return std::clamp(e, eta0_, eta1_);
    }

private:
    std::function<double(double)> rate_;
    double eta0_ = 0.0, eta1_ = 0.0, xi0_ = 0.0;
    std::optional<double> constant_;
    std::vector<double> eta_, xi_;
    double tail_rate_ = 0.0;
    numerics::MonotoneCubic inverse_;
};

double liquid_offset(const TravellingWaveSolution& s, double eta) {
    return (s.u_s - s.u_m) * std::expm1(s.mu * (s.delta_star - eta)) / std::expm1(s.mu * s.delta_star);
}

double solid_offset(const TravellingWaveSolution& s, double eta) {
    return s.Vm * std::exp(s.mu * (s.delta_star - eta));
}

}  // namespace

class WaveCoordinates {
public:
    CumulativeMap liquid;
    CumulativeMap solid;
    double delta_star = 0.0;
    double delta = 0.0;
};

// -------------------------------------------------------------
// Velocity equation
// -------------------------------------------------------------

double velocity_residual(const TransformedBVP& bvp, double u_s) {
    if (!(u_s > bvp.u_m && u_s <= bvp.u_cap * (1.0 + 1e-12))) {
        std::ostringstream msg;
        msg << "velocity_residual: surface enthalpy " << u_s << " outside (u_m, u_cap] = ("
            << bvp.u_m << ", " << bvp.u_cap << "]";
        throw DomainError(msg.str());
    }
    const double h = bvp.h_of_u(u_s);
    if (h == 0.0) throw SingularResidualError("velocity_residual: h(u_s) = 0");
    return bvp.q_of_u(u_s) / h - bvp.H1(u_s) - u_s - (bvp.Vm() - bvp.u_m + bvp.H2);
}

namespace {

double residual_scale(const TransformedBVP& bvp, double u_s) {
    return std::abs(bvp.q_of_u(u_s) / bvp.h_of_u(u_s)) + std::abs(bvp.H1(u_s)) + std::abs(u_s) +
           std::abs(bvp.Vm() - bvp.u_m + bvp.H2);
}

}  // namespace

TravellingWaveSolution solve_travelling_wave(const TransformedBVP& bvp) {
    if (bvp.time_law != TimeLaw::steady) {
        throw PreconditionError("solve_travelling_wave: requires q = q(u), h = h(u) (steady time law)");
    }
    check_h_increasing(bvp);

    const double span = bvp.u_cap - bvp.u_m;
    const double min_offset = 1e-6 * (bvp.u_m != 0.0 ? std::abs(bvp.u_m) : span);
    if (!(span > min_offset)) throw DomainError("solve_travelling_wave: empty bracket (u_m, u_cap]");

    constexpr int kSamples = 64;
    std::vector<double> us(kSamples), rs(kSamples);
    for (int i = 0; i < kSamples; ++i) {
        const double offset = min_offset * std::pow(span / min_offset, double(i) / (kSamples - 1));
        us[i] = i + 1 == kSamples ? bvp.u_cap : bvp.u_m + offset;
        rs[i] = velocity_residual(bvp, us[i]);
    }

    int changes = 0;
    int first = -1;
    for (int i = 0; i + 1 < kSamples; ++i) {
        if (rs[i] == 0.0 || std::signbit(rs[i]) != std::signbit(rs[i + 1])) {
            if (rs[i] == 0.0 && i > 0 && rs[i - 1] != 0.0 &&
                std::signbit(rs[i - 1]) != std::signbit(rs[i + 1]))
                continue;  // already counted through the left neighbour
            ++changes;
            if (first < 0) first = i;
        }
    }
    if (first < 0) {
        std::ostringstream msg;
        msg << "no travelling wave: velocity residual keeps its sign on (u_m, u_cap] (residual "
            << rs.front() << " at u_m+, " << rs.back() << " at u_cap)";
        throw NoTravellingWaveError(msg.str(), rs.front(), rs.back());
    }

    const auto f = [&](double u) { return velocity_residual(bvp, u); };
    const auto root = numerics::bracketed_root(f, us[first], rs[first], us[first + 1],
                                               rs[first + 1], 2.5e-13, 0.0);

    TravellingWaveSolution sol;
    sol.u_s = root.root;
    sol.mu = bvp.h_of_u(sol.u_s);
    if (!(sol.mu > 0.0)) throw NoTravellingWaveError("travelling wave has non-positive velocity", rs.front(), rs.back());
    sol.sign_changes = changes;
    sol.residual = std::abs(velocity_residual(bvp, sol.u_s)) / residual_scale(bvp, sol.u_s);
    sol.u_m = bvp.u_m;
    sol.v_inf = bvp.v_inf;
    sol.Vm = bvp.Vm();
    sol.K = bvp.Vm() + bvp.H2;
    if (!(sol.K > 0.0)) throw DomainError("solve_travelling_wave: v_m - v_inf + H2 must be positive");

    const double U0 = sol.u_s - sol.u_m;
    sol.delta_star = std::log1p(U0 / sol.K) / sol.mu;
    const double decay = std::exp(-sol.mu * sol.delta_star);
    sol.C1 = U0 * decay / (decay - 1.0);
    sol.C2 = U0 / (1.0 - decay);
    sol.C3 = 0.0;
    sol.C4 = sol.Vm * std::exp(sol.mu * sol.delta_star);

    auto coords = std::make_shared<WaveCoordinates>();
    coords->delta_star = sol.delta_star;
    const TravellingWaveSolution snapshot = sol;
    coords->liquid = CumulativeMap(
        [d1 = bvp.d1, snapshot](double eta) { return d1(liquid_offset(snapshot, eta) + snapshot.u_m); },
        0.0, sol.delta_star, 0.0, bvp.d1_constant);
    sol.delta = coords->liquid.xi(sol.delta_star);
    coords->delta = sol.delta;
    coords->solid = CumulativeMap(
        [d2 = bvp.d2, snapshot](double eta) { return d2(solid_offset(snapshot, eta) + snapshot.v_inf); },
        sol.delta_star, sol.delta_star + kSolidDecay / sol.mu, sol.delta, bvp.d2_constant);
    sol.coordinates = std::move(coords);
    return sol;
}

// -------------------------------------------------------------
// Profiles
// -------------------------------------------------------------

TransformedValue profile_transformed(const TravellingWaveSolution& sol, double eta) {
    if (!(eta >= 0.0)) throw DomainError("profile_transformed: eta must be non-negative");
    if (eta <= sol.delta_star) return {Phase::liquid, liquid_offset(sol, eta)};
    return {Phase::solid, solid_offset(sol, eta)};
}

double xi_of_eta(const TravellingWaveSolution& sol, double eta) {
    if (!(eta >= 0.0)) throw DomainError("xi_of_eta: eta must be non-negative");
    return eta <= sol.delta_star ? sol.coordinates->liquid.xi(eta) : sol.coordinates->solid.xi(eta);
}

double eta_of_xi(const TravellingWaveSolution& sol, double xi) {
    if (!(xi >= 0.0)) throw DomainError("eta_of_xi: xi must be non-negative");
    if (xi <= sol.delta) return std::min(sol.coordinates->liquid.eta(xi), sol.delta_star);
    return std::max(sol.coordinates->solid.eta(xi), sol.delta_star);
}

EnthalpyValue profile_enthalpy(const TravellingWaveSolution& sol, double xi) {
    const double eta = eta_of_xi(sol, xi);
    if (xi <= sol.delta) return {Phase::liquid, eta, liquid_offset(sol, eta) + sol.u_m};
    return {Phase::solid, eta, solid_offset(sol, eta) + sol.v_inf};
}

double profile_physical(const TravellingWaveSolution& sol, const MaterialSpec& spec, double xi) {
    const EnthalpyValue e = profile_enthalpy(sol, xi);
    return kirchhoff_inverse(spec, e.phase, e.enthalpy);
}

}  // namespace stefanlie
