#pragma once

#include <cmath>

#include "stefanlie/material.hpp"

namespace stefanlie::testing {

// Constant-coefficient problem with caller-chosen flux and evaporation laws.
inline TransformedBVP constant_bvp(std::function<double(double)> q, std::function<double(double)> h,
                                   TimeLaw law = TimeLaw::steady) {
    TransformedBVP b;
    b.d1 = [](double) { return 1.0; };
    b.d2 = [](double) { return 0.5; };
    b.d1_constant = 1.0;
    b.d2_constant = 0.5;
    b.q_of_u = std::move(q);
    b.h_of_u = std::move(h);
    b.H1 = [](double) { return 0.0; };
    b.H2 = 0.3;
    b.u_m = 1.0;
    b.v_m = 0.5;
    b.v_inf = 0.1;
    b.u_cap = 10.0;
    b.time_law = law;
    return b;
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace stefanlie::testing
