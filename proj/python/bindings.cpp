#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "stefanlie/classify.hpp"
#include "stefanlie/errors.hpp"
#include "stefanlie/fd_oracle.hpp"
#include "stefanlie/material.hpp"
#include "stefanlie/self_similar.hpp"
#include "stefanlie/travelling_wave.hpp"

namespace py = pybind11;
using namespace stefanlie;

PYBIND11_MODULE(_core, m) {
    m.attr("__version__") = STEFANLIE_VERSION;

    // Registered first so the more specific translators below take precedence.
    auto& error = py::register_exception<Error>(m, "StefanlieError");
    py::register_exception<ConfigError>(m, "ConfigError", error.ptr());
    py::register_exception<ConvergenceError>(m, "ConvergenceError", error.ptr());
    py::register_exception<NoTravellingWaveError>(m, "NoTravellingWaveError", error.ptr());
    py::register_exception<PreconditionError>(m, "PreconditionError", error.ptr());

    py::enum_<Phase>(m, "Phase").value("liquid", Phase::liquid).value("solid", Phase::solid);
    py::enum_<TimeLaw>(m, "TimeLaw").value("steady", TimeLaw::steady).value("inverse_sqrt", TimeLaw::inverse_sqrt);

    py::class_<MaterialSpec>(m, "MaterialSpec")
        .def(py::init<>())
        .def_static("aluminium", &MaterialSpec::aluminium)
        .def("validate", &MaterialSpec::validate)
#define FIELD(name) .def_readwrite(#name, &MaterialSpec::name)
        FIELD(lambda1) FIELD(lambda2) FIELD(rho) FIELD(c1) FIELD(c2_a) FIELD(c2_b) FIELD(Lm) FIELD(Lv) FIELD(Tv)
        FIELD(Tm) FIELD(Tinf) FIELD(chi0) FIELD(chi_p) FIELD(chi_Tref) FIELD(q0) FIELD(A) FIELD(Pa) FIELD(R);
#undef FIELD

    py::class_<TransformedBVP>(m, "TransformedBVP")
        .def_readonly("H2", &TransformedBVP::H2)
        .def_readonly("u_m", &TransformedBVP::u_m)
        .def_readonly("v_m", &TransformedBVP::v_m)
        .def_readonly("v_inf", &TransformedBVP::v_inf)
        .def_readonly("u_cap", &TransformedBVP::u_cap)
        .def("d1", [](const TransformedBVP& b, double u) { return b.d1(u); })
        .def("d2", [](const TransformedBVP& b, double v) { return b.d2(v); })
        .def("q", &TransformedBVP::q)
        .def("h", &TransformedBVP::h);

    m.def("kirchhoff_forward", &kirchhoff_forward, py::arg("spec"), py::arg("phase"), py::arg("T"));
    m.def("kirchhoff_inverse", &kirchhoff_inverse, py::arg("spec"), py::arg("phase"), py::arg("u"));
    m.def("build_transformed_bvp",
          [](const MaterialSpec& spec, TimeLaw law) { return build_transformed_bvp(spec, law); },
          py::arg("spec"), py::arg("time_law") = TimeLaw::steady);

    py::class_<TravellingWaveSolution>(m, "TravellingWaveSolution")
        .def_readonly("mu", &TravellingWaveSolution::mu)
        .def_readonly("u_s", &TravellingWaveSolution::u_s)
        .def_readonly("delta", &TravellingWaveSolution::delta)
        .def_readonly("delta_star", &TravellingWaveSolution::delta_star)
        .def_readonly("residual", &TravellingWaveSolution::residual)
        .def_property_readonly("multiple_roots", &TravellingWaveSolution::multiple_roots);
    m.def("solve_travelling_wave", &solve_travelling_wave, py::arg("bvp"));
    m.def("profile_physical", &profile_physical, py::arg("sol"), py::arg("spec"), py::arg("xi"));

    py::class_<SelfSimilarSolution>(m, "SelfSimilarSolution")
        .def_readonly("omega1", &SelfSimilarSolution::omega1)
        .def_readonly("omega2", &SelfSimilarSolution::omega2)
        .def_readonly("omega_max", &SelfSimilarSolution::omega_max)
        .def_readonly("u1", &SelfSimilarSolution::u1)
        .def_readonly("bc_residual", &SelfSimilarSolution::bc_residual)
        .def("enthalpy", &SelfSimilarSolution::enthalpy, py::arg("omega"));
    m.def("solve_self_similar", [](const TransformedBVP& bvp) { return solve_self_similar(bvp); }, py::arg("bvp"));

    m.def(
        "validate_travelling_wave",
        [](const TransformedBVP& bvp, const TravellingWaveSolution& sol, double t_end, int n_liquid) {
            GridSpec grid;
            grid.n_liquid = n_liquid;
            const TravellingWaveReport r = validate_travelling_wave(bvp, sol, t_end, grid);
            py::dict d;
            d["velocity_s1"] = r.velocity_s1;
            d["velocity_s2"] = r.velocity_s2;
            d["velocity_error"] = r.velocity_error;
            d["profile_drift"] = r.profile_drift;
            d["thickness_drift"] = r.thickness_drift;
            d["steps"] = r.steps;
            return d;
        },
        py::arg("bvp"), py::arg("sol"), py::arg("t_end"), py::arg("n_liquid") = 20);

    m.def(
        "classify_rod_bvp",
        [](double k, double gamma, double q0) {
            const RodClassification r = classify_rod_bvp(k, gamma, q0);
            return py::make_tuple(r.row, r.passing);
        },
        py::arg("k"), py::arg("gamma"), py::arg("q0"), "Returns (row, invariant family ids); row 0 means none.");

    m.def(
        "verify_table2_generators",
        [](int case_id) {
            std::vector<std::pair<std::string, bool>> out;
            for (const auto& r : verify_table2_generators(case_id)) out.emplace_back(r.generator, r.pass);
            return out;
        },
        py::arg("case_id"), "Returns (generator, verified) pairs for generator case 1..8.");
}
