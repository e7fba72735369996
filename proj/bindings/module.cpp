#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cvqkd/keyrate.hpp"
#include "cvqkd/sweep.hpp"

namespace py = pybind11;
using namespace cvqkd;

PYBIND11_MODULE(_core, m) {
    m.doc() = "collective-attack secret key rates for PSK-modulated CV-QKD";

    py::enum_<ModulationKind>(m, "ModulationKind")
        .value("Psk", ModulationKind::Psk)
        .value("Gaussian", ModulationKind::Gaussian);

    py::enum_<Detection>(m, "Detection")
        .value("Homodyne", Detection::Homodyne)
        .value("Heterodyne", Detection::Heterodyne);

    py::enum_<Protocol>(m, "Protocol")
        .value("Psk4", Protocol::Psk4)
        .value("Psk8", Protocol::Psk8)
        .value("Gaussian", Protocol::Gaussian);

    py::enum_<SpectrumPath>(m, "SpectrumPath")
        .value("ClosedForm", SpectrumPath::ClosedForm)
        .value("Matrix", SpectrumPath::Matrix);

    py::class_<ModulationScheme>(m, "ModulationScheme")
        .def_static("psk", &ModulationScheme::psk, py::arg("n_states"), py::arg("alpha"))
        .def_static("psk_from_variance", &ModulationScheme::psk_from_variance,
                    py::arg("n_states"), py::arg("v_a"))
        .def_static("gaussian", &ModulationScheme::gaussian, py::arg("v_a"))
        .def_readonly("kind", &ModulationScheme::kind)
        .def_readonly("n_states", &ModulationScheme::n_states)
        .def_readonly("alpha", &ModulationScheme::alpha)
        .def_property_readonly("modulation_variance", &ModulationScheme::modulation_variance)
        .def_property_readonly("ensemble_variance", &ModulationScheme::ensemble_variance);

    py::class_<LinkParams>(m, "LinkParams")
        .def(py::init([](double length_km, double loss_db_per_km, double excess_noise) {
                 return LinkParams{length_km, loss_db_per_km, excess_noise};
             }),
             py::arg("length_km"), py::arg("loss_db_per_km") = 0.2,
             py::arg("excess_noise") = 0.005)
        .def_readwrite("length_km", &LinkParams::length_km)
        .def_readwrite("loss_db_per_km", &LinkParams::loss_db_per_km)
        .def_readwrite("excess_noise", &LinkParams::excess_noise);

    py::class_<DetectorParams>(m, "DetectorParams")
        .def(py::init([](Detection mode, double efficiency, double electronic_noise) {
                 return DetectorParams{mode, efficiency, electronic_noise};
             }),
             py::arg("mode") = Detection::Homodyne, py::arg("efficiency") = 0.6,
             py::arg("electronic_noise") = 0.05)
        .def_readwrite("mode", &DetectorParams::mode)
        .def_readwrite("efficiency", &DetectorParams::efficiency)
        .def_readwrite("electronic_noise", &DetectorParams::electronic_noise);

    py::class_<NoiseBudget>(m, "NoiseBudget")
        .def_readonly("transmittance", &NoiseBudget::transmittance)
        .def_readonly("chi_line", &NoiseBudget::chi_line)
        .def_readonly("chi_det", &NoiseBudget::chi_det)
        .def_readonly("chi_total", &NoiseBudget::chi_total)
        .def_readonly("epr_variance", &NoiseBudget::epr_variance)
        .def_readonly("mode", &NoiseBudget::mode)
        .def_readonly("efficiency", &NoiseBudget::efficiency);

    py::class_<SourceCovariance>(m, "SourceCovariance")
        .def_readonly("x", &SourceCovariance::x)
        .def_readonly("y", &SourceCovariance::y)
        .def_readonly("z", &SourceCovariance::z);

    py::class_<KeyRateReport>(m, "KeyRateReport")
        .def_readonly("mutual_info", &KeyRateReport::mutual_info)
        .def_readonly("holevo_bound", &KeyRateReport::holevo_bound)
        .def_readonly("delta_i", &KeyRateReport::delta_i)
        .def_readonly("delta_i_clamped", &KeyRateReport::delta_i_clamped)
        .def_readonly("nu_channel", &KeyRateReport::nu_channel)
        .def_readonly("nu_conditional", &KeyRateReport::nu_conditional)
        .def_readonly("nu_conditional_closed", &KeyRateReport::nu_conditional_closed)
        .def_readonly("path", &KeyRateReport::path)
        .def_readonly("beta", &KeyRateReport::beta)
        .def_readonly("budget", &KeyRateReport::budget)
        .def_readonly("source", &KeyRateReport::source);

    py::class_<QuadratureStats>(m, "QuadratureStats")
        .def_readonly("v_b", &QuadratureStats::v_b)
        .def_readonly("v_b_given_a", &QuadratureStats::v_b_given_a)
        .def_readonly("std_error", &QuadratureStats::std_error)
        .def_readonly("seed", &QuadratureStats::seed)
        .def_readonly("n_samples", &QuadratureStats::n_samples);

    py::class_<OptimizeResult>(m, "OptimizeResult")
        .def_readonly("v_a", &OptimizeResult::v_a)
        .def_readonly("delta_i", &OptimizeResult::delta_i)
        .def_readonly("unimodal", &OptimizeResult::unimodal)
        .def_readonly("evaluations", &OptimizeResult::evaluations);

    py::class_<CorrelationRow>(m, "CorrelationRow")
        .def_readonly("v_a", &CorrelationRow::v_a)
        .def_readonly("z4", &CorrelationRow::z4)
        .def_readonly("z8", &CorrelationRow::z8)
        .def_readonly("zg", &CorrelationRow::zg);

    m.def("psk_eigenvalues",
          [](int n_states, double alpha) { return psk_eigenvalues(n_states, alpha).lambdas; },
          py::arg("n_states"), py::arg("alpha"),
          "residue-class Poisson spectrum of the PSK ensemble");
    m.def("psk8_eigenvalues_closed",
          [](double alpha) { return psk8_eigenvalues_closed(alpha).lambdas; }, py::arg("alpha"));
    m.def("correlation_z", &correlation_z, py::arg("n_states"), py::arg("alpha"));
    m.def("gaussian_correlation", &gaussian_correlation, py::arg("v_a"));
    m.def("source_covariance", &source_covariance, py::arg("scheme"));
    m.def("transmittance", &transmittance, py::arg("link"));
    m.def("noise_budget", &noise_budget, py::arg("link"), py::arg("detector"));
    m.def("holevo_g", &holevo_g, py::arg("x"));
    m.def("mutual_information", &mutual_information, py::arg("source"), py::arg("budget"));
    m.def("secret_key_rate", &secret_key_rate, py::arg("scheme"), py::arg("link"),
          py::arg("detector"), py::arg("beta") = 0.8, py::arg("path") = SpectrumPath::Matrix);
    m.def("simulate_quadratures", &simulate_quadratures, py::arg("scheme"), py::arg("link"),
          py::arg("detector"), py::arg("n_samples"), py::arg("seed"));
    m.def("sweep_correlation", &sweep_correlation, py::arg("v_a_grid"));
    m.def(
        "optimize_variance",
        [](Protocol protocol, Detection detection, const LinkParams& link,
           const DetectorParams& det, double beta) {
            return optimize_variance(protocol, detection, link, det, beta);
        },
        py::arg("protocol"), py::arg("detection"), py::arg("link"), py::arg("detector"),
        py::arg("beta") = 0.8);

#ifdef CVQKD_VERSION
    m.attr("__version__") = CVQKD_VERSION;
#else
    m.attr("__version__") = "dev";
#endif
}
