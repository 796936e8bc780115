#include <sstream>

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sths/array_model.hpp"
#include "sths/circuit_model.hpp"
#include "sths/commands.hpp"
#include "sths/harmonic_analysis.hpp"
#include "sths/io.hpp"
#include "sths/modulation.hpp"
#include "sths/schedule_design.hpp"

namespace py = pybind11;
using namespace sths;

PYBIND11_MODULE(_sths, m) {
    m.doc() = "Switched multi-path array: schedule design, harmonic analysis, efficiency and QAM models";

    py::class_<ArrayConfig>(m, "ArrayConfig")
        .def(py::init<>())
        .def_static("uniform", &ArrayConfig::uniform, py::arg("n_elements"), py::arg("spacing_wavelengths"),
                    py::arg("carrier_freq_hz"), py::arg("pulse_freq_hz"), py::arg("path_count") = 4)
        .def_readwrite("n_elements", &ArrayConfig::n_elements)
        .def_readwrite("element_spacing_m", &ArrayConfig::element_spacing_m)
        .def_readwrite("carrier_freq_hz", &ArrayConfig::carrier_freq_hz)
        .def_readwrite("pulse_freq_hz", &ArrayConfig::pulse_freq_hz)
        .def_readwrite("if_freq_hz", &ArrayConfig::if_freq_hz)
        .def_readwrite("excitations", &ArrayConfig::excitations)
        .def_readwrite("path_count", &ArrayConfig::path_count)
        .def_property_readonly("wavelength_m", &ArrayConfig::wavelength_m);

    py::class_<PulseTrain>(m, "PulseTrain")
        .def(py::init<double, double, double, double>(), py::arg("period_s"), py::arg("width_norm"),
             py::arg("onset_pos_norm"), py::arg("onset_neg_norm"))
        .def_property_readonly("period_s", &PulseTrain::period_s)
        .def_property_readonly("width_norm", &PulseTrain::width_norm)
        .def_property_readonly("onset_pos_norm", &PulseTrain::onset_pos_norm)
        .def_property_readonly("onset_neg_norm", &PulseTrain::onset_neg_norm)
        .def("value_at", &PulseTrain::value_at);

    py::class_<PathDrive>(m, "PathDrive")
        .def(py::init<double, PulseTrain>(), py::arg("phase_rad"), py::arg("train"))
        .def_readwrite("phase_rad", &PathDrive::phase_rad)
        .def_readwrite("train", &PathDrive::train);

    py::class_<ElementSchedule>(m, "ElementSchedule")
        .def(py::init<>())
        .def_readwrite("index", &ElementSchedule::index)
        .def_readwrite("paths", &ElementSchedule::paths);

    py::class_<ArraySchedule>(m, "ArraySchedule")
        .def_readwrite("config", &ArraySchedule::config)
        .def_readwrite("duty_ratio", &ArraySchedule::duty_ratio)
        .def_readwrite("steer_angle_rad", &ArraySchedule::steer_angle_rad)
        .def_readwrite("elements", &ArraySchedule::elements);

    m.def("validate", [](const ArraySchedule& s) {
        std::vector<std::string> out;
        for (const auto& v : validate(s)) out.push_back(v.to_string());
        return out;
    });
    m.def("steering_onset", &steering_onset, py::arg("n"), py::arg("steer_angle_rad"), py::arg("config"));
    m.def("design_schedule", &design_schedule, py::arg("config"), py::arg("steer_angle_rad"), py::arg("duty_ratio"));
    m.def("synthesize_envelope",
          [](const ElementSchedule& el, int samples) { return synthesize_envelope(el, samples); },
          py::arg("element"), py::arg("samples_per_period"));

    m.def("path_coefficient", &path_coefficient, py::arg("train"), py::arg("phase_rad"), py::arg("m"));
    m.def("combined_coefficient", &combined_coefficient, py::arg("element"), py::arg("m"));
    m.def("array_factor", &array_factor, py::arg("schedule"), py::arg("m"), py::arg("theta_rad"));
    m.def("harmonic_power", &harmonic_power, py::arg("schedule"), py::arg("m"));
    m.def("total_power", &total_power, py::arg("schedule"));
    m.def("harmonic_efficiency", &harmonic_efficiency, py::arg("schedule"));
    m.def("sideband_level", &sideband_level, py::arg("schedule"), py::arg("max_harmonic"), py::arg("step_deg") = 0.01);
    m.def(
        "radiation_pattern",
        [](const ArraySchedule& s, const std::vector<int>& harmonics, const std::vector<double>& theta_rad,
           std::optional<double> reference) { return radiation_pattern(s, harmonics, theta_rad, reference).db; },
        py::arg("schedule"), py::arg("harmonics"), py::arg("theta_rad"), py::arg("reference") = py::none(),
        "Rows per angle, columns per harmonic, in dB.");

    py::class_<CircuitParams>(m, "CircuitParams")
        .def(py::init<double, double, double, double, double, double, double>(), py::arg("supply_voltage"),
             py::arg("bias_current"), py::arg("peak_voltage"), py::arg("load_resistance"), py::arg("switch_resistance"),
             py::arg("switch_capacitance"), py::arg("pulse_freq"))
        .def_readwrite("supply_voltage", &CircuitParams::supply_voltage)
        .def_readwrite("bias_current", &CircuitParams::bias_current)
        .def_readwrite("peak_voltage", &CircuitParams::peak_voltage)
        .def_readwrite("load_resistance", &CircuitParams::load_resistance)
        .def_readwrite("switch_resistance", &CircuitParams::switch_resistance)
        .def_readwrite("switch_capacitance", &CircuitParams::switch_capacitance)
        .def_readwrite("pulse_freq", &CircuitParams::pulse_freq);
    m.def("load_circuit_params", [](const std::string& path, double fp) {
        return io::parse_circuit_params(io::read_file(path), fp);
    });
    m.def("circuit_efficiency", &circuit_efficiency, py::arg("params"), py::arg("duty"));
    m.def("total_drain_efficiency", &total_drain_efficiency);

    py::class_<PboRow>(m, "PboRow")
        .def_readonly("alpha", &PboRow::alpha)
        .def_readonly("zeta_harm", &PboRow::zeta_harm)
        .def_readonly("zeta_circ", &PboRow::zeta_circ)
        .def_readonly("eta", &PboRow::eta)
        .def_readonly("pbo_db", &PboRow::pbo_db);
    m.def("pbo_sweep", &pbo_sweep, py::arg("config"), py::arg("params"), py::arg("steer_angle_rad"), py::arg("alpha_grid"));

    m.def("amplitude_of_alpha", &amplitude_of_alpha);
    m.def(
        "predistort_alpha",
        [](double target, std::optional<CircuitParams> circuit) {
            return predistort_alpha(target, circuit ? PredistortMode::with_circuit(*circuit) : PredistortMode::ideal());
        },
        py::arg("target"), py::arg("circuit") = py::none());

    py::class_<SymbolPlan>(m, "SymbolPlan")
        .def_readonly("symbol", &SymbolPlan::symbol)
        .def_readonly("duty_ratio", &SymbolPlan::duty_ratio)
        .def_readonly("carrier_phase", &SymbolPlan::carrier_phase)
        .def_readonly("magnitude_target", &SymbolPlan::magnitude_target);
    m.def(
        "plan_constellation",
        [](const std::vector<complex>& points, bool predistort, std::optional<CircuitParams> circuit) {
            return plan_constellation(points, predistort,
                                      circuit ? PredistortMode::with_circuit(*circuit) : PredistortMode::ideal());
        },
        py::arg("points"), py::arg("predistort") = true, py::arg("circuit") = py::none());

    py::class_<ConstellationResult>(m, "ConstellationResult")
        .def_readonly("received", &ConstellationResult::received)
        .def_readonly("ideal", &ConstellationResult::ideal)
        .def_readonly("evm_rms_percent", &ConstellationResult::evm_rms_percent);
    m.def("simulate_constellation", &simulate_constellation, py::arg("plans"), py::arg("config"),
          py::arg("steer_angle_rad"));

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            const int code = cli::run(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Runs the command line in-process; returns (exit_code, stdout, stderr).");
}
