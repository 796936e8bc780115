#pragma once

#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sths/array_model.hpp"
#include "sths/circuit_model.hpp"

namespace sths::io {

/// Malformed input file or document.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Rounds to 15 significant digits.
double round15(double x);

/// Locale-independent shortest text at 15 significant digits ("%.15g").
std::string fmt15(double x);

/// Design parameters carried alongside a schedule document.
struct ScheduleDocument {
    ArraySchedule schedule;
    double spacing_wavelengths = 0.0;
    double theta_deg = 0.0;
};

/// Schedule JSON, all times normalized by T_p, numbers at 15 significant digits.
std::string serialize_schedule(const ScheduleDocument& doc);
ScheduleDocument parse_schedule(const std::string& text);

/// Accepts either the explicit form (supply_voltage, bias_current,
/// peak_voltage, load_resistance, switch_resistance, switch_capacitance) or the
/// width form (width_m with optional cap_per_width / res_times_width in place
/// of the switch fields). pulse_freq_hz defaults to default_pulse_freq.
CircuitParams parse_circuit_params(const std::string& text, double default_pulse_freq);

/// `i,q` rows, optional header, '#' comments.
std::vector<complex> parse_constellation(std::istream& in);

/// Named constellations: "qam16", "qpsk".
std::optional<std::vector<complex>> builtin_constellation(const std::string& name);

struct FixtureRow {
    double ten_log_alpha = 0.0;
    double value = 0.0;
    std::string series;
};

/// Three-column fixture CSV: ten_log_alpha, value, series_label (with header).
std::vector<FixtureRow> parse_fixture(std::istream& in);
std::vector<FixtureRow> load_fixture(const std::string& path, const std::string& series = {});

std::string read_file(const std::string& path);

}  // namespace sths::io
