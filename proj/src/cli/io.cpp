#include "sths/io.hpp"

#include <array>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <utility>

#include <fmt/format.h>

#include "json.hpp"

namespace sths::io {

namespace {

using json = nlohmann::ordered_json;

constexpr double kRadToDeg = 180.0 / kPi;

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

// Full-string, locale-free parse; nullopt when the cell is not a number.
std::optional<double> to_number(const std::string& cell) {
    if (cell.empty()) return std::nullopt;
    std::istringstream is(cell);
    is.imbue(std::locale::classic());
    double v = 0.0;
    is >> v;
    if (is.fail() || !is.eof()) return std::nullopt;
    return v;
}

template <typename T>
T get(const json& j, const char* key) {
    if (!j.contains(key)) throw FormatError(std::string("missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw FormatError(std::string("field '") + key + "' has the wrong type");
    }
}

double number(const json& j, const char* key) {
    const auto& v = j.contains(key) ? j.at(key) : json();
    if (!v.is_number()) throw FormatError(std::string("field '") + key + "' must be a number");
    return v.get<double>();
}

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(std::string("invalid JSON: ") + e.what());
    }
}

}  // namespace

double round15(double x) {
    if (!std::isfinite(x)) return x;
    return std::strtod(fmt15(x).c_str(), nullptr);
}

std::string fmt15(double x) {
    if (x == 0.0) return "0";  // also folds -0
    return fmt::format("{:.15g}", x);
}

std::string serialize_schedule(const ScheduleDocument& doc) {
    const auto& s = doc.schedule;
    json root;
    root["config"] = {{"elements", s.config.n_elements},
                      {"spacing_wavelengths", round15(doc.spacing_wavelengths)},
                      {"f0_hz", round15(s.config.carrier_freq_hz)},
                      {"fp_hz", round15(s.config.pulse_freq_hz)},
                      {"paths", s.config.path_count}};
    root["alpha"] = round15(s.duty_ratio);
    root["theta_deg"] = round15(doc.theta_deg);
    json elements = json::array();
    for (const auto& el : s.elements) {
        json paths = json::array();
        for (const auto& p : el.paths) {
            paths.push_back({{"phase_deg", round15(p.phase_rad * kRadToDeg)},
                             {"onset_pos_norm", round15(p.train.onset_pos_norm())},
                             {"onset_neg_norm", round15(p.train.onset_neg_norm())},
                             {"width_norm", round15(p.train.width_norm())}});
        }
        elements.push_back({{"index", el.index}, {"paths", std::move(paths)}});
    }
    root["elements"] = std::move(elements);
    return root.dump(2) + "\n";
}

ScheduleDocument parse_schedule(const std::string& text) {
    const json root = parse_json(text);
    if (!root.is_object()) throw FormatError("schedule document must be a JSON object");
    const json cfg = get<json>(root, "config");

    ScheduleDocument doc;
    doc.spacing_wavelengths = number(cfg, "spacing_wavelengths");
    doc.theta_deg = number(root, "theta_deg");
    auto& s = doc.schedule;
    s.config = ArrayConfig::uniform(get<int>(cfg, "elements"), doc.spacing_wavelengths, number(cfg, "f0_hz"),
                                    number(cfg, "fp_hz"), get<int>(cfg, "paths"));
    if (!(s.config.pulse_freq_hz > 0.0)) throw FormatError("fp_hz must be positive");
    s.duty_ratio = number(root, "alpha");
    s.steer_angle_rad = doc.theta_deg / kRadToDeg;

    const json elements = get<json>(root, "elements");
    if (!elements.is_array()) throw FormatError("'elements' must be an array");
    const double period = s.config.pulse_period_s();
    for (const auto& ej : elements) {
        ElementSchedule el;
        el.index = get<int>(ej, "index");
        const json paths = get<json>(ej, "paths");
        if (!paths.is_array()) throw FormatError("'paths' must be an array");
        for (const auto& pj : paths) {
            const double width = number(pj, "width_norm");
            if (!(width >= 0.0 && width < 1.0)) throw FormatError("width_norm must lie in [0, 1)");
            el.paths.push_back({number(pj, "phase_deg") / kRadToDeg,
                                PulseTrain(period, width, number(pj, "onset_pos_norm"), number(pj, "onset_neg_norm"))});
        }
        s.elements.push_back(std::move(el));
    }
    return doc;
}

CircuitParams parse_circuit_params(const std::string& text, double default_pulse_freq) {
    const json j = parse_json(text);
    if (!j.is_object()) throw FormatError("circuit parameters must be a JSON object");
    const double vdd = number(j, "supply_voltage");
    const double idd = number(j, "bias_current");
    const double vpk = number(j, "peak_voltage");
    const double rl = number(j, "load_resistance");
    const double fp = j.contains("pulse_freq_hz") ? number(j, "pulse_freq_hz") : default_pulse_freq;

    CircuitParams p;
    try {
        if (j.contains("width_m")) {
            DensityParams d;
            d.width = number(j, "width_m");
            d.cap_per_width = j.contains("cap_per_width") ? number(j, "cap_per_width") : kCapPerWidth;
            d.res_times_width = j.contains("res_times_width") ? number(j, "res_times_width") : kResTimesWidth;
            p = params_from_width(d, vdd, idd, vpk, rl, fp);
        } else {
            p = {vdd, idd, vpk, rl, number(j, "switch_resistance"), number(j, "switch_capacitance"), fp};
            check(p);
        }
    } catch (const std::invalid_argument& e) {
        throw FormatError(e.what());
    }
    return p;
}

std::vector<complex> parse_constellation(std::istream& in) {
    std::vector<complex> out;
    std::string line;
    int line_no = 0;
    bool first_row = true;
    while (std::getline(in, line)) {
        ++line_no;
        const auto t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        const bool header_allowed = std::exchange(first_row, false);
        const auto cells = split_csv(t);
        const auto i = cells.size() == 2 ? to_number(cells[0]) : std::nullopt;
        const auto q = cells.size() == 2 ? to_number(cells[1]) : std::nullopt;
        if (!i || !q) {
            if (header_allowed) continue;
            throw FormatError(fmt::format("constellation line {}: expected 'i,q'", line_no));
        }
        out.emplace_back(*i, *q);
    }
    if (out.empty()) throw FormatError("constellation has no points");
    return out;
}

std::optional<std::vector<complex>> builtin_constellation(const std::string& name) {
    std::vector<complex> out;
    if (name == "qam16") {
        for (int i : {-3, -1, 1, 3}) {
            for (int q : {-3, -1, 1, 3}) out.emplace_back(i, q);
        }
    } else if (name == "qpsk") {
        out = {{1, 1}, {-1, 1}, {-1, -1}, {1, -1}};
    } else {
        return std::nullopt;
    }
    return out;
}

std::vector<FixtureRow> parse_fixture(std::istream& in) {
    std::vector<FixtureRow> out;
    std::string line;
    int line_no = 0;
    bool first_row = true;
    while (std::getline(in, line)) {
        ++line_no;
        const auto t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        const bool header_allowed = std::exchange(first_row, false);
        const auto cells = split_csv(t);
        if (cells.size() != 3) throw FormatError(fmt::format("fixture line {}: expected 3 columns", line_no));
        const auto a = to_number(cells[0]);
        const auto v = to_number(cells[1]);
        if (!a || !v) {
            if (header_allowed) continue;
            throw FormatError(fmt::format("fixture line {}: non-numeric value", line_no));
        }
        out.push_back({*a, *v, cells[2]});
    }
    return out;
}

std::vector<FixtureRow> load_fixture(const std::string& path, const std::string& series) {
    std::istringstream in(read_file(path));
    auto rows = parse_fixture(in);
    if (series.empty()) return rows;
    std::vector<FixtureRow> out;
    for (auto& r : rows) {
        if (r.series == series) out.push_back(std::move(r));
    }
    if (out.empty()) throw FormatError("series '" + series + "' not found in " + path);
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw FormatError("cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace sths::io
