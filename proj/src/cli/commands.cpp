#include "sths/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "sths/circuit_model.hpp"
#include "sths/harmonic_analysis.hpp"
#include "sths/io.hpp"
#include "sths/modulation.hpp"
#include "sths/schedule_design.hpp"

namespace sths::cli {

namespace {

using json = nlohmann::ordered_json;
using io::fmt15;
using io::round15;

constexpr double kDegToRad = kPi / 180.0;
constexpr double kSuppressionRatio = 1e-12;
constexpr int kReferenceSamples = 16384;

// Bad flag values or input files; maps to exit code 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DesignFlags {
    int elements = 5;
    double spacing_wl = 0.5;
    double f0 = 77e9;
    double fp = 1e9;
    int paths = 4;
    double theta_deg = 20.0;
    double alpha_db = 0.0;
    std::string schedule_path;
};

void add_design_flags(CLI::App* sub, DesignFlags& f, bool with_alpha, bool with_schedule) {
    sub->add_option("--elements", f.elements, "number of array elements")->capture_default_str();
    sub->add_option("--spacing-wl", f.spacing_wl, "element spacing in carrier wavelengths")->capture_default_str();
    sub->add_option("--f0", f.f0, "carrier frequency, Hz")->capture_default_str();
    sub->add_option("--fp", f.fp, "pulse frequency, Hz")->capture_default_str();
    sub->add_option("--paths", f.paths, "signal paths per element (4 or 8)")
        ->check(CLI::IsMember({4, 8}))
        ->capture_default_str();
    sub->add_option("--theta-deg", f.theta_deg, "steering angle, degrees")->capture_default_str();
    if (with_alpha) sub->add_option("--alpha-db", f.alpha_db, "duty ratio as 10 log10(alpha)")->capture_default_str();
    if (with_schedule) sub->add_option("--schedule", f.schedule_path, "schedule JSON from 'design'");
}

ArrayConfig make_config(const DesignFlags& f) {
    if (f.elements < 1) throw UsageError("--elements must be positive");
    if (!(f.spacing_wl > 0.0)) throw UsageError("--spacing-wl must be positive");
    if (!(f.f0 > 0.0) || !(f.fp > 0.0)) throw UsageError("--f0 and --fp must be positive");
    if (!(std::abs(f.theta_deg) < 90.0)) throw UsageError("--theta-deg must satisfy |theta| < 90");
    auto c = ArrayConfig::uniform(f.elements, f.spacing_wl, f.f0, f.fp, f.paths);
    if (auto vs = validate(c); !vs.empty()) throw UsageError(vs.front().to_string());
    return c;
}

double alpha_from_db(double db) {
    if (!(db <= 0.0)) throw UsageError("10 log10(alpha) must be <= 0");
    return std::pow(10.0, db / 10.0);
}

io::ScheduleDocument design_document(const DesignFlags& f) {
    io::ScheduleDocument doc;
    doc.schedule = design_schedule(make_config(f), f.theta_deg * kDegToRad, alpha_from_db(f.alpha_db));
    doc.spacing_wavelengths = f.spacing_wl;
    doc.theta_deg = f.theta_deg;
    return doc;
}

// Schedule from --schedule, or designed from flags. The designed document
// goes through the same serialized form so both routes see identical numbers.
io::ScheduleDocument load_document(const DesignFlags& f) {
    const std::string text = f.schedule_path.empty() ? io::serialize_schedule(design_document(f))
                                                     : io::read_file(f.schedule_path);
    return io::parse_schedule(text);
}

// Inclusive grid min, min + step, ..., max.
std::vector<double> linear_grid(double min, double max, double step, const char* what) {
    if (!(step > 0.0)) throw UsageError(fmt::format("{} step must be positive", what));
    if (!(min <= max)) throw UsageError(fmt::format("{} grid is empty (min > max)", what));
    const auto count = static_cast<std::size_t>(std::floor((max - min) / step + 1e-9)) + 1;
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = min + static_cast<double>(i) * step;
    return out;
}

std::vector<int> parse_harmonics(const std::string& list) {
    std::vector<int> out;
    std::stringstream ss(list);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        int v = 0;
        const char* end = tok.data() + tok.size();
        auto [ptr, ec] = std::from_chars(tok.data(), end, v);
        if (tok.empty() || ec != std::errc() || ptr != end) throw UsageError("bad harmonic '" + tok + "'");
        if (std::find(out.begin(), out.end(), v) != out.end()) throw UsageError("duplicate harmonic " + tok);
        out.push_back(v);
    }
    if (out.empty() || (!list.empty() && list.back() == ',')) throw UsageError("bad harmonic list '" + list + "'");
    return out;
}

// Writes to the file when given, otherwise to `out`.
void emit(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw UsageError("cannot write " + path);
    f << text;
}

std::string error_line(const std::string& kind, const std::string& message) {
    return json{{"error", kind}, {"message", message}}.dump() + "\n";
}

std::string cmd_design(const DesignFlags& f) { return io::serialize_schedule(design_document(f)); }

struct PatternFlags {
    std::string harmonics = "1,-3,5,-7";
    double theta_min = -90.0;
    double theta_max = 90.0;
    double theta_step = 0.25;
    std::string normalize = "self";
};

std::string cmd_pattern(const DesignFlags& df, const PatternFlags& pf) {
    const auto harmonics = parse_harmonics(pf.harmonics);
    const auto grid_deg = linear_grid(pf.theta_min, pf.theta_max, pf.theta_step, "angle");
    if (pf.theta_min < -90.0 || pf.theta_max > 90.0) throw UsageError("angle grid must lie within [-90, 90]");
    std::vector<double> grid(grid_deg.size());
    std::transform(grid_deg.begin(), grid_deg.end(), grid.begin(), [](double d) { return d * kDegToRad; });

    const auto doc = load_document(df);
    std::optional<double> reference;
    if (pf.normalize == "peakmode") {
        const auto peak = design_schedule(doc.schedule.config, doc.schedule.steer_angle_rad, 1.0);
        reference = radiation_pattern(peak, {1}, grid).reference;
    }
    const auto table = radiation_pattern(doc.schedule, harmonics, grid, reference);

    std::string csv = "theta_deg";
    for (int m : harmonics) csv += fmt::format(",m_{}_db", m);
    csv += "\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
        csv += fmt15(grid_deg[i]);
        for (double v : table.db[i]) csv += "," + fmt15(v);
        csv += "\n";
    }
    return csv;
}

struct EfficiencyFlags {
    double db_min = -10.0;
    double db_max = 0.0;
    double db_step = 1.0;
    std::string circuit_path;
    std::string compare_path;
    std::string series;
    std::string compare_against = "zeta_harm";
};

std::optional<CircuitParams> load_circuit(const std::string& path, double fp) {
    if (path.empty()) return std::nullopt;
    return io::parse_circuit_params(io::read_file(path), fp);
}

std::string cmd_efficiency(const DesignFlags& df, const EfficiencyFlags& ef) {
    const auto config = make_config(df);
    const auto db_grid = linear_grid(ef.db_min, ef.db_max, ef.db_step, "alpha-dB");
    std::vector<double> alphas;
    for (double db : db_grid) alphas.push_back(alpha_from_db(db));
    const auto circuit = load_circuit(ef.circuit_path, df.fp);

    std::vector<io::FixtureRow> fixture;
    if (!ef.compare_path.empty()) {
        if (ef.compare_against == "zeta_circ" && !circuit) throw UsageError("--compare-against zeta_circ needs --circuit");
        fixture = io::load_fixture(ef.compare_path, ef.series);
        std::set<std::string> labels;
        for (const auto& r : fixture) labels.insert(r.series);
        if (labels.size() > 1) throw UsageError("fixture holds several series; choose one with --series");
    }

    const auto rows = pbo_sweep(config, circuit, df.theta_deg * kDegToRad, alphas);
    std::string csv = "ten_log_alpha,zeta_harm,zeta_circ,eta,pbo_db";
    if (!fixture.empty()) csv += ",reference_percent,delta_pp";
    csv += "\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        csv += fmt15(db_grid[i]) + "," + fmt15(r.zeta_harm) + "," + (r.zeta_circ ? fmt15(*r.zeta_circ) : "") + "," +
               (r.eta ? fmt15(*r.eta) : "") + "," + fmt15(r.pbo_db);
        if (!fixture.empty()) {
            const auto hit = std::find_if(fixture.begin(), fixture.end(),
                                          [&](const io::FixtureRow& f) { return std::abs(f.ten_log_alpha - db_grid[i]) < 1e-6; });
            if (hit == fixture.end()) {
                csv += ",,";
            } else {
                const double ours = ef.compare_against == "zeta_circ" ? *r.zeta_circ : r.zeta_harm;
                csv += "," + fmt15(hit->value) + "," + fmt15(100.0 * ours - hit->value);
            }
        }
        csv += "\n";
    }
    return csv;
}

struct QamFlags {
    std::string constellation = "qam16";
    std::string predistort = "on";
    std::string circuit_path;
    std::string received_path;
};

std::string cmd_qam(const DesignFlags& df, const QamFlags& qf) {
    const auto config = make_config(df);
    std::vector<complex> points;
    if (auto builtin = io::builtin_constellation(qf.constellation)) {
        points = *builtin;
    } else {
        std::istringstream in(io::read_file(qf.constellation));
        points = io::parse_constellation(in);
    }

    PredistortMode mode;
    if (qf.predistort == "circuit") {
        if (qf.circuit_path.empty()) throw UsageError("--predistort circuit needs --circuit");
        mode = PredistortMode::with_circuit(*load_circuit(qf.circuit_path, df.fp));
    }
    const bool predistort = qf.predistort != "off";
    const auto plans = plan_constellation(points, predistort, mode);
    const auto result = simulate_constellation(plans, config, df.theta_deg * kDegToRad);

    json jplans = json::array();
    for (const auto& p : plans) {
        jplans.push_back({{"i", round15(p.symbol.real())},
                          {"q", round15(p.symbol.imag())},
                          {"magnitude_target", round15(p.magnitude_target)},
                          {"duty_ratio", round15(p.duty_ratio)},
                          {"ten_log_alpha", round15(10.0 * std::log10(p.duty_ratio))},
                          {"carrier_phase_deg", round15(p.carrier_phase / kDegToRad)}});
    }
    json root{{"predistort", qf.predistort},
              {"evm_rms_percent", round15(result.evm_rms_percent)},
              {"plans", std::move(jplans)}};

    if (!qf.received_path.empty()) {
        std::string csv = "i,q,ideal_i,ideal_q\n";
        for (std::size_t k = 0; k < result.received.size(); ++k) {
            csv += fmt15(result.received[k].real()) + "," + fmt15(result.received[k].imag()) + "," +
                   fmt15(result.ideal[k].real()) + "," + fmt15(result.ideal[k].imag()) + "\n";
        }
        emit(csv, qf.received_path, std::cout);
    }
    return root.dump(2) + "\n";
}

struct VerifyFlags {
    int m_max = 25;
    int samples = kReferenceSamples;
    bool json_out = false;
};

std::string render_report(const VerifyReport& rep, bool as_json) {
    if (as_json) {
        json checks = json::array();
        for (const auto& c : rep.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
        return json{{"passed", rep.passed()}, {"checks", std::move(checks)}}.dump(2) + "\n";
    }
    std::string s;
    for (const auto& c : rep.checks) s += fmt::format("{} {}: {}\n", c.passed ? "PASS" : "FAIL", c.name, c.detail);
    s += rep.passed() ? "RESULT: PASS\n" : "RESULT: FAIL\n";
    return s;
}

}  // namespace

bool VerifyReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const VerifyCheck& c) { return c.passed; });
}

double oracle_tolerance(int samples_per_period) {
    const double r = static_cast<double>(kReferenceSamples) / samples_per_period;
    return 1e-6 * r * r;
}

std::vector<int> suppressed_harmonics(int path_count, int m_max) {
    std::vector<int> out;
    for (int m = -m_max; m <= m_max; ++m) {
        if (m == 0) continue;
        const bool even = m % 2 == 0;
        const bool odd_triple = !even && m % 3 == 0;
        const bool quad = ((m % 4) + 4) % 4 == 3;
        const bool eight = path_count == 8 && m == 5;
        if (even || odd_triple || quad || eight) out.push_back(m);
    }
    return out;
}

VerifyReport verify_schedule(const ArraySchedule& schedule, int m_max, int samples) {
    VerifyReport rep;
    const auto violations = validate(schedule);
    {
        std::string detail = "no violations";
        if (!violations.empty()) {
            detail.clear();
            for (const auto& v : violations) detail += (detail.empty() ? "" : "; ") + v.to_string();
        }
        rep.checks.push_back({"schedule_valid", violations.empty(), detail});
    }

    std::vector<double> a1;
    for (const auto& el : schedule.elements) a1.push_back(std::abs(combined_coefficient(el, 1)));
    const double a1_min = a1.empty() ? 0.0 : *std::min_element(a1.begin(), a1.end());
    if (!(a1_min > 0.0)) {
        rep.checks.push_back({"first_harmonic_present", false, "some element has A_1n = 0"});
        return rep;
    }

    auto worst_ratio = [&](int m) {
        double worst = 0.0;
        for (std::size_t i = 0; i < schedule.elements.size(); ++i) {
            worst = std::max(worst, std::abs(combined_coefficient(schedule.elements[i], m)) / a1[i]);
        }
        return worst;
    };
    const double carrier = worst_ratio(0);
    rep.checks.push_back({"carrier_suppressed", carrier < kSuppressionRatio, fmt::format("max |A_0n|/|A_1n| = {:.3e}", carrier)});
    for (int m : suppressed_harmonics(schedule.config.path_count, m_max)) {
        const double r = worst_ratio(m);
        rep.checks.push_back({fmt::format("suppressed_m={}", m), r < kSuppressionRatio,
                              fmt::format("max |A_mn|/|A_1n| = {:.3e}", r)});
    }

    const double tol = oracle_tolerance(samples);
    try {
        double worst = 0.0;
        int worst_m = 0;
        for (std::size_t i = 0; i < schedule.elements.size(); ++i) {
            const auto env = synthesize_envelope(schedule.elements[i], samples, SamplingKernel::triangle);
            for (int m = -m_max; m <= m_max; ++m) {
                const complex exact = combined_coefficient(schedule.elements[i], m);
                const double err = std::abs(envelope_dft(env, m, SamplingKernel::triangle) - exact) / a1[i];
                if (err > worst) {
                    worst = err;
                    worst_m = m;
                }
            }
        }
        rep.checks.push_back({"dft_oracle", worst < tol,
                              fmt::format("max relative error {:.3e} (m={}) vs tolerance {:.3e} at S={}", worst,
                                          worst_m, tol, samples)});
    } catch (const std::invalid_argument& e) {
        rep.checks.push_back({"dft_oracle", false, e.what()});
    }
    return rep;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Single-harmonic switching array simulator", "sths"};
    app.require_subcommand(1);

    DesignFlags design_f;
    std::string design_out;
    auto* design = app.add_subcommand("design", "design a switching schedule (JSON)");
    add_design_flags(design, design_f, true, false);
    design->add_option("--out", design_out, "output file (default stdout)");

    DesignFlags pattern_df;
    PatternFlags pattern_f;
    std::string pattern_out;
    auto* pattern = app.add_subcommand("pattern", "radiation patterns per harmonic (CSV)");
    add_design_flags(pattern, pattern_df, true, true);
    pattern->add_option("--harmonics", pattern_f.harmonics, "comma-separated harmonic indices")->capture_default_str();
    pattern->add_option("--theta-min", pattern_f.theta_min, "degrees")->capture_default_str();
    pattern->add_option("--theta-max", pattern_f.theta_max, "degrees")->capture_default_str();
    pattern->add_option("--theta-step", pattern_f.theta_step, "degrees")->capture_default_str();
    pattern->add_option("--normalize", pattern_f.normalize, "self | peakmode")
        ->check(CLI::IsMember({"self", "peakmode"}))
        ->capture_default_str();
    pattern->add_option("--out", pattern_out, "output file (default stdout)");

    DesignFlags eff_df;
    EfficiencyFlags eff_f;
    std::string eff_out;
    auto* efficiency = app.add_subcommand("efficiency", "harmonic/circuit efficiency and back-off sweep (CSV)");
    add_design_flags(efficiency, eff_df, false, false);
    efficiency->add_option("--alpha-db-min", eff_f.db_min)->capture_default_str();
    efficiency->add_option("--alpha-db-max", eff_f.db_max)->capture_default_str();
    efficiency->add_option("--alpha-db-step", eff_f.db_step)->capture_default_str();
    efficiency->add_option("--circuit", eff_f.circuit_path, "circuit parameter JSON");
    efficiency->add_option("--compare", eff_f.compare_path, "reference fixture CSV");
    efficiency->add_option("--series", eff_f.series, "fixture series label");
    efficiency->add_option("--compare-against", eff_f.compare_against, "zeta_harm | zeta_circ")
        ->check(CLI::IsMember({"zeta_harm", "zeta_circ"}))
        ->capture_default_str();
    efficiency->add_option("--out", eff_out, "output file (default stdout)");

    DesignFlags qam_df;
    QamFlags qam_f;
    auto* qam = app.add_subcommand("qam", "plan and simulate a constellation (JSON)");
    add_design_flags(qam, qam_df, false, false);
    qam->add_option("--constellation", qam_f.constellation, "i,q CSV file or qam16 | qpsk")->capture_default_str();
    qam->add_option("--predistort", qam_f.predistort, "on | off | circuit")
        ->check(CLI::IsMember({"on", "off", "circuit"}))
        ->capture_default_str();
    qam->add_option("--circuit", qam_f.circuit_path, "circuit parameter JSON");
    qam->add_option("--received", qam_f.received_path, "write received points (CSV)");

    DesignFlags verify_df;
    VerifyFlags verify_f;
    auto* verify = app.add_subcommand("verify", "suppression and Fourier-oracle checks");
    add_design_flags(verify, verify_df, true, true);
    verify->add_option("--m-max", verify_f.m_max, "largest |m| checked")->capture_default_str();
    verify->add_option("--samples", verify_f.samples, "envelope samples per period")->capture_default_str();
    verify->add_flag("--json", verify_f.json_out, "JSON report");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << error_line("usage_error", e.what());
        return kExitUsage;
    }

    try {
        if (design->parsed()) {
            emit(cmd_design(design_f), design_out, out);
        } else if (pattern->parsed()) {
            emit(cmd_pattern(pattern_df, pattern_f), pattern_out, out);
        } else if (efficiency->parsed()) {
            emit(cmd_efficiency(eff_df, eff_f), eff_out, out);
        } else if (qam->parsed()) {
            out << cmd_qam(qam_df, qam_f);
        } else if (verify->parsed()) {
            if (verify_f.samples < 64) throw UsageError("--samples must be at least 64");
            if (verify_f.m_max < 1 || 2 * verify_f.m_max >= verify_f.samples) {
                throw UsageError("--m-max must lie in [1, samples/2)");
            }
            const auto doc = load_document(verify_df);
            const auto rep = verify_schedule(doc.schedule, verify_f.m_max, verify_f.samples);
            out << render_report(rep, verify_f.json_out);
            return rep.passed() ? kExitOk : kExitVerifyFailed;
        }
    } catch (const UsageError& e) {
        err << error_line("usage_error", e.what());
        return kExitUsage;
    } catch (const io::FormatError& e) {
        err << error_line("input_error", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        err << error_line("invalid_input", e.what());
        return kExitUsage;
    }
    return kExitOk;
}

}  // namespace sths::cli
