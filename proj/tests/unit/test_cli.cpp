#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "sths/commands.hpp"
#include "sths/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = sths::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path temp_file(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("sths_cli_test_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()));
    fs::create_directories(dir);
    return dir / name;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string c;
        while (std::getline(ss, c, ',')) cells.push_back(c);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        rows.push_back(cells);
    }
    return rows;
}

const std::string kRef = STHS_REFERENCE_DIR;

}  // namespace

TEST(CliDesign, PeakModeDocument) {
    const auto r = run({"design", "--elements", "5", "--spacing-wl", "0.5", "--f0", "77e9", "--fp", "1e9", "--paths", "4",
                        "--theta-deg", "20", "--alpha-db", "0"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = json::parse(r.out);
    EXPECT_EQ(j["config"]["elements"], 5);
    EXPECT_EQ(j["config"]["paths"], 4);
    ASSERT_EQ(j["elements"].size(), 5u);
    for (const auto& el : j["elements"]) {
        ASSERT_EQ(el["paths"].size(), 4u);
        for (const auto& p : el["paths"]) EXPECT_NEAR(p["width_norm"].get<double>(), 1.0 / 3.0, 1e-15);
    }
    EXPECT_EQ(r.out.find("config"), r.out.find('"') + 1);  // config is the first key
}

TEST(CliDesign, BackOffWidth) {
    const auto r = run({"design", "--alpha-db", "-6"});
    ASSERT_EQ(r.code, 0);
    const double w = json::parse(r.out)["elements"][0]["paths"][0]["width_norm"];
    EXPECT_NEAR(w, std::pow(10.0, -0.6) / 3.0, 1e-15);
    EXPECT_NEAR(w, 0.0837, 5e-5);
}

TEST(CliDesign, UsageErrors) {
    for (const auto& args : std::vector<std::vector<std::string>>{{"design", "--paths", "3"},
                                                                   {"design", "--alpha-db", "1"},
                                                                   {"design", "--fp", "1e10"},
                                                                   {"design", "--bogus"},
                                                                   {}}) {
        const auto r = run(args);
        EXPECT_EQ(r.code, sths::cli::kExitUsage);
        const auto e = json::parse(r.err);
        EXPECT_TRUE(e.contains("error"));
        EXPECT_TRUE(e.contains("message"));
    }
}

TEST(CliDesign, WritesFile) {
    const auto p = temp_file("design.json");
    ASSERT_EQ(run({"design", "--out", p.string()}).code, 0);
    EXPECT_EQ(sths::io::read_file(p.string()), run({"design"}).out);
}

TEST(CliPattern, MainLobeAtSteerAngle) {
    const auto r = run({"pattern", "--harmonics", "1,-3,5,-7", "--theta-min", "-90", "--theta-max", "90", "--theta-step", "0.25"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = csv_rows(r.out);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"theta_deg", "m_1_db", "m_-3_db", "m_5_db", "m_-7_db"}));
    ASSERT_EQ(rows.size(), 722u);
    std::size_t best = 1;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (std::stod(rows[i][1]) > std::stod(rows[best][1])) best = i;
    }
    EXPECT_EQ(rows[best][0], "20");
    EXPECT_EQ(rows[best][1], "0");
}

TEST(CliPattern, BackOffSuppressesMinusThird) {
    const auto r = run({"pattern", "--alpha-db", "-6", "--normalize", "peakmode", "--harmonics", "1,-3"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = csv_rows(r.out);
    double peak1 = -1e9;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        EXPECT_LE(std::stod(rows[i][2]), -120.0);
        peak1 = std::max(peak1, std::stod(rows[i][1]));
    }
    EXPECT_LT(peak1, -9.0);  // relative to the peak-mode main lobe
}

TEST(CliPattern, Errors) {
    EXPECT_EQ(run({"pattern", "--theta-min", "10", "--theta-max", "0"}).code, 2);
    EXPECT_EQ(run({"pattern", "--harmonics", "1,,3"}).code, 2);
    EXPECT_EQ(run({"pattern", "--harmonics", "1,x"}).code, 2);
    EXPECT_EQ(run({"pattern", "--harmonics", "1,1"}).code, 2);
    EXPECT_EQ(run({"pattern", "--harmonics", ""}).code, 2);
    EXPECT_EQ(run({"pattern", "--normalize", "max"}).code, 2);
    EXPECT_EQ(run({"pattern", "--schedule", "/nonexistent/file.json"}).code, 2);
}

TEST(CliPattern, ScheduleRoundTripIsByteIdentical) {
    for (const std::vector<std::string> flags : {std::vector<std::string>{"--paths", "8", "--alpha-db", "-3.7", "--theta-deg", "-12.5"},
                                                 std::vector<std::string>{"--elements", "3", "--spacing-wl", "0.45"}}) {
        const auto doc = temp_file("roundtrip.json");
        auto design_args = flags;
        design_args.insert(design_args.begin(), "design");
        design_args.insert(design_args.end(), {"--out", doc.string()});
        ASSERT_EQ(run(design_args).code, 0);

        auto inline_args = flags;
        inline_args.insert(inline_args.begin(), "pattern");
        inline_args.insert(inline_args.end(), {"--harmonics", "1,5,-7,9", "--normalize", "peakmode"});
        const auto a = run(inline_args);
        const auto b = run({"pattern", "--schedule", doc.string(), "--harmonics", "1,5,-7,9", "--normalize", "peakmode"});
        ASSERT_EQ(a.code, 0);
        ASSERT_EQ(b.code, 0);
        EXPECT_EQ(a.out, b.out);
    }
}

TEST(CliPattern, Deterministic) {
    EXPECT_EQ(run({"pattern", "--paths", "8"}).out, run({"pattern", "--paths", "8"}).out);
}

TEST(CliEfficiency, SweepWithoutCircuit) {
    const auto r = run({"efficiency"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = csv_rows(r.out);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"ten_log_alpha", "zeta_harm", "zeta_circ", "eta", "pbo_db"}));
    ASSERT_EQ(rows.size(), 12u);
    EXPECT_EQ(rows.back()[0], "0");
    EXPECT_NEAR(std::stod(rows.back()[1]), 0.897, 0.04);
    EXPECT_EQ(rows.back()[2], "");
    EXPECT_EQ(rows.back()[3], "");
    EXPECT_EQ(rows[5][0], "-6");
    EXPECT_NEAR(std::stod(rows[5][4]), -10.4504, 1e-4);
}

TEST(CliEfficiency, CircuitAndCompare) {
    const auto r = run({"efficiency", "--fp", "200e6", "--circuit", kRef + "/circuit_fit.json", "--compare",
                        kRef + "/circuit_efficiency.csv", "--series", "model_200MHz", "--compare-against", "zeta_circ"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = csv_rows(r.out);
    ASSERT_EQ(rows[0].size(), 7u);
    EXPECT_EQ(rows[0][6], "delta_pp");
    for (std::size_t i = 1; i < rows.size(); ++i) {
        EXPECT_LT(std::abs(std::stod(rows[i][6])), 1.0);
        EXPECT_NEAR(std::stod(rows[i][3]), std::stod(rows[i][1]) * std::stod(rows[i][2]), 1e-14);
    }
}

TEST(CliEfficiency, Errors) {
    const auto bad = temp_file("bad.json");
    write(bad, "{\"supply_voltage\": 1.2, ");
    EXPECT_EQ(run({"efficiency", "--circuit", bad.string()}).code, 2);
    write(bad, "{\"supply_voltage\": 1.2}");
    EXPECT_EQ(run({"efficiency", "--circuit", bad.string()}).code, 2);
    EXPECT_EQ(run({"efficiency", "--compare", kRef + "/harmonic_efficiency.csv"}).code, 2);  // several series
    EXPECT_EQ(run({"efficiency", "--alpha-db-max", "1"}).code, 2);
    EXPECT_EQ(run({"efficiency", "--compare", kRef + "/harmonic_efficiency.csv", "--series", "ideal_4path",
                   "--compare-against", "zeta_circ"})
                  .code,
              2);
}

TEST(CliQam, PredistortionBeatsNaive) {
    const auto on = run({"qam", "--constellation", "qam16", "--predistort", "on"});
    const auto off = run({"qam", "--constellation", "qam16", "--predistort", "off"});
    ASSERT_EQ(on.code, 0) << on.err;
    ASSERT_EQ(off.code, 0);
    const double evm_on = json::parse(on.out)["evm_rms_percent"];
    const double evm_off = json::parse(off.out)["evm_rms_percent"];
    EXPECT_LT(evm_on, 0.1);
    EXPECT_GT(evm_off, evm_on);
}

TEST(CliQam, CsvConstellationAndReceivedPoints) {
    const auto in = temp_file("qpsk.csv");
    write(in, "i,q\n1,1\n-1,1\n-1,-1\n1,-1\n");
    const auto rec = temp_file("received.csv");
    const auto r = run({"qam", "--constellation", in.string(), "--received", rec.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    for (const auto& p : json::parse(r.out)["plans"]) EXPECT_EQ(p["duty_ratio"], 1.0);
    const auto rows = csv_rows(sths::io::read_file(rec.string()));
    ASSERT_EQ(rows.size(), 5u);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"i", "q", "ideal_i", "ideal_q"}));
}

TEST(CliQam, Errors) {
    EXPECT_EQ(run({"qam", "--predistort", "circuit"}).code, 2);
    EXPECT_EQ(run({"qam", "--constellation", "/nonexistent.csv"}).code, 2);
    const auto in = temp_file("zero.csv");
    write(in, "0,0\n1,1\n");
    EXPECT_EQ(run({"qam", "--constellation", in.string()}).code, 2);
    EXPECT_EQ(run({"qam", "--predistort", "circuit", "--circuit", kRef + "/circuit_fit.json"}).code, 0);
}

TEST(CliVerify, DesignedSchedulesPass) {
    for (const auto& paths : {"4", "8"}) {
        const auto r = run({"verify", "--paths", paths, "--alpha-db", "-6"});
        EXPECT_EQ(r.code, 0) << r.out;
        EXPECT_NE(r.out.find("RESULT: PASS"), std::string::npos);
    }
}

TEST(CliVerify, HandEditedScheduleFailsMinusThird) {
    auto doc = json::parse(run({"design", "--alpha-db", "-3"}).out);
    for (auto& el : doc["elements"]) {
        const double t1 = el["paths"][0]["onset_pos_norm"];
        auto shift = [](double x) { return x - std::floor(x); };
        el["paths"][2]["onset_pos_norm"] = shift(t1 - 0.30);
        el["paths"][2]["onset_neg_norm"] = shift(t1 - 0.30 + 0.5);
        el["paths"][3]["onset_pos_norm"] = shift(t1 - 0.30 - 0.25);
        el["paths"][3]["onset_neg_norm"] = shift(t1 - 0.30 - 0.25 + 0.5);
    }
    const auto p = temp_file("edited.json");
    write(p, doc.dump());
    const auto r = run({"verify", "--schedule", p.string(), "--json"});
    EXPECT_EQ(r.code, sths::cli::kExitVerifyFailed);
    const auto rep = json::parse(r.out);
    EXPECT_FALSE(rep["passed"].get<bool>());
    bool saw = false;
    for (const auto& c : rep["checks"]) {
        if (c["name"] == "suppressed_m=-3") {
            saw = true;
            EXPECT_FALSE(c["passed"].get<bool>());
        }
        if (c["name"] == "dft_oracle") EXPECT_TRUE(c["passed"].get<bool>());
    }
    EXPECT_TRUE(saw);
}

TEST(CliVerify, CoarseSamplingUsesRelaxedTolerance) {
    const auto a = run({"verify", "--samples", "64", "--m-max", "25"});
    EXPECT_EQ(a.code, 0) << a.out;
    EXPECT_EQ(a.out, run({"verify", "--samples", "64", "--m-max", "25"}).out);
    EXPECT_DOUBLE_EQ(sths::cli::oracle_tolerance(16384), 1e-6);
    EXPECT_DOUBLE_EQ(sths::cli::oracle_tolerance(64), 1e-6 * 256.0 * 256.0);
    EXPECT_EQ(run({"verify", "--samples", "32"}).code, 2);
    EXPECT_EQ(run({"verify", "--samples", "64", "--m-max", "40"}).code, 2);
}

TEST(CliVerify, SuppressedSet) {
    const auto s = sths::cli::suppressed_harmonics(4, 7);
    const std::vector<int> expected{-6, -5, -4, -3, -2, -1, 2, 3, 4, 6, 7};
    EXPECT_EQ(s, expected);
    const auto e = sths::cli::suppressed_harmonics(8, 7);
    EXPECT_NE(std::find(e.begin(), e.end(), 5), e.end());
}

TEST(Io, ConstellationParsing) {
    std::istringstream a("# comment\ni,q\n1, 2\n-3,0.5\n");
    const auto pts = sths::io::parse_constellation(a);
    ASSERT_EQ(pts.size(), 2u);
    EXPECT_EQ(pts[1], sths::complex(-3, 0.5));
    std::istringstream b("1,2\nx,y\n");
    EXPECT_THROW(sths::io::parse_constellation(b), sths::io::FormatError);
    std::istringstream c("");
    EXPECT_THROW(sths::io::parse_constellation(c), sths::io::FormatError);
}

TEST(Io, CircuitParamsForms) {
    const auto p = sths::io::parse_circuit_params(
        R"({"supply_voltage":1.2,"bias_current":0.01,"peak_voltage":0.6,"load_resistance":50,"width_m":1e-4})", 1e9);
    EXPECT_NEAR(p.switch_capacitance, 35e-15, 1e-27);
    EXPECT_EQ(p.pulse_freq, 1e9);
    const auto q = sths::io::parse_circuit_params(sths::io::read_file(kRef + "/circuit_fit.json"), 2e9);
    EXPECT_EQ(q.pulse_freq, 2e9);
    EXPECT_GT(q.switch_resistance, 0.0);
}

TEST(Io, Fmt15) {
    EXPECT_EQ(sths::io::fmt15(1.0 / 3.0), "0.333333333333333");
    EXPECT_EQ(sths::io::fmt15(-0.0), "0");
    EXPECT_EQ(sths::io::fmt15(77e9), "77000000000");
    EXPECT_EQ(sths::io::round15(0.1 + 0.2), 0.3);
}
