#include "sths/schedule_design.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace sths {

namespace {

struct FamilyPath {
    double phase_rad;
    double onset_offset;
};

// Base family in path order 0, -pi/2, -pi, -3pi/2.
constexpr FamilyPath kBaseFamily[] = {
    {0.0, 0.0},
    {-0.5 * kPi, kQuadratureOffset},
    {-kPi, kOpposedOffset},
    {-1.5 * kPi, kOpposedOffset + kQuadratureOffset},
};

std::string join(const std::vector<Violation>& vs) {
    std::string s;
    for (const auto& v : vs) {
        if (!s.empty()) s += "; ";
        s += v.to_string();
    }
    return s;
}

}  // namespace

double steering_onset(int n, double steer_angle_rad, const ArrayConfig& config) {
    if (!(std::abs(steer_angle_rad) < 0.5 * kPi)) {
        throw std::invalid_argument("steering angle must satisfy |theta| < 90 deg");
    }
    const double phase = n * config.wavenumber() * config.element_spacing_m * std::sin(steer_angle_rad);
    return wrap_unit(0.5 * (phase / kPi - 0.5));
}

std::vector<double> path_phases(int path_count) {
    std::vector<double> out;
    for (const auto& p : kBaseFamily) out.push_back(p.phase_rad);
    if (path_count == 8) {
        for (const auto& p : kBaseFamily) out.push_back(p.phase_rad - 0.25 * kPi);
    }
    return out;
}

ArraySchedule design_schedule(const ArrayConfig& config, double steer_angle_rad, double duty_ratio) {
    if (!(duty_ratio > 0.0 && duty_ratio <= 1.0)) throw std::invalid_argument("duty ratio must lie in (0, 1]");
    if (auto vs = validate(config); !vs.empty()) throw std::invalid_argument("invalid array config: " + join(vs));

    ArraySchedule s;
    s.config = config;
    s.duty_ratio = duty_ratio;
    s.steer_angle_rad = steer_angle_rad;
    const double period = config.pulse_period_s();
    const double width = duty_ratio * kPeakWidth;

    for (int n = 0; n < config.n_elements; ++n) {
        ElementSchedule el;
        el.index = n;
        const double t1 = steering_onset(n, steer_angle_rad, config);
        auto add_family = [&](double shift, double phase_shift) {
            for (const auto& p : kBaseFamily) {
                const double pos = t1 + shift + p.onset_offset;
                el.paths.push_back({p.phase_rad + phase_shift, PulseTrain(period, width, pos, pos + kPolarityOffset)});
            }
        };
        add_family(0.0, 0.0);
        if (config.path_count == 8) add_family(kEightPathOffset, -0.25 * kPi);
        s.elements.push_back(std::move(el));
    }
    return s;
}

double elimination_offset(int m, int k) {
    if (m == 0) throw std::invalid_argument("harmonic index m must be nonzero");
    return static_cast<double>(k) / std::abs(m);
}

double rotated_family_offset(int m, int k) {
    if (m == 0) throw std::invalid_argument("harmonic index m must be nonzero");
    return (8.0 * k + 3.0) / (8.0 * m);
}

}  // namespace sths
