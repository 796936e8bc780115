#include "sths/modulation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/tools/roots.hpp>

#include "sths/harmonic_analysis.hpp"
#include "sths/schedule_design.hpp"

namespace sths {

namespace {

constexpr double kAlphaTolerance = 1e-14;

}  // namespace

double amplitude_of_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("duty ratio must lie in (0, 1]");
    return std::sin(alpha * kPi / 3.0) / std::sin(kPi / 3.0);
}

double predistort_alpha(double target, const PredistortMode& mode) {
    if (!(target > 0.0)) throw std::invalid_argument("target amplitude must be positive");
    if (target > 1.0) throw std::invalid_argument("target amplitude exceeds peak mode");

    std::optional<double> circ_peak;
    if (mode.circuit) circ_peak = circuit_efficiency(*mode.circuit, kMaxDuty);

    auto amplitude = [&](double alpha) {
        if (alpha <= 0.0) return 0.0;
        double a = amplitude_of_alpha(alpha);
        if (circ_peak) a *= std::sqrt(circuit_efficiency(*mode.circuit, duty_from_alpha(alpha)) / *circ_peak);
        return a;
    };
    auto residual = [&](double alpha) { return amplitude(alpha) - target; };

    const double hi = residual(1.0);
    if (hi == 0.0) return 1.0;
    if (!(residual(0.0) < 0.0 && hi > 0.0)) throw std::domain_error("target unreachable");

    auto done = [](double a, double b) { return b - a <= kAlphaTolerance; };
    const auto [lo_end, hi_end] = boost::math::tools::bisect(residual, 0.0, 1.0, done);
    return 0.5 * (lo_end + hi_end);
}

std::vector<SymbolPlan> plan_constellation(const std::vector<complex>& points, bool predistort,
                                           const PredistortMode& mode) {
    if (points.empty()) throw std::invalid_argument("empty constellation");
    double peak = 0.0;
    for (const auto& p : points) peak = std::max(peak, std::abs(p));
    if (!(peak > 0.0)) throw std::invalid_argument("constellation has zero peak magnitude");

    std::vector<SymbolPlan> plans;
    plans.reserve(points.size());
    for (const auto& p : points) {
        if (std::abs(p) == 0.0) throw std::invalid_argument("zero-magnitude symbol cannot be transmitted");
        SymbolPlan plan;
        plan.symbol = p;
        plan.magnitude_target = std::abs(p) / peak;
        plan.carrier_phase = std::arg(p);
        plan.duty_ratio = predistort ? predistort_alpha(plan.magnitude_target, mode)
                                     : plan.magnitude_target * plan.magnitude_target;
        plans.push_back(plan);
    }
    return plans;
}

double evm_rms_percent(const std::vector<complex>& received, const std::vector<complex>& reference) {
    if (received.size() != reference.size() || reference.empty()) {
        throw std::invalid_argument("EVM needs equally sized, non-empty vectors");
    }
    double err = 0.0;
    double ref = 0.0;
    for (std::size_t i = 0; i < reference.size(); ++i) {
        err += std::norm(received[i] - reference[i]);
        ref += std::norm(reference[i]);
    }
    if (!(ref > 0.0)) throw std::invalid_argument("reference constellation has zero power");
    return 100.0 * std::sqrt(err / ref);
}

ConstellationResult simulate_constellation(const std::vector<SymbolPlan>& plans, const ArrayConfig& config,
                                           double steer_angle_rad) {
    if (plans.empty()) throw std::invalid_argument("no symbol plans");
    const complex peak = array_factor(design_schedule(config, steer_angle_rad, 1.0), 1, steer_angle_rad);
    if (std::abs(peak) == 0.0) throw std::domain_error("peak-mode response is zero");

    double max_mag = 0.0;
    for (const auto& p : plans) max_mag = std::max(max_mag, std::abs(p.symbol));

    ConstellationResult out;
    for (const auto& p : plans) {
        const complex af = array_factor(design_schedule(config, steer_angle_rad, p.duty_ratio), 1, steer_angle_rad);
        // Shortening the pulses moves their centers by (1 - alpha) T_p / 6,
        // which the IF drive undoes along with applying the symbol phase.
        const double drive_phase = p.carrier_phase - kPi * (1.0 - p.duty_ratio) / 3.0;
        out.received.push_back(af / peak * std::polar(1.0, drive_phase));
        out.ideal.push_back(p.symbol / max_mag);
    }
    out.evm_rms_percent = evm_rms_percent(out.received, out.ideal);
    return out;
}

}  // namespace sths
