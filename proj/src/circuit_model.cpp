#include "sths/circuit_model.hpp"

#include <cmath>
#include <stdexcept>

#include "sths/harmonic_analysis.hpp"
#include "sths/schedule_design.hpp"

namespace sths {

namespace {

void check_duty(double duty) {
    if (!(duty > 0.0 && duty <= kMaxDuty + 1e-12)) throw std::invalid_argument("duty must lie in (0, 2/3]");
}

}  // namespace

void check(const CircuitParams& p) {
    for (double v : {p.supply_voltage, p.bias_current, p.peak_voltage, p.load_resistance, p.switch_resistance,
                     p.pulse_freq}) {
        if (!(v > 0.0)) throw std::invalid_argument("circuit parameters must be positive");
    }
    // C_sw = 0 and R_sw = inf describe the loss-free switch.
    if (!(p.switch_capacitance >= 0.0 && std::isfinite(p.switch_capacitance))) {
        throw std::invalid_argument("switch capacitance must be finite and non-negative");
    }
    if (p.peak_voltage > p.supply_voltage) throw std::invalid_argument("peak voltage exceeds supply voltage");
}

CircuitParams params_from_width(const DensityParams& d, double supply_voltage, double bias_current,
                                double peak_voltage, double load_resistance, double pulse_freq) {
    if (!(d.width > 0.0 && d.cap_per_width > 0.0 && d.res_times_width > 0.0)) {
        throw std::invalid_argument("density parameters and width must be positive");
    }
    CircuitParams p{supply_voltage,
                    bias_current,
                    peak_voltage,
                    load_resistance,
                    d.res_times_width / d.width,
                    d.cap_per_width * d.width,
                    pulse_freq};
    check(p);
    return p;
}

PowerBreakdown power_breakdown(const CircuitParams& p, double duty) {
    check(p);
    check_duty(duty);
    const double vdd2 = p.supply_voltage * p.supply_voltage;
    PowerBreakdown b;
    b.on_output = duty * p.peak_voltage * p.peak_voltage / (2.0 * p.load_resistance);
    b.on_dc = duty * p.supply_voltage * p.bias_current;
    b.leakage = (1.0 - duty) * vdd2 / p.switch_resistance;
    b.dynamic = p.pulse_freq * vdd2 * p.switch_capacitance;
    return b;
}

double circuit_efficiency(const CircuitParams& p, double duty) {
    check(p);
    check_duty(duty);
    const double vdd2 = p.supply_voltage * p.supply_voltage;
    const double p_out = p.peak_voltage * p.peak_voltage / (2.0 * p.load_resistance);
    const double p_dc = p.supply_voltage * p.bias_current;
    const double p_leak = vdd2 / p.switch_resistance;
    const double p_dyn = p.pulse_freq * vdd2 * p.switch_capacitance;
    // Losses divided through by duty so the loss-free case reduces to p_out / p_dc exactly.
    return p_out / (p_dc + ((1.0 - duty) * p_leak + p_dyn) / duty);
}

double total_drain_efficiency(double harmonic_eff, double circuit_eff) {
    if (!(harmonic_eff >= 0.0 && harmonic_eff <= 1.0 && circuit_eff >= 0.0 && circuit_eff <= 1.0)) {
        throw std::invalid_argument("efficiencies must lie in [0, 1]");
    }
    return harmonic_eff * circuit_eff;
}

std::vector<PboRow> pbo_sweep(const ArrayConfig& config, const std::optional<CircuitParams>& params,
                              double steer_angle_rad, const std::vector<double>& alpha_grid) {
    if (params) check(*params);
    const double p1_peak = harmonic_power(design_schedule(config, steer_angle_rad, 1.0), 1);
    std::vector<PboRow> rows;
    rows.reserve(alpha_grid.size());
    for (double alpha : alpha_grid) {
        const auto schedule = design_schedule(config, steer_angle_rad, alpha);
        PboRow r;
        r.alpha = alpha;
        r.zeta_harm = harmonic_efficiency(schedule);
        r.pbo_db = 10.0 * std::log10(harmonic_power(schedule, 1) / p1_peak);
        if (params) {
            r.zeta_circ = circuit_efficiency(*params, duty_from_alpha(alpha));
            r.eta = total_drain_efficiency(r.zeta_harm, *r.zeta_circ);
        }
        rows.push_back(r);
    }
    return rows;
}

}  // namespace sths
