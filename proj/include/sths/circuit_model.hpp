#pragma once

#include <optional>
#include <vector>

#include "sths/array_model.hpp"

namespace sths {

/// Behavioral parameters of one time-modulated PA cell.
struct CircuitParams {
    double supply_voltage = 0.0;      // V_DD, volts
    double bias_current = 0.0;        // I_DD, amperes
    double peak_voltage = 0.0;        // v_pk, volts
    double load_resistance = 0.0;     // R_L, ohms
    double switch_resistance = 0.0;   // R_sw, ohms (OFF-state leakage path)
    double switch_capacitance = 0.0;  // C_sw, farads
    double pulse_freq = 0.0;          // f_p, Hz
};

/// Switching-transistor densities; C_sw and R_sw scale with width W.
struct DensityParams {
    double cap_per_width = 0.0;    // F/m
    double res_times_width = 0.0;  // ohm*m
    double width = 0.0;            // m
};

/// Densities extracted for the 65-nm switching device.
inline constexpr double kCapPerWidth = 0.35e-9;
inline constexpr double kResTimesWidth = 5.4;

/// Throws std::invalid_argument unless all fields are positive (C_sw may be
/// zero) and v_pk <= V_DD.
void check(const CircuitParams& p);

CircuitParams params_from_width(const DensityParams& density, double supply_voltage, double bias_current,
                                double peak_voltage, double load_resistance, double pulse_freq);

/// Period-averaged powers in watts for a cell active a fraction `duty` of the time.
struct PowerBreakdown {
    double on_output = 0.0;
    double on_dc = 0.0;
    double leakage = 0.0;
    double dynamic = 0.0;

    double dc_total() const { return on_dc + leakage + dynamic; }
};

/// Largest duty accepted: two pulses of T_p/3 per period.
inline constexpr double kMaxDuty = 2.0 / 3.0;

/// duty = 2 tau / T_p, in (0, 2/3].
PowerBreakdown power_breakdown(const CircuitParams& p, double duty);

/// Drain efficiency of the switched cell,
///   duty*P_out / (duty*P_DC + (1 - duty)*P_leak + P_dyn).
double circuit_efficiency(const CircuitParams& p, double duty);

/// Duty 2 tau / T_p for duty ratio alpha (tau = alpha T_p / 3).
inline double duty_from_alpha(double alpha) { return 2.0 * alpha / 3.0; }

/// eta = zeta_harm * zeta_circ; both inputs in [0, 1].
double total_drain_efficiency(double harmonic_eff, double circuit_eff);

struct PboRow {
    double alpha = 0.0;
    double zeta_harm = 0.0;
    std::optional<double> zeta_circ;
    std::optional<double> eta;
    double pbo_db = 0.0;
};

/// Efficiency and back-off over a grid of duty ratios. The first-harmonic
/// power reference is the alpha = 1 schedule. Circuit columns are filled only
/// when params are given.
std::vector<PboRow> pbo_sweep(const ArrayConfig& config, const std::optional<CircuitParams>& params,
                              double steer_angle_rad, const std::vector<double>& alpha_grid);

}  // namespace sths
