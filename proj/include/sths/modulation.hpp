#pragma once

#include <optional>
#include <vector>

#include "sths/array_model.hpp"
#include "sths/circuit_model.hpp"

namespace sths {

struct SymbolPlan {
    complex symbol;
    double duty_ratio = 1.0;
    double carrier_phase = 0.0;
    double magnitude_target = 1.0;
};

/// Pre-distortion mode. Without circuit params the inversion targets the
/// ideal first-harmonic law; with them it also folds in the circuit
/// efficiency droop sqrt(zeta_circ(alpha) / zeta_circ(1)).
struct PredistortMode {
    std::optional<CircuitParams> circuit;

    static PredistortMode ideal() { return {}; }
    static PredistortMode with_circuit(const CircuitParams& p) { return {p}; }
};

/// First-harmonic amplitude relative to peak mode: sin(alpha pi/3) / sin(pi/3).
double amplitude_of_alpha(double alpha);

/// Duty ratio whose (optionally circuit-weighted) amplitude equals target.
/// Solved by bisection on (0, 1].
double predistort_alpha(double target_amplitude, const PredistortMode& mode = PredistortMode::ideal());

/// One plan per point. Without pre-distortion alpha follows the naive rule
/// 10 log10(alpha) = 20 log10(target).
std::vector<SymbolPlan> plan_constellation(const std::vector<complex>& points, bool predistort,
                                           const PredistortMode& mode = PredistortMode::ideal());

struct ConstellationResult {
    std::vector<complex> received;
    std::vector<complex> ideal;
    double evm_rms_percent = 0.0;
};

/// Transmits every plan through the designed array and reads the first
/// harmonic at the steering angle, normalized by the peak-mode response.
ConstellationResult simulate_constellation(const std::vector<SymbolPlan>& plans, const ArrayConfig& config,
                                           double steer_angle_rad);

/// RMS error vector magnitude relative to the RMS of the reference, in percent.
double evm_rms_percent(const std::vector<complex>& received, const std::vector<complex>& reference);

}  // namespace sths
