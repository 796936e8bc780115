#pragma once

#include <map>
#include <optional>
#include <vector>

#include "sths/array_model.hpp"

namespace sths {

/// Default harmonic truncation for spectra.
inline constexpr int kDefaultMaxHarmonic = 101;
/// Powers below this fraction of the total are reported as zero.
inline constexpr double kPowerClampFraction = 1e-15;
/// Reported dB floor; matches the power clamp.
inline constexpr double kDbFloor = -150.0;

struct HarmonicCoefficient {
    int harmonic_index = 0;
    std::vector<complex> per_element;
};

struct HarmonicSpectrum {
    std::map<int, HarmonicCoefficient> coefficients;
    std::map<int, double> powers;
    double total_power = 0.0;
    double efficiency = 0.0;
};

/// Unnormalized sinc, sin(x)/x with sinc(0) = 1.
double sinc(double x);

/// Exact Fourier coefficient at harmonic m of one path's bipolar pulse train,
/// rotated by the path phase.
complex path_coefficient(const PulseTrain& train, double path_phase_rad, int m);

/// A_mn: sum of path coefficients of one element.
complex combined_coefficient(const ElementSchedule& element, int m);

/// AF_m(theta) with the carrier time factor dropped.
complex array_factor(const ArraySchedule& schedule, int m, double theta_rad);

/// Radiated power of harmonic m including inter-element coupling through
/// sinc(beta d (n - s)). Throws std::runtime_error if the quadratic form
/// leaves an imaginary residue above 1e-9 (relative).
double harmonic_power(const ArraySchedule& schedule, int m);

/// Total radiated power over all harmonics, integrated exactly in the time
/// domain over the piecewise-constant envelopes.
double total_power(const ArraySchedule& schedule);

/// P_(1) / P_tot. Throws std::domain_error("zero radiated power") when the
/// schedule radiates nothing.
double harmonic_efficiency(const ArraySchedule& schedule);

HarmonicSpectrum harmonic_spectrum(const ArraySchedule& schedule, int max_harmonic = kDefaultMaxHarmonic);

struct PatternTable {
    std::vector<double> theta_rad;
    std::vector<int> harmonics;
    /// db[i][j]: harmonic j at angle i, relative to the reference, floored.
    std::vector<std::vector<double>> db;
    double reference = 0.0;
};

/// Normalized far-field patterns 20 log10(|AF_m| / ref). Without an explicit
/// reference, ref is the peak of |AF_1| over the grid.
PatternTable radiation_pattern(const ArraySchedule& schedule, const std::vector<int>& harmonics,
                               const std::vector<double>& theta_grid_rad,
                               std::optional<double> reference = std::nullopt);

/// Peak of |AF_m| over theta in [-90, 90] deg on a uniform grid.
double pattern_peak(const ArraySchedule& schedule, int m, double step_deg = 0.01);

/// Strongest undesired harmonic (m != 1, |m| <= max_harmonic) pattern peak
/// relative to the first harmonic's peak, in dB.
double sideband_level(const ArraySchedule& schedule, int max_harmonic, double step_deg = 0.01);

/// Uniform angle grid from min to max inclusive, in radians.
std::vector<double> angle_grid_deg(double min_deg, double max_deg, double step_deg);

}  // namespace sths
