#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace sths {

using complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSpeedOfLight = 299'792'458.0;

/// Minimum carrier-to-pulse frequency ratio accepted as "f0 >> fp".
inline constexpr double kMinCarrierToPulseRatio = 10.0;

/// Linear array of isotropic, equally spaced elements driven by a
/// switched multi-path transmitter.
struct ArrayConfig {
    int n_elements = 1;
    double element_spacing_m = 0.0;
    double carrier_freq_hz = 0.0;
    double pulse_freq_hz = 0.0;
    std::optional<double> if_freq_hz;
    /// Per-element amplitude excitation. Empty means uniform (all 1).
    std::vector<double> excitations;
    int path_count = 4;

    double wavelength_m() const { return kSpeedOfLight / carrier_freq_hz; }
    double wavenumber() const { return 2.0 * kPi / wavelength_m(); }
    double pulse_period_s() const { return 1.0 / pulse_freq_hz; }
    double excitation(int n) const;

    /// Uniform array with spacing given in carrier wavelengths.
    static ArrayConfig uniform(int n_elements, double spacing_wavelengths, double carrier_freq_hz,
                               double pulse_freq_hz, int path_count);
};

/// Bipolar rectangular pulse train over one modulation period.
///
/// Onsets and width are kept normalized by the period, so the train value at
/// normalized time x is +1 on [onset_pos, onset_pos + width), -1 on
/// [onset_neg, onset_neg + width) (both circular) and 0 elsewhere.
class PulseTrain {
public:
    PulseTrain() = default;
    PulseTrain(double period_s, double width_norm, double onset_pos_norm, double onset_neg_norm);

    static PulseTrain from_seconds(double period_s, double width_s, double onset_pos_s,
                                   double onset_neg_s);

    double period_s() const { return period_s_; }
    double width_norm() const { return width_; }
    double onset_pos_norm() const { return onset_pos_; }
    double onset_neg_norm() const { return onset_neg_; }
    double width_s() const { return width_ * period_s_; }
    double onset_pos_s() const { return onset_pos_ * period_s_; }
    double onset_neg_s() const { return onset_neg_ * period_s_; }

    /// True when the positive and negative pulses share any instant.
    bool pulses_overlap() const;
    /// Train value (+1, -1 or 0) at normalized time x.
    int value_at(double x_norm) const;

private:
    double period_s_ = 1.0;
    double width_ = 0.0;
    double onset_pos_ = 0.0;
    double onset_neg_ = 0.0;
};

struct PathDrive {
    double phase_rad = 0.0;
    PulseTrain train;
};

struct ElementSchedule {
    int index = 0;
    std::vector<PathDrive> paths;
};

struct ArraySchedule {
    ArrayConfig config;
    double duty_ratio = 1.0;
    double steer_angle_rad = 0.0;
    std::vector<ElementSchedule> elements;
};

/// One broken invariant. element/path are -1 when the rule is not tied to one.
struct Violation {
    int element = -1;
    int path = -1;
    std::string rule;

    std::string to_string() const;
};

/// Wraps x into [0, 1).
double wrap_unit(double x);

std::vector<Violation> validate(const ArrayConfig& config);
std::vector<Violation> validate(const ArraySchedule& schedule);

/// How each envelope sample is taken from the continuous waveform.
enum class SamplingKernel {
    /// Instantaneous value at the bin midpoint.
    midpoint,
    /// Exact average over the bin.
    box,
    /// Exact triangular-weighted average over the two bins around the midpoint.
    triangle,
};

/// Combined complex envelope sum_paths e^{j phase} U_path(t) over one period,
/// sampled at S bins with sample k centered on (k + 1/2) / S.
std::vector<complex> synthesize_envelope(const ElementSchedule& element, int samples_per_period,
                                         SamplingKernel kernel = SamplingKernel::midpoint);

/// Frequency response of the sampling kernel at harmonic m for S samples.
double kernel_response(SamplingKernel kernel, int m, int samples_per_period);

/// Fourier coefficient at harmonic m estimated from sampled envelope values,
/// with the sampling kernel's response divided out.
complex envelope_dft(const std::vector<complex>& samples, int m,
                     SamplingKernel kernel = SamplingKernel::midpoint);

}  // namespace sths
