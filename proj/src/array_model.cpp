#include "sths/array_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace sths {

namespace {

constexpr double kTimeEps = 1e-12;

double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

// Kernel CDFs with the kernel measured in units of one bin.
double box_cdf(double u) {
    if (u <= -0.5) return 0.0;
    if (u >= 0.5) return 1.0;
    return u + 0.5;
}

double triangle_cdf(double u) {
    if (u <= -1.0) return 0.0;
    if (u >= 1.0) return 1.0;
    if (u < 0.0) return 0.5 * (1.0 + u) * (1.0 + u);
    return 1.0 - 0.5 * (1.0 - u) * (1.0 - u);
}

// Kernel-weighted average of the indicator of the circular interval
// [start, start + width) around normalized time x.
double weighted_indicator(SamplingKernel kernel, double start, double width, double x, double bins) {
    if (kernel == SamplingKernel::midpoint) {
        return wrap_unit(x - start) < width ? 1.0 : 0.0;
    }
    const auto cdf = kernel == SamplingKernel::box ? box_cdf : triangle_cdf;
    double acc = 0.0;
    for (int shift = -1; shift <= 1; ++shift) {
        const double lo = (start + shift - x) * bins;
        const double hi = (start + width + shift - x) * bins;
        acc += cdf(hi) - cdf(lo);
    }
    return acc;
}

// Onsets live on a 2^-50 grid so adding whole periods and wrapping back is
// exact in double precision.
double onset_on_grid(double x) {
    constexpr double kScale = 1125899906842624.0;  // 2^50
    return wrap_unit(std::nearbyint(wrap_unit(x) * kScale) / kScale);
}

bool circular_gap_ok(double from, double to, double width) {
    return wrap_unit(to - from) + kTimeEps >= width;
}

}  // namespace

double wrap_unit(double x) {
    double r = x - std::floor(x);
    // floor can leave r == 1.0 for tiny negative x
    return r >= 1.0 ? 0.0 : r;
}

double ArrayConfig::excitation(int n) const {
    if (excitations.empty()) return 1.0;
    return excitations.at(static_cast<std::size_t>(n));
}

ArrayConfig ArrayConfig::uniform(int n_elements, double spacing_wavelengths, double carrier_freq_hz,
                                 double pulse_freq_hz, int path_count) {
    ArrayConfig c;
    c.n_elements = n_elements;
    c.carrier_freq_hz = carrier_freq_hz;
    c.pulse_freq_hz = pulse_freq_hz;
    c.element_spacing_m = spacing_wavelengths * kSpeedOfLight / carrier_freq_hz;
    c.path_count = path_count;
    return c;
}

PulseTrain::PulseTrain(double period_s, double width_norm, double onset_pos_norm, double onset_neg_norm)
    : period_s_(period_s),
      width_(width_norm),
      onset_pos_(onset_on_grid(onset_pos_norm)),
      onset_neg_(onset_on_grid(onset_neg_norm)) {
    if (!(period_s > 0.0)) throw std::invalid_argument("pulse period must be positive");
    if (!(width_norm >= 0.0 && width_norm < 1.0)) {
        throw std::invalid_argument("pulse width must lie in [0, T_p)");
    }
}

PulseTrain PulseTrain::from_seconds(double period_s, double width_s, double onset_pos_s, double onset_neg_s) {
    if (!(period_s > 0.0)) throw std::invalid_argument("pulse period must be positive");
    return {period_s, width_s / period_s, onset_pos_s / period_s, onset_neg_s / period_s};
}

bool PulseTrain::pulses_overlap() const {
    if (width_ == 0.0) return false;
    return !(circular_gap_ok(onset_pos_, onset_neg_, width_) && circular_gap_ok(onset_neg_, onset_pos_, width_));
}

int PulseTrain::value_at(double x_norm) const {
    int v = 0;
    if (wrap_unit(x_norm - onset_pos_) < width_) v += 1;
    if (wrap_unit(x_norm - onset_neg_) < width_) v -= 1;
    return v;
}

std::string Violation::to_string() const {
    std::ostringstream os;
    if (element >= 0) os << "element " << element << ": ";
    if (path >= 0) os << "path " << path << ": ";
    os << rule;
    return os.str();
}

std::vector<Violation> validate(const ArrayConfig& c) {
    std::vector<Violation> out;
    auto add = [&](std::string rule) { out.push_back({-1, -1, std::move(rule)}); };
    if (c.n_elements < 1) add("n_elements must be positive");
    if (!(c.element_spacing_m > 0.0)) add("element spacing must be positive");
    if (!(c.carrier_freq_hz > 0.0)) add("carrier frequency must be positive");
    if (!(c.pulse_freq_hz > 0.0)) add("pulse frequency must be positive");
    if (c.carrier_freq_hz > 0.0 && c.pulse_freq_hz > 0.0 &&
        c.carrier_freq_hz / c.pulse_freq_hz < kMinCarrierToPulseRatio) {
        add("carrier must exceed 10x the pulse frequency");
    }
    if (c.if_freq_hz && !(c.pulse_freq_hz > 2.0 * *c.if_freq_hz)) {
        add("pulse frequency must exceed twice the IF frequency");
    }
    if (!c.excitations.empty()) {
        if (static_cast<int>(c.excitations.size()) != c.n_elements) add("excitation count does not match n_elements");
        if (std::any_of(c.excitations.begin(), c.excitations.end(), [](double v) { return !(v > 0.0); })) {
            add("excitations must be positive");
        }
    }
    if (c.path_count != 4 && c.path_count != 8) add("path count must be 4 or 8");
    return out;
}

std::vector<Violation> validate(const ArraySchedule& s) {
    auto out = validate(s.config);
    auto add = [&](int e, int p, std::string rule) { out.push_back({e, p, std::move(rule)}); };

    if (!(s.duty_ratio > 0.0 && s.duty_ratio <= 1.0)) add(-1, -1, "duty ratio outside (0, 1]");
    if (static_cast<int>(s.elements.size()) != s.config.n_elements) {
        add(-1, -1, "element count does not match config");
    }
    const double period = s.config.pulse_freq_hz > 0.0 ? s.config.pulse_period_s() : 0.0;
    const double expected_width = s.duty_ratio / 3.0;

    for (std::size_t ei = 0; ei < s.elements.size(); ++ei) {
        const auto& el = s.elements[ei];
        const int e = static_cast<int>(ei);
        if (el.index != e) add(e, -1, "element index out of order");
        if (static_cast<int>(el.paths.size()) != s.config.path_count) add(e, -1, "path count does not match config");

        for (std::size_t pi = 0; pi < el.paths.size(); ++pi) {
            const int p = static_cast<int>(pi);
            const auto& path = el.paths[pi];
            const auto& train = path.train;
            for (std::size_t qi = 0; qi < pi; ++qi) {
                const double d = wrap_unit((el.paths[qi].phase_rad - path.phase_rad) / (2.0 * kPi));
                if (d < 1e-9 || d > 1.0 - 1e-9) {
                    add(e, p, "phases not distinct");
                    break;
                }
            }
            if (period > 0.0 && std::abs(train.period_s() - period) > 1e-9 * period) {
                add(e, p, "period differs from 1/f_p");
            }
            if (!(train.width_norm() > 0.0)) add(e, p, "width must be positive");
            if (train.width_norm() > 1.0 / 3.0 + kTimeEps) add(e, p, "width exceeds T_p/3");
            if (std::abs(train.width_norm() - expected_width) > 1e-9) add(e, p, "width differs from alpha*T_p/3");
            if (train.pulses_overlap()) add(e, p, "positive and negative pulses overlap");
            if (pi > 0 && std::abs(train.width_norm() - el.paths[0].train.width_norm()) > 1e-12) {
                add(e, p, "width differs between paths");
            }
        }
    }
    return out;
}

std::vector<complex> synthesize_envelope(const ElementSchedule& element, int samples_per_period,
                                         SamplingKernel kernel) {
    if (samples_per_period < 64) throw std::invalid_argument("samples_per_period must be at least 64");
    for (const auto& path : element.paths) {
        if (path.train.pulses_overlap()) {
            throw std::invalid_argument("element " + std::to_string(element.index) +
                                        ": positive and negative pulses overlap");
        }
    }
    const double bins = samples_per_period;
    std::vector<complex> out(static_cast<std::size_t>(samples_per_period));
    for (const auto& path : element.paths) {
        const complex rot = std::polar(1.0, path.phase_rad);
        const auto& tr = path.train;
        for (int k = 0; k < samples_per_period; ++k) {
            const double x = (k + 0.5) / bins;
            const double v = weighted_indicator(kernel, tr.onset_pos_norm(), tr.width_norm(), x, bins) -
                             weighted_indicator(kernel, tr.onset_neg_norm(), tr.width_norm(), x, bins);
            if (v != 0.0) out[static_cast<std::size_t>(k)] += v * rot;
        }
    }
    return out;
}

double kernel_response(SamplingKernel kernel, int m, int samples_per_period) {
    const double s = sinc(kPi * m / samples_per_period);
    switch (kernel) {
        case SamplingKernel::midpoint: return 1.0;
        case SamplingKernel::box: return s;
        case SamplingKernel::triangle: return s * s;
    }
    return 1.0;
}

complex envelope_dft(const std::vector<complex>& samples, int m, SamplingKernel kernel) {
    const auto n = static_cast<long long>(samples.size());
    if (n == 0) throw std::invalid_argument("empty sample vector");
    // Phase of bin k is -pi * m * (2k + 1) / n; reduce the integer numerator
    // modulo 2n so the angle stays exact for large k.
    complex acc{0.0, 0.0};
    const long long two_n = 2 * n;
    const long long mm = ((static_cast<long long>(m) % two_n) + two_n) % two_n;
    for (long long k = 0; k < n; ++k) {
        const long long r = (mm * (2 * k + 1)) % two_n;
        acc += samples[static_cast<std::size_t>(k)] * std::polar(1.0, -kPi * static_cast<double>(r) / n);
    }
    acc /= static_cast<double>(n);
    return acc / kernel_response(kernel, m, static_cast<int>(n));
}

}  // namespace sths
