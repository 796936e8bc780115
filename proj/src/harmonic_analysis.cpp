#include "sths/harmonic_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sths {

namespace {

// Integral over one period of exp(-j 2 pi m x) across [start, start + width).
complex pulse_integral(double start, double width, int m) {
    if (m == 0) return {width, 0.0};
    const double pm = kPi * m;
    return std::polar(std::sin(pm * width) / pm, -pm * (2.0 * start + width));
}

std::vector<double> coupling_row_factors(const ArrayConfig& c) {
    // K[n - s] = sinc(beta d (n - s)) depends only on |n - s|.
    std::vector<double> k(static_cast<std::size_t>(c.n_elements));
    const double bd = c.wavenumber() * c.element_spacing_m;
    for (int i = 0; i < c.n_elements; ++i) k[static_cast<std::size_t>(i)] = sinc(bd * i);
    return k;
}

struct ElementCoefficients {
    std::vector<complex> weighted;  // I_n * A_mn
    std::vector<int> index;
};

ElementCoefficients element_coefficients(const ArraySchedule& schedule, int m) {
    ElementCoefficients ec;
    for (const auto& el : schedule.elements) {
        ec.weighted.push_back(schedule.config.excitation(el.index) * combined_coefficient(el, m));
        ec.index.push_back(el.index);
    }
    return ec;
}

complex steer_sum(const ElementCoefficients& ec, const ArrayConfig& c, double theta_rad) {
    const double step = c.wavenumber() * c.element_spacing_m * std::sin(theta_rad);
    complex acc{0.0, 0.0};
    for (std::size_t i = 0; i < ec.weighted.size(); ++i) acc += ec.weighted[i] * std::polar(1.0, step * ec.index[i]);
    return acc;
}

}  // namespace

double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

complex path_coefficient(const PulseTrain& train, double path_phase_rad, int m) {
    const complex pos = pulse_integral(train.onset_pos_norm(), train.width_norm(), m);
    const complex neg = pulse_integral(train.onset_neg_norm(), train.width_norm(), m);
    return std::polar(1.0, path_phase_rad) * (pos - neg);
}

complex combined_coefficient(const ElementSchedule& element, int m) {
    complex acc{0.0, 0.0};
    for (const auto& p : element.paths) acc += path_coefficient(p.train, p.phase_rad, m);
    return acc;
}

complex array_factor(const ArraySchedule& schedule, int m, double theta_rad) {
    return steer_sum(element_coefficients(schedule, m), schedule.config, theta_rad);
}

double harmonic_power(const ArraySchedule& schedule, int m) {
    const auto& c = schedule.config;
    const auto kernel = coupling_row_factors(c);
    std::vector<complex> a;
    std::vector<double> w;
    for (const auto& el : schedule.elements) {
        a.push_back(combined_coefficient(el, m));
        w.push_back(c.excitation(el.index));
    }
    complex acc{0.0, 0.0};
    double scale = 0.0;
    for (std::size_t n = 0; n < a.size(); ++n) {
        for (std::size_t s = 0; s < a.size(); ++s) {
            const int gap = std::abs(schedule.elements[n].index - schedule.elements[s].index);
            const complex term = w[n] * w[s] * kernel[static_cast<std::size_t>(gap)] * a[n] * std::conj(a[s]);
            acc += term;
            scale += std::abs(term);
        }
    }
    if (std::abs(acc.imag()) > 1e-9 * std::max(scale, 1e-300)) {
        throw std::runtime_error("harmonic power has a non-negligible imaginary part");
    }
    return std::max(acc.real(), 0.0);
}

double total_power(const ArraySchedule& schedule) {
    const auto& c = schedule.config;
    const auto kernel = coupling_row_factors(c);

    std::vector<double> cuts{0.0};
    for (const auto& el : schedule.elements) {
        for (const auto& p : el.paths) {
            const auto& t = p.train;
            for (double x : {t.onset_pos_norm(), t.onset_neg_norm()}) {
                cuts.push_back(x);
                cuts.push_back(wrap_unit(x + t.width_norm()));
            }
        }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    cuts.push_back(1.0);

    const std::size_t n_el = schedule.elements.size();
    std::vector<complex> env(n_el);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double len = cuts[i + 1] - cuts[i];
        if (len <= 0.0) continue;
        const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
        for (std::size_t n = 0; n < n_el; ++n) {
            complex e{0.0, 0.0};
            for (const auto& p : schedule.elements[n].paths) {
                if (int v = p.train.value_at(mid); v != 0) e += static_cast<double>(v) * std::polar(1.0, p.phase_rad);
            }
            env[n] = c.excitation(schedule.elements[n].index) * e;
        }
        double seg = 0.0;
        for (std::size_t n = 0; n < n_el; ++n) {
            for (std::size_t s = 0; s < n_el; ++s) {
                const int gap = std::abs(schedule.elements[n].index - schedule.elements[s].index);
                seg += kernel[static_cast<std::size_t>(gap)] * (env[n] * std::conj(env[s])).real();
            }
        }
        total += len * seg;
    }
    return std::max(total, 0.0);
}

double harmonic_efficiency(const ArraySchedule& schedule) {
    const double tot = total_power(schedule);
    if (!(tot > 0.0)) throw std::domain_error("zero radiated power");
    return std::clamp(harmonic_power(schedule, 1) / tot, 0.0, 1.0);
}

HarmonicSpectrum harmonic_spectrum(const ArraySchedule& schedule, int max_harmonic) {
    HarmonicSpectrum out;
    out.total_power = total_power(schedule);
    for (int m = -max_harmonic; m <= max_harmonic; ++m) {
        HarmonicCoefficient hc;
        hc.harmonic_index = m;
        for (const auto& el : schedule.elements) hc.per_element.push_back(combined_coefficient(el, m));
        out.coefficients.emplace(m, std::move(hc));
        double p = harmonic_power(schedule, m);
        if (p < kPowerClampFraction * out.total_power) p = 0.0;
        out.powers.emplace(m, p);
    }
    out.efficiency = out.total_power > 0.0 ? out.powers.at(1) / out.total_power : 0.0;
    return out;
}

PatternTable radiation_pattern(const ArraySchedule& schedule, const std::vector<int>& harmonics,
                               const std::vector<double>& theta_grid_rad, std::optional<double> reference) {
    if (theta_grid_rad.empty()) throw std::invalid_argument("empty angle grid");
    PatternTable t;
    t.theta_rad = theta_grid_rad;
    t.harmonics = harmonics;

    std::vector<std::vector<double>> mag(theta_grid_rad.size(), std::vector<double>(harmonics.size()));
    for (std::size_t j = 0; j < harmonics.size(); ++j) {
        const auto ec = element_coefficients(schedule, harmonics[j]);
        for (std::size_t i = 0; i < theta_grid_rad.size(); ++i) {
            mag[i][j] = std::abs(steer_sum(ec, schedule.config, theta_grid_rad[i]));
        }
    }
    if (reference) {
        t.reference = *reference;
    } else {
        const auto ec = element_coefficients(schedule, 1);
        for (double th : theta_grid_rad) t.reference = std::max(t.reference, std::abs(steer_sum(ec, schedule.config, th)));
    }
    if (!(t.reference > 0.0)) throw std::domain_error("pattern reference is zero");

    const double floor_ratio = std::pow(10.0, kDbFloor / 20.0);
    t.db.assign(theta_grid_rad.size(), std::vector<double>(harmonics.size()));
    for (std::size_t i = 0; i < mag.size(); ++i) {
        for (std::size_t j = 0; j < harmonics.size(); ++j) {
            const double r = mag[i][j] / t.reference;
            t.db[i][j] = r <= floor_ratio ? kDbFloor : 20.0 * std::log10(r);
        }
    }
    return t;
}

double pattern_peak(const ArraySchedule& schedule, int m, double step_deg) {
    const auto ec = element_coefficients(schedule, m);
    double peak = 0.0;
    for (double th : angle_grid_deg(-90.0, 90.0, step_deg)) {
        peak = std::max(peak, std::abs(steer_sum(ec, schedule.config, th)));
    }
    return peak;
}

double sideband_level(const ArraySchedule& schedule, int max_harmonic, double step_deg) {
    if (max_harmonic < 2) throw std::invalid_argument("max harmonic must be at least 2");
    const double desired = pattern_peak(schedule, 1, step_deg);
    if (!(desired > 0.0)) throw std::domain_error("first harmonic does not radiate");
    double worst = 0.0;
    for (int m = -max_harmonic; m <= max_harmonic; ++m) {
        if (m == 1) continue;
        worst = std::max(worst, pattern_peak(schedule, m, step_deg));
    }
    const double r = worst / desired;
    return r <= std::pow(10.0, kDbFloor / 20.0) ? kDbFloor : 20.0 * std::log10(r);
}

std::vector<double> angle_grid_deg(double min_deg, double max_deg, double step_deg) {
    if (!(step_deg > 0.0)) throw std::invalid_argument("angle step must be positive");
    if (min_deg > max_deg) throw std::invalid_argument("angle grid is empty (min > max)");
    const auto count = static_cast<std::size_t>(std::floor((max_deg - min_deg) / step_deg + 1e-9)) + 1;
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = (min_deg + static_cast<double>(i) * step_deg) * kPi / 180.0;
    return out;
}

}  // namespace sths
