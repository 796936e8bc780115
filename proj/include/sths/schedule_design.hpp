#pragma once

#include "sths/array_model.hpp"

namespace sths {

/// Peak-mode pulse width in units of T_p. Kills every harmonic m = 3k.
inline constexpr double kPeakWidth = 1.0 / 3.0;
/// Negative pulse trails the positive one by half a period (even harmonics).
inline constexpr double kPolarityOffset = 0.5;
/// Quadrature path onset shift (harmonics m = 4k - 1).
inline constexpr double kQuadratureOffset = -0.25;
/// Phase-opposed path onset shift (harmonics m = 3k at any duty ratio).
inline constexpr double kOpposedOffset = -1.0 / 3.0;
/// Onset shift of the 45-degree path family in 8-path mode (harmonic m = 5).
inline constexpr double kEightPathOffset = 3.0 / 40.0;

/// Positive-pulse onset of element n (0-based), normalized into [0, 1), that
/// aligns the first harmonic toward steer_angle.
double steering_onset(int n, double steer_angle_rad, const ArrayConfig& config);

/// Closed-form STHS schedule for the given steering angle and duty ratio
/// alpha in (0, 1]. Pulse width is alpha * T_p / 3.
ArraySchedule design_schedule(const ArrayConfig& config, double steer_angle_rad, double duty_ratio);

/// Onset offset s - t (in units of T_p) between two equal-width trains on
/// phase-opposed paths that cancels harmonic m, i.e. k / |m|.
/// k = 0 yields 0, which cancels nothing.
double elimination_offset(int m, int k);

/// Onset offset r - t (in units of T_p) for a path family rotated by -pi/4
/// that cancels harmonic m against the base family: (8k + 3) / (8m).
double rotated_family_offset(int m, int k);

/// Path phases used by the designer, in path order.
std::vector<double> path_phases(int path_count);

}  // namespace sths
