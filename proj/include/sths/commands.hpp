#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "sths/array_model.hpp"

namespace sths::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitUsage = 2;

/// Runs the command line (without the program name). Normal output goes to
/// `out`; errors go to `err` as one-line JSON objects.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct VerifyCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct VerifyReport {
    std::vector<VerifyCheck> checks;
    bool passed() const;
};

/// Relative tolerance of the envelope-DFT oracle at S samples per period:
/// 1e-6 at 2^14, scaled by (2^14 / S)^2.
double oracle_tolerance(int samples_per_period);

/// Schedule validity, carrier and harmonic suppression, and analytic-vs-DFT
/// agreement for |m| <= m_max.
VerifyReport verify_schedule(const ArraySchedule& schedule, int m_max, int samples_per_period);

/// Harmonics the designed structure must cancel, 0 < |m| <= m_max.
std::vector<int> suppressed_harmonics(int path_count, int m_max);

}  // namespace sths::cli
