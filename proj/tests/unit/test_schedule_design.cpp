#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "sths/harmonic_analysis.hpp"
#include "sths/schedule_design.hpp"

using namespace sths;

namespace {

constexpr double kDeg = kPi / 180.0;

ArrayConfig config(int n = 5, int paths = 4) { return ArrayConfig::uniform(n, 0.5, 77e9, 1e9, paths); }

double circ_diff(double a, double b) {
    const double d = wrap_unit(a - b);
    return d > 0.5 ? d - 1.0 : d;
}

}  // namespace

TEST(SteeringOnset, ReferenceValues) {
    const auto c = config();
    EXPECT_NEAR(steering_onset(0, 35 * kDeg, c), 0.75, 1e-15);
    EXPECT_NEAR(steering_onset(3, 0.0, c), 0.75, 1e-15);
    EXPECT_NEAR(steering_onset(1, 20 * kDeg, c), wrap_unit(0.5 * (std::sin(20 * kDeg) - 0.5)), 1e-15);
    EXPECT_NEAR(steering_onset(1, 20 * kDeg, c), 0.9210, 5e-5);
    EXPECT_THROW(steering_onset(1, 90 * kDeg, c), std::invalid_argument);
}

TEST(SteeringOnset, MaximizesFirstHarmonicTowardTarget) {
    // Brute force: sweep element 1's onset and keep the one maximizing
    // |A_10 + A_11 e^{j pi sin(theta)}| with element 0 fixed.
    const auto c = ArrayConfig::uniform(2, 0.5, 77e9, 1e9, 4);
    const double theta = 20 * kDeg;
    const double w = 1.0 / 3.0;
    const double t0 = steering_onset(0, theta, c);
    double best = -1.0, best_t = 0.0;
    for (int k = 0; k < 20000; ++k) {
        const double t = k / 20000.0;
        const auto af = oracle::designed_4path(1, t0, w) + oracle::designed_4path(1, t, w) * std::polar(1.0, kPi * std::sin(theta));
        if (std::abs(af) > best) {
            best = std::abs(af);
            best_t = t;
        }
    }
    EXPECT_LT(std::abs(circ_diff(best_t, steering_onset(1, theta, c))), 1e-4);
}

TEST(DesignSchedule, ReferenceElementZero) {
    const auto s = design_schedule(config(), 20 * kDeg, 1.0);
    ASSERT_EQ(s.elements.size(), 5u);
    const auto& p = s.elements[0].paths;
    ASSERT_EQ(p.size(), 4u);
    EXPECT_NEAR(p[0].train.onset_pos_norm(), 0.75, 1e-15);
    EXPECT_NEAR(p[0].train.onset_neg_norm(), 0.25, 1e-15);
    EXPECT_NEAR(p[0].train.width_norm(), 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(p[2].phase_rad, -kPi, 1e-15);
    EXPECT_NEAR(p[2].train.onset_pos_norm(), 0.75 - 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(p[2].train.onset_neg_norm(), 0.75 - 1.0 / 3.0 + 0.5, 1e-15);
    // quadrature paths trail the first two by T_p/4
    EXPECT_NEAR(circ_diff(p[1].train.onset_pos_norm(), p[0].train.onset_pos_norm()), -0.25, 1e-15);
    EXPECT_NEAR(circ_diff(p[3].train.onset_pos_norm(), p[2].train.onset_pos_norm()), -0.25, 1e-15);
}

TEST(DesignSchedule, StructuralRules) {
    for (int paths : {4, 8}) {
        for (double a : {1.0, 0.4, 0.05}) {
            const auto s = design_schedule(config(6, paths), -33 * kDeg, a);
            for (const auto& el : s.elements) {
                ASSERT_EQ(static_cast<int>(el.paths.size()), paths);
                for (const auto& p : el.paths) {
                    EXPECT_NEAR(std::abs(circ_diff(p.train.onset_neg_norm(), p.train.onset_pos_norm())), 0.5, 1e-12);
                    EXPECT_NEAR(p.train.width_norm(), a / 3.0, 1e-15);
                }
                if (paths == 8) {
                    for (int k = 0; k < 4; ++k) {
                        EXPECT_NEAR(circ_diff(el.paths[4 + k].train.onset_pos_norm(), el.paths[k].train.onset_pos_norm()),
                                    3.0 / 40.0, 1e-12);
                        EXPECT_NEAR(el.paths[4 + k].phase_rad, el.paths[k].phase_rad - kPi / 4.0, 1e-15);
                    }
                }
            }
        }
    }
}

TEST(DesignSchedule, RejectsBadInputs) {
    EXPECT_THROW(design_schedule(config(), 0.0, 0.0), std::invalid_argument);
    EXPECT_THROW(design_schedule(config(), 0.0, 1.01), std::invalid_argument);
    auto c = config();
    c.path_count = 6;
    EXPECT_THROW(design_schedule(c, 0.0, 1.0), std::invalid_argument);
}

TEST(DesignSchedule, SuppressionSetAcrossAnglesAndDuty) {
    for (int paths : {4, 8}) {
        for (double theta : {-50.0, 0.0, 20.0, 61.0}) {
            for (double a : {1.0, 0.8, 0.5, 0.126, 0.01}) {
                const auto s = design_schedule(config(5, paths), theta * kDeg, a);
                for (const auto& el : s.elements) {
                    const double a1 = std::abs(combined_coefficient(el, 1));
                    for (int m = -25; m <= 25; ++m) {
                        const bool even = m % 2 == 0;
                        const bool triple = m % 3 == 0;
                        const bool quad = ((m % 4) + 4) % 4 == 3;
                        const bool five = paths == 8 && m == 5;
                        if (even || triple || quad || five) {
                            EXPECT_LT(std::abs(combined_coefficient(el, m)), 1e-12 * a1)
                                << "paths=" << paths << " theta=" << theta << " alpha=" << a << " m=" << m;
                        }
                    }
                }
            }
        }
    }
}

TEST(DesignSchedule, MatchesFactoredClosedForm) {
    const auto c = config();
    for (double a : {1.0, 0.63, 0.2}) {
        const auto s = design_schedule(c, 20 * kDeg, a);
        for (int n = 0; n < 5; ++n) {
            const double t1 = steering_onset(n, 20 * kDeg, c);
            for (int m = -25; m <= 25; ++m) {
                EXPECT_NEAR(std::abs(combined_coefficient(s.elements[n], m) - oracle::designed_4path(m, t1, a / 3.0)), 0.0, 1e-12);
            }
        }
    }
}

TEST(DesignSchedule, MagnitudesIndependentOfPulseFrequency) {
    const auto a = design_schedule(ArrayConfig::uniform(4, 0.5, 77e9, 1e9, 8), 15 * kDeg, 0.7);
    const auto b = design_schedule(ArrayConfig::uniform(4, 0.5, 77e9, 3e9, 8), 15 * kDeg, 0.7);
    for (std::size_t n = 0; n < a.elements.size(); ++n) {
        for (int m = -15; m <= 15; ++m) {
            EXPECT_NEAR(std::abs(combined_coefficient(a.elements[n], m)), std::abs(combined_coefficient(b.elements[n], m)), 1e-14);
        }
        EXPECT_NEAR(a.elements[n].paths[2].train.onset_pos_norm(), b.elements[n].paths[2].train.onset_pos_norm(), 1e-15);
    }
}

TEST(EliminationOffset, Values) {
    EXPECT_NEAR(elimination_offset(-3, -1), -1.0 / 3.0, 1e-15);
    EXPECT_EQ(elimination_offset(7, 0), 0.0);
    EXPECT_NEAR(elimination_offset(5, 2), 0.4, 1e-15);
    EXPECT_THROW(elimination_offset(0, 1), std::invalid_argument);
    EXPECT_NEAR(rotated_family_offset(5, 0), 3.0 / 40.0, 1e-15);
    EXPECT_THROW(rotated_family_offset(0, 0), std::invalid_argument);
}

TEST(EliminationOffset, CancelsTargetHarmonicBetweenOpposedPaths) {
    // Two equal-width trains on phase-opposed paths separated by k/|m|.
    for (int m : {3, -5, 7, -9}) {
        for (int k : {-1, 1, 2}) {
            ElementSchedule el;
            const double t = 0.1, w = 0.07;
            const double s = t - elimination_offset(m, k);
            el.paths.push_back({0.0, PulseTrain(1.0, w, t, t + 0.5)});
            el.paths.push_back({-kPi, PulseTrain(1.0, w, s, s + 0.5)});
            EXPECT_LT(std::abs(oracle::coefficient(el, m)), 1e-14) << m << " " << k;
        }
    }
}

TEST(EliminationOffset, RotatedFamilyCancelsFifth) {
    const auto s = design_schedule(config(1, 8), 0.0, 0.45);
    EXPECT_LT(std::abs(oracle::coefficient(s.elements[0], 5)), 1e-14);
    EXPECT_GT(std::abs(oracle::coefficient(s.elements[0], 13)), 1e-3);
}

TEST(PathPhases, Order) {
    const auto p4 = path_phases(4);
    ASSERT_EQ(p4.size(), 4u);
    EXPECT_NEAR(p4[3], -1.5 * kPi, 1e-15);
    const auto p8 = path_phases(8);
    ASSERT_EQ(p8.size(), 8u);
    EXPECT_NEAR(p8[7], -1.75 * kPi, 1e-15);
}
