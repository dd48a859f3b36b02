#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "spinphoton/cavity.hpp"

using namespace spinphoton;

namespace {

constexpr double kPi = std::numbers::pi;

double angle_distance(double a, double b) { return std::abs(wrap_phase(a - b)); }

CavityParams random_params(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    CavityParams p;
    p.kappa = 0.2 + 2.0 * u(rng);
    p.g = 20.0 * u(rng);
    p.gamma = 2.0 * u(rng);
    p.kappa_s = u(rng) < 0.5 ? 0.0 : u(rng);
    p.omega_c = u(rng) - 0.5;
    p.omega_x = p.omega_c + (u(rng) - 0.5);
    return p;
}

} // namespace

TEST(Reflect, ColdResonanceIsMinusOne) {
    const auto r = reflect(CavityParams{}, 0.0, false);
    EXPECT_NEAR(std::abs(r.r + 1.0), 0.0, 1e-15);
    EXPECT_NEAR(r.magnitude, 1.0, 1e-15);
    EXPECT_DOUBLE_EQ(r.phase, kPi);
}

TEST(Reflect, ColdHalfKappaIsMinusHalfPi) {
    const auto r = reflect(CavityParams{}, 0.5, false);
    EXPECT_NEAR(r.phase, -kPi / 2, 1e-12);
    EXPECT_NEAR(r.magnitude, 1.0, 1e-12);
}

TEST(Reflect, HotCavityNearUnity) {
    const auto r = reflect(CavityParams::relative(10.0, 0.1), 0.5, true);
    EXPECT_GE(r.magnitude, 0.99);
    EXPECT_LE(std::abs(r.phase), 0.05);
}

TEST(Reflect, PassivityAndColdUnitModulus) {
    std::mt19937_64 rng(21);
    for (int set = 0; set < 100; ++set) {
        const auto p = random_params(rng);
        for (int k = 0; k < 10000; ++k) {
            const double omega = p.omega_c + p.kappa * (-10.0 + 20.0 * k / 9999.0);
            ASSERT_LE(reflect(p, omega, true).magnitude, 1.0 + 1e-12);
            const double cold = reflect(p, omega, false).magnitude;
            ASSERT_LE(cold, 1.0 + 1e-12);
            if (p.kappa_s == 0.0) {
                ASSERT_NEAR(cold, 1.0, 1e-12);
            }
        }
    }
}

TEST(ColdPhase, ClosedFormExamples) {
    const CavityParams p;
    EXPECT_DOUBLE_EQ(cold_phase_closed_form(p, 0.0), kPi);
    EXPECT_NEAR(cold_phase_closed_form(p, 0.5), -kPi / 2, 1e-15);
    EXPECT_NEAR(cold_phase_closed_form(p, -0.5), kPi / 2, 1e-15);
}

TEST(ColdPhase, AgreesWithReflectModuloTwoPi) {
    CavityParams p;
    p.kappa = 1.7;
    p.omega_c = 0.3;
    for (int k = 0; k < 10001; ++k) {
        const double omega = p.omega_c + p.kappa * (-10.0 + 20.0 * k / 10000.0);
        ASSERT_LE(angle_distance(reflect(p, omega, false).phase, cold_phase_closed_form(p, omega)), 1e-9);
    }
}

TEST(ConditionalPhase, OperatingPointExamples) {
    EXPECT_NEAR(conditional_phase(CavityParams::relative(10.0, 0.1), 0.5), kPi / 2, 0.05);
    EXPECT_EQ(conditional_phase(CavityParams::relative(0.0, 0.1), 0.5), 0.0);
    const double d10 = std::abs(conditional_phase(CavityParams::relative(10.0, 0.1), 0.5) - kPi / 2);
    const double d100 = std::abs(conditional_phase(CavityParams::relative(100.0, 0.01), 0.5) - kPi / 2);
    EXPECT_LT(d100, d10);
}

TEST(HotCavity, ApproachesIdealMonotonically) {
    double prev_loss = 1.0;
    double prev_phase = kPi;
    for (double g : {2.0, 5.0, 10.0, 50.0}) {
        const auto r = reflect(CavityParams::relative(g, 0.1), 0.5, true);
        EXPECT_LT(1.0 - r.magnitude, prev_loss) << g;
        EXPECT_LT(std::abs(r.phase), prev_phase) << g;
        prev_loss = 1.0 - r.magnitude;
        prev_phase = std::abs(r.phase);
    }
}

TEST(OperatingPoint, IdealLimitIsHalfKappa) {
    const double d = find_operating_point(CavityParams::relative(1e4, 1e-4), kPi / 2);
    EXPECT_NEAR(d, 0.5, 1e-4);
}

TEST(OperatingPoint, RealisticWithinTenPercent) {
    const auto p = CavityParams::relative(10.0, 0.1);
    const double d = find_operating_point(p, kPi / 2);
    EXPECT_NEAR(d, 0.5, 0.05);
    EXPECT_NEAR(conditional_phase(p, p.omega_c + d), kPi / 2, 1e-9);
}

TEST(OperatingPoint, SmallTargetMovesFarOut) {
    const auto p = CavityParams::relative(50.0, 0.01);
    EXPECT_GT(find_operating_point(p, 0.5), find_operating_point(p, kPi / 2));
    EXPECT_GT(find_operating_point(p, 0.5), 1.0);
}

TEST(OperatingPoint, Errors) {
    EXPECT_THROW((void)find_operating_point(CavityParams::relative(0.5, 0.1), kPi / 2), std::invalid_argument);
    EXPECT_THROW((void)find_operating_point(CavityParams::relative(10.0, 0.1), 0.0), std::invalid_argument);
    EXPECT_THROW((void)find_operating_point(CavityParams::relative(10.0, 0.1), kPi), std::invalid_argument);
    try {
        // Below 5 kappa detuning the conditional phase never drops this low.
        (void)find_operating_point(CavityParams::relative(10.0, 0.1), 1e-3);
        FAIL() << "expected target phase unreachable";
    } catch (const std::runtime_error& e) {
        EXPECT_STREQ(e.what(), "target phase unreachable");
    }
}

TEST(CavityParams, Validation) {
    CavityParams p;
    p.kappa = 0.0;
    EXPECT_THROW(p.validate(), std::invalid_argument);
    p = CavityParams{};
    p.gamma = -1.0;
    EXPECT_THROW(p.validate(), std::invalid_argument);
    p = CavityParams{};
    p.g = std::nan("");
    EXPECT_THROW(p.validate(), std::invalid_argument);
    EXPECT_TRUE(CavityParams::relative(10.0, 0.1).strong_coupling());
    EXPECT_FALSE(CavityParams::relative(0.5, 0.1).strong_coupling());
}

TEST(WrapPhase, PrincipalValue) {
    EXPECT_DOUBLE_EQ(wrap_phase(kPi), kPi);
    EXPECT_DOUBLE_EQ(wrap_phase(-kPi), kPi);
    EXPECT_NEAR(wrap_phase(3 * kPi / 2), -kPi / 2, 1e-15);
}
