#include "ribbonlab/errors.hpp"
#include "ribbonlab/plate.hpp"
#include "ribbonlab/rod.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace ribbonlab;
using namespace ribbonlab::rod;

namespace {

constexpr double kMin = 0.0506486799;

FrameField constant_rate_field(double flexure, double torsion, double length, int n) {
    FrameField f;
    const Vec3 w(torsion, -flexure, 0);
    for (int i = 0; i < n; ++i) {
        const double s = -0.5 * length + length * i / (n - 1);
        f.s.push_back(s);
        f.frames.push_back(rotation_exp((s + 0.5 * length) * w));
    }
    return f;
}

} // namespace

TEST(RodDensity, Coefficients) {
    const RodDensity d = RodDensity::make(0.37);
    EXPECT_NEAR(d.k, 6 / (pi * pi), 1e-12);
    EXPECT_NEAR(d.a_theta * d.a_theta + d.b_theta * d.b_theta, 1.0, 1e-12);
    EXPECT_LT((d.rotated_target() - d.printed_rotated_target()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(RodDensity, RequiresTwistModel) {
    const auto m = relaxation::relax_thickness(material::SplayBend{}, {});
    EXPECT_THROW(RodDensity::from_plate_model(m, 0.0), Error);
    EXPECT_THROW(RodDensity::make(pi), Error);
}

TEST(Classify, Examples) {
    EXPECT_EQ(classify(0.2, 0, RodDensity::make(0)), RodRegion::D);
    EXPECT_EQ(classify(0, 0, RodDensity::make(pi / 4)), RodRegion::U);
    for (double t : {0.0, 0.5, 1.3, 2.9}) EXPECT_EQ(classify(0, 10, RodDensity::make(t)), RodRegion::U);
}

TEST(RodDensityValue, Examples) {
    const RodDensity d = RodDensity::make(0);
    EXPECT_NEAR(rod_density(-d.k / 1.3, 0, d), kMin, 1e-9);
    EXPECT_NEAR(rod_density(0.2, 0, d), d.k * 0.2 / 3 + d.k * d.k / 12 * (2 - 1 / 1.3) + d.beta_T / 2, 1e-14);
    EXPECT_NEAR(rod_density(0.2, 0, d), 0.0911772, 1e-7);
    EXPECT_EQ(classify(d.k, 0, d), RodRegion::V);
    EXPECT_NEAR(rod_density(d.k, 0, d), d.k * d.k * (1.3 / 12 + 1.0 / 6 + 1.0 / 6) + d.beta_T / 2, 1e-14);
    EXPECT_NEAR(rod_density(d.k, 0, d), 0.1759726, 1e-7);
}

TEST(RodMinSet, Examples) {
    const RodMinSet m0 = rod_min_set(RodDensity::make(0));
    EXPECT_NEAR(m0.alpha_lo, -0.4676362, 1e-7);
    EXPECT_NEAR(m0.alpha_hi, 0.0, 1e-15);
    EXPECT_NEAR(m0.beta, 0.0, 1e-15);
    EXPECT_NEAR(m0.value, kMin, 1e-9);
    const RodMinSet m1 = rod_min_set(RodDensity::make(pi / 4));
    EXPECT_NEAR(m1.alpha_lo, -0.2338181, 1e-7);
    EXPECT_NEAR(m1.alpha_hi, 0.2338181, 1e-7);
    EXPECT_NEAR(m1.beta, 0.2338181, 1e-7);
}

TEST(RodMinSet, EqualsPlateMinimum) {
    const auto model = relaxation::relax_thickness(material::Twist{}, {});
    const auto cyl = plate::minimize_over_cylinders(model, relaxation::Quadratic2::from(model.params), {});
    for (double t : {0.0, 0.4, 1.0, 2.5})
        EXPECT_NEAR(rod_min_set(RodDensity::make(t)).value, cyl.energy_per_area, 1e-12);
}

TEST(RodMinSet, DensityAttainsValueOnWholeInterval) {
    for (double t : {0.0, 0.3, pi / 4, 1.2, 2.8}) {
        const RodDensity d = RodDensity::make(t);
        const RodMinSet m = rod_min_set(d);
        for (double s : {0.0, 0.25, 0.5, 0.75, 1.0}) EXPECT_NEAR(rod_density(m.alpha_at(s), m.beta, d), m.value, 1e-12);
    }
}

TEST(RodDensityProperty, LowerBoundBySampling) {
    std::mt19937 rng(41);
    std::uniform_real_distribution<double> theta(0, pi), x(-2, 2);
    for (int i = 0; i < 2000; ++i) {
        const RodDensity d = RodDensity::make(theta(rng));
        double a = x(rng);
        if (a == 0) a = 1e-3;
        EXPECT_GE(rod_density(a, x(rng), d), rod_min_set(d).value - 1e-12);
    }
}

TEST(RodDensityProperty, Symmetries) {
    std::mt19937 rng(43);
    std::uniform_real_distribution<double> theta(0.01, pi / 2 - 0.01), x(-1.5, 1.5);
    for (int i = 0; i < 1000; ++i) {
        const double t = theta(rng), a = x(rng), b = x(rng);
        const double v = rod_density(a, b, RodDensity::make(t));
        const double scale = std::max(1.0, std::abs(v));
        EXPECT_NEAR(v, rod_density(-a, b, RodDensity::make(pi / 2 - t)), 1e-12 * scale);
        EXPECT_NEAR(v, rod_density(-a, -b, RodDensity::make(std::fmod(t + pi / 2, pi))), 1e-12 * scale);
    }
}

TEST(RodDensityProperty, BranchShapes) {
    const RodDensity d = RodDensity::make(0.3);
    const double e = 1e-3;
    // D-branch affine: vanishing second differences.
    const double a = 0.3, b = 0.01;
    ASSERT_EQ(classify(a, b, d), RodRegion::D);
    EXPECT_NEAR(d_branch(a + e, b, d) - 2 * d_branch(a, b, d) + d_branch(a - e, b, d), 0.0, 1e-14);
    EXPECT_NEAR(d_branch(a, b + e, d) - 2 * d_branch(a, b, d) + d_branch(a, b - e, d), 0.0, 1e-14);
    // U-branch: parabola in beta, independent of alpha.
    EXPECT_EQ(u_branch(0.1, 0.4, d), u_branch(-0.2, 0.4, d));
    const double second = (u_branch(0, 0.4 + e, d) - 2 * u_branch(0, 0.4, d) + u_branch(0, 0.4 - e, d)) / (e * e);
    EXPECT_NEAR(second, 2 * d.mu / 3 * (1 + d.gamma), 1e-6);
}

TEST(RodDensityProperty, ContinuousAcrossRegionBoundaries) {
    std::mt19937 rng(47);
    std::uniform_real_distribution<double> theta(0, pi), ang(-pi, pi);
    const double delta = 1e-7;
    for (int i = 0; i < 2000; ++i) {
        const RodDensity d = RodDensity::make(theta(rng));
        const double c = d.k * d.a_theta / (1 + d.gamma);
        // boundary of D: circle alpha^2 + beta^2 = c alpha, centred at (c/2, 0)
        const double t = ang(rng);
        const double a = 0.5 * c + 0.5 * c * std::cos(t), b = 0.5 * std::abs(c) * std::sin(t);
        if (std::abs(a) < 1e-3) continue;
        EXPECT_NEAR(d_branch(a, b, d), v_branch(a, b, d), 1e-9);
        // boundary of U: beta^2 = alpha^2 + c alpha
        const double a2 = c >= 0 ? 0.5 * std::abs(t) + 1e-3 : -(0.5 * std::abs(t) + 1e-3);
        const double b2 = std::sqrt(a2 * a2 + c * a2);
        EXPECT_NEAR(u_branch(a2, b2, d), v_branch(a2, b2, d), 1e-9);
        EXPECT_NEAR(rod_density(a2, b2 + delta, d), rod_density(a2, b2 - delta, d), 1e-5 * kMin);
    }
}

TEST(RodDensityProperty, RatioOverrideBreaksContinuity) {
    RodDensity d = RodDensity::make(0);
    d.d_branch_ratio = 0.5;
    const double c = d.k / (1 + d.gamma);
    const double a = 0.5 * c, b = 0.5 * c;
    EXPECT_GT(std::abs(d_branch(a, b, d) - v_branch(a, b, d)), 1e-3);
}

TEST(FrameField, Validation) {
    FrameField f = constant_rate_field(0.1, 0.2, 1, 5);
    EXPECT_NO_THROW(f.validate());
    f.frames[2](0, 0) += 1e-6;
    EXPECT_THROW(f.validate(), Error);
    FrameField g = constant_rate_field(0.1, 0.2, 1, 2);
    EXPECT_THROW(g.validate(), Error);
}

TEST(RodEnergy, ConstantFrame) {
    const RodDensity d = RodDensity::make(0.5);
    EXPECT_NEAR(rod_energy(constant_rate_field(0, 0, 3, 11), d), 3 * rod_density(0, 0, d), 1e-13);
}

TEST(RodEnergy, MinimumSetRates) {
    for (double t : {0.0, pi / 4, 1.0}) {
        const RodDensity d = RodDensity::make(t);
        const RodMinSet m = rod_min_set(d);
        const double a = m.alpha_at(t == 0.0 ? 0.0 : 0.5);
        EXPECT_NEAR(rod_energy(constant_rate_field(a, m.beta, 10, 2001), d), 10 * m.value, 1e-6);
    }
}

TEST(RodEnergy, PureTorsionAtQuarterTurn) {
    const RodDensity d = RodDensity::make(pi / 4);
    EXPECT_NEAR(rod_energy(constant_rate_field(0, 0.2338181, 10, 2001), d), 10 * kMin, 1e-6);
}

TEST(RodEnergy, RejectsInPlaneBending) {
    FrameField f;
    for (int i = 0; i < 11; ++i) {
        f.s.push_back(0.1 * i);
        f.frames.push_back(rotation_exp(Vec3(0, 0, 0.5 * 0.1 * i)));
    }
    try {
        rod_energy(f, RodDensity::make(0));
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::InvalidFrame);
    }
}

TEST(RodMinBrute, ThetaZero) {
    const RodDensity d = RodDensity::make(0);
    const BruteForceMinimum b = rod_min_brute(d, 301);
    EXPECT_NEAR(b.value, kMin, 1e-6);
    EXPECT_NEAR(b.beta, 0.0, 6 * d.k / 300);
}

TEST(RodMinBrute, QuarterTurnCoverage) {
    const RodDensity d = RodDensity::make(pi / 4);
    const double w = 3 * d.k;
    const GridAxis axis{-w, w, 301};
    const BruteForceMinimum b = rod_min_brute(d, axis, axis);
    EXPECT_GE(min_set_coverage(b, rod_min_set(d), axis), 0.95);
}

TEST(RodMinBrute, HalfTurnReflectsThetaZero) {
    const BruteForceMinimum b0 = rod_min_brute(RodDensity::make(0), 301);
    const BruteForceMinimum b1 = rod_min_brute(RodDensity::make(pi / 2), 301);
    EXPECT_NEAR(b0.value, b1.value, 1e-12);
    ASSERT_EQ(b0.argmin.size(), b1.argmin.size());
    for (std::size_t i = 0; i < b0.argmin.size(); ++i)
        EXPECT_NEAR(b0.argmin[i](0), -b1.argmin[b1.argmin.size() - 1 - i](0), 1e-12);
}

TEST(WriteDensityCsv, HeaderAndRows) {
    std::ostringstream out;
    write_density_csv(out, RodDensity::make(0), GridAxis{-1, 1, 3}, GridAxis{-1, 1, 2});
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "theta,alpha,beta,region,value");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    EXPECT_EQ(rows, 6);
}
