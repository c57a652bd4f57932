#include "ribbonlab/errors.hpp"
#include "ribbonlab/material.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace ribbonlab;
using namespace ribbonlab::material;

namespace {

Mat3 random_rotation(std::mt19937 &rng) {
    std::normal_distribution<double> g;
    const Vec3 w(g(rng), g(rng), g(rng));
    return rotation_exp(w);
}

Vec3 random_unit(std::mt19937 &rng) {
    std::normal_distribution<double> g;
    Vec3 v(g(rng), g(rng), g(rng));
    return v.normalized();
}

double dist_so3(const Mat3 &F) {
    Eigen::JacobiSVD<Mat3> svd(F, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Mat3 R = svd.matrixU() * svd.matrixV().transpose();
    if (R.determinant() < 0) {
        Mat3 D = Mat3::Identity();
        D(2, 2) = -1;
        R = svd.matrixU() * D * svd.matrixV().transpose();
    }
    return (F - R).norm();
}

} // namespace

TEST(StepTensor, UnitActivationIsIdentity) {
    EXPECT_TRUE(step_tensor(Vec3::UnitZ(), 1.0).isApprox(Mat3::Identity(), 1e-15));
}

TEST(StepTensor, EightAlongE1) {
    const Mat3 L = step_tensor(Vec3::UnitX(), 8.0);
    EXPECT_NEAR(L(0, 0), 4.0, 1e-13);
    EXPECT_NEAR(L(1, 1), 0.5, 1e-14);
    EXPECT_NEAR(L(2, 2), 0.5, 1e-14);
    EXPECT_NEAR(L(0, 1), 0.0, 1e-15);
}

TEST(StepTensor, UnitDeterminantOnSamples) {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> a(0.05, 20.0);
    for (int i = 0; i < 200; ++i) EXPECT_NEAR(step_tensor(random_unit(rng), a(rng)).determinant(), 1.0, 1e-12);
}

TEST(StepTensor, RejectsBadInput) {
    EXPECT_THROW(step_tensor(Vec3(1, 1, 0), 2.0), Error);
    EXPECT_THROW(step_tensor(Vec3::UnitX(), 0.0), Error);
}

TEST(Director, TwistEndpointsAndMiddle) {
    EXPECT_TRUE(director(Twist{}, -0.5).isApprox(Vec3::UnitX(), 1e-15));
    EXPECT_NEAR((director(Twist{}, 0.5) - Vec3::UnitY()).norm(), 0.0, 1e-15);
    const double r = std::sqrt(0.5);
    EXPECT_NEAR((director(Twist{}, 0.0) - Vec3(r, r, 0)).norm(), 0.0, 1e-15);
}

TEST(Director, SplayBendInXZPlane) {
    for (double t : {-0.5, -0.2, 0.0, 0.3, 0.5}) {
        const Vec3 n = director(SplayBend{}, t);
        EXPECT_NEAR(n.norm(), 1.0, 1e-15);
        EXPECT_NEAR(n(1), 0.0, 1e-15);
    }
}

TEST(Director, BilayerHasNoDirector) {
    try {
        director(Bilayer{}, 0.1);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::UnsupportedTexture);
    }
}

TEST(ActivationSlope, TwistAtMidplane) {
    Mat3 expected;
    expected << -1.0 / 6, -0.5, 0, -0.5, -1.0 / 6, 0, 0, 0, 1.0 / 3;
    expected *= 0.5;
    EXPECT_LT((activation_slope(Twist{}, {}, 0.0) - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(ActivationSlope, ConstantDirectorQuarter) {
    const Mat3 expected = Vec3(1.0 / 3, 1.0 / 3, -2.0 / 3).asDiagonal();
    EXPECT_LT((activation_slope(ConstantDirector{}, {}, 0.25) - expected / 8).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(ActivationSlope, BilayerPiecewise) {
    Bilayer b;
    b.m1 = Mat3::Identity();
    b.m2 = Vec3(1, 2, 3).asDiagonal();
    EXPECT_EQ(activation_slope(b, {}, -0.1), b.m2);
    EXPECT_EQ(activation_slope(b, {}, 0.2), b.m1);
}

TEST(SpontaneousStrain, TwistC11ByDirectEvaluation) {
    const double a = 1.001;
    const double expected = std::pow(a, 2.0 / 3) * 0.5 + std::pow(a, -1.0 / 3) * 0.5;
    const SpontaneousStrain s = spontaneous_strain(Twist{}, {}, 0.0, 1e-3);
    EXPECT_NEAR(s.C(0, 0), expected, 1e-14);
    EXPECT_NEAR(s.C.determinant(), 1.0, 1e-12);
}

TEST(SpontaneousStrain, ExpansionIsSecondOrder) {
    std::vector<double> hs{1e-2, 1e-3, 1e-4}, errs;
    for (double h : hs) {
        const SpontaneousStrain s = spontaneous_strain(Twist{}, {}, 0.2, h);
        errs.push_back((s.C - Mat3::Identity() + 2 * h * s.B).norm());
    }
    const double slope = std::log(errs[0] / errs[2]) / std::log(hs[0] / hs[2]);
    EXPECT_GE(slope, 1.9);
}

TEST(SpontaneousStrain, ZeroBilayerIsIdentity) {
    for (double t : {-0.4, -0.1, 0.1, 0.4})
        EXPECT_TRUE(spontaneous_strain(Bilayer{}, {}, t, 0.1).C.isApprox(Mat3::Identity(), 1e-15));
}

TEST(SpontaneousStrain, LossOfDefinitenessIsAnError) {
    Bilayer b;
    b.m1 = Mat3::Identity();
    try {
        spontaneous_strain(b, {}, 0.25, 1.0);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::DegenerateActivation);
    }
}

TEST(W0, IdentityAndRotationsVanish) {
    const MaterialParams p;
    EXPECT_EQ(w0(Mat3::Identity(), p), 0.0);
    std::mt19937 rng(11);
    for (int i = 0; i < 100; ++i) EXPECT_LT(std::abs(w0(random_rotation(rng), p)), 1e-12);
}

TEST(W0, TwiceIdentity) {
    const MaterialParams p;
    const double expected = 0.5 * (12 - 3 - 2 * std::log(8.0)) + (1.5 / 7) * (63 - 2 * std::log(8.0));
    EXPECT_NEAR(w0(2 * Mat3::Identity(), p), expected, 1e-12);
}

TEST(W0, NonPositiveDeterminantIsInfinite) {
    const Mat3 F = Vec3(1, 1, -1).asDiagonal();
    EXPECT_TRUE(is_infinite_energy(w0(F, {})));
}

TEST(W0, PositiveOffRotationsAndGrowth) {
    std::mt19937 rng(13);
    std::normal_distribution<double> g(0.0, 0.4);
    const MaterialParams p;
    double ratio = 1e300;
    int counted = 0;
    for (int i = 0; i < 1000; ++i) {
        Mat3 P;
        for (int k = 0; k < 9; ++k) P(k / 3, k % 3) = g(rng);
        const Mat3 F = random_rotation(rng) * (Mat3::Identity() + P);
        if (F.determinant() <= 0) continue;
        const double w = w0(F, p);
        EXPECT_GT(w, 0.0);
        ratio = std::min(ratio, w / std::pow(dist_so3(F), 2));
        ++counted;
    }
    EXPECT_GT(counted, 900);
    EXPECT_GT(ratio, 0.0);
}

TEST(Wh, MinimumSetIsRotatedSquareRoot) {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> t(-0.5, 0.5);
    const MaterialParams p;
    for (int i = 0; i < 100; ++i) {
        const double x3 = t(rng);
        const SpontaneousStrain s = spontaneous_strain(Twist{}, p, x3, 0.05);
        EXPECT_LT(std::abs(wh(x3, random_rotation(rng) * s.U(), Twist{}, p, 0.05)), 1e-10);
    }
}

TEST(Wh, IdentityCostsOrderHSquared) {
    const MaterialParams p;
    const double e1 = wh(0.0, Mat3::Identity(), Twist{}, p, 1e-2);
    const double e2 = wh(0.0, Mat3::Identity(), Twist{}, p, 5e-3);
    EXPECT_GT(e1, 0.0);
    EXPECT_NEAR(e1 / e2, 4.0, 0.05);
}

TEST(Wh, TraceFormulaAgrees) {
    std::mt19937 rng(19);
    std::normal_distribution<double> g(0.0, 0.2);
    const MaterialParams p;
    for (int i = 0; i < 50; ++i) {
        const SpontaneousStrain s = spontaneous_strain(SplayBend{}, p, 0.3, 0.1);
        Mat3 F = Mat3::Identity();
        for (int k = 0; k < 9; ++k) F(k / 3, k % 3) += g(rng);
        if (F.determinant() <= 0) continue;
        EXPECT_NEAR(wh(s, F, p), wh_trace_formula(s, F, p), 1e-11 * std::max(1.0, wh(s, F, p)));
    }
}

TEST(Q3, SkewVanishesAndIdentity) {
    MaterialParams p;
    p.wvol2 = 1.0;
    p.c_vol = 0.25;
    EXPECT_NEAR(q3(Mat3::Identity(), p), 15.0, 1e-13);
    EXPECT_NEAR(q3(hat(Vec3(1, -2, 3)), p), 0.0, 1e-15);
}

TEST(Q3, MatchesFiniteDifferenceHessian) {
    std::mt19937 rng(23);
    std::normal_distribution<double> g;
    const MaterialParams p;
    const double d = 1e-4;
    for (int i = 0; i < 100; ++i) {
        Mat3 M;
        for (int k = 0; k < 9; ++k) M(k / 3, k % 3) = g(rng);
        const Mat3 I = Mat3::Identity();
        const double fd = (w0(I + d * M, p) - 2 * w0(I, p) + w0(I - d * M, p)) / (d * d);
        const double q = q3(M, p);
        EXPECT_LT(std::abs(fd - q), 1e-5 * std::max(1.0, q));
    }
}

TEST(Riemann, TwistIsFrustrated) {
    EXPECT_GT(riemann_flatness_defect(Twist{}, {}, 0.1, 64), 1e-4);
}

TEST(Riemann, EuclideanMetricIsFlat) {
    EXPECT_LT(riemann_defect([](double) { return Mat3(Mat3::Identity()); }, -0.05, 0.05, 64), 1e-10);
    MaterialParams p;
    p.alpha0 = 0.0;
    EXPECT_LT(riemann_flatness_defect(ConstantDirector{}, p, 0.1, 64), 1e-10);
}

TEST(Riemann, BilayerUnsupported) {
    EXPECT_THROW(riemann_flatness_defect(Bilayer{}, {}, 0.1, 16), Error);
}

TEST(MaterialParams, FromGammaRoundTrip) {
    const MaterialParams p = MaterialParams::from_gamma(2.0, 0.4, 1.0, 1.0);
    EXPECT_NEAR(p.gamma(), 0.4, 1e-15);
    EXPECT_NO_THROW(p.validate());
    MaterialParams bad;
    bad.mu = -1;
    EXPECT_THROW(bad.validate(), Error);
}
