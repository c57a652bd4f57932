#include "ribbonlab/errors.hpp"
#include "ribbonlab/relaxation.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace ribbonlab;
using namespace ribbonlab::relaxation;
using material::MaterialParams;

namespace {

Mat2 random_mat2(std::mt19937 &rng) {
    std::normal_distribution<double> g;
    Mat2 m;
    m << g(rng), g(rng), g(rng), g(rng);
    return m;
}

Mat2 block(const Mat3 &m) { return m.topLeftCorner<2, 2>(); }

} // namespace

TEST(Q2, ClosedFormValues) {
    const Quadratic2 form{1.0, 0.3};
    EXPECT_EQ(q2(Mat2::Zero(), form), 0.0);
    EXPECT_NEAR(q2(Mat2::Identity(), form), 6.4, 1e-14);
}

TEST(Q2, InvariantUnderSkew) {
    std::mt19937 rng(3);
    const Quadratic2 form{1.0, 0.3};
    Mat2 w;
    w << 0, 1.7, -1.7, 0;
    for (int i = 0; i < 50; ++i) {
        const Mat2 G = random_mat2(rng);
        EXPECT_NEAR(q2(G + w, form), q2(G, form), 1e-12 * std::max(1.0, q2(G, form)));
    }
}

TEST(Q2, MatchesStationarityOracle) {
    std::mt19937 rng(5);
    const MaterialParams p;
    const Quadratic2 form = Quadratic2::from(p);
    for (int i = 0; i < 1000; ++i) {
        const Mat2 G = random_mat2(rng);
        EXPECT_NEAR(q2(G, form), q2_oracle(G, p).value, 1e-12 * std::max(1.0, q2(G, form)));
    }
}

TEST(Q2Oracle, ZeroAndSkewAndIdentity) {
    const MaterialParams p;
    const RelaxedColumn zero = q2_oracle(Mat2::Zero(), p);
    EXPECT_EQ(zero.value, 0.0);
    EXPECT_EQ(zero.b.norm(), 0.0);
    EXPECT_EQ(zero.a, 0.0);
    Mat2 w;
    w << 0, 2, -2, 0;
    EXPECT_NEAR(q2_oracle(w, p).value, 0.0, 1e-14);
    EXPECT_NEAR(q2_oracle(Mat2::Identity(), p).value, 6.4, 1e-13);
}

TEST(Q2, BilinearPolarization) {
    std::mt19937 rng(9);
    const Quadratic2 form{1.3, 0.2};
    const Mat2 G = random_mat2(rng), H = random_mat2(rng);
    EXPECT_NEAR(bilinear(G, G, form), q2(G, form), 1e-12);
    EXPECT_NEAR(q2(G + H, form), q2(G, form) + 2 * bilinear(G, H, form) + q2(H, form), 1e-11);
}

TEST(RelaxThickness, TwistConstants) {
    const MaterialParams p;
    const PlateModel m = relax_thickness(material::Twist{}, p);
    const double k = 6 / (pi * pi);
    EXPECT_NEAR(m.alpha_coeff, 1.0 / 12, 1e-15);
    EXPECT_NEAR(m.target_curvature(0, 0), -k, 1e-12);
    EXPECT_NEAR(m.target_curvature(1, 1), k, 1e-12);
    EXPECT_NEAR(m.target_curvature(0, 1), 0.0, 1e-12);
    const double pi2 = pi * pi, pi4 = pi2 * pi2;
    EXPECT_NEAR(m.residual, (pi4 - 4 * pi2 - 48) / (4 * pi4), 1e-12);
    EXPECT_NEAR(m.residual, 0.02548703, 1e-8);
}

TEST(RelaxThickness, TwistScalesWithActivation) {
    MaterialParams p;
    p.alpha0 = 2.0;
    const PlateModel m = relax_thickness(material::Twist{}, p);
    EXPECT_NEAR(m.target_curvature(1, 1), 12 / (pi * pi), 1e-12);
    const double pi2 = pi * pi, pi4 = pi2 * pi2;
    EXPECT_NEAR(m.residual, 4 * (pi4 - 4 * pi2 - 48) / (4 * pi4), 1e-12);
}

TEST(RelaxThickness, ConstantProfile) {
    Mat2 M;
    M << 0.3, -0.1, -0.1, 0.7;
    const ThicknessProfile profile{[M](double) { return M; }};
    const Quadratic2 form{1.0, 0.3};
    const PlateModel m = relax_thickness(profile, form);
    EXPECT_LT(m.target_curvature.norm(), 1e-14);
    EXPECT_NEAR(m.residual, 0.0, 1e-14);
    Mat2 G;
    G << 0.4, 0.2, 0.2, -1.0;
    EXPECT_NEAR(qbar2(G, m, form), q2(G, form) / 12, 1e-14);
}

TEST(RelaxThickness, ConstantDirector) {
    const PlateModel m = relax_thickness(material::ConstantDirector{}, MaterialParams{});
    EXPECT_NEAR(m.target_curvature(0, 0), -1.0 / 6, 1e-13);
    EXPECT_NEAR(m.target_curvature(1, 1), -1.0 / 6, 1e-13);
    EXPECT_NEAR(m.target_curvature(0, 1), 0.0, 1e-13);
    EXPECT_NEAR(m.residual, 0.0, 1e-13);
}

TEST(RelaxThickness, BilayerAgainstQuadraticProgram) {
    material::Bilayer b;
    b.m1 << 0.2, 0.05, 0, 0.05, -0.1, 0, 0, 0, 0.3;
    b.m2 << -0.1, 0.0, 0, 0.0, 0.2, 0, 0, 0, 0.1;
    const MaterialParams p;
    const Quadratic2 form = Quadratic2::from(p);
    const PlateModel m = relax_thickness(b, p);
    const Mat2 diff = block(b.m1) - block(b.m2);
    EXPECT_LT((m.target_curvature + 1.5 * diff).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(m.residual, q2(diff, form) / 16, 1e-12);
    const PlateModel o = relax_thickness_oracle(b, p, 16);
    EXPECT_LT((o.target_curvature - m.target_curvature).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_NEAR(o.residual, m.residual, 1e-10);
}

TEST(RelaxThickness, OracleAgreesForSmoothTextures) {
    const MaterialParams p;
    for (const material::Texture &t : {material::Texture{material::Twist{}}, material::Texture{material::SplayBend{}},
                                       material::Texture{material::ConstantDirector{}}}) {
        const PlateModel a = relax_thickness(t, p);
        const PlateModel b = relax_thickness_oracle(t, p, 24);
        EXPECT_LT((a.target_curvature - b.target_curvature).cwiseAbs().maxCoeff(), 1e-9) << material::texture_name(t);
        EXPECT_NEAR(a.residual, b.residual, 1e-9) << material::texture_name(t);
    }
}

TEST(RelaxThickness, QbarFormMatchesPointwiseOracle) {
    std::mt19937 rng(29);
    const MaterialParams p;
    const Quadratic2 form = Quadratic2::from(p);
    const ThicknessProfile profile = ThicknessProfile::from_texture(material::SplayBend{}, p);
    const PlateModel m = relax_thickness(profile, form);
    EXPECT_GE(m.residual, -1e-12);
    EXPECT_NEAR(qbar2(m.target_curvature, m, form), m.residual, 1e-10);
    for (int i = 0; i < 20; ++i) {
        const Mat2 G = sym(random_mat2(rng));
        EXPECT_NEAR(qbar2(G, m, form), qbar2_oracle(G, profile, form, 24), 1e-9 * std::max(1.0, qbar2(G, m, form)));
    }
}

TEST(LegendreMoments, RemainderIsOrthogonal) {
    const MaterialParams p;
    const LegendreMoments lm =
        legendre_moments(ThicknessProfile::from_texture(material::Twist{}, p), Quadratic2::from(p), 16);
    EXPECT_LT(lm.orthogonality, 1e-10);
}

TEST(PrintedForms, TwistAgreesWithOracle) {
    const ComparisonReport r = paper_comparison(relax_thickness(material::Twist{}, MaterialParams{}));
    EXPECT_FALSE(r.entries.empty());
    EXPECT_FALSE(r.any_discrepancy());
}
