#pragma once
////////////////////////////////////////////////////////////////////////////////
// relaxation.hpp
////////////////////////////////////////////////////////////////////////////////
/*! @file
//  Thickness relaxation. Q2 is Q3 minimized over the third column of the
//  strain; Qbar2 additionally minimizes over a constant in-plane strain D
//  the thickness average of Q2(D + t G + Bcheck(t)). For every texture
//
//      Qbar2(G) = alpha_coeff Q2(G - target_curvature) + residual.
//
//  Two independent routes compute the constants:
//   - relax_thickness(): Legendre projection of Bcheck onto {1, t}; the
//     target is minus the slope, the residual the energy of the remainder.
//   - relax_thickness_oracle(): direct minimization of the quadrature
//     discretized functional through 3x3 and 6x6 stationarity systems.
*/
////////////////////////////////////////////////////////////////////////////////

#include "ribbonlab/linalg.hpp"
#include "ribbonlab/material.hpp"

#include <functional>
#include <string>
#include <vector>

namespace ribbonlab::relaxation {

struct Quadratic2 {
    double mu = 1.0;
    double gamma = 0.3;

    static Quadratic2 from(const material::MaterialParams &params) { return {params.mu, params.gamma()}; }

    // Gram matrix in (s11, s22, s12) coordinates: q2(S) = c^T K c.
    Mat3 gram() const;
};

// 2 mu (|sym G|^2 + gamma tr^2 G)
double q2(const Mat2 &G, const Quadratic2 &form);

// Bilinear form with bilinear(G, G) == q2(G).
double bilinear(const Mat2 &G, const Mat2 &H, const Quadratic2 &form);

struct RelaxedColumn {
    double value = 0;
    Vec2 b = Vec2::Zero(); // optimal off-diagonal column entries
    double a = 0;          // optimal normal stretch
};

// Minimizes q3 over the third column (b, a) by a 3x3 linear solve.
RelaxedColumn q2_oracle(const Mat2 &G, const material::MaterialParams &params);

enum class Smoothness { Smooth, PiecewiseConstantJumpAtZero };

struct ThicknessProfile {
    std::function<Mat2(double)> bcheck; // t in [-1/2, 1/2] -> symmetric 2x2
    Smoothness smoothness = Smoothness::Smooth;

    // Upper-left 2x2 block of material::activation_slope.
    static ThicknessProfile from_texture(const material::Texture &texture,
                                         const material::MaterialParams &params);
};

struct QuadratureOptions {
    int order = 16;          // points per half-thickness panel
    double rel_tol = 1e-9;   // n vs 2n agreement
};

struct PlateModel {
    double alpha_coeff = 1.0 / 12;
    Mat2 target_curvature = Mat2::Zero();
    double residual = 0;
    material::Texture texture = material::Twist{};
    material::MaterialParams params;

    std::string texture_tag() const { return material::texture_name(texture); }
};

// Legendre moments of a profile: B0 = int B, B1 = 12 int t B.
struct LegendreMoments {
    Mat2 mean = Mat2::Zero();
    Mat2 slope = Mat2::Zero();
    double residual = 0;            // int q2(B_perp)
    double orthogonality = 0;       // max |moment| of B_perp against {1, t}
};

LegendreMoments legendre_moments(const ThicknessProfile &profile, const Quadratic2 &form, int order);

PlateModel relax_thickness(const ThicknessProfile &profile, const Quadratic2 &form,
                           const QuadratureOptions &opts = {});

PlateModel relax_thickness(const material::Texture &texture, const material::MaterialParams &params,
                           const QuadratureOptions &opts = {});

PlateModel relax_thickness_oracle(const ThicknessProfile &profile, const Quadratic2 &form, int n_quad = 16);

PlateModel relax_thickness_oracle(const material::Texture &texture, const material::MaterialParams &params,
                                  int n_quad = 16);

// alpha_coeff q2(G - target) + residual
double qbar2(const Mat2 &G, const PlateModel &model, const Quadratic2 &form);

// Pointwise min over D of the discretized thickness integral at fixed G.
double qbar2_oracle(const Mat2 &G, const ThicknessProfile &profile, const Quadratic2 &form, int n_quad = 16);

// Optimal D for a given G (independent of G by symmetry of the thickness interval).
Mat2 optimal_membrane_strain(const ThicknessProfile &profile, const Quadratic2 &form, int n_quad = 16);

inline constexpr double kDiscrepancyThreshold = 1e-6;

struct ComparisonEntry {
    std::string quantity;
    std::string printed_expression;
    double printed_value = 0;
    double oracle_value = 0;
    double abs_gap = 0;
    double rel_gap = 0;
    bool discrepancy = false;
    std::string units;
    std::string note;
};

struct ComparisonReport {
    std::string texture;
    std::vector<ComparisonEntry> entries;

    bool any_discrepancy() const;
};

// Compares the constants of `model` against the printed closed forms for its
// texture. The oracle value is always computed from the model itself.
ComparisonReport paper_comparison(const PlateModel &model);

} // namespace ribbonlab::relaxation
